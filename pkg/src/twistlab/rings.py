"""Exact coefficient rings: integers, rationals, and prime fields.

Ring elements are plain Python values (int, Fraction, int residue); the ring
object supplies arithmetic so matrix code can stay ring-generic.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import TwistlabError


class Ring:
    """Arithmetic interface for an exact commutative ring."""

    token: str
    is_field: bool

    def zero(self):
        return self.from_int(0)

    def one(self):
        return self.from_int(1)

    def from_int(self, n: int):
        raise NotImplementedError

    def add(self, a, b):
        raise NotImplementedError

    def sub(self, a, b):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def neg(self, a):
        raise NotImplementedError

    def is_zero(self, a) -> bool:
        raise NotImplementedError

    def is_unit(self, a) -> bool:
        raise NotImplementedError

    def inv(self, a):
        """Inverse of a unit."""
        raise NotImplementedError

    def exact_div(self, a, b):
        """a / b when b divides a exactly; raises otherwise."""
        raise NotImplementedError

    def parse(self, text: str):
        raise NotImplementedError

    def fmt(self, a) -> str:
        return str(a)

    def __repr__(self):
        return self.token

    def __eq__(self, other):
        return isinstance(other, Ring) and self.token == other.token

    def __hash__(self):
        return hash(self.token)


class IntegerRing(Ring):
    token = "Z"
    is_field = False

    def from_int(self, n):
        return int(n)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def is_zero(self, a):
        return a == 0

    def is_unit(self, a):
        return a in (1, -1)

    def inv(self, a):
        if a not in (1, -1):
            raise TwistlabError(f"{a} is not a unit in Z")
        return a

    def exact_div(self, a, b):
        q, r = divmod(a, b)
        if r != 0:
            raise TwistlabError(f"{b} does not divide {a} in Z")
        return q

    def parse(self, text):
        try:
            return int(text)
        except ValueError:
            raise TwistlabError(f"bad integer {text!r}") from None


class RationalField(Ring):
    token = "Q"
    is_field = True

    def from_int(self, n):
        return Fraction(n)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def is_zero(self, a):
        return a == 0

    def is_unit(self, a):
        return a != 0

    def inv(self, a):
        if a == 0:
            raise TwistlabError("0 is not a unit in Q")
        return 1 / Fraction(a)

    def exact_div(self, a, b):
        if b == 0:
            raise TwistlabError("division by zero in Q")
        return Fraction(a) / b

    def parse(self, text):
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError):
            raise TwistlabError(f"bad rational {text!r}") from None

    def fmt(self, a):
        return str(a)


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


class PrimeField(Ring):
    is_field = True

    def __init__(self, p: int):
        if p >= 2**31:
            raise TwistlabError(f"prime field order {p} exceeds 2^31")
        if not _is_prime(p):
            raise TwistlabError(f"{p} is not prime")
        self.p = p
        self.token = f"F{p}"

    def from_int(self, n):
        return n % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def is_zero(self, a):
        return a % self.p == 0

    def is_unit(self, a):
        return a % self.p != 0

    def inv(self, a):
        if a % self.p == 0:
            raise TwistlabError(f"0 is not a unit in {self.token}")
        return pow(a, -1, self.p)

    def exact_div(self, a, b):
        return self.mul(a, self.inv(b))

    def parse(self, text):
        try:
            return int(text) % self.p
        except ValueError:
            raise TwistlabError(f"bad element {text!r} for {self.token}") from None


Z = IntegerRing()
Q = RationalField()

_PRIME_FIELDS: dict[int, PrimeField] = {}


def prime_field(p: int) -> PrimeField:
    if p not in _PRIME_FIELDS:
        _PRIME_FIELDS[p] = PrimeField(p)
    return _PRIME_FIELDS[p]


def ring_from_token(token: str) -> Ring:
    """Resolve Z, Q, or F<p> (e.g. F5) from its textual name."""
    token = token.strip()
    if token == "Z":
        return Z
    if token == "Q":
        return Q
    if token.startswith("F") and token[1:].isdigit():
        return prime_field(int(token[1:]))
    raise TwistlabError(f"unsupported coefficient ring {token!r} (use Z, Q, or F<p>)")
