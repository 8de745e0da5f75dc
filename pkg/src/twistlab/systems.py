"""Local coefficient systems as flat edge-transport data.

A system of rank d assigns an invertible d x d matrix to every edge, carrying
the fiber at the initial vertex sigma(e_0) to the fiber at the terminal vertex
sigma(e_1).  Flatness is the triangle condition
T_{face_0} * T_{face_2} = T_{face_1} on every 2-simplex; it is exactly what
makes the twisted boundary and coboundary square to zero.
"""

from __future__ import annotations

from dataclasses import dataclass

from .complexes import DeltaComplex, _content_lines, pseudomanifold_check
from .errors import ParseError, RingMismatchError, TwistlabError, ValidationError
from .maps import SimplicialMap
from .matrices import Matrix, inverse, is_invertible
from .rings import Ring, Z, ring_from_token


class LocalSystem:
    """Flat transport data over a fixed base complex and ring."""

    def __init__(self, name: str, base: DeltaComplex, ring: Ring, rank: int,
                 transports: dict[str, Matrix]):
        if rank < 0:
            raise ValidationError("system rank must be >= 0")
        self.name = name
        self.base = base
        self.ring = ring
        self.rank = rank
        full = {}
        ident = Matrix.identity(ring, rank)
        for e in base.simplices(1):
            full[e] = transports.get(e, ident)
        for e in transports:
            if e not in full:
                raise ValidationError(f"system {name!r}: unknown edge {e!r}")
        self.transports = full
        self._inverses: dict[str, Matrix] = {}
        self._validate()

    def _validate(self):
        for e, T in self.transports.items():
            if T.nrows != self.rank or T.ncols != self.rank:
                raise ValidationError(
                    f"system {self.name!r}: transport on {e!r} is not "
                    f"{self.rank}x{self.rank}"
                )
            if T.ring != self.ring:
                raise RingMismatchError(
                    f"system {self.name!r}: transport on {e!r} is over {T.ring}"
                )
            if not is_invertible(T):
                raise ValidationError(
                    f"system {self.name!r}: transport on edge {e!r} is not "
                    f"invertible over {self.ring}"
                )
        K = self.base
        for t in K.simplices(2):
            f = K.faces(t)
            lhs = self.transports[f[0]].mul(self.transports[f[2]])
            rhs = self.transports[f[1]]
            if lhs != rhs:
                raise ValidationError(
                    f"system {self.name!r}: flatness fails on 2-simplex {t!r}"
                )

    def transport(self, edge: str) -> Matrix:
        return self.transports[edge]

    def transport_inverse(self, edge: str) -> Matrix:
        if edge not in self._inverses:
            self._inverses[edge] = inverse(self.transports[edge])
        return self._inverses[edge]

    def __repr__(self):
        return f"LocalSystem({self.name!r}, rank {self.rank} over {self.ring})"


@dataclass
class Gauge:
    """Per-vertex invertible change of fiber basis."""

    matrices: dict[str, Matrix]

    def at(self, vertex: str) -> Matrix:
        return self.matrices[vertex]


def constant_system(K: DeltaComplex, d: int, ring: Ring) -> LocalSystem:
    return LocalSystem(f"const{d}", K, ring, d, {})


def parse_system(text: str, K: DeltaComplex) -> LocalSystem:
    name = None
    ring = None
    rank = None
    transports: dict[str, Matrix] = {}
    for lineno, line in _content_lines(text):
        parts = line.split(None, 2)
        if parts[0] == "system":
            fields = line.split()
            if len(fields) != 6 or fields[2] != "over" or fields[4] != "rank":
                raise ParseError(
                    "expected 'system <name> over <Z|Q|Fp> rank <d>'", lineno
                )
            name = fields[1]
            try:
                ring = ring_from_token(fields[3])
                rank = int(fields[5])
            except (TwistlabError, ValueError) as exc:
                raise ParseError(str(exc), lineno) from None
        elif parts[0] == "edge":
            if name is None:
                raise ParseError("edge line before the system header", lineno)
            if len(parts) != 3:
                raise ParseError("expected 'edge <name> <matrix>'", lineno)
            edge = parts[1]
            if edge not in K or K.dim_of(edge) != 1:
                raise ParseError(f"unknown edge {edge!r}", lineno)
            if edge in transports:
                raise ParseError(f"duplicate edge {edge!r}", lineno)
            transports[edge] = _parse_matrix(parts[2], ring, rank, lineno)
        else:
            raise ParseError(f"unknown directive {parts[0]!r}", lineno)
    if name is None:
        raise ParseError("missing 'system' header")
    return LocalSystem(name, K, ring, rank, transports)


def _parse_matrix(text: str, ring: Ring, rank: int, lineno: int) -> Matrix:
    body = text.replace(" ", "")
    if not (body.startswith("[[") and body.endswith("]]")):
        raise ParseError(f"bad matrix literal {text!r}", lineno)
    body = body[2:-2]
    rows = body.split("];[") if body else []
    if len(rows) != rank:
        raise ParseError(f"matrix needs {rank} rows", lineno)
    out = []
    for r in rows:
        entries = r.split(",") if r else []
        if len(entries) != rank:
            raise ParseError(f"matrix needs {rank} columns", lineno)
        try:
            out.append([ring.parse(e) for e in entries])
        except TwistlabError as exc:
            raise ParseError(str(exc), lineno) from None
    m = Matrix(ring, out)
    m.ncols = rank
    return m


def pullback_system(f: SimplicialMap, G: LocalSystem) -> LocalSystem:
    """Pull a system on the codomain of f back to its domain."""
    if G.base is not f.codomain and G.base.name != f.codomain.name:
        raise RingMismatchError(
            f"system {G.name!r} lives on {G.base.name!r}, not on the codomain of {f.name!r}"
        )
    transports = {}
    ident = Matrix.identity(G.ring, G.rank)
    for e in f.domain.simplices(1):
        a = f.assignments[e]
        transports[e] = ident if a.degenerate else G.transport(a.image)
    return LocalSystem(f"{f.name}^*{G.name}", f.domain, G.ring, G.rank, transports)


def tensor_systems(G: LocalSystem, H: LocalSystem) -> LocalSystem:
    if G.base is not H.base and G.base.name != H.base.name:
        raise RingMismatchError("tensor of systems over different bases")
    if G.ring != H.ring:
        raise RingMismatchError("tensor of systems over different rings")
    transports = {
        e: _kronecker(G.transport(e), H.transport(e))
        for e in G.base.simplices(1)
    }
    return LocalSystem(
        f"{G.name}(x){H.name}", G.base, G.ring, G.rank * H.rank, transports
    )


def _kronecker(A: Matrix, B: Matrix) -> Matrix:
    rg = A.ring
    rows = []
    for ai in range(A.nrows):
        for bi in range(B.nrows):
            row = []
            for aj in range(A.ncols):
                a = A.rows[ai][aj]
                row.extend(rg.mul(a, b) for b in B.rows[bi])
            rows.append(row)
    m = Matrix(rg, rows)
    m.ncols = A.ncols * B.ncols
    return m


def tensor_vectors(ring, x: list, y: list) -> list:
    return [ring.mul(a, b) for a in x for b in y]


def gauge_transform(G: LocalSystem, s: Gauge) -> LocalSystem:
    """T'_e = s_head * T_e * s_tail^{-1}; an isomorphic system."""
    K = G.base
    for v in K.simplices(0):
        mat = s.matrices.get(v)
        if mat is None:
            raise ValidationError(f"gauge misses vertex {v!r}")
        if mat.nrows != G.rank or mat.ncols != G.rank or not is_invertible(mat):
            raise ValidationError(f"gauge entry at {v!r} is not invertible")
    transports = {}
    inv_cache = {v: inverse(s.matrices[v]) for v in K.simplices(0)}
    for e in K.simplices(1):
        tail, head = K.edge_ends(e)
        transports[e] = s.matrices[head].mul(G.transport(e)).mul(inv_cache[tail])
    return LocalSystem(f"{G.name}~", K, G.ring, G.rank, transports)


def cast_system(G: LocalSystem, ring: Ring) -> LocalSystem:
    """Re-read an integer system over Q or F_p (transports stay invertible)."""
    if G.ring == ring:
        return G
    transports = {e: T.cast(ring) for e, T in G.transports.items()}
    return LocalSystem(f"{G.name}@{ring.token}", G.base, ring, G.rank, transports)


def restrict_system(G: LocalSystem, sub: DeltaComplex) -> LocalSystem:
    transports = {e: G.transport(e) for e in sub.simplices(1)}
    return LocalSystem(f"{G.name}|{sub.name}", sub, G.ring, G.rank, transports)


# -- orientation character ---------------------------------------------


def _signed_coface_key(i: int, j: int) -> int:
    """Orientation comparison across a shared face occupied as slots i and j."""
    return -((-1) ** (i + j))


def orientation_system(K: DeltaComplex) -> LocalSystem:
    """Rank-1 sign system recording whether transport preserves orientation.

    Each top simplex carries the orientation of its vertex order.  Signs are
    propagated over the star of each vertex point, tracked corner by corner
    (simplex, vertex slot) so that self-glued models like the one-vertex torus
    work, then compared along each edge inside a common top simplex.  Flatness
    of the result is asserted, not assumed: it fails exactly when the input is
    not a combinatorial manifold for this star-propagation algorithm.
    """
    report = pseudomanifold_check(K)
    n = K.dimension
    if not report.closed_pseudomanifold or n < 1:
        raise ValidationError(
            f"orientation system needs a closed pseudomanifold of dimension >= 1, "
            f"got {K.name!r}"
        )
    top = K.simplices(n)
    cof = K.cofaces(n - 1)

    # Corners of a vertex point: (top simplex, vertex slot).  Two corners are
    # glued when a shared (n-1)-face matches the slots; the comparison sign
    # says whether the canonical orientations agree across that face.
    corner_edges: dict[tuple[str, int], list[tuple[tuple[str, int], int]]] = {}
    for s in top:
        for m in range(n + 1):
            corner_edges[(s, m)] = []
    for f, slots in cof.items():
        if len(slots) != 2:
            raise ValidationError(f"face {f!r} does not have exactly two cofaces")
        (s1, i1), (s2, i2) = slots
        sign = _signed_coface_key(i1, i2)
        for mf in range(n):
            c1 = (s1, mf + 1 if i1 <= mf else mf)
            c2 = (s2, mf + 1 if i2 <= mf else mf)
            corner_edges[c1].append((c2, sign))
            corner_edges[c2].append((c1, sign))

    corner_sign: dict[tuple[str, int], int] = {}
    for v in K.simplices(0):
        corners = [
            (s, m) for s in top for m in range(n + 1) if K.vertex(s, m) == v
        ]
        if not corners:
            raise ValidationError(f"vertex {v!r} lies in no top simplex")
        local = {corners[0]: 1}
        queue = [corners[0]]
        while queue:
            cur = queue.pop(0)
            for other, sg in corner_edges[cur]:
                want = local[cur] * sg
                if other not in local:
                    local[other] = want
                    queue.append(other)
                elif local[other] != want:
                    raise ValidationError(
                        f"input {K.name!r} is not a combinatorial manifold "
                        f"for this algorithm (star of {v!r} is inconsistent)"
                    )
        if len(local) != len(corners):
            raise ValidationError(
                f"star of vertex {v!r} is not connected through "
                f"{n - 1}-faces containing it"
            )
        corner_sign.update(local)

    transports = {}
    for e in K.simplices(1):
        found = None
        for s in top:
            for a in range(n + 1):
                for b in range(a + 1, n + 1):
                    if K.subset_face(s, (a, b)) == e:
                        found = (s, a, b)
                        break
                if found:
                    break
            if found:
                break
        if found is None:
            raise ValidationError(f"edge {e!r} lies in no top simplex")
        s, a, b = found
        val = corner_sign[(s, a)] * corner_sign[(s, b)]
        transports[e] = Matrix.from_int_rows(Z, [[val]])
    try:
        return LocalSystem(f"w({K.name})", K, Z, 1, transports)
    except ValidationError:
        raise ValidationError(
            f"input {K.name!r} is not a combinatorial manifold for this algorithm"
        ) from None


def is_trivializable(G: LocalSystem):
    """Decide s_head = T_e * s_tail solvability for a rank-1 sign system.

    Returns (flag, gauge): the witness gauge satisfies
    gauge_transform(G, gauge) == constant when flag is True.
    """
    if G.rank != 1 or G.ring != Z:
        raise ValidationError("trivializability test needs a rank-1 system over Z")
    for e, T in G.transports.items():
        if T.rows[0][0] not in (1, -1):
            raise ValidationError(f"transport on {e!r} is not a sign")
    K = G.base
    s: dict[str, int] = {}
    edges_at: dict[str, list[str]] = {v: [] for v in K.simplices(0)}
    for e in K.simplices(1):
        tail, head = K.edge_ends(e)
        edges_at[tail].append(e)
        edges_at[head].append(e)
    for root in K.simplices(0):
        if root in s:
            continue
        s[root] = 1
        queue = [root]
        while queue:
            cur = queue.pop(0)
            for e in edges_at[cur]:
                tail, head = K.edge_ends(e)
                t = G.transport(e).rows[0][0]
                if tail in s and head not in s:
                    s[head] = t * s[tail]
                    queue.append(head)
                elif head in s and tail not in s:
                    s[tail] = t * s[head]
                    queue.append(tail)
    for e in K.simplices(1):
        tail, head = K.edge_ends(e)
        if s[head] != G.transport(e).rows[0][0] * s[tail]:
            return False, None
    gauge = Gauge({v: Matrix.from_int_rows(Z, [[s[v]]]) for v in s})
    return True, gauge


def sign_systems(K: DeltaComplex) -> list[LocalSystem]:
    """All flat rank-1 systems over Z with +-1 transports, in edge order."""
    edges = K.simplices(1)
    if len(edges) > 12:
        raise TwistlabError("sign-system enumeration capped at 12 edges")
    out = []
    for mask in range(2 ** len(edges)):
        vals = [1 if (mask >> i) & 1 == 0 else -1 for i in range(len(edges))]
        transports = {
            e: Matrix.from_int_rows(Z, [[v]]) for e, v in zip(edges, vals)
        }
        try:
            out.append(LocalSystem(f"signs{mask}", K, Z, 1, transports))
        except ValidationError:
            continue
    return out
