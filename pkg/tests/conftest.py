import random
from pathlib import Path

import pytest

import twistlab as tl

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

ALL_COMPLEXES = [
    "point",
    "circle1",
    "circle3",
    "disk",
    "sphere2",
    "torus",
    "klein",
    "rp2",
    "rp3",
]

# closed pseudomanifold fixtures, i.e. the duality test bed
MANIFOLDS = ["circle1", "circle3", "sphere2", "torus", "klein", "rp2", "rp3"]

ORIENTABLE = {"circle1": True, "circle3": True, "sphere2": True, "torus": True,
              "klein": False, "rp2": False, "rp3": True}

_cache: dict[str, tl.DeltaComplex] = {}
_sign_cache: dict[str, list] = {}


def fixture_text(name: str) -> str:
    return (FIXTURES / name).read_text()


def load_complex(name: str) -> tl.DeltaComplex:
    if name not in _cache:
        _cache[name] = tl.parse_complex(fixture_text(f"{name}.cx"))
    return _cache[name]


def load_system(filename: str, K: tl.DeltaComplex) -> tl.LocalSystem:
    return tl.parse_system(fixture_text(filename), K)


def load_subcomplex(filename: str, K: tl.DeltaComplex) -> tl.SubcomplexPair:
    return tl.parse_subcomplex(fixture_text(filename), K)


def sign_systems_of(name: str) -> list:
    if name not in _sign_cache:
        _sign_cache[name] = tl.sign_systems(load_complex(name))
    return _sign_cache[name]


def random_unimodular(ring, d: int, rng: random.Random) -> tl.Matrix:
    """Random invertible matrix built from elementary operations."""
    m = tl.Matrix.identity(ring, d)
    for _ in range(3 * d):
        op = rng.randrange(3)
        i, j = rng.randrange(d), rng.randrange(d)
        if op == 0 and i != j:
            c = ring.from_int(rng.randint(-2, 2))
            m.rows[i] = [ring.add(a, ring.mul(c, b)) for a, b in zip(m.rows[i], m.rows[j])]
        elif op == 1:
            m.rows[i] = [ring.neg(a) for a in m.rows[i]]
        elif op == 2 and i != j:
            m.rows[i], m.rows[j] = m.rows[j], m.rows[i]
    return m


def random_gauge(K, ring, d: int, rng: random.Random) -> tl.Gauge:
    return tl.Gauge({v: random_unimodular(ring, d, rng) for v in K.simplices(0)})


def random_flat_system(name: str, rank: int, ring, rng: random.Random) -> tl.LocalSystem:
    """Random gauge of (constant rank-d) tensor (random flat sign system)."""
    K = load_complex(name)
    core = tl.constant_system(K, rank, ring)
    signs = sign_systems_of(name)
    if signs and rank >= 1:
        s = signs[rng.randrange(len(signs))]
        core = tl.tensor_systems(core, tl.cast_system(s, ring))
    if rank == 0:
        return core
    return tl.gauge_transform(core, random_gauge(K, ring, rank, rng))


@pytest.fixture
def rng():
    return random.Random(20260810)
