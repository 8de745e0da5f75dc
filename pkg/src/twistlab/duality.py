"""Fundamental classes, the chain-level cap product, and the duality verdict.

Cap convention: capping a k-cochain c with a chain carried by an n-simplex s
evaluates c on the back face s|[e_{n-k},...,e_n], transports the value to the
fiber at s(e_0) along the inverse of the [e_0, e_{n-k}] edge transport,
tensors with the chain coefficient, and attaches the result to the front face
s|[e_0,...,e_{n-k}], all scaled by (-1)^{k(n-k)}.  With the coboundary sign
used in this package the resulting pairing satisfies

    d(c cap z) = -(dc cap z) + (-1)^k (c cap dz)

so capping with a cycle anticommutes with the differentials (sign rule -1).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .complexes import DeltaComplex, pseudomanifold_check
from .errors import TwistlabError, ValidationError
from .homology import ChainMapData, ModulePresentation, is_quasi_iso
from .matrices import Matrix
from .rings import Z
from .systems import (
    LocalSystem,
    cast_system,
    is_trivializable,
    orientation_system,
    tensor_systems,
    tensor_vectors,
)
from .twisted import TwistedComplex, chain_complex, cochain_complex

# Calibrated Leibniz signs: s1 is degree-independent, s2 depends only on the
# cochain degree k.  Asserted across random instances in the test suite.
CAP_LEIBNIZ_S1 = -1


def cap_leibniz_s2(k: int) -> int:
    return -1 if k % 2 else 1


@dataclass
class FundamentalClass:
    """Unit-coefficient top cycle of a closed pseudomanifold, twisted by w."""

    complex: DeltaComplex
    system: LocalSystem  # rank-1 sign system over Z
    coefficients: dict[str, int]  # top simplex -> +-1

    @property
    def dimension(self) -> int:
        return self.complex.dimension

    def chain_vector(self, ring) -> list:
        top = self.complex.simplices(self.dimension)
        return [ring.from_int(self.coefficients[nm]) for nm in top]


def fundamental_class(K: DeltaComplex, w: LocalSystem) -> FundamentalClass:
    """Solve for +-1 coefficients making the top chain a cycle over w.

    Each interior (n-1)-simplex ties its two coface coefficients together; the
    propagation is consistent exactly when w is the orientation character.
    """
    report = pseudomanifold_check(K)
    if not report.closed_pseudomanifold or K.dimension < 1:
        raise ValidationError(f"{K.name!r} is not a closed pseudomanifold")
    if w.rank != 1 or w.ring != Z:
        raise ValidationError("fundamental class needs a rank-1 sign system over Z")
    n = K.dimension
    top = K.simplices(n)

    def coef(simplex, face_index):
        if face_index == 0:
            return w.transport(K.front_edge(simplex)).rows[0][0]
        return -1 if face_index % 2 else 1

    unit = {top[0]: 1}
    queue = [top[0]]
    cof = K.cofaces(n - 1)
    incident: dict[str, list] = {s: [] for s in top}
    for f, slots in cof.items():
        (s1, i1), (s2, i2) = slots
        incident[s1].append((s2, coef(s1, i1), coef(s2, i2)))
        incident[s2].append((s1, coef(s2, i2), coef(s1, i1)))
    while queue:
        cur = queue.pop(0)
        for other, c_cur, c_other in incident[cur]:
            want = -c_cur * unit[cur] * c_other  # c_other is +-1, so 1/c = c
            if other == cur:
                if c_cur != -c_other:
                    raise ValidationError(
                        f"no unit-coefficient cycle on {K.name!r} for system {w.name!r}"
                    )
                continue
            if other in unit:
                if unit[other] != want:
                    raise ValidationError(
                        f"no unit-coefficient cycle on {K.name!r} for system {w.name!r}"
                    )
            else:
                unit[other] = want
                queue.append(other)
    if len(unit) != len(top):
        raise ValidationError(f"top simplices of {K.name!r} are not dual-connected")

    mu = FundamentalClass(K, w, unit)
    C = chain_complex(K, w)
    bd = C.diff(n).mul_vec(mu.chain_vector(Z))
    if any(x != 0 for x in bd):
        raise ValidationError(
            f"no unit-coefficient cycle on {K.name!r} for system {w.name!r}"
        )
    return mu


def cap_product(K: DeltaComplex, G: LocalSystem, H: LocalSystem, k: int,
                cochain: list, m: int, chain: list) -> list:
    """Cap a degree-k cochain (coefficients in G) with a degree-m chain
    (coefficients in H); the result is an (m-k)-chain with coefficients in
    the tensor system G (x) H."""
    if G.base.name != K.name or H.base.name != K.name:
        raise TwistlabError("cap product needs systems on the same base complex")
    if G.ring != H.ring:
        raise TwistlabError("cap product needs systems over the same ring")
    if not (0 <= k <= m <= K.dimension):
        raise TwistlabError(f"cap degrees (k={k}, m={m}) out of range")
    ring = G.ring
    dG, dH = G.rank, H.rank
    k_simplices = K.simplices(k)
    m_simplices = K.simplices(m)
    out_simplices = K.simplices(m - k)
    out_idx = {nm: i for i, nm in enumerate(out_simplices)}
    k_idx = {nm: i for i, nm in enumerate(k_simplices)}
    out = [ring.zero()] * (len(out_simplices) * dG * dH)
    sign = -1 if (k * (m - k)) % 2 else 1
    for si, nm in enumerate(m_simplices):
        u = chain[si * dH : (si + 1) * dH]
        if all(ring.is_zero(x) for x in u):
            continue
        back = K.range_face(nm, m - k, m)
        front = K.range_face(nm, 0, m - k)
        cval = cochain[k_idx[back] * dG : (k_idx[back] + 1) * dG]
        if m - k >= 1:
            carried = G.transport_inverse(K.subset_face(nm, (0, m - k))).mul_vec(cval)
        else:
            carried = cval
        coeff = tensor_vectors(ring, carried, u)
        if sign == -1:
            coeff = [ring.neg(x) for x in coeff]
        base = out_idx[front] * dG * dH
        for t, x in enumerate(coeff):
            out[base + t] = ring.add(out[base + t], x)
    return out


def cap_with_fundamental_class(K: DeltaComplex, G: LocalSystem,
                               mu: FundamentalClass) -> ChainMapData:
    """The degree-reindexed map D_j: C^{n-j}(K;G) -> C_j(K;G(x)w), c -> c cap mu.

    Anticommutes with the differentials (sign rule -1) because mu is a cycle.
    """
    n = mu.dimension
    ring = G.ring
    w = cast_system(mu.system, ring)
    GH = tensor_systems(G, w)
    target = chain_complex(K, GH)
    cochain = cochain_complex(K, G)
    source = _CochainAsChain(cochain, n)
    zvec = mu.chain_vector(ring)
    mats = {}
    dG = G.rank
    for j in range(n + 1):
        k = n - j
        rankc = cochain.rank(k)
        mat = Matrix.zeros(ring, target.rank(j), rankc)
        for col in range(rankc):
            c = [ring.zero()] * rankc
            c[col] = ring.one()
            mat_col = cap_product(K, G, w, k, c, n, zvec)
            for i, x in enumerate(mat_col):
                mat.rows[i][col] = x
        mats[j] = mat
    return ChainMapData(f"cap({mu.complex.name})", source, target, mats, -1)


class _CochainAsChain:
    """Chain-direction view of a cochain complex: degree j holds C^{top-j}."""

    def __init__(self, complex: TwistedComplex, top: int):
        self.inner = complex
        self.top = top
        self.direction = "chain"
        self.ring = complex.ring
        self.label = f"{complex.label}[rev]"

    def rank(self, j):
        return self.inner.rank(self.top - j)

    def degrees(self):
        return sorted(self.top - k for k in self.inner.degrees())

    def degree_span(self):
        ds = self.degrees()
        return list(range(ds[0], ds[-1] + 1)) if ds else []

    def diff(self, j):
        return self.inner.diff(self.top - j)

    def homology_ctx(self, j):
        return self.inner.homology_ctx(self.top - j)

    def homology(self, j):
        return self.inner.homology(self.top - j)

    def class_coordinates(self, j, vec):
        return self.inner.class_coordinates(self.top - j, vec)


@dataclass
class DualityDegree:
    degree: int
    cohomology: ModulePresentation
    homology: ModulePresentation

    @property
    def groups_match(self) -> bool:
        return self.cohomology.isomorphic_to(self.homology)


@dataclass
class DualityReport:
    complex: DeltaComplex
    system: LocalSystem
    orientation: LocalSystem
    orientation_trivializable: bool
    fundamental: FundamentalClass
    degrees: list[DualityDegree] = field(default_factory=list)
    cap_quasi_iso: bool = False
    orientable_reading_agrees: bool | None = None

    @property
    def all_groups_match(self) -> bool:
        return all(d.groups_match for d in self.degrees)

    @property
    def ok(self) -> bool:
        return self.cap_quasi_iso and self.all_groups_match


def duality_report(K: DeltaComplex, G: LocalSystem) -> DualityReport:
    """Verify that capping with the twisted fundamental class is an
    isomorphism H^k(K;G) -> H_{n-k}(K;G(x)w) in every degree."""
    w = orientation_system(K)
    trivializable, _ = is_trivializable(w)
    mu = fundamental_class(K, w)
    cap = cap_with_fundamental_class(K, G, mu)
    n = K.dimension
    cochain = cochain_complex(K, G)
    wr = cast_system(w, G.ring)
    twisted_chain = chain_complex(K, tensor_systems(G, wr))
    report = DualityReport(K, G, w, trivializable, mu)
    for k in range(n + 1):
        report.degrees.append(
            DualityDegree(k, cochain.homology(k), twisted_chain.homology(n - k))
        )
    report.cap_quasi_iso = is_quasi_iso(cap)
    if trivializable:
        plain = chain_complex(K, G)
        report.orientable_reading_agrees = all(
            plain.homology(n - k).isomorphic_to(twisted_chain.homology(n - k))
            for k in range(n + 1)
        )
    return report
