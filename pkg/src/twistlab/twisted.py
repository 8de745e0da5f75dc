"""Twisted chain/cochain complexes, pairs, induced maps, and the cellular side.

The boundary of a fiber element g sitting over a k-simplex s is
T(g)*s_0 + sum_{i>=1} (-1)^i g*s_i, where T is the transport along the
[e_0, e_1] edge of s.  The coboundary carries the matching global sign:
(delta c)(s) = (-1)^k [ T^{-1} c(s_0) + sum_{i>=1} (-1)^i c(s_i) ].
Bases are ordered simplex-major in input file order, fiber coordinates inner.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .complexes import (
    DeltaComplex,
    SubcomplexPair,
    skeleton_pair,
    subcomplex,
    subcomplex_as_complex,
)
from .errors import TwistlabError, ValidationError
from .homology import (
    ChainMapData,
    ExactnessReport,
    FreeComplex,
    Matrix,
    ModulePresentation,
    exactness_check,
    induced_map_on_homology,
    maps_equal_mod,
)
from .maps import SimplicialMap

from .systems import LocalSystem, pullback_system, restrict_system

# Global sign relating the skeleton-triple composite to the direct boundary;
# calibrated once on the circle with holonomy -1 and asserted everywhere.
CELLULAR_TRIPLE_SIGN = 1


class TwistedComplex(FreeComplex):
    """Free complex with a remembered simplicial basis and coefficient system."""

    def __init__(self, label, base: DeltaComplex, system: LocalSystem,
                 direction: str, keep: frozenset | None, tag: str = "simplicial"):
        self.base = base
        self.system = system
        self.keep = keep
        self.tag = tag
        d = system.rank
        self._basis_names: dict[int, tuple[str, ...]] = {}
        ranks = {}
        for k in range(base.dimension + 1):
            names = tuple(
                nm for nm in base.simplices(k) if keep is None or nm in keep
            )
            self._basis_names[k] = names
            ranks[k] = len(names) * d
        diffs = (
            _chain_diffs(base, system, self._basis_names)
            if direction == "chain"
            else _cochain_diffs(base, system, self._basis_names)
        )
        super().__init__(label, system.ring, direction, ranks, diffs)

    def basis_names(self, k: int) -> tuple[str, ...]:
        return self._basis_names.get(k, ())

    def positions_of(self, k: int, names) -> list[int]:
        """Flat coordinate indices of the given simplices at degree k."""
        d = self.system.rank
        idx = {nm: i for i, nm in enumerate(self.basis_names(k))}
        out = []
        for nm in names:
            base = idx[nm] * d
            out.extend(range(base, base + d))
        return out


def _chain_diffs(K, G, basis_names):
    ring = G.ring
    d = G.rank
    diffs = {}
    for k in range(1, K.dimension + 1):
        rows_names = basis_names.get(k - 1, ())
        cols_names = basis_names.get(k, ())
        row_idx = {nm: i for i, nm in enumerate(rows_names)}
        mat = Matrix.zeros(ring, len(rows_names) * d, len(cols_names) * d)
        for cj, nm in enumerate(cols_names):
            faces = K.faces(nm)
            T = G.transport(K.front_edge(nm))
            for i, f in enumerate(faces):
                ri = row_idx.get(f)
                if ri is None:
                    continue
                if i == 0:
                    block = T
                else:
                    block = Matrix.identity(ring, d)
                    if i % 2 == 1:
                        block = block.neg()
                for a in range(d):
                    for b in range(d):
                        mat.rows[ri * d + a][cj * d + b] = ring.add(
                            mat.rows[ri * d + a][cj * d + b], block.rows[a][b]
                        )
        diffs[k] = mat
    return diffs


def _cochain_diffs(K, G, basis_names):
    ring = G.ring
    d = G.rank
    diffs = {}
    for k in range(0, K.dimension):
        rows_names = basis_names.get(k + 1, ())
        cols_names = basis_names.get(k, ())
        col_idx = {nm: i for i, nm in enumerate(cols_names)}
        mat = Matrix.zeros(ring, len(rows_names) * d, len(cols_names) * d)
        sign = 1 if k % 2 == 0 else -1
        for ri, nm in enumerate(rows_names):
            faces = K.faces(nm)
            Tinv = G.transport_inverse(K.front_edge(nm))
            for i, f in enumerate(faces):
                cj = col_idx.get(f)
                if cj is None:
                    continue
                if i == 0:
                    block = Tinv
                else:
                    block = Matrix.identity(ring, d)
                    if i % 2 == 1:
                        block = block.neg()
                if sign == -1:
                    block = block.neg()
                for a in range(d):
                    for b in range(d):
                        mat.rows[ri * d + a][cj * d + b] = ring.add(
                            mat.rows[ri * d + a][cj * d + b], block.rows[a][b]
                        )
        diffs[k] = mat
    return diffs


def chain_complex(K: DeltaComplex, G: LocalSystem) -> TwistedComplex:
    _require_base(K, G)
    return TwistedComplex(f"C({K.name};{G.name})", K, G, "chain", None)


def cochain_complex(K: DeltaComplex, G: LocalSystem) -> TwistedComplex:
    _require_base(K, G)
    return TwistedComplex(f"C^({K.name};{G.name})", K, G, "cochain", None)


def _require_base(K, G):
    if G.base is not K and G.base.name != K.name:
        raise ValidationError(
            f"system {G.name!r} lives on {G.base.name!r}, not {K.name!r}"
        )


def relative_complexes(P: SubcomplexPair, G: LocalSystem):
    """(chain, cochain) complexes of the pair, free on the non-member simplices."""
    _require_base(P.complex, G)
    members = P.member_set()
    keep = frozenset(nm for nm in P.complex.all_simplices() if nm not in members)
    label = f"({P.complex.name},L)"
    return (
        TwistedComplex(f"C{label}", P.complex, G, "chain", keep),
        TwistedComplex(f"C^{label}", P.complex, G, "cochain", keep),
    )


def _sub_complex(P: SubcomplexPair, G: LocalSystem, direction: str) -> TwistedComplex:
    """The absolute complex of the subcomplex, in parent coordinates."""
    return TwistedComplex(
        f"C({P.complex.name}|L)", P.complex, G, direction, frozenset(P.members)
    )


# -- induced maps of simplicial maps -----------------------------------


def induced_chain_map(f: SimplicialMap, G: LocalSystem):
    """(chain map with pullback coefficients, cochain pullback map)."""
    Gp = pullback_system(f, G)
    src = chain_complex(f.domain, Gp)
    tgt = chain_complex(f.codomain, G)
    d = G.rank
    ring = G.ring
    chain_mats = {}
    for k in range(f.domain.dimension + 1):
        mat = Matrix.zeros(ring, tgt.rank(k), src.rank(k))
        tgt_idx = {nm: i for i, nm in enumerate(tgt.basis_names(k))}
        for cj, nm in enumerate(src.basis_names(k)):
            a = f.assignments[nm]
            if a.degenerate:
                continue
            ri = tgt_idx[a.image]
            for t in range(d):
                mat.rows[ri * d + t][cj * d + t] = ring.add(
                    mat.rows[ri * d + t][cj * d + t], ring.one()
                )
        chain_mats[k] = mat
    chains = ChainMapData(f"{f.name}_*", src, tgt, chain_mats, 1)

    csrc = cochain_complex(f.codomain, G)
    ctgt = cochain_complex(f.domain, Gp)
    cochain_mats = {}
    for k in range(f.domain.dimension + 1):
        mat = Matrix.zeros(ring, ctgt.rank(k), csrc.rank(k))
        src_idx = {nm: i for i, nm in enumerate(csrc.basis_names(k))}
        for ri, nm in enumerate(ctgt.basis_names(k)):
            a = f.assignments[nm]
            if a.degenerate:
                continue
            cj = src_idx[a.image]
            for t in range(d):
                mat.rows[ri * d + t][cj * d + t] = ring.add(
                    mat.rows[ri * d + t][cj * d + t], ring.one()
                )
        cochain_mats[k] = mat
    cochains = ChainMapData(f"{f.name}^#", csrc, ctgt, cochain_mats, 1)
    return chains, cochains


def identity_comparison(A: FreeComplex, B: FreeComplex, label="phi") -> ChainMapData:
    """Identity-matrix chain map between complexes with equal bases."""
    mats = {}
    for k in set(A.degree_span()) | set(B.degree_span()):
        if A.rank(k) != B.rank(k):
            raise TwistlabError("comparison between complexes of different ranks")
        mats[k] = Matrix.identity(A.ring, A.rank(k))
    return ChainMapData(label, A, B, mats, 1)


# -- long exact sequences ----------------------------------------------


@dataclass
class LesNode:
    label: str
    part: str       # 'sub' | 'full' | 'rel'
    degree: int
    presentation: ModulePresentation


@dataclass
class LesFragment:
    variant: str
    tag: str
    nodes: list[LesNode]
    maps: list[Matrix]
    map_labels: list[str]
    complexes: dict

    def presentations(self):
        return [n.presentation for n in self.nodes]

    def exactness(self) -> ExactnessReport:
        return exactness_check(
            self.presentations(), self.maps, [n.label for n in self.nodes]
        )


def _scatter(ring, vec, positions, total):
    out = [ring.zero()] * total
    for v, p in zip(vec, positions):
        out[p] = v
    return out


def _les_parts(P: SubcomplexPair, G: LocalSystem, variant: str, cellular: bool):
    direction = "chain" if variant == "homology" else "cochain"
    K = P.complex
    subC = _sub_complex(P, G, direction)
    fullC = (
        TwistedComplex(f"C({K.name})", K, G, direction, None)
    )
    relC = relative_complexes(P, G)[0 if variant == "homology" else 1]
    if cellular:
        subC = cellular_from(subC)
        fullC = cellular_from(fullC)
        relC = cellular_from(relC)
    members = P.member_set()
    sub_pos = {}
    rel_pos = {}
    for k in range(K.dimension + 1):
        names = fullC.basis_names(k)
        sub_pos[k] = fullC.positions_of(k, [nm for nm in names if nm in members])
        rel_pos[k] = fullC.positions_of(k, [nm for nm in names if nm not in members])
        if sorted(sub_pos[k] + rel_pos[k]) != list(range(fullC.rank(k))):
            raise TwistlabError("sub/rel coordinates do not split the full basis")
    return subC, fullC, relC, sub_pos, rel_pos


def cellular_from(C: TwistedComplex) -> TwistedComplex:
    """Relabel a twisted complex as its cellular realization (same bases)."""
    out = TwistedComplex(
        f"Gamma{C.label[1:] if C.label.startswith('C') else C.label}",
        C.base,
        C.system,
        C.direction,
        C.keep,
        tag="cellular",
    )
    return out


def cellular_via_phi(P: SubcomplexPair, G: LocalSystem, variant: str) -> TwistedComplex:
    """Cellular complex of the pair: bases indexed by non-member simplices,
    differential the conjugate of the simplicial one under the degreewise
    identification (which is basis-preserving, so the matrices coincide)."""
    rel = relative_complexes(P, G)[0 if variant == "homology" else 1]
    return cellular_from(rel)


def _inclusion_map(subC, fullC, sub_pos, label) -> ChainMapData:
    ring = fullC.ring
    mats = {}
    for k in fullC.degree_span():
        m = Matrix.zeros(ring, fullC.rank(k), subC.rank(k))
        for j, p in enumerate(sub_pos[k]):
            m.rows[p][j] = ring.one()
        mats[k] = m
    return ChainMapData(label, subC, fullC, mats, 1)


def _projection_map(fullC, relC, rel_pos, label) -> ChainMapData:
    ring = fullC.ring
    mats = {}
    for k in fullC.degree_span():
        m = Matrix.zeros(ring, relC.rank(k), fullC.rank(k))
        for i, p in enumerate(rel_pos[k]):
            m.rows[i][p] = ring.one()
        mats[k] = m
    return ChainMapData(label, fullC, relC, mats, 1)


def _connecting_homology(subC, fullC, relC, sub_pos, rel_pos, k) -> Matrix:
    """Snake-lemma connecting map H_k(rel) -> H_{k-1}(sub) via coordinate lift."""
    ring = fullC.ring
    pres = relC.homology(k)
    tgt = subC.homology(k - 1)
    out = Matrix.zeros(ring, tgt.generators, pres.generators)
    for j in range(pres.generators):
        rep = pres.representatives.col(j)
        lifted = _scatter(ring, rep, rel_pos[k], fullC.rank(k))
        img = fullC.diff(k).mul_vec(lifted)
        for p in rel_pos[k - 1]:
            if not ring.is_zero(img[p]):
                raise TwistlabError("connecting image is not supported on the subcomplex")
        subvec = [img[p] for p in sub_pos[k - 1]]
        for i, c in enumerate(subC.class_coordinates(k - 1, subvec)):
            out.rows[i][j] = c
    return out


def _connecting_cohomology(subC, fullC, relC, sub_pos, rel_pos, k) -> Matrix:
    """Connecting map H^k(sub) -> H^{k+1}(rel) via zero extension."""
    ring = fullC.ring
    pres = subC.homology(k)
    tgt = relC.homology(k + 1)
    out = Matrix.zeros(ring, tgt.generators, pres.generators)
    for j in range(pres.generators):
        rep = pres.representatives.col(j)
        extended = _scatter(ring, rep, sub_pos[k], fullC.rank(k))
        img = fullC.diff(k).mul_vec(extended)
        for p in sub_pos[k + 1]:
            if not ring.is_zero(img[p]):
                raise TwistlabError("connecting image does not vanish on the subcomplex")
        relvec = [img[p] for p in rel_pos[k + 1]]
        for i, c in enumerate(relC.class_coordinates(k + 1, relvec)):
            out.rows[i][j] = c
    return out


def assemble_les(P: SubcomplexPair, G: LocalSystem, variant: str = "homology",
                 source: str = "simplicial") -> LesFragment:
    """The long exact sequence of the pair, with all maps as presentation matrices."""
    if variant not in ("homology", "cohomology"):
        raise TwistlabError(f"unknown variant {variant!r}")
    if source not in ("simplicial", "cellular"):
        raise TwistlabError(f"unknown source {source!r}")
    subC, fullC, relC, sub_pos, rel_pos = _les_parts(
        P, G, variant, cellular=(source == "cellular")
    )
    top = P.complex.dimension
    nodes: list[LesNode] = []
    maps: list[Matrix] = []
    labels: list[str] = []
    if variant == "homology":
        incl = _inclusion_map(subC, fullC, sub_pos, "incl")
        proj = _projection_map(fullC, relC, rel_pos, "proj")
        for k in range(top, -1, -1):
            nodes.append(LesNode(f"H_{k}(L)", "sub", k, subC.homology(k)))
            nodes.append(LesNode(f"H_{k}(K)", "full", k, fullC.homology(k)))
            nodes.append(LesNode(f"H_{k}(K,L)", "rel", k, relC.homology(k)))
            maps.append(induced_map_on_homology(incl, k))
            labels.append(f"i_{k}")
            maps.append(induced_map_on_homology(proj, k))
            labels.append(f"j_{k}")
            if k > 0:
                maps.append(
                    _connecting_homology(subC, fullC, relC, sub_pos, rel_pos, k)
                )
                labels.append(f"d_{k}")
    else:
        # cochain SES: 0 -> C^*(K,L) -> C^*(K) -> C^*(L) -> 0
        incl_rel = _inclusion_map(relC, fullC, rel_pos, "incl")
        restr = _projection_map(fullC, subC, sub_pos, "restr")
        for k in range(0, top + 1):
            nodes.append(LesNode(f"H^{k}(K,L)", "rel", k, relC.homology(k)))
            nodes.append(LesNode(f"H^{k}(K)", "full", k, fullC.homology(k)))
            nodes.append(LesNode(f"H^{k}(L)", "sub", k, subC.homology(k)))
            maps.append(induced_map_on_homology(incl_rel, k))
            labels.append(f"i^{k}")
            maps.append(induced_map_on_homology(restr, k))
            labels.append(f"r^{k}")
            if k < top:
                maps.append(
                    _connecting_cohomology(subC, fullC, relC, sub_pos, rel_pos, k)
                )
                labels.append(f"d^{k}")
    return LesFragment(
        variant,
        "cellular" if source == "cellular" else "simplicial",
        nodes,
        maps,
        labels,
        {"sub": subC, "full": fullC, "rel": relC},
    )


# -- skeleton-triple cellular boundary ----------------------------------


def cellular_boundary_via_triple(K: DeltaComplex, G: LocalSystem, n: int) -> Matrix:
    """The composite H_n(K^n, K^{n-1}) -> H_{n-1}(K^{n-1}) -> H_{n-1}(K^{n-1}, K^{n-2})
    expressed against the canonical bases of the skeleton pairs.

    Built entirely from relative complexes, the snake-lemma connecting map,
    and induced maps on homology; after the one-time global sign calibration
    it equals the direct twisted boundary matrix entrywise.
    """
    if not (1 <= n <= K.dimension):
        raise TwistlabError(f"degree {n} out of range for {K.name!r}")
    Kn = subcomplex_as_complex(skeleton_pair(K, n), f"{K.name}@{n}")
    Gn = restrict_system(G, Kn)
    lower = [nm for k in range(n) for nm in Kn.simplices(k)]
    pair_n = subcomplex(Kn, lower)
    subC, fullC, relC, sub_pos, rel_pos = _les_parts(pair_n, Gn, "homology", False)
    conn = _connecting_homology(subC, fullC, relC, sub_pos, rel_pos, n)

    # psi: canonical basis of the relative skeleton group at degree n.
    ring = G.ring
    rel_pres = relC.homology(n)
    amb_n = relC.rank(n)
    psi = Matrix.zeros(ring, rel_pres.generators, amb_n)
    for j in range(amb_n):
        e = [ring.zero()] * amb_n
        e[j] = ring.one()
        for i, c in enumerate(relC.class_coordinates(n, e)):
            psi.rows[i][j] = c

    # quotient map C(K^{n-1}) -> C(K^{n-1}, K^{n-2}) and its induced map.
    Kn1 = subcomplex_as_complex(skeleton_pair(K, n - 1), f"{K.name}@{n - 1}")
    Gn1 = restrict_system(G, Kn1)
    lower1 = [nm for k in range(n - 1) for nm in Kn1.simplices(k)]
    pair_n1 = subcomplex(Kn1, lower1)
    relC1 = relative_complexes(pair_n1, Gn1)[0]
    full_n1 = chain_complex(Kn1, Gn1)
    qmats = {}
    for k in range(Kn1.dimension + 1):
        m = Matrix.zeros(ring, relC1.rank(k), full_n1.rank(k))
        pos = full_n1.positions_of(k, relC1.basis_names(k))
        for i, p in enumerate(pos):
            m.rows[i][p] = ring.one()
        qmats[k] = m
    q = ChainMapData("quot", full_n1, relC1, qmats, 1)

    # subC (the (n-1)-skeleton inside K^n) and full_n1 share their bases.
    bridge = identity_comparison(subC, full_n1, "skel")
    bridge_ind = induced_map_on_homology(bridge, n - 1)
    q_ind = induced_map_on_homology(q, n - 1)

    phi = relC1.homology(n - 1).representatives  # ambient == canonical basis
    composite = phi.mul(q_ind).mul(bridge_ind).mul(conn).mul(psi)
    if CELLULAR_TRIPLE_SIGN == -1:
        composite = composite.neg()
    return composite


# -- full comparison report ---------------------------------------------


@dataclass
class SquareCheck:
    label: str
    ok: bool


@dataclass
class TripleCheck:
    degree: int
    ok: bool


@dataclass
class LesReport:
    pair: SubcomplexPair
    variant: str
    simplicial: LesFragment
    cellular: LesFragment
    simplicial_exactness: ExactnessReport = None
    cellular_exactness: ExactnessReport = None
    squares: list[SquareCheck] = field(default_factory=list)
    triples: list[TripleCheck] = field(default_factory=list)

    @property
    def all_squares_commute(self) -> bool:
        return all(s.ok for s in self.squares)

    @property
    def all_triples_match(self) -> bool:
        return all(t.ok for t in self.triples)

    @property
    def ok(self) -> bool:
        return (
            self.all_squares_commute
            and self.all_triples_match
            and self.simplicial_exactness.all_exact
            and self.cellular_exactness.all_exact
        )


def compare_les(P: SubcomplexPair, G: LocalSystem, variant: str = "homology") -> LesReport:
    """Assemble the simplicial and cellular sequences, compare them degreewise,
    and cross-check the skeleton-triple boundary against the direct one."""
    simp = assemble_les(P, G, variant, source="simplicial")
    cell = assemble_les(P, G, variant, source="cellular")
    report = LesReport(P, variant, simp, cell)
    report.simplicial_exactness = simp.exactness()
    report.cellular_exactness = cell.exactness()

    phis = []
    for node_s, node_c in zip(simp.nodes, cell.nodes):
        cmpmap = identity_comparison(
            simp.complexes[node_s.part], cell.complexes[node_c.part], "phi"
        )
        phis.append(induced_map_on_homology(cmpmap, node_s.degree))
    for m in range(len(simp.maps)):
        lhs = phis[m + 1].mul(simp.maps[m])
        rhs = cell.maps[m].mul(phis[m])
        ok = maps_equal_mod(cell.nodes[m + 1].presentation, lhs, rhs)
        report.squares.append(SquareCheck(simp.map_labels[m], ok))

    if variant == "homology":
        direct = simp.complexes["full"]
    else:
        direct = chain_complex(P.complex, G)
    for n in range(1, P.complex.dimension + 1):
        triple = cellular_boundary_via_triple(P.complex, G, n)
        report.triples.append(TripleCheck(n, triple == direct.diff(n)))
    return report
