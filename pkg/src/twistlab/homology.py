"""Homology of finite free complexes as module presentations.

Over Z a homology group is presented by Smith normal form: a free rank, a
divisibility chain of invariant factors, and one representative cycle per
generator (torsion generators first, then free ones).  Over Q or F_p the same
code path degenerates to ranks.  Induced maps, mapping cones, and exactness
checking of assembled sequences all run through these presentations.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import TwistlabError
from .matrices import (
    Matrix,
    block_matrix,
    image_basis,
    inverse,
    kernel_basis,
    smith_normal_form,
    solve,
)
from .rings import Ring


class FreeComplex:
    """Finitely supported complex of free modules with exact differentials.

    direction 'chain': diffs[k] maps degree k to k-1.
    direction 'cochain': diffs[k] maps degree k to k+1.
    """

    def __init__(self, label: str, ring: Ring, direction: str,
                 ranks: dict[int, int], diffs: dict[int, Matrix],
                 check: bool = True):
        if direction not in ("chain", "cochain"):
            raise TwistlabError(f"bad direction {direction!r}")
        self.label = label
        self.ring = ring
        self.direction = direction
        self._ranks = {k: r for k, r in ranks.items() if r > 0}
        self._diffs = diffs
        self._homology: dict[int, tuple] = {}
        if check:
            self.assert_squares_zero()

    def rank(self, k: int) -> int:
        return self._ranks.get(k, 0)

    def degrees(self) -> list[int]:
        return sorted(self._ranks)

    def degree_span(self) -> list[int]:
        if not self._ranks:
            return []
        ks = self.degrees()
        return list(range(ks[0], ks[-1] + 1))

    def _target_degree(self, k: int) -> int:
        return k - 1 if self.direction == "chain" else k + 1

    def diff(self, k: int) -> Matrix:
        d = self._diffs.get(k)
        if d is None:
            d = Matrix.zeros(self.ring, self.rank(self._target_degree(k)), self.rank(k))
        return d

    def assert_squares_zero(self):
        for k in self.degrees():
            first = self.diff(k)
            second = self.diff(self._target_degree(k))
            if first.nrows and second.nrows:
                if not second.mul(first).is_zero():
                    raise TwistlabError(
                        f"{self.label}: differential does not square to zero at degree {k}"
                    )

    # -- homology -------------------------------------------------------

    def homology_ctx(self, k: int):
        if k not in self._homology:
            cycles = kernel_basis(self.diff(k))
            if self.direction == "chain":
                bd = self.diff(k + 1)
            else:
                bd = self.diff(k - 1)
            self._homology[k] = presentation_of_quotient(self.ring, cycles, bd)
        return self._homology[k]

    def homology(self, k: int) -> "ModulePresentation":
        return self.homology_ctx(k)[0]

    def class_coordinates(self, k: int, vec: list) -> list:
        """Coordinates of the class of a cycle in the degree-k presentation."""
        pres, ctx = self.homology_ctx(k)
        dv = self.diff(k).mul_vec(vec)
        if any(not self.ring.is_zero(x) for x in dv):
            raise TwistlabError(f"{self.label}: vector at degree {k} is not a cycle")
        return _coords_in_presentation(self.ring, ctx, vec)

    def is_acyclic(self) -> bool:
        return all(self.homology(k).is_zero for k in self.degree_span())


@dataclass(frozen=True)
class ModulePresentation:
    """rank b, invariant factors d_1 | ... | d_t (each >= 2), representatives.

    Generator order is torsion first (matching the invariant factors), then
    free.  representatives, when present, holds one ambient column per
    generator.
    """

    ring: Ring
    rank: int
    invariants: tuple[int, ...]
    ambient_dim: int = 0
    representatives: Matrix | None = None

    def __post_init__(self):
        for a, b in zip(self.invariants, self.invariants[1:]):
            if b % a != 0:
                raise TwistlabError(f"invariant factors {self.invariants} not a chain")
        if any(d < 2 for d in self.invariants):
            raise TwistlabError("invariant factors must be >= 2")
        if self.ring.is_field and self.invariants:
            raise TwistlabError("field presentations carry no torsion")

    @property
    def torsion_count(self) -> int:
        return len(self.invariants)

    @property
    def generators(self) -> int:
        return self.rank + len(self.invariants)

    @property
    def is_zero(self) -> bool:
        return self.generators == 0

    def isomorphic_to(self, other: "ModulePresentation") -> bool:
        return (
            self.ring == other.ring
            and self.rank == other.rank
            and self.invariants == other.invariants
        )

    def relation_orders(self) -> list:
        """Order of each generator: d_i for torsion, 0 for free."""
        return list(self.invariants) + [0] * self.rank

    def group_symbol(self) -> str:
        parts = []
        if self.rank:
            tok = self.ring.token
            base = "F_" + tok[1:] if tok.startswith("F") else tok
            parts.append(base if self.rank == 1 else f"{base}^{self.rank}")
        parts.extend(f"Z/{d}" for d in self.invariants)
        return " + ".join(parts) if parts else "0"


def zero_presentation(ring: Ring, ambient_dim: int = 0) -> ModulePresentation:
    return ModulePresentation(ring, 0, (), ambient_dim,
                              Matrix.zeros(ring, ambient_dim, 0))


def free_presentation(ring: Ring, rank: int) -> ModulePresentation:
    return ModulePresentation(ring, rank, (), rank, Matrix.identity(ring, rank))


def torsion_presentation(ring: Ring, invariants, rank: int = 0) -> ModulePresentation:
    n = rank + len(invariants)
    return ModulePresentation(ring, rank, tuple(invariants), n,
                              Matrix.identity(ring, n))


@dataclass
class _QuotientContext:
    cycles: Matrix           # ambient x z, basis of the cycle module
    uprime: Matrix           # z x z, row transform of the boundary-coordinate SNF
    orders: list             # padded diagonal: d_i (1 = killed, 0 = free)
    kept: list[int]          # generator indices surviving (d_i != 1)


def presentation_of_quotient(ring: Ring, cycles: Matrix, boundaries: Matrix):
    """Present span(cycles) / span(boundaries); boundaries must lie in the span."""
    z = cycles.ncols
    if z == 0:
        pres = zero_presentation(ring, cycles.nrows)
        return pres, _QuotientContext(cycles, Matrix.identity(ring, 0), [], [])
    Y = solve(cycles, boundaries)
    if Y is None:
        raise TwistlabError("boundaries do not lie in the cycle module")
    snf = smith_normal_form(Y)
    orders = []
    for i in range(z):
        if i < snf.rank:
            d = snf.D.rows[i][i]
            orders.append(d if not ring.is_field else ring.one())
        else:
            orders.append(ring.zero() if ring.is_field else 0)
    if ring.is_field:
        kept = [i for i in range(z) if ring.is_zero(orders[i])]
        invariants = ()
    else:
        kept = [i for i in range(z) if orders[i] != 1]
        invariants = tuple(orders[i] for i in kept if orders[i] >= 2)
    gens = cycles.mul(inverse(snf.U))
    reps = gens.select_cols(kept)
    rank = sum(
        1 for i in kept
        if (ring.is_zero(orders[i]) if ring.is_field else orders[i] == 0)
    )
    pres = ModulePresentation(ring, rank, invariants, cycles.nrows, reps)
    return pres, _QuotientContext(cycles, snf.U, orders, kept)


def _coords_in_presentation(ring: Ring, ctx: _QuotientContext, vec: list) -> list:
    zeta = solve(ctx.cycles, Matrix.column(ring, vec))
    if zeta is None:
        raise TwistlabError("vector is not in the cycle module")
    gamma = ctx.uprime.mul(zeta)
    out = []
    for i in ctx.kept:
        c = gamma.rows[i][0]
        d = ctx.orders[i]
        if not ring.is_field and d >= 2:
            c = c % d
        out.append(c)
    return out


# -- chain maps -------------------------------------------------------


class ChainMapData:
    """Degree-preserving map of complexes commuting with differentials.

    sign = +1: d_target . F = F . d_source;  sign = -1: anticommutes.  The
    declared sign is verified degreewise at construction.
    """

    def __init__(self, label: str, source, target, mats: dict[int, Matrix],
                 sign: int = 1):
        if source.direction != target.direction:
            raise TwistlabError("chain map between complexes of mixed direction")
        if source.ring != target.ring:
            raise TwistlabError("chain map between complexes over different rings")
        if sign not in (1, -1):
            raise TwistlabError("sign rule must be +1 or -1")
        self.label = label
        self.source = source
        self.target = target
        self.sign = sign
        self._mats = mats
        self._verify()

    @property
    def ring(self):
        return self.source.ring

    @property
    def direction(self):
        return self.source.direction

    def matrix(self, k: int) -> Matrix:
        m = self._mats.get(k)
        if m is None:
            m = Matrix.zeros(self.ring, self.target.rank(k), self.source.rank(k))
        return m

    def _verify(self):
        degs = set(self.source.degree_span()) | set(self.target.degree_span())
        shift = -1 if self.direction == "chain" else 1
        for k in sorted(degs):
            m = self.matrix(k)
            if m.nrows != self.target.rank(k) or m.ncols != self.source.rank(k):
                raise TwistlabError(f"{self.label}: matrix shape wrong at degree {k}")
            lhs = self.target.diff(k).mul(m)
            rhs = self.matrix(k + shift).mul(self.source.diff(k))
            if self.sign == -1:
                rhs = rhs.neg()
            if lhs != rhs:
                raise TwistlabError(
                    f"{self.label}: does not commute with differentials at "
                    f"degree {k} under sign {self.sign:+d}"
                )


def induced_map_on_homology(F: ChainMapData, k: int) -> Matrix:
    """Matrix of the induced map between homology presentations at degree k."""
    ring = F.ring
    src, src_ctx = F.source.homology_ctx(k)
    tgt, _ = F.target.homology_ctx(k)
    cols = []
    mat = F.matrix(k)
    for j in range(src.generators):
        rep = src.representatives.col(j)
        img = mat.mul_vec(rep)
        cols.append(F.target.class_coordinates(k, img))
    out = Matrix.zeros(ring, tgt.generators, src.generators)
    for j, c in enumerate(cols):
        for i in range(tgt.generators):
            out.rows[i][j] = c[i]
    # Torsion-order compatibility: order(source gen) must kill the image.
    if not ring.is_field:
        tgt_orders = tgt.relation_orders()
        for j, d in enumerate(src.relation_orders()):
            if d == 0:
                continue
            for i in range(tgt.generators):
                v = d * out.rows[i][j]
                di = tgt_orders[i]
                if (di == 0 and v != 0) or (di != 0 and v % di != 0):
                    raise TwistlabError(
                        f"{F.label}: induced map ill-defined at degree {k}"
                    )
    return out


def maps_equal_mod(target: ModulePresentation, A: Matrix, B: Matrix) -> bool:
    """Equality of presentation maps into target, entrywise modulo torsion."""
    if A.nrows != B.nrows or A.ncols != B.ncols:
        return False
    ring = target.ring
    orders = target.relation_orders()
    for i in range(A.nrows):
        d = orders[i]
        for a, b in zip(A.rows[i], B.rows[i]):
            if ring.is_field or d == 0:
                if not ring.is_zero(ring.sub(a, b)):
                    return False
            else:
                if (a - b) % d != 0:
                    return False
    return True


# -- mapping cone ------------------------------------------------------


def mapping_cone(F: ChainMapData) -> FreeComplex:
    """Cone(F) with the block differential matching F's recorded sign rule."""
    ring = F.ring
    S, T = F.source, F.target
    if F.direction == "chain":
        off = -1  # cone at k holds S_{k-1}
    else:
        off = 1   # cone at k holds S^{k+1}
    degs = sorted(set(T.degree_span()) | {k - off for k in S.degree_span()})
    ranks = {k: T.rank(k) + S.rank(k + off) for k in degs}
    sigma = -F.sign
    diffs = {}
    for k in degs:
        tgt_deg = k - 1 if F.direction == "chain" else k + 1
        r_t, r_s = T.rank(tgt_deg), S.rank(tgt_deg + off)
        c_t, c_s = T.rank(k), S.rank(k + off)
        inner = F.matrix(k + off)
        dS = S.diff(k + off)
        if sigma == -1:
            dS = dS.neg()
        diffs[k] = block_matrix(
            ring,
            [[T.diff(k), inner], [None, dS]],
            [r_t, r_s],
            [c_t, c_s],
        )
    return FreeComplex(f"cone({F.label})", ring, F.direction, ranks, diffs)


def is_quasi_iso(F: ChainMapData) -> bool:
    return mapping_cone(F).is_acyclic()


def is_presentation_iso(M: Matrix, src: ModulePresentation,
                        tgt: ModulePresentation) -> bool:
    """Whether M: src -> tgt is an isomorphism of finitely generated modules."""
    ring = src.ring
    z = zero_presentation(ring)
    report = exactness_check(
        [z, src, tgt, z],
        [
            Matrix.zeros(ring, src.generators, 0),
            M,
            Matrix.zeros(ring, 0, tgt.generators),
        ],
    )
    return report.all_exact


# -- exactness of assembled sequences ----------------------------------


@dataclass
class NodeCheck:
    label: str
    composite_zero: bool
    homology_zero: bool

    @property
    def exact(self) -> bool:
        return self.composite_zero and self.homology_zero


@dataclass
class ExactnessReport:
    nodes: list[NodeCheck] = field(default_factory=list)

    @property
    def all_exact(self) -> bool:
        return all(n.exact for n in self.nodes)


def _relations_matrix(ring: Ring, pres: ModulePresentation) -> Matrix:
    g = pres.generators
    t = pres.torsion_count
    R = Matrix.zeros(ring, g, t)
    for i, d in enumerate(pres.invariants):
        R.rows[i][i] = ring.from_int(d)
    return R


def _composite_vanishes(ring, f: Matrix, g: Matrix, end: ModulePresentation) -> bool:
    comp = g.mul(f)
    orders = end.relation_orders()
    for i in range(comp.nrows):
        d = orders[i]
        for x in comp.rows[i]:
            if ring.is_field or d == 0:
                if not ring.is_zero(x):
                    return False
            else:
                if x % d != 0:
                    return False
    return True


def exactness_check(modules: list[ModulePresentation],
                    maps: list[Matrix],
                    labels: list[str] | None = None) -> ExactnessReport:
    """Treat the sequence as a complex of f.g. modules; im = ker at each node.

    maps[i] sends modules[i] to modules[i+1] in presentation coordinates; the
    ends are implicitly extended by zero modules.
    """
    if len(maps) != len(modules) - 1:
        raise TwistlabError("need one map between each consecutive pair")
    ring = modules[0].ring
    for i, m in enumerate(maps):
        if m.nrows != modules[i + 1].generators or m.ncols != modules[i].generators:
            raise TwistlabError(f"map {i} has the wrong shape for its presentations")
    report = ExactnessReport()
    for i, M in enumerate(modules):
        label = labels[i] if labels else f"node {i}"
        g_m = M.generators
        f_in = maps[i - 1] if i > 0 else Matrix.zeros(ring, g_m, 0)
        if i < len(maps):
            g_out = maps[i]
            nxt = modules[i + 1]
        else:
            g_out = Matrix.zeros(ring, 0, g_m)
            nxt = zero_presentation(ring)
        comp_ok = True
        if i > 0 and i < len(maps):
            comp_ok = _composite_vanishes(ring, f_in, g_out, nxt)

        # ker(g_out) as a sublattice of the generator module: x with
        # g_out(x) in the relation span of the next module.
        R_next = _relations_matrix(ring, nxt)
        combined = g_out.hstack(R_next)
        ker = kernel_basis(combined)
        L_gen = ker.select_rows(range(g_m))
        B_L = image_basis(L_gen)
        W = f_in.hstack(_relations_matrix(ring, M))
        Y = solve(B_L, W)
        if Y is None:
            hom_zero = False
        else:
            snf = smith_normal_form(Y)
            hom_zero = snf.rank == B_L.ncols and all(
                (snf.D.rows[i_][i_] == 1)
                if not ring.is_field
                else ring.is_unit(snf.D.rows[i_][i_])
                for i_ in range(snf.rank)
            )
        report.nodes.append(NodeCheck(label, comp_ok, hom_zero))
    return report
