"""Dense exact matrices over Z, Q, or a prime field, and Smith normal form.

All homology computations reduce to the routines here.  Over the integers the
diagonalization keeps unimodular transform matrices so kernels, solutions of
linear systems, and quotient presentations are exact; over fields the same
interface degenerates to Gaussian elimination.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import CapacityError, TwistlabError
from .rings import Ring, Z

# Size bound for diagonalization; desk-scale inputs stay far below it.
MAX_SNF_DIM = 20000


class Matrix:
    """Immutable-by-convention dense matrix with ring-tagged entries."""

    __slots__ = ("ring", "rows", "nrows", "ncols")

    def __init__(self, ring: Ring, rows: list[list]):
        self.ring = ring
        self.rows = rows
        self.nrows = len(rows)
        self.ncols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != self.ncols:
                raise TwistlabError("ragged matrix rows")

    # -- constructors -------------------------------------------------

    @classmethod
    def zeros(cls, ring, nrows, ncols):
        z = ring.zero()
        m = cls(ring, [[z] * ncols for _ in range(nrows)])
        if nrows == 0:
            m.ncols = ncols
        return m

    @classmethod
    def identity(cls, ring, n):
        m = cls.zeros(ring, n, n)
        one = ring.one()
        for i in range(n):
            m.rows[i][i] = one
        return m

    @classmethod
    def from_int_rows(cls, ring, int_rows):
        return cls(ring, [[ring.from_int(x) for x in row] for row in int_rows])

    @classmethod
    def column(cls, ring, entries):
        return cls(ring, [[e] for e in entries])

    # -- basic ops ----------------------------------------------------

    def copy(self):
        m = Matrix(self.ring, [row[:] for row in self.rows])
        m.ncols = self.ncols
        return m

    def __eq__(self, other):
        return (
            isinstance(other, Matrix)
            and self.ring == other.ring
            and self.nrows == other.nrows
            and self.ncols == other.ncols
            and self.rows == other.rows
        )

    def __hash__(self):
        raise TypeError("matrices are not hashable")

    def __repr__(self):
        return f"Matrix({self.ring}, {self.nrows}x{self.ncols})"

    def is_zero(self):
        rg = self.ring
        return all(rg.is_zero(x) for row in self.rows for x in row)

    def entry(self, i, j):
        return self.rows[i][j]

    def col(self, j):
        return [row[j] for row in self.rows]

    def mul(self, other: "Matrix") -> "Matrix":
        if self.ring != other.ring:
            raise TwistlabError("ring mismatch in matrix product")
        if self.ncols != other.nrows:
            raise TwistlabError(
                f"shape mismatch {self.nrows}x{self.ncols} * {other.nrows}x{other.ncols}"
            )
        rg = self.ring
        zero = rg.zero()
        out = []
        bt = list(zip(*other.rows)) if other.rows else [[]] * other.ncols
        for arow in self.rows:
            row = []
            for j in range(other.ncols):
                acc = zero
                bcol = bt[j] if other.rows else ()
                for a, b in zip(arow, bcol):
                    if not rg.is_zero(a) and not rg.is_zero(b):
                        acc = rg.add(acc, rg.mul(a, b))
                row.append(acc)
            out.append(row)
        m = Matrix(rg, out)
        m.ncols = other.ncols
        return m

    def mul_vec(self, vec: list) -> list:
        rg = self.ring
        out = []
        for row in self.rows:
            acc = rg.zero()
            for a, x in zip(row, vec):
                if not rg.is_zero(a) and not rg.is_zero(x):
                    acc = rg.add(acc, rg.mul(a, x))
            out.append(acc)
        return out

    def add(self, other):
        rg = self.ring
        return Matrix(
            rg,
            [
                [rg.add(a, b) for a, b in zip(r1, r2)]
                for r1, r2 in zip(self.rows, other.rows)
            ],
        )

    def neg(self):
        rg = self.ring
        m = Matrix(rg, [[rg.neg(a) for a in row] for row in self.rows])
        m.ncols = self.ncols
        return m

    def sub(self, other):
        return self.add(other.neg())

    def scale(self, c):
        rg = self.ring
        m = Matrix(rg, [[rg.mul(c, a) for a in row] for row in self.rows])
        m.ncols = self.ncols
        return m

    def transpose(self):
        if self.nrows == 0 or self.ncols == 0:
            return Matrix.zeros(self.ring, self.ncols, self.nrows)
        return Matrix(self.ring, [list(c) for c in zip(*self.rows)])

    def hstack(self, other):
        if self.nrows != other.nrows:
            raise TwistlabError("hstack row mismatch")
        m = Matrix(self.ring, [r1 + r2 for r1, r2 in zip(self.rows, other.rows)])
        m.ncols = self.ncols + other.ncols
        return m

    def submatrix(self, row_idx, col_idx):
        rows = [[self.rows[i][j] for j in col_idx] for i in row_idx]
        m = Matrix(self.ring, rows)
        m.ncols = len(col_idx)
        return m

    def select_cols(self, col_idx):
        return self.submatrix(range(self.nrows), col_idx)

    def select_rows(self, row_idx):
        return self.submatrix(row_idx, range(self.ncols))

    def cast(self, ring: Ring) -> "Matrix":
        """Re-read integer entries in another ring (Z -> Q or Z -> F_p)."""
        if self.ring == ring:
            return self
        if self.ring != Z:
            raise TwistlabError(f"can only cast integer matrices, not {self.ring}")
        m = Matrix(ring, [[ring.from_int(x) for x in row] for row in self.rows])
        m.ncols = self.ncols
        return m


def block_matrix(ring, blocks, row_dims, col_dims):
    """Assemble a matrix from a grid of optional blocks (None = zero block)."""
    total_r = sum(row_dims)
    total_c = sum(col_dims)
    out = Matrix.zeros(ring, total_r, total_c)
    r0 = 0
    for bi, rdim in enumerate(row_dims):
        c0 = 0
        for bj, cdim in enumerate(col_dims):
            blk = blocks[bi][bj]
            if blk is not None:
                if blk.nrows != rdim or blk.ncols != cdim:
                    raise TwistlabError("block shape mismatch")
                for i in range(rdim):
                    out.rows[r0 + i][c0 : c0 + cdim] = blk.rows[i][:]
            c0 += cdim
        r0 += rdim
    return out


# -- Smith normal form -----------------------------------------------


@dataclass
class SNF:
    """U * A * V = D with U, V invertible and D diagonal (divisibility chain over Z)."""

    U: Matrix
    D: Matrix
    V: Matrix
    rank: int

    @property
    def diagonal(self):
        return [
            self.D.rows[i][i] for i in range(min(self.D.nrows, self.D.ncols))
        ]


def _find_pivot_z(rows, t, m, n):
    best = None
    for i in range(t, m):
        ri = rows[i]
        for j in range(t, n):
            a = ri[j]
            if a != 0:
                key = (abs(a), i, j)
                if best is None or key < best:
                    best = key
    if best is None:
        return None
    return best[1], best[2]


def _find_pivot_field(rows, t, m, n, rg):
    for i in range(t, m):
        ri = rows[i]
        for j in range(t, n):
            if not rg.is_zero(ri[j]):
                return i, j
    return None


def _swap_rows(mat, i, j):
    if i != j:
        mat[i], mat[j] = mat[j], mat[i]


def _swap_cols(mat, i, j):
    if i != j:
        for row in mat:
            row[i], row[j] = row[j], row[i]


def smith_normal_form(A: Matrix) -> SNF:
    """Diagonalize A by invertible row/column operations.

    Over Z the pivot is the smallest-absolute-value nonzero entry (ties: lowest
    row, then column), quotients use floor division against a positive pivot,
    and the final diagonal satisfies d_1 | d_2 | ... with d_i > 0.  Over fields
    the diagonal is 1,...,1,0,...  Output is deterministic for a fixed input.
    """
    m, n = A.nrows, A.ncols
    if max(m, n) > MAX_SNF_DIM:
        raise CapacityError(f"matrix {m}x{n} exceeds the {MAX_SNF_DIM} bound")
    rg = A.ring
    D = [row[:] for row in A.rows]
    U = [row[:] for row in Matrix.identity(rg, m).rows]
    V = [row[:] for row in Matrix.identity(rg, n).rows]

    if rg.is_field:
        rank = _snf_field(D, U, V, m, n, rg)
    else:
        rank = _snf_int(D, U, V, m, n)

    dU = Matrix(rg, U)
    dU.ncols = m
    dD = Matrix(rg, D)
    dD.ncols = n
    dV = Matrix(rg, V)
    dV.ncols = n
    return SNF(dU, dD, dV, rank)


def _snf_field(D, U, V, m, n, rg):
    t = 0
    while True:
        piv = _find_pivot_field(D, t, m, n, rg)
        if piv is None:
            break
        pi, pj = piv
        _swap_rows(D, t, pi)
        _swap_rows(U, t, pi)
        _swap_cols(D, t, pj)
        _swap_cols(V, t, pj)
        inv = rg.inv(D[t][t])
        D[t] = [rg.mul(inv, x) for x in D[t]]
        U[t] = [rg.mul(inv, x) for x in U[t]]
        for i in range(m):
            if i != t and not rg.is_zero(D[i][t]):
                c = D[i][t]
                D[i] = [rg.sub(x, rg.mul(c, y)) for x, y in zip(D[i], D[t])]
                U[i] = [rg.sub(x, rg.mul(c, y)) for x, y in zip(U[i], U[t])]
        for j in range(n):
            if j != t and not rg.is_zero(D[t][j]):
                c = D[t][j]
                for row in D:
                    row[j] = rg.sub(row[j], rg.mul(c, row[t]))
                for row in V:
                    row[j] = rg.sub(row[j], rg.mul(c, row[t]))
        t += 1
    return t


def _snf_int(D, U, V, m, n):
    t = 0
    while True:
        piv = _find_pivot_z(D, t, m, n)
        if piv is None:
            break
        pi, pj = piv
        _swap_rows(D, t, pi)
        _swap_rows(U, t, pi)
        _swap_cols(D, t, pj)
        _swap_cols(V, t, pj)
        while True:
            if D[t][t] < 0:
                D[t] = [-x for x in D[t]]
                U[t] = [-x for x in U[t]]
            d = D[t][t]
            dirty = False
            for i in range(t + 1, m):
                a = D[i][t]
                if a != 0:
                    q = a // d
                    if q != 0:
                        D[i] = [x - q * y for x, y in zip(D[i], D[t])]
                        U[i] = [x - q * y for x, y in zip(U[i], U[t])]
                    if D[i][t] != 0:
                        dirty = True
            for j in range(t + 1, n):
                a = D[t][j]
                if a != 0:
                    q = a // d
                    if q != 0:
                        for row in D:
                            row[j] -= q * row[t]
                        for row in V:
                            row[j] -= q * row[t]
                    if D[t][j] != 0:
                        dirty = True
            if dirty:
                # Remainders smaller than the pivot appeared; re-pick.
                pi, pj = _find_pivot_z(D, t, m, n)
                _swap_rows(D, t, pi)
                _swap_rows(U, t, pi)
                _swap_cols(D, t, pj)
                _swap_cols(V, t, pj)
                continue
            # Row and column are clear; enforce divisibility into the rest.
            d = D[t][t]
            offender = None
            for i in range(t + 1, m):
                ri = D[i]
                for j in range(t + 1, n):
                    if ri[j] % d != 0:
                        offender = i
                        break
                if offender is not None:
                    break
            if offender is None:
                break
            D[t] = [x + y for x, y in zip(D[t], D[offender])]
            U[t] = [x + y for x, y in zip(U[t], U[offender])]
        t += 1
    return t


# -- derived solvers --------------------------------------------------


def kernel_basis(A: Matrix) -> Matrix:
    """Columns form a basis of ker(A); over Z they generate the integer kernel."""
    snf = smith_normal_form(A)
    idx = list(range(snf.rank, A.ncols))
    return snf.V.select_cols(idx)


def image_basis(A: Matrix) -> Matrix:
    """Columns form a basis of the column span (the image lattice over Z)."""
    snf = smith_normal_form(A)
    av = A.mul(snf.V)
    return av.select_cols(list(range(snf.rank)))


def solve(A: Matrix, B: Matrix):
    """Exact X with A X = B, or None when no solution exists in the ring."""
    if A.nrows != B.nrows:
        raise TwistlabError("solve shape mismatch")
    rg = A.ring
    snf = smith_normal_form(A)
    C = snf.U.mul(B)
    diag = snf.diagonal
    Y = Matrix.zeros(rg, A.ncols, B.ncols)
    for i in range(A.nrows):
        d = diag[i] if i < len(diag) else rg.zero()
        for j in range(B.ncols):
            c = C.rows[i][j]
            if rg.is_zero(d):
                if not rg.is_zero(c):
                    return None
            else:
                if rg.is_field:
                    Y.rows[i][j] = rg.exact_div(c, d)
                else:
                    q, r = divmod(c, d)
                    if r != 0:
                        return None
                    Y.rows[i][j] = q
    return snf.V.mul(Y)


def inverse(A: Matrix) -> Matrix:
    """Inverse of a square matrix invertible over its ring."""
    if A.nrows != A.ncols:
        raise TwistlabError("inverse of a non-square matrix")
    X = solve(A, Matrix.identity(A.ring, A.nrows))
    if X is None:
        raise TwistlabError("matrix is not invertible over its ring")
    return X


def determinant(A: Matrix):
    """Exact determinant (Bareiss over Z, Gaussian over fields)."""
    if A.nrows != A.ncols:
        raise TwistlabError("determinant of a non-square matrix")
    n = A.nrows
    rg = A.ring
    if n == 0:
        return rg.one()
    M = [row[:] for row in A.rows]
    if rg.is_field:
        det = rg.one()
        for t in range(n):
            piv = None
            for i in range(t, n):
                if not rg.is_zero(M[i][t]):
                    piv = i
                    break
            if piv is None:
                return rg.zero()
            if piv != t:
                M[t], M[piv] = M[piv], M[t]
                det = rg.neg(det)
            det = rg.mul(det, M[t][t])
            inv = rg.inv(M[t][t])
            for i in range(t + 1, n):
                c = rg.mul(M[i][t], inv)
                if not rg.is_zero(c):
                    M[i] = [rg.sub(x, rg.mul(c, y)) for x, y in zip(M[i], M[t])]
        return det
    # Bareiss fraction-free elimination.
    sign = 1
    prev = 1
    for t in range(n - 1):
        if M[t][t] == 0:
            piv = None
            for i in range(t + 1, n):
                if M[i][t] != 0:
                    piv = i
                    break
            if piv is None:
                return 0
            M[t], M[piv] = M[piv], M[t]
            sign = -sign
        for i in range(t + 1, n):
            for j in range(t + 1, n):
                M[i][j] = (M[i][j] * M[t][t] - M[i][t] * M[t][j]) // prev
            M[i][t] = 0
        prev = M[t][t]
    return sign * M[n - 1][n - 1]


def is_invertible(A: Matrix) -> bool:
    if A.nrows != A.ncols:
        return False
    rg = A.ring
    det = determinant(A)
    return rg.is_unit(det)
