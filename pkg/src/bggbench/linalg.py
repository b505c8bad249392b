"""Dense exact linear algebra: rank, kernel, solve, and monomial bases.

Everything is deterministic: reduced row echelon form is unique over a field,
kernel bases come out of the standard free-column construction, and all other
outputs are derived from those. Prime fields get a vectorized numpy int64
backend (arithmetic mod p, never floating point); rationals run on Fractions.

Size envelope: dense desk-scale matrices, up to a few thousand rows/columns.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from math import comb

import numpy as np

from .fields import QQ, FieldError, PrimeField, same_field


class DimensionMismatch(ValueError):
    pass


class Matrix:
    """Immutable-by-convention dense matrix over an exact field."""

    __slots__ = ("field", "nrows", "ncols", "data")

    def __init__(self, field, nrows, ncols, data, check=True):
        if check:
            if len(data) != nrows or any(len(row) != ncols for row in data):
                raise DimensionMismatch(
                    f"data shape does not match {nrows}x{ncols}")
            data = [[field.check(x) for x in row] for row in data]
        self.field = field
        self.nrows = nrows
        self.ncols = ncols
        self.data = data

    @classmethod
    def zero(cls, field, nrows, ncols):
        z = field.zero
        return cls(field, nrows, ncols,
                   [[z] * ncols for _ in range(nrows)], check=False)

    @classmethod
    def identity(cls, field, n):
        m = cls.zero(field, n, n)
        for i in range(n):
            m.data[i][i] = field.one
        return m

    @classmethod
    def from_columns(cls, field, nrows, columns):
        data = [[columns[j][i] for j in range(len(columns))]
                for i in range(nrows)]
        return cls(field, nrows, len(columns), data)

    def column(self, j):
        return [row[j] for row in self.data]

    def columns(self):
        return [self.column(j) for j in range(self.ncols)]

    def transpose(self):
        data = [[self.data[i][j] for i in range(self.nrows)]
                for j in range(self.ncols)]
        return Matrix(self.field, self.ncols, self.nrows, data, check=False)

    def is_zero(self):
        z = self.field.zero
        return all(x == z for row in self.data for x in row)

    def __eq__(self, other):
        return (isinstance(other, Matrix) and self.field == other.field
                and self.nrows == other.nrows and self.ncols == other.ncols
                and self.data == other.data)

    def __hash__(self):
        return hash((self.field.tag, self.nrows, self.ncols,
                     tuple(tuple(r) for r in self.data)))

    def __repr__(self):
        return f"Matrix({self.field!r}, {self.nrows}x{self.ncols})"

    def __add__(self, other):
        self._compatible(other, same_shape=True)
        f = self.field
        data = [[f.add(a, b) for a, b in zip(r1, r2)]
                for r1, r2 in zip(self.data, other.data)]
        return Matrix(f, self.nrows, self.ncols, data, check=False)

    def __neg__(self):
        f = self.field
        data = [[f.neg(a) for a in row] for row in self.data]
        return Matrix(f, self.nrows, self.ncols, data, check=False)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        same_field(self.field, other.field)
        if self.ncols != other.nrows:
            raise DimensionMismatch(
                f"cannot multiply {self.nrows}x{self.ncols} "
                f"by {other.nrows}x{other.ncols}")
        f = self.field
        z = f.zero
        bt = other.transpose().data
        data = []
        for row in self.data:
            out = []
            for col in bt:
                acc = z
                for a, b in zip(row, col):
                    if a != z and b != z:
                        acc = f.add(acc, f.mul(a, b))
                out.append(acc)
            data.append(out)
        return Matrix(f, self.nrows, other.ncols, data, check=False)

    def scale(self, c):
        f = self.field
        data = [[f.mul(c, a) for a in row] for row in self.data]
        return Matrix(f, self.nrows, self.ncols, data, check=False)

    def apply(self, vec):
        """Matrix-vector product."""
        if len(vec) != self.ncols:
            raise DimensionMismatch(
                f"vector length {len(vec)} != ncols {self.ncols}")
        f = self.field
        z = f.zero
        out = []
        for row in self.data:
            acc = z
            for a, x in zip(row, vec):
                if a != z and x != z:
                    acc = f.add(acc, f.mul(a, x))
            out.append(acc)
        return out

    def hstack(self, other):
        self._compatible(other)
        if self.nrows != other.nrows:
            raise DimensionMismatch("row counts differ")
        data = [r1 + r2 for r1, r2 in zip(self.data, other.data)]
        return Matrix(self.field, self.nrows, self.ncols + other.ncols,
                      data, check=False)

    def vstack(self, other):
        self._compatible(other)
        if self.ncols != other.ncols:
            raise DimensionMismatch("column counts differ")
        return Matrix(self.field, self.nrows + other.nrows, self.ncols,
                      [list(r) for r in self.data + other.data], check=False)

    @staticmethod
    def block_diag(field, blocks):
        nrows = sum(b.nrows for b in blocks)
        ncols = sum(b.ncols for b in blocks)
        out = Matrix.zero(field, nrows, ncols)
        i0 = j0 = 0
        for b in blocks:
            same_field(field, b.field)
            for i, row in enumerate(b.data):
                out.data[i0 + i][j0:j0 + b.ncols] = list(row)
            i0 += b.nrows
            j0 += b.ncols
        return out

    def _compatible(self, other, same_shape=False):
        same_field(self.field, other.field)
        if same_shape and (self.nrows, self.ncols) != (other.nrows, other.ncols):
            raise DimensionMismatch("matrix shapes differ")


# ---------------------------------------------------------------------------
# Row reduction

def _rref_generic(data, field):
    """Gauss-Jordan over any exact field. Returns (rows, pivot_cols)."""
    rows = [list(r) for r in data]
    nrows = len(rows)
    ncols = len(rows[0]) if rows else 0
    z = field.zero
    pivots = []
    r = 0
    for c in range(ncols):
        if r >= nrows:
            break
        pr = next((i for i in range(r, nrows) if rows[i][c] != z), None)
        if pr is None:
            continue
        if pr != r:
            rows[r], rows[pr] = rows[pr], rows[r]
        inv = field.inv(rows[r][c])
        if inv != field.one:
            rows[r] = [field.mul(inv, x) for x in rows[r]]
        for i in range(nrows):
            if i != r and rows[i][c] != z:
                f = rows[i][c]
                ri, rr = rows[i], rows[r]
                rows[i] = [field.sub(a, field.mul(f, b))
                           for a, b in zip(ri, rr)]
        pivots.append(c)
        r += 1
    return rows, pivots


def _rref_modp(arr: np.ndarray, p: int):
    """Vectorized Gauss-Jordan over F_p on an int64 array (modified in place)."""
    nrows, ncols = arr.shape
    pivots = []
    r = 0
    for c in range(ncols):
        if r >= nrows:
            break
        nz = np.nonzero(arr[r:, c])[0]
        if nz.size == 0:
            continue
        pr = r + int(nz[0])
        if pr != r:
            arr[[r, pr]] = arr[[pr, r]]
        inv = pow(int(arr[r, c]), p - 2, p)
        if inv != 1:
            arr[r] = (arr[r] * inv) % p
        col = arr[:, c].copy()
        col[r] = 0
        mask = col != 0
        if mask.any():
            arr[mask] = (arr[mask] - np.outer(col[mask], arr[r])) % p
        pivots.append(c)
        r += 1
    return arr, pivots


def _to_numpy(M: Matrix) -> np.ndarray:
    return np.array(M.data, dtype=np.int64).reshape(M.nrows, M.ncols)


def mat_rref(M: Matrix):
    """Reduced row echelon form (unique) and its pivot columns."""
    if M.nrows == 0 or M.ncols == 0:
        return Matrix(M.field, M.nrows, M.ncols, [list(r) for r in M.data],
                      check=False), []
    if isinstance(M.field, PrimeField):
        arr, pivots = _rref_modp(_to_numpy(M), M.field.p)
        data = [[int(x) for x in row] for row in arr]
        return Matrix(M.field, M.nrows, M.ncols, data, check=False), pivots
    rows, pivots = _rref_generic(M.data, M.field)
    return Matrix(M.field, M.nrows, M.ncols, rows, check=False), pivots


def mat_rank(M: Matrix) -> int:
    """Rank of M over its field."""
    _, pivots = mat_rref(M)
    return len(pivots)


def kernel_basis_with_positions(M: Matrix):
    """Kernel basis plus the free columns indexing it.

    For each non-pivot column f the basis vector has a 1 in position f,
    zeros at all other non-pivot positions, and -R[i][f] at the pivot of
    row i. Coordinates of any kernel vector with respect to this basis can
    therefore be read off at the free positions.
    """
    R, pivots = mat_rref(M)
    field = M.field
    pivot_set = set(pivots)
    free = [j for j in range(M.ncols) if j not in pivot_set]
    basis = []
    for f in free:
        v = [field.zero] * M.ncols
        v[f] = field.one
        for i, c in enumerate(pivots):
            x = R.data[i][f]
            if x != field.zero:
                v[c] = field.neg(x)
        basis.append(v)
    return basis, free


def mat_kernel_basis(M: Matrix):
    """Basis of the right kernel, in the canonical reduced-echelon form."""
    return kernel_basis_with_positions(M)[0]


@dataclass
class SolveResult:
    """Either a preimage u with M u = v, or a left-kernel certificate.

    ``witness`` is a functional w with w M = 0 and w v != 0, certifying that
    v is not in the column span of M.
    """
    solution: list | None
    witness: list | None

    @property
    def in_image(self):
        return self.solution is not None


def solve_in_image(M: Matrix, v) -> SolveResult:
    """Solve M u = v or produce a non-membership certificate."""
    if len(v) != M.nrows:
        raise DimensionMismatch(
            f"vector length {len(v)} != nrows {M.nrows}")
    field = M.field
    v = [field.check(x) for x in v]
    aug = M.hstack(Matrix.identity(field, M.nrows)
                   if M.nrows else Matrix.zero(field, 0, 0))
    # Eliminate with pivots restricted to the M-columns; the identity block
    # accumulates the row transformation T with T M = R.
    R_all, pivots = _restricted_rref(aug, M.ncols)
    n = M.ncols
    w = None
    for i in range(M.nrows):
        row = R_all.data[i]
        if all(x == field.zero for x in row[:n]):
            t = row[n:]
            val = _dot(field, t, v)
            if val != field.zero:
                w = t
                break
    if w is not None:
        return SolveResult(None, w)
    u = [field.zero] * n
    for i, c in enumerate(pivots):
        t = R_all.data[i][n:]
        u[c] = _dot(field, t, v)
    return SolveResult(u, None)


def _dot(field, a, b):
    acc = field.zero
    for x, y in zip(a, b):
        if x != field.zero and y != field.zero:
            acc = field.add(acc, field.mul(x, y))
    return acc


def _restricted_rref(M: Matrix, pivot_cols_limit: int):
    """RREF where pivots are only searched among the first columns."""
    field = M.field
    if M.nrows == 0:
        return M, []
    if isinstance(field, PrimeField):
        arr = _to_numpy(M)
        p = field.p
        pivots = []
        r = 0
        for c in range(pivot_cols_limit):
            if r >= M.nrows:
                break
            nz = np.nonzero(arr[r:, c])[0]
            if nz.size == 0:
                continue
            pr = r + int(nz[0])
            if pr != r:
                arr[[r, pr]] = arr[[pr, r]]
            inv = pow(int(arr[r, c]), p - 2, p)
            if inv != 1:
                arr[r] = (arr[r] * inv) % p
            col = arr[:, c].copy()
            col[r] = 0
            mask = col != 0
            if mask.any():
                arr[mask] = (arr[mask] - np.outer(col[mask], arr[r])) % p
            pivots.append(c)
            r += 1
        data = [[int(x) for x in row] for row in arr]
        return Matrix(field, M.nrows, M.ncols, data, check=False), pivots
    rows = [list(r) for r in M.data]
    z = field.zero
    pivots = []
    r = 0
    for c in range(pivot_cols_limit):
        if r >= M.nrows:
            break
        pr = next((i for i in range(r, M.nrows) if rows[i][c] != z), None)
        if pr is None:
            continue
        if pr != r:
            rows[r], rows[pr] = rows[pr], rows[r]
        inv = field.inv(rows[r][c])
        if inv != field.one:
            rows[r] = [field.mul(inv, x) for x in rows[r]]
        for i in range(M.nrows):
            if i != r and rows[i][c] != z:
                f = rows[i][c]
                ri, rr = rows[i], rows[r]
                rows[i] = [field.sub(a, field.mul(f, b))
                           for a, b in zip(ri, rr)]
        pivots.append(c)
        r += 1
    return Matrix(field, M.nrows, M.ncols, rows, check=False), pivots


# ---------------------------------------------------------------------------
# Span / subquotient helpers shared by homology and spectral-page code

class Span:
    """Row-span of a set of vectors, kept in RREF for membership tests."""

    def __init__(self, field, ambient_dim, vectors=()):
        self.field = field
        self.dim_ambient = ambient_dim
        self.rows = []
        self.pivots = []
        for v in vectors:
            self.add(v)

    @property
    def dim(self):
        return len(self.rows)

    def reduce(self, vec):
        """Reduce vec modulo the span; the result has zeros at all pivots."""
        field = self.field
        z = field.zero
        v = list(vec)
        for row, c in zip(self.rows, self.pivots):
            x = v[c]
            if x != z:
                v = [field.sub(a, field.mul(x, b)) for a, b in zip(v, row)]
        return v

    def contains(self, vec):
        z = self.field.zero
        return all(x == z for x in self.reduce(vec))

    def add(self, vec):
        """Insert vec; returns True if it enlarged the span."""
        field = self.field
        z = field.zero
        v = self.reduce(vec)
        c = next((j for j, x in enumerate(v) if x != z), None)
        if c is None:
            return False
        inv = field.inv(v[c])
        if inv != field.one:
            v = [field.mul(inv, x) for x in v]
        # keep RREF: clear column c in existing rows, insert sorted by pivot
        for i, row in enumerate(self.rows):
            x = row[c]
            if x != z:
                self.rows[i] = [field.sub(a, field.mul(x, b))
                                for a, b in zip(row, v)]
        pos = next((i for i, pc in enumerate(self.pivots) if pc > c),
                   len(self.pivots))
        self.rows.insert(pos, v)
        self.pivots.insert(pos, c)
        return True


class Subquotient:
    """A basis of span(Z)/span(B) with deterministic representatives.

    Representatives are the first Z-generators (in the given order) whose
    reductions modulo B stay independent; ``coords`` expresses any vector of
    span(Z) + span(B) in this basis.
    """

    def __init__(self, field, ambient_dim, z_vectors, b_vectors):
        self.field = field
        self.bspan = Span(field, ambient_dim, b_vectors)
        self.reps = []
        self.indices = []
        self._red = Span(field, ambient_dim)
        self._coord_matrix = None
        for i, v in enumerate(z_vectors):
            if self._red.add(self.bspan.reduce(v)):
                self.reps.append(v)
                self.indices.append(i)

    @property
    def dim(self):
        return len(self.reps)

    def coords(self, vec):
        """Coordinates of [vec] in the chosen basis; errors if outside."""
        field = self.field
        z = field.zero
        target = self.bspan.reduce(vec)
        if not self.reps:
            if any(x != z for x in target):
                raise ValueError("vector not in the subquotient span")
            return []
        if self._coord_matrix is None:
            cols = [self.bspan.reduce(r) for r in self.reps]
            self._coord_matrix = Matrix.from_columns(
                field, self.bspan.dim_ambient, cols)
        res = solve_in_image(self._coord_matrix, target)
        if not res.in_image:
            raise ValueError("vector not in the subquotient span")
        return res.solution


# ---------------------------------------------------------------------------
# Monomial bases

@dataclass(frozen=True)
class MonomialBasis:
    """Ordered monomial basis of Sym^d W or Lambda^d V.

    Symmetric monomials are exponent tuples in descending graded-lex order;
    exterior monomials are ascending 0-based index tuples in lex order.
    """
    kind: str
    nvars: int
    degree: int
    monomials: tuple

    def __len__(self):
        return len(self.monomials)

    def index(self, mono):
        return self.monomials.index(mono)

    def labels(self, letter=None):
        letter = letter or ("x" if self.kind == "symmetric" else "e")
        out = []
        for m in self.monomials:
            if self.kind == "symmetric":
                parts = [f"{letter}{i+1}" + (f"^{e}" if e > 1 else "")
                         for i, e in enumerate(m) if e > 0]
                out.append("*".join(parts) if parts else "1")
            else:
                out.append("*".join(f"{letter}{i+1}" for i in m) or "1")
        return out


@lru_cache(maxsize=None)
def sym_monomials(nvars: int, degree: int):
    """Exponent tuples of total degree ``degree``, descending lex."""
    if degree < 0:
        return ()
    if nvars == 0:
        return ((),) if degree == 0 else ()

    def gen(rest, d):
        if rest == 1:
            yield (d,)
            return
        for first in range(d, -1, -1):
            for tail in gen(rest - 1, d - first):
                yield (first,) + tail

    return tuple(gen(nvars, degree))


@lru_cache(maxsize=None)
def ext_monomials(nvars: int, degree: int):
    """Ascending index tuples (0-based), lexicographic order."""
    if degree < 0 or degree > nvars:
        return ()
    return tuple(combinations(range(nvars), degree))


def monomial_basis(kind: str, nvars: int, degree: int) -> MonomialBasis:
    if nvars < 0 or degree < 0:
        raise ValueError("nvars and degree must be nonnegative")
    if kind == "symmetric":
        monos = sym_monomials(nvars, degree)
        expected = comb(nvars + degree - 1, degree) if nvars > 0 else \
            (1 if degree == 0 else 0)
    elif kind == "exterior":
        monos = ext_monomials(nvars, degree)
        expected = comb(nvars, degree) if degree <= nvars else 0
    else:
        raise ValueError(f"unknown basis kind {kind!r}")
    assert len(monos) == expected
    return MonomialBasis(kind, nvars, degree, monos)


def wedge_sign(a: int, s: tuple) -> int:
    """Sign of e_a ^ e_S relative to the sorted basis monomial, 0 if a in S."""
    if a in s:
        return 0
    return -1 if sum(1 for b in s if b < a) % 2 else 1


def wedge_insert(a: int, s: tuple) -> tuple:
    return tuple(sorted(s + (a,)))


# ---------------------------------------------------------------------------
# Rank certification over the rationals

_CERT_PRIME = 2**31 - 1


def rank_lower_bound(M: Matrix):
    """Rank of M reduced mod 2^31 - 1; always <= the rank over Q.

    Returns None when some denominator vanishes mod the certification prime
    (callers then fall back to exact elimination).
    """
    if M.nrows == 0 or M.ncols == 0:
        return 0
    p = _CERT_PRIME
    arr = np.zeros((M.nrows, M.ncols), dtype=np.int64)
    for i, row in enumerate(M.data):
        for j, x in enumerate(row):
            num, den = x.numerator, x.denominator
            if den % p == 0:
                return None
            v = num % p
            if den != 1:
                v = (v * pow(den % p, p - 2, p)) % p
            arr[i, j] = v
    _, pivots = _rref_modp(arr, p)
    return len(pivots)


def homology_dim(field, mid_dim, in_mat, out_mat):
    """dim ker(out)/im(in) for a three-term strand of finite k-spaces.

    Over the rationals a mod-p certificate is tried first: rank_p <= rank_Q,
    so mid - rank_p(out) - rank_p(in) is an upper bound for the homology;
    zero upper bound certifies zero homology exactly. Otherwise exact ranks
    are computed. Prime fields compute directly.
    """
    if mid_dim == 0:
        return 0
    if isinstance(field, PrimeField):
        r_out = mat_rank(out_mat) if out_mat is not None else 0
        r_in = mat_rank(in_mat) if in_mat is not None else 0
        return mid_dim - r_out - r_in
    ub = mid_dim
    ok = True
    for m in (out_mat, in_mat):
        if m is None:
            continue
        r = rank_lower_bound(m)
        if r is None:
            ok = False
            break
        ub -= r
    if ok and ub == 0:
        return 0
    r_out = mat_rank(out_mat) if out_mat is not None else 0
    r_in = mat_rank(in_mat) if in_mat is not None else 0
    return mid_dim - r_out - r_in
