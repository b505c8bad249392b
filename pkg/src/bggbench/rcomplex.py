"""Bounded complexes of free modules over R = k[[t_1..t_e]], m-adically
filtered, with entries stored as jets of total degree <= N.

The filtration is always F^p K^n = m^p K^n; verdicts downstream carry the
precision window because jets are the only finite representation of the
ring elements.
"""

from __future__ import annotations

from dataclasses import dataclass

from .emodule import ExteriorContext, GradedEModule, ModuleError
from .fields import same_field
from .jets import (
    homog_part,
    pmat_add,
    pmat_apply,
    pmat_is_zero,
    pmat_mul,
    pmat_shape,
    pmat_truncate,
    pmat_zero,
    poly_format,
    poly_homogeneous_degree,
    poly_is_zero,
    mono_degree,
    mono_mul,
)
from .linalg import Matrix, Subquotient, mat_kernel_basis, sym_monomials


class FilteredComplexError(ValueError):
    pass


class FilteredFreeComplex:
    """Spots n in [n_lo, n_hi] with free ranks and polynomial differentials.

    ``diffs[n]`` is the matrix of d: K^n -> K^(n+1), of shape
    rank(n+1) x rank(n), entries polynomials of total degree <= precision.
    """

    def __init__(self, field, nvars, precision, ranks, diffs, check=True):
        if nvars < 0 or precision < 0:
            raise FilteredComplexError("nvars and precision must be >= 0")
        self.field = field
        self.nvars = nvars
        self.precision = precision
        ranks = {n: r for n, r in ranks.items() if r > 0}
        if ranks:
            self.n_lo = min(ranks)
            self.n_hi = max(ranks)
        else:
            self.n_lo = self.n_hi = 0
        self.ranks = ranks
        self.diffs = {}
        for n, m in diffs.items():
            if pmat_is_zero(m) and (self.rank(n) == 0 or self.rank(n + 1) == 0):
                continue
            self.diffs[n] = pmat_truncate(m, precision)
        self._jet_blocks = {}
        self._homology = None
        if check:
            self._check_shapes()

    def _check_shapes(self):
        for n, m in self.diffs.items():
            want = (self.rank(n + 1), self.rank(n))
            if pmat_shape(m) != want:
                raise FilteredComplexError(
                    f"differential at spot {n}: shape {pmat_shape(m)}, "
                    f"expected {want[0]}x{want[1]}")

    def rank(self, n):
        return self.ranks.get(n, 0)

    @property
    def spots(self):
        return list(range(self.n_lo, self.n_hi + 1))

    def diff(self, n):
        m = self.diffs.get(n)
        if m is None:
            return pmat_zero(self.rank(n + 1), self.rank(n))
        return m

    def constant_matrix(self, n) -> Matrix:
        """The reduction mod m of the differential at spot n."""
        zero_mono = (0,) * self.nvars
        d = self.diff(n)
        data = [[e.get(zero_mono, self.field.zero) for e in row] for row in d]
        return Matrix(self.field, self.rank(n + 1), self.rank(n), data,
                      check=False)

    def linear_coefficient(self, n, a) -> Matrix:
        """Coefficient matrix of t_a (1-based) in the differential at n."""
        mono = tuple(1 if i == a - 1 else 0 for i in range(self.nvars))
        d = self.diff(n)
        data = [[e.get(mono, self.field.zero) for e in row] for row in d]
        return Matrix(self.field, self.rank(n + 1), self.rank(n), data,
                      check=False)

    # -- jet linear algebra -------------------------------------------------

    def jet_block(self, n, rho, delta) -> Matrix:
        """d as a map from degree-delta jets of K^n to degree-(delta+rho)
        jets of K^(n+1), using only the degree-rho part of the entries.

        Jet coordinates are monomial-major: index = mono_index * rank + coord,
        monomials in descending graded-lex order.
        """
        key = (n, rho, delta)
        cached = self._jet_blocks.get(key)
        if cached is not None:
            return cached
        field = self.field
        src_m = sym_monomials(self.nvars, delta)
        dst_m = sym_monomials(self.nvars, delta + rho)
        dst_idx = {m: i for i, m in enumerate(dst_m)}
        rn, rn1 = self.rank(n), self.rank(n + 1)
        out = Matrix.zero(field, len(dst_m) * rn1, len(src_m) * rn)
        d = self.diff(n)
        for i in range(rn1):
            for j in range(rn):
                part = homog_part(d[i][j], rho)
                for nu, coeff in part.items():
                    for mi, mu in enumerate(src_m):
                        ti = dst_idx[mono_mul(nu, mu)]
                        row, col = ti * rn1 + i, mi * rn + j
                        out.data[row][col] = field.add(out.data[row][col],
                                                       coeff)
        self._jet_blocks[key] = out
        return out

    def jet_dim(self, n, degrees):
        return self.rank(n) * sum(len(sym_monomials(self.nvars, d))
                                  for d in degrees)

    def jet_map(self, n, col_degrees, row_degrees) -> Matrix:
        """d assembled blockwise between lists of jet degrees."""
        field = self.field
        col_sizes = [self.rank(n) * len(sym_monomials(self.nvars, d))
                     for d in col_degrees]
        row_sizes = [self.rank(n + 1) * len(sym_monomials(self.nvars, d))
                     for d in row_degrees]
        out = Matrix.zero(field, sum(row_sizes), sum(col_sizes))
        r0 = 0
        for ri, rd in enumerate(row_degrees):
            c0 = 0
            for ci, cd in enumerate(col_degrees):
                rho = rd - cd
                if rho >= 0:
                    blk = self.jet_block(n, rho, cd)
                    for i, row in enumerate(blk.data):
                        orow = out.data[r0 + i]
                        for j, x in enumerate(row):
                            if x != field.zero:
                                orow[c0 + j] = x
                c0 += col_sizes[ci]
            r0 += row_sizes[ri]
        return out

    def __eq__(self, other):
        return (isinstance(other, FilteredFreeComplex)
                and self.field == other.field
                and self.nvars == other.nvars
                and self.precision == other.precision
                and self.ranks == other.ranks
                and all(self.diff(n) == other.diff(n)
                        for n in range(self.n_lo, self.n_hi + 1)))

    def __repr__(self):
        rk = ", ".join(f"{n}:{self.rank(n)}" for n in self.spots)
        return (f"FilteredFreeComplex(e={self.nvars}, N={self.precision}, "
                f"ranks={{{rk}}})")


@dataclass
class ComplexValidation:
    ok: bool
    problems: list

    def __str__(self):
        if self.ok:
            return "valid (d^2 = 0 within precision)"
        return "invalid:\n" + "\n".join(f"  - {p}" for p in self.problems)


def validate_complex(K: FilteredFreeComplex) -> ComplexValidation:
    """Check d o d = 0 modulo m^(N+1), reporting any offending entry."""
    problems = []
    for n in K.spots:
        if K.rank(n) == 0 or K.rank(n + 1) == 0 or K.rank(n + 2) == 0:
            continue
        comp = pmat_mul(K.field, K.diff(n + 1), K.diff(n), K.precision)
        for i, row in enumerate(comp):
            for j, e in enumerate(row):
                if not poly_is_zero(e):
                    problems.append(
                        f"(d o d)[{i}][{j}] = "
                        f"{poly_format(K.field, e)} at spot {n}")
    return ComplexValidation(not problems, problems)


def require_valid_complex(K):
    rep = validate_complex(K)
    if not rep.ok:
        raise FilteredComplexError(str(rep))
    return K


# ---------------------------------------------------------------------------
# Reduction mod m and the induced exterior-module structure

@dataclass
class ReducedComplex:
    """The complex over k = R/m with homology dims and chosen bases."""
    dims: dict            # spot -> rank of K^n
    homology_dims: dict   # spot -> dim H^n(K (x) k)
    subquotients: dict    # spot -> Subquotient (cycle reps mod boundaries)

    def render(self):
        lines = ["spot  rank  h"]
        for n in sorted(self.dims):
            lines.append(f"{n:>4}  {self.dims[n]:>4}  "
                         f"{self.homology_dims.get(n, 0)}")
        return "\n".join(lines)


def reduce_mod_m(K: FilteredFreeComplex) -> ReducedComplex:
    """Constant parts of the differentials and degreewise homology over k."""
    if K._homology is not None:
        return K._homology
    field = K.field
    dims = {n: K.rank(n) for n in K.spots}
    subq = {}
    hdims = {}
    for n in K.spots:
        rn = K.rank(n)
        cycles = (mat_kernel_basis(K.constant_matrix(n))
                  if K.rank(n + 1) else
                  [_unit(field, rn, i) for i in range(rn)])
        boundaries = (K.constant_matrix(n - 1).columns()
                      if K.rank(n - 1) else [])
        sq = Subquotient(field, rn, cycles, boundaries)
        subq[n] = sq
        hdims[n] = sq.dim
    K._homology = ReducedComplex(dims, hdims, subq)
    return K._homology


def _unit(field, n, i):
    v = [field.zero] * n
    v[i] = field.one
    return v


@dataclass
class HomogeneityReport:
    homogeneous: bool
    degree: int | None  # None when the differential has no nonzero entry

    def __str__(self):
        if not self.homogeneous:
            return "not homogeneous"
        if self.degree is None:
            return "zero differential (homogeneous of every degree)"
        return f"homogeneous of degree {self.degree}"


def homogeneous_degree(K: FilteredFreeComplex) -> HomogeneityReport:
    """The unique degree of all nonzero differential entries, if any."""
    degrees = set()
    for n in K.spots:
        for row in K.diff(n):
            for e in row:
                if poly_is_zero(e):
                    continue
                d = poly_homogeneous_degree(e)
                if d is None:
                    return HomogeneityReport(False, None)
                degrees.add(d)
    if len(degrees) > 1:
        return HomogeneityReport(False, None)
    return HomogeneityReport(True, degrees.pop() if degrees else None)


def induce_emodule(K: FilteredFreeComplex, top_degree=None) -> GradedEModule:
    """The exterior-module structure on the homology of K (x) k.

    The degree-(d - n) component is H^n; e_a acts by the map induced by the
    t_a-coefficient of the differential (well defined because d^2 = 0 makes
    the linear part anticommute with the constant part on homology).
    """
    require_valid_complex(K)
    red = reduce_mod_m(K)
    d_top = top_degree if top_degree is not None else K.n_hi - K.n_lo
    ctx = ExteriorContext(K.nvars, K.field)
    components = {}
    for n in K.spots:
        h = red.homology_dims[n]
        if h:
            components[d_top - (n - K.n_lo)] = h
    action = {}
    for n in K.spots:
        j = d_top - (n - K.n_lo)
        src = red.subquotients[n]
        tgt = red.subquotients.get(n + 1)
        if src.dim == 0 or tgt is None or tgt.dim == 0:
            continue
        for a in range(1, K.nvars + 1):
            lin = K.linear_coefficient(n, a)
            cols = []
            for rep in src.reps:
                w = lin.apply(rep)
                try:
                    cols.append(tgt.coords(w))
                except ValueError:
                    raise FilteredComplexError(
                        "induced action left the cycle space; the complex "
                        "violates d^2 = 0 beyond the certified precision"
                    ) from None
            action[(a, j)] = Matrix.from_columns(K.field, tgt.dim, cols)
    module = GradedEModule(ctx, components, action)
    from .emodule import validate_module
    rep = validate_module(module)
    if not rep.ok:
        raise FilteredComplexError(
            f"induced action fails anticommutation (internal error, "
            f"indicates a d^2 violation): {rep}")
    return module


# ---------------------------------------------------------------------------
# Chain maps, homotopies, direct sums

def _pcompose(field, a, a_shape, b, b_shape, cutoff):
    """a o b with explicit shapes, so zero-dimensional factors stay sound."""
    rows, mid = a_shape
    mid2, cols = b_shape
    if mid != mid2:
        raise FilteredComplexError("composition shape mismatch")
    if mid == 0 or rows == 0 or cols == 0:
        return pmat_zero(rows, cols)
    return pmat_mul(field, a, b, cutoff)


class ChainMap:
    """Degree-preserving map of filtered complexes, polynomial entries."""

    def __init__(self, source, target, maps, check=True):
        if source.nvars != target.nvars or source.precision != target.precision:
            raise FilteredComplexError(
                "chain map needs matching variable count and precision")
        same_field(source.field, target.field)
        self.source = source
        self.target = target
        self.maps = {n: pmat_truncate(m, source.precision)
                     for n, m in maps.items()}
        if check:
            rep = self.validate()
            if not rep.ok:
                raise FilteredComplexError(str(rep))

    def component(self, n):
        m = self.maps.get(n)
        if m is None:
            return pmat_zero(self.target.rank(n), self.source.rank(n))
        return m

    def validate(self) -> ComplexValidation:
        problems = []
        N = self.source.precision
        field = self.source.field
        for n, m in self.maps.items():
            want = (self.target.rank(n), self.source.rank(n))
            if pmat_shape(m) != want:
                problems.append(f"component at spot {n}: shape "
                                f"{pmat_shape(m)}, expected {want}")
        if problems:
            return ComplexValidation(False, problems)
        K, L = self.source, self.target
        spots = sorted(set(K.spots) | set(L.spots))
        for n in spots:
            lhs = _pcompose(field, L.diff(n), (L.rank(n + 1), L.rank(n)),
                            self.component(n), (L.rank(n), K.rank(n)), N)
            rhs = _pcompose(field, self.component(n + 1),
                            (L.rank(n + 1), K.rank(n + 1)),
                            K.diff(n), (K.rank(n + 1), K.rank(n)), N)
            delta = pmat_add(field, lhs,
                             [[{m: field.neg(c) for m, c in e.items()}
                               for e in row] for row in rhs])
            if not pmat_is_zero(delta):
                problems.append(f"not a chain map at spot {n}")
        return ComplexValidation(not problems, problems)


class Homotopy:
    """Maps s^n: K^n -> L^(n-1); witnesses d o s + s o d."""

    def __init__(self, source, target, maps):
        self.source = source
        self.target = target
        self.maps = {n: pmat_truncate(m, source.precision)
                     for n, m in maps.items()}

    def component(self, n):
        m = self.maps.get(n)
        if m is None:
            return pmat_zero(self.target.rank(n - 1), self.source.rank(n))
        return m

    def boundary_expression(self, n):
        """(d o s + s o d) at spot n, the adopted sign convention."""
        field = self.source.field
        N = self.source.precision
        K, L = self.source, self.target
        lhs = _pcompose(field, L.diff(n - 1), (L.rank(n), L.rank(n - 1)),
                        self.component(n), (L.rank(n - 1), K.rank(n)), N)
        rhs = _pcompose(field, self.component(n + 1),
                        (L.rank(n), K.rank(n + 1)),
                        K.diff(n), (K.rank(n + 1), K.rank(n)), N)
        return pmat_add(field, lhs, rhs)


def sum_complexes(complexes) -> FilteredFreeComplex:
    """Blockwise direct sum; spot ranges are padded with zero ranks."""
    complexes = list(complexes)
    if not complexes:
        raise FilteredComplexError("need at least one summand")
    first = complexes[0]
    for K in complexes[1:]:
        if K.nvars != first.nvars:
            raise FilteredComplexError("variable-count mismatch in sum")
        if K.precision != first.precision:
            raise FilteredComplexError("precision mismatch in sum")
        same_field(K.field, first.field)
    lo = min(K.n_lo for K in complexes)
    hi = max(K.n_hi for K in complexes)
    ranks = {n: sum(K.rank(n) for K in complexes) for n in range(lo, hi + 1)}
    diffs = {}
    for n in range(lo, hi):
        rows = ranks.get(n + 1, 0)
        cols = ranks.get(n, 0)
        if rows == 0 or cols == 0:
            continue
        block = pmat_zero(rows, cols)
        i0 = j0 = 0
        for K in complexes:
            d = K.diff(n)
            for i, row in enumerate(d):
                for j, e in enumerate(row):
                    if e:
                        block[i0 + i][j0 + j] = dict(e)
            i0 += K.rank(n + 1)
            j0 += K.rank(n)
        diffs[n] = block
    return FilteredFreeComplex(first.field, first.nvars, first.precision,
                               ranks, diffs)
