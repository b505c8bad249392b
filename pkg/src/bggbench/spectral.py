"""Pages, differentials, and degeneration diagnostics for the m-adic
spectral sequence of a filtered free complex.

Entries are computed degreewise over k from the cycle/boundary description
of the pages: the page at column p is the image of the approximable cycles
in the associated graded, modulo boundaries from r steps down. Dimensions
come from four cached ranks per cell; explicit bases and differentials are
materialized on demand with deterministic echelon lifting.

Every verdict is qualified by the precision window: column p of page r needs
jets through degree p + r - 1, so a window is refused when it would exceed
the stored precision.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .bgg import LinearSComplex, Spot, build_bgg, homology_dims
from .jets import (
    homog_part,
    mono_mul,
    pmat_apply,
    pmat_is_zero,
    pmat_add,
    poly_format,
    poly_is_zero,
)
from .linalg import (
    Matrix,
    Subquotient,
    mat_kernel_basis,
    solve_in_image,
    sym_monomials,
)
from .rcomplex import (
    ChainMap,
    FilteredComplexError,
    FilteredFreeComplex,
    Homotopy,
    induce_emodule,
    reduce_mod_m,
    require_valid_complex,
    sum_complexes,
)


class WindowError(FilteredComplexError):
    """A requested window exceeds the certified jet precision."""


def _require_precision(K, needed, what):
    if needed > K.precision:
        raise WindowError(
            f"{what} needs jets through degree {needed}, but the complex is "
            f"stored to precision N = {K.precision}; re-enter the input with "
            f"N >= {needed}")


def _degree_range(K, lo, hi):
    """Degrees [lo, hi] clipped to the certified jet range."""
    return list(range(max(lo, 0), min(hi, K.precision) + 1))


def _homog_degree(K):
    """Degree of a homogeneous differential, -1 for inhomogeneous, None for
    a zero differential (cached on the complex)."""
    val = getattr(K, "_homog_degree", "unset")
    if val == "unset":
        from .rcomplex import homogeneous_degree
        rep = homogeneous_degree(K)
        val = rep.degree if rep.homogeneous else -1
        K._homog_degree = val
    return val


def _cached_rank(K, n, col_degrees, row_degrees):
    key = (n, tuple(col_degrees), tuple(row_degrees))
    cache = getattr(K, "_rank_cache", None)
    if cache is None:
        cache = K._rank_cache = {}
    hit = cache.get(key)
    if hit is not None:
        return hit
    if (not col_degrees or not row_degrees
            or K.rank(n) == 0 or K.rank(n + 1) == 0):
        cache[key] = 0
        return 0
    from .linalg import mat_rank
    h = _homog_degree(K)
    if h is None:
        r = 0
    elif h >= 0:
        # homogeneous differential: each column block hits one row block, so
        # the rank is the sum of the per-degree block ranks
        rows = set(row_degrees)
        r = 0
        for delta in col_degrees:
            if delta + h not in rows:
                continue
            bkey = ("block", n, delta)
            br = cache.get(bkey)
            if br is None:
                br = mat_rank(K.jet_block(n, h, delta))
                cache[bkey] = br
            r += br
    else:
        r = mat_rank(K.jet_map(n, col_degrees, row_degrees))
    cache[key] = r
    return r


def page_dim(K: FilteredFreeComplex, r: int, p: int, q: int) -> int:
    """dim E_r^{p,q} from the cycle/boundary rank formulas.

    Degree ranges are clipped at the precision N, so with r >= N + 1 - p this
    computes the truncated limit page.
    """
    n = p + q
    if p < 0 or K.rank(n) == 0:
        return 0
    zcols = _degree_range(K, p, p + r - 1)
    z1 = K.jet_dim(n, zcols) - _cached_rank(K, n, zcols, zcols)
    zcols2 = _degree_range(K, p + 1, p + r - 1)
    z2 = K.jet_dim(n, zcols2) - _cached_rank(K, n, zcols2, zcols2)
    c = max(p - r + 1, 0)
    ycols = _degree_range(K, c, p)
    b_full = _cached_rank(K, n - 1, ycols, _degree_range(K, c, p))
    b_drop = _cached_rank(K, n - 1, ycols, _degree_range(K, c, p - 1))
    return (z1 - z2) - (b_full - b_drop)


@dataclass
class PageEntry:
    """A spot of one page: dimension, chosen cycle representatives (as jet
    vectors, degree -> coordinate list), and the subquotient for coords."""
    dim: int
    reps: list
    subquotient: Subquotient
    degrees: list


def _jet_split(K, n, degrees, flat):
    """Split a flat jet vector into per-degree coordinate blocks."""
    out = {}
    pos = 0
    for d in degrees:
        size = K.rank(n) * len(sym_monomials(K.nvars, d))
        out[d] = flat[pos:pos + size]
        pos += size
    return out


def page_entry(K: FilteredFreeComplex, r: int, p: int, q: int) -> PageEntry:
    """Explicit basis of E_r^{p,q} with deterministic echelon lifting."""
    n = p + q
    field = K.field
    if p < 0 or K.rank(n) == 0:
        return PageEntry(0, [], Subquotient(field, 0, [], []), [])
    zdegrees = _degree_range(K, p, p + r - 1)
    zmap = K.jet_map(n, zdegrees, zdegrees)
    zbasis = mat_kernel_basis(zmap)
    head = K.rank(n) * len(sym_monomials(K.nvars, p))
    zheads = [v[:head] for v in zbasis]
    c = max(p - r + 1, 0)
    ydeg = _degree_range(K, c, p)
    con_rows = _degree_range(K, c, p - 1)
    ycon = K.jet_map(n - 1, ydeg, con_rows) if K.rank(n - 1) else None
    bvecs = []
    if K.rank(n - 1):
        out_row = K.jet_map(n - 1, ydeg, [p])
        for y in mat_kernel_basis(ycon):
            bvecs.append(out_row.apply(y))
    sq = Subquotient(field, head, zheads, bvecs)
    reps = [_jet_split(K, n, zdegrees, zbasis[i]) for i in sq.indices]
    return PageEntry(sq.dim, reps, sq, zdegrees)


def _apply_d_to_rep(K, n, rep, target_degree):
    """(d x)_{target_degree} for a jet representative x of K^n."""
    field = K.field
    size = K.rank(n + 1) * len(sym_monomials(K.nvars, target_degree))
    acc = [field.zero] * size
    for d, block in rep.items():
        rho = target_degree - d
        if rho < 0:
            continue
        mat = K.jet_block(n, rho, d)
        img = mat.apply(block)
        acc = [field.add(a, b) for a, b in zip(acc, img)]
    return acc


@dataclass
class PageTable:
    """One page over a window: dimensions, and differentials on request."""
    r: int
    pmax: int
    dims: dict                      # (p, q) -> dim
    diffs: dict                     # (p, q) -> Matrix into (p+r, q-r+1)
    entries: dict                   # (p, q) -> PageEntry (explicit mode)
    certified_degree: int           # jets consumed up to this degree
    spot_range: tuple

    def dim(self, p, q):
        return self.dims.get((p, q), 0)

    def differential(self, p, q):
        return self.diffs.get((p, q))

    def all_differentials_zero(self):
        return all(m.is_zero() for m in self.diffs.values())

    def render(self, fmt="text"):
        if fmt == "csv":
            lines = ["r,p,q,dim"]
            for (p, q), d in sorted(self.dims.items()):
                lines.append(f"{self.r},{p},{q},{d}")
            return "\n".join(lines)
        n_lo, n_hi = self.spot_range
        lines = [f"E_{self.r} page (p <= {self.pmax}, jets through degree "
                 f"{self.certified_degree})"]
        header = "n\\p " + " ".join(f"{p:>3}" for p in range(self.pmax + 1))
        lines.append(header)
        for n in range(n_lo, n_hi + 1):
            cells = " ".join(
                f"{self.dims.get((p, n - p), 0) or '.':>3}"
                for p in range(self.pmax + 1))
            lines.append(f"{n:<4}" + cells)
        return "\n".join(lines)

    def __str__(self):
        return self.render()


def compute_page(K: FilteredFreeComplex, r: int, pmax: int,
                 with_differentials: bool = True) -> PageTable:
    """The E_r page on columns 0..pmax, with d_r when requested.

    Dimensions are produced twice, by rank formulas and by explicit bases,
    and cross-checked; the differential is [x] -> [dx] on the chosen
    representatives.
    """
    if r < 1:
        raise FilteredComplexError("pages start at r = 1")
    require_valid_complex(K)
    needed = pmax + r if with_differentials else pmax + r - 1
    _require_precision(K, needed, f"page {r} on columns 0..{pmax}")
    dims = {}
    entries = {}
    for n in range(K.n_lo, K.n_hi + 1):
        for p in range(0, pmax + 1):
            q = n - p
            d_formula = page_dim(K, r, p, q)
            if with_differentials:
                ent = page_entry(K, r, p, q)
                if ent.dim != d_formula:
                    raise FilteredComplexError(
                        f"internal: page dim mismatch at (p={p}, q={q}): "
                        f"formula {d_formula}, basis {ent.dim}")
                entries[(p, q)] = ent
            if d_formula:
                dims[(p, q)] = d_formula
    diffs = {}
    if with_differentials:
        for (p, q), ent in entries.items():
            if ent.dim == 0 or p + r > pmax:
                continue
            tgt = entries.get((p + r, q - r + 1))
            if tgt is None:
                continue
            n = p + q
            cols = []
            for rep in ent.reps:
                img = _apply_d_to_rep(K, n, rep, p + r)
                try:
                    cols.append(tgt.subquotient.coords(img)
                                if tgt.dim else [])
                except ValueError:
                    raise FilteredComplexError(
                        "internal: d_r image left the page span; "
                        "d^2 may fail beyond the certified precision"
                    ) from None
            diffs[(p, q)] = Matrix.from_columns(K.field, tgt.dim, cols)
    return PageTable(r, pmax, dims, diffs, entries,
                     min(needed, K.precision), (K.n_lo, K.n_hi))


# ---------------------------------------------------------------------------
# Degeneration

@dataclass
class DegenerationVerdict:
    degenerates: bool
    page: int
    pmax: int
    through: str
    counterexample: tuple | None = None

    def __str__(self):
        scope = (f"columns p <= {self.pmax}, pages through the "
                 f"{'window' if self.through == 'window' else 'precision ceiling'}")
        if self.degenerates:
            return f"degenerates at E_{self.page} within the window ({scope})"
        p, q, i, a, b = self.counterexample
        return (f"does not degenerate at E_{self.page}: dim E_{i}^({p},{q}) "
                f"= {a} but dim E_{i + 1} = {b} ({scope})")


def degenerates_at(K: FilteredFreeComplex, r: int, pmax: int | None = None,
                   through: str = "window") -> DegenerationVerdict:
    """True iff pages r, r+1, ... have equal dimensions in the window.

    A dimension drop between consecutive pages at a cell is exactly a nonzero
    differential touching that cell, so equal dimensions certify both clauses
    of degeneration (equal pages and vanishing differentials) at once.
    With through="window" pages run to the window diameter; with
    through="precision" each cell is compared up to its precision ceiling,
    where the truncated limit page sits.
    """
    if r < 1:
        raise FilteredComplexError("degeneration pages start at r = 1")
    require_valid_complex(K)
    if pmax is None:
        pmax = max(K.precision - r, 1)
    _require_precision(K, pmax + r, f"degeneration at E_{r} on columns 0..{pmax}")
    for n in range(K.n_lo, K.n_hi + 1):
        for p in range(0, pmax + 1):
            q = n - p
            if through == "precision":
                i_top = K.precision + 1 - p
            else:
                i_top = max(pmax, r + 1)
            i_top = min(i_top, K.precision + 1 - p)
            prev = None
            for i in range(r, i_top + 1):
                d = page_dim(K, i, p, q)
                if prev is not None and d != prev[1]:
                    return DegenerationVerdict(
                        False, r, pmax, through, (p, q, prev[0], prev[1], d))
                prev = (i, d)
    return DegenerationVerdict(True, r, pmax, through)


# ---------------------------------------------------------------------------
# The degeneration criterion on the filtration

@dataclass
class CriterionWitness:
    spot: int
    level: int
    x: list            # polynomial vector in K^{spot-1}
    dx: list           # polynomial vector in K^{spot}
    certificate: list  # functional vanishing on d(F^{k-r}) but not on dx

    def format(self, field, single_var=False):
        xs = ",".join(poly_format(field, e, single_var) for e in self.x)
        ds = ",".join(poly_format(field, e, single_var) for e in self.dx)
        return f"x=({xs}), dx=({ds})"


@dataclass
class CriterionReport:
    passed: bool
    r: int
    kmax: int
    witness: CriterionWitness | None = None

    def __str__(self):
        if self.passed:
            return (f"filtration criterion holds for r = {self.r} "
                    f"(levels k <= {self.kmax})")
        w = self.witness
        return (f"filtration criterion fails for r = {self.r} at spot "
                f"n = {w.spot}, level k = {w.level}")


def check_degeneration_criterion(K: FilteredFreeComplex, r: int,
                                 kmax: int | None = None,
                                 cutoff: int | None = None) -> CriterionReport:
    """Degreewise check of F^k K^n  ∩ d(K^{n-1}) ⊆ d(F^{k-r} K^{n-1}).

    On failure returns a witness x with dx in m^k but dx not in d(m^(k-r)),
    certified by a left-kernel functional on the boundary span. Verified for
    all spots and all levels k <= kmax against jets through ``cutoff``.
    """
    if r < 0:
        raise FilteredComplexError("criterion parameter r must be >= 0")
    require_valid_complex(K)
    if kmax is None:
        kmax = max(K.precision - 1, 1)
    D = cutoff if cutoff is not None else K.precision
    _require_precision(K, D, "criterion check")
    if kmax > D:
        raise WindowError(f"criterion level window k <= {kmax} exceeds the "
                          f"jet cutoff {D}")
    for n in K.spots:
        if K.rank(n) == 0 or K.rank(n - 1) == 0:
            continue
        for k in range(1, kmax + 1):
            # The boundary space d(F^{k-r}) cap m^k sits inside
            # m^k cap d(K) by construction, so the containment holds iff the
            # two spaces have equal dimension; each dimension is a
            # difference of two cached submatrix ranks.
            c = max(k - r, 0)
            xdeg = _degree_range(K, 0, D)
            ydeg = _degree_range(K, c, D)
            dim_x = (_cached_rank(K, n - 1, xdeg, xdeg)
                     - _cached_rank(K, n - 1, xdeg, _degree_range(K, 0, k - 1)))
            dim_y = (_cached_rank(K, n - 1, ydeg, ydeg)
                     - _cached_rank(K, n - 1, ydeg, _degree_range(K, c, k - 1)))
            if dim_x != dim_y:
                witness = _criterion_witness(K, n, k, r, D)
                return CriterionReport(False, r, kmax, witness)
    return CriterionReport(True, r, kmax)


def _criterion_witness(K, n, k, r, D):
    """Deterministic witness at a failing (spot, level): the first cycle-
    image basis vector outside the boundary span."""
    field = K.field
    xdeg = _degree_range(K, 0, D)
    tail_rows = _degree_range(K, k, D)
    con = K.jet_map(n - 1, xdeg, _degree_range(K, 0, k - 1))
    tail = K.jet_map(n - 1, xdeg, tail_rows)
    c = max(k - r, 0)
    ydeg = _degree_range(K, c, D)
    ycon = K.jet_map(n - 1, ydeg, _degree_range(K, c, k - 1))
    ytail = K.jet_map(n - 1, ydeg, tail_rows)
    yimgs = [ytail.apply(y) for y in mat_kernel_basis(ycon)]
    span = Matrix.from_columns(field, tail.nrows, yimgs) \
        if yimgs else Matrix.zero(field, tail.nrows, 0)
    for x in mat_kernel_basis(con):
        w = tail.apply(x)
        res = solve_in_image(span, w)
        if not res.in_image:
            xpoly = _jet_to_polyvec(K, n - 1, xdeg, x)
            dxpoly = pmat_apply(field, K.diff(n - 1), xpoly, K.precision)
            return CriterionWitness(n, k, xpoly, dxpoly, res.witness)
    raise FilteredComplexError(
        "internal: dimension test failed but no witness found")


def _jet_to_polyvec(K, n, degrees, flat):
    """Flat jet coordinates -> vector of polynomials in K^n."""
    field = K.field
    out = [{} for _ in range(K.rank(n))]
    pos = 0
    for d in degrees:
        monos = sym_monomials(K.nvars, d)
        for mono in monos:
            for coord in range(K.rank(n)):
                x = flat[pos]
                if x != field.zero:
                    out[coord][mono] = x
                pos += 1
    return out


# ---------------------------------------------------------------------------
# The E_1 page as a linear complex over S

@dataclass
class E1BridgeReport:
    ok: bool
    dims_match: bool
    squares_match: bool
    details: list
    pmax: int

    def __str__(self):
        if self.ok:
            return (f"total E_1 complex is isomorphic to the linearization "
                    f"of the induced module (checked through p = {self.pmax})")
        return "E_1 bridge failed:\n" + "\n".join(f"  - {d}" for d in self.details)


def e1_total_complex(K: FilteredFreeComplex, pmax: int | None = None,
                     top_degree: int | None = None):
    """Totalize (E_1, d_1) into a linear S-complex and verify it is
    isomorphic to the linearization of the induced module.

    The isomorphism maps a page class with jet representative x to the sum
    over degree-p monomials of (monomial) tensor (homology class of the
    monomial's coefficient vector); commuting squares are checked through
    column pmax.
    """
    require_valid_complex(K)
    if pmax is None:
        pmax = min(3, K.precision - 1)
    page = compute_page(K, 1, pmax, with_differentials=True)
    red = reduce_mod_m(K)
    module = induce_emodule(K, top_degree)
    details = []
    dims_ok = True

    phi = {}
    for n in range(K.n_lo, K.n_hi + 1):
        sq = red.subquotients[n]
        for p in range(0, pmax + 1):
            ent = page.entries[(p, n - p)]
            want = sq.dim * len(sym_monomials(K.nvars, p))
            if ent.dim != want:
                dims_ok = False
                details.append(
                    f"dim E_1^{p},{n - p} = {ent.dim}, expected "
                    f"h^{n} * dim Sym^{p} = {want}")
                continue
            cols = []
            for rep in ent.reps:
                block = rep[p]
                coords = []
                rn = K.rank(n)
                for mi in range(len(sym_monomials(K.nvars, p))):
                    vec = block[mi * rn:(mi + 1) * rn]
                    coords.extend(sq.coords(vec))
                cols.append(coords)
            phi[(p, n)] = Matrix.from_columns(K.field, want, cols)
            if cols and Matrix.from_columns(K.field, want, cols).ncols:
                from .linalg import mat_rank
                if mat_rank(phi[(p, n)]) != ent.dim:
                    dims_ok = False
                    details.append(f"comparison map not injective at "
                                   f"(p={p}, n={n})")

    if not module.is_zero:
        L = build_bgg(module)
    else:
        ctx_q = K.nvars
        from .emodule import ExteriorContext
        L = LinearSComplex(ExteriorContext(ctx_q, K.field),
                           [Spot(0, 0)], [])
    squares_ok = True
    if not module.is_zero:
        for n in range(K.n_lo, K.n_hi):
            s = n - K.n_lo
            if s + 1 >= L.nspots:
                break
            for p in range(0, pmax):
                src = page.entries[(p, n - p)]
                if src.dim == 0:
                    continue
                d1 = page.diffs.get((p, n - p))
                if d1 is None:
                    continue
                lhs = phi[(p + 1, n + 1)] * d1
                strand = L.strand_matrix(s, p)
                rhs = strand * phi[(p, n)]
                if lhs != rhs:
                    squares_ok = False
                    details.append(f"square at (p={p}, n={n}) does not "
                                   f"commute")

    # assemble the totalized complex itself from the page-1 data
    spots = [Spot(red.homology_dims[n], n - K.n_lo)
             for n in range(K.n_lo, K.n_hi + 1)]
    diffs = []
    for n in range(K.n_lo, K.n_hi):
        fam = {}
        src = red.subquotients[n]
        tgt = red.subquotients[n + 1]
        if src.dim and tgt.dim:
            d1 = page.diffs.get((0, n))
            if d1 is not None:
                img = phi[(1, n + 1)] * d1
                # split rows by the degree-1 monomial (= variable) blocks
                for a in range(1, K.nvars + 1):
                    mono = tuple(1 if i == a - 1 else 0
                                 for i in range(K.nvars))
                    mi = sym_monomials(K.nvars, 1).index(mono)
                    rows = img.data[mi * tgt.dim:(mi + 1) * tgt.dim]
                    fam[a] = Matrix(K.field, tgt.dim, src.dim,
                                    [list(r) for r in rows], check=False)
        diffs.append(fam)
    total = LinearSComplex(_context_for(K), spots, diffs)
    ok = dims_ok and squares_ok
    return total, E1BridgeReport(ok, dims_ok, squares_ok, details, pmax)


def _context_for(K):
    from .emodule import ExteriorContext
    return ExteriorContext(K.nvars, K.field)


# ---------------------------------------------------------------------------
# Vanishing prediction

@dataclass
class VanishingReport:
    certified: list      # spots with H^n(K) = 0 certified via BGG exactness
    predicted: dict      # spot -> bool (BGG-route exactness through T)
    direct_zero: dict    # spot -> bool (truncated H^n(K) check)
    T: int
    discrepancies: list

    def __str__(self):
        lines = [f"spots with certified vanishing (through degree {self.T}): "
                 f"{self.certified or 'none'}"]
        for n in sorted(self.predicted):
            lines.append(f"  H^{n}: bgg-exact={self.predicted[n]} "
                         f"direct-truncated-zero={self.direct_zero.get(n)}")
        if self.discrepancies:
            lines.append("DISCREPANCIES (window too small?): "
                         + ", ".join(map(str, self.discrepancies)))
        return "\n".join(lines)


def truncated_cohomology_zero(K: FilteredFreeComplex, n: int,
                              pmax: int) -> bool:
    """Whether the truncated limit page vanishes at total degree n for
    columns p <= pmax (sound: graded pieces of H^n(K) would show up here)."""
    for p in range(0, pmax + 1):
        if page_dim(K, K.precision + 1 - p, p, n - p):
            return False
    return True


def predict_vanishing(K: FilteredFreeComplex, T: int) -> VanishingReport:
    """Spots n whose H^n(K) vanishes because the linearized complex is exact
    at the term carrying H^n(K (x) k), certified through degree T.

    The certified set comes from the exactness route alone; the direct
    truncated computation of H^n(K) rides along as a cross-check field.
    """
    require_valid_complex(K)
    module = induce_emodule(K)
    predicted = {}
    direct = {}
    if module.is_zero:
        for n in K.spots:
            predicted[n] = True
    else:
        L = build_bgg(module)
        for n in K.spots:
            s = n - K.n_lo
            dims = homology_dims(L, s, max(T, L.spots[s].degree))
            predicted[n] = all(d == 0 for d in dims.values())
    p_direct = min(T, K.precision // 2)
    for n in K.spots:
        direct[n] = truncated_cohomology_zero(K, n, p_direct)
    certified = [n for n, ok in predicted.items() if ok]
    discrepancies = [n for n in certified if not direct.get(n, True)]
    return VanishingReport(certified, predicted, direct, T, discrepancies)


# ---------------------------------------------------------------------------
# Functoriality: chain maps on pages, homotopies, sums

@dataclass
class PageMapReport:
    r: int
    pmax: int
    matrices: dict      # (p, q) -> Matrix E_r(K) -> E_r(L)
    all_zero: bool

    def __str__(self):
        kind = "zero" if self.all_zero else "nonzero"
        return (f"induced map on E_{self.r} (p <= {self.pmax}) is {kind}")


def map_on_pages(f: ChainMap, r: int, pmax: int) -> PageMapReport:
    """Induced maps E_r(K) -> E_r(L) on the chosen page bases."""
    K, L = f.source, f.target
    _require_precision(K, pmax + r - 1, f"page map at r = {r}")
    matrices = {}
    all_zero = True
    for n in range(min(K.n_lo, L.n_lo), max(K.n_hi, L.n_hi) + 1):
        for p in range(0, pmax + 1):
            q = n - p
            src = page_entry(K, r, p, q)
            if src.dim == 0:
                continue
            tgt = page_entry(L, r, p, q)
            cols = []
            for rep in src.reps:
                img_head = _apply_polymat_to_rep(f, n, rep, p)
                try:
                    cols.append(tgt.subquotient.coords(img_head))
                except ValueError:
                    raise FilteredComplexError(
                        "internal: chain-map image left the page span"
                    ) from None
            m = Matrix.from_columns(K.field, tgt.dim, cols)
            matrices[(p, q)] = m
            if not m.is_zero():
                all_zero = False
    return PageMapReport(r, pmax, matrices, all_zero)


def _apply_polymat_to_rep(f: ChainMap, n, rep, head_degree):
    """Degree-head block of f(x) for a jet representative x of K^n."""
    K, L = f.source, f.target
    field = K.field
    mat = f.component(n)
    monos_out = sym_monomials(K.nvars, head_degree)
    out_idx = {m: i for i, m in enumerate(monos_out)}
    rl = L.rank(n)
    out = [field.zero] * (len(monos_out) * rl)
    for d, block in rep.items():
        rho = head_degree - d
        if rho < 0:
            continue
        monos_in = sym_monomials(K.nvars, d)
        rk = K.rank(n)
        for i in range(rl):
            for j in range(rk):
                part = homog_part(mat[i][j], rho)
                for nu, coeff in part.items():
                    for mi, mu in enumerate(monos_in):
                        x = block[mi * rk + j]
                        if x == field.zero:
                            continue
                        ti = out_idx[mono_mul(nu, mu)]
                        pos = ti * rl + i
                        out[pos] = field.add(out[pos], field.mul(coeff, x))
    return out


@dataclass
class NullHomotopyReport:
    is_null_homotopic: bool
    pages_zero: bool
    r_checked: list
    details: list

    @property
    def ok(self):
        return self.is_null_homotopic and self.pages_zero

    def __str__(self):
        if self.ok:
            return ("map equals d∘s + s∘d; induced page maps vanish on "
                    f"pages {self.r_checked}")
        return "null-homotopy check failed:\n" + \
            "\n".join(f"  - {d}" for d in self.details)


def is_null_homotopic_action(f: ChainMap, s: Homotopy, pmax: int = 3,
                             rmax: int = 3) -> NullHomotopyReport:
    """Verify h = d∘s + s∘d equals f (mod precision) and that the induced
    maps on pages r >= 1 vanish within the window."""
    K = f.source
    field = K.field
    details = []
    null_ok = True
    spots = sorted(set(K.spots) | set(f.target.spots))
    for n in spots:
        expr = s.boundary_expression(n)
        want = f.component(n)
        delta = pmat_add(field, expr,
                         [[{m: field.neg(c) for m, c in e.items()}
                           for e in row] for row in want])
        if not pmat_is_zero(delta):
            null_ok = False
            details.append(f"d∘s + s∘d != f at spot {n}")
    pages_zero = True
    r_checked = []
    for r in range(1, rmax + 1):
        if pmax + r - 1 > K.precision:
            break
        rep = map_on_pages(f, r, pmax)
        r_checked.append(r)
        if not rep.all_zero:
            pages_zero = False
            details.append(f"induced map nonzero on page {r}")
    return NullHomotopyReport(null_ok, pages_zero, r_checked, details)


@dataclass
class SumReport:
    total: FilteredFreeComplex
    additivity_ok: bool
    details: list

    def __str__(self):
        if self.additivity_ok:
            return "pages of the sum equal the entrywise sums of pages"
        return "page additivity failed:\n" + \
            "\n".join(f"  - {d}" for d in self.details)


def sum_with_page_check(complexes, r: int = 1, pmax: int = 2) -> SumReport:
    """Direct sum plus the pagewise-additivity verification."""
    total = sum_complexes(complexes)
    details = []
    ok = True
    _require_precision(total, pmax + r - 1, "page additivity check")
    for n in range(total.n_lo, total.n_hi + 1):
        for p in range(0, pmax + 1):
            q = n - p
            want = sum(page_dim(Ki, r, p, q) for Ki in complexes)
            got = page_dim(total, r, p, q)
            if want != got:
                ok = False
                details.append(
                    f"dim E_{r}^({p},{q}) of sum = {got}, summands give {want}")
    return SumReport(total, ok, details)
