"""Randomized valid filtered complexes for the acceptance sweeps.

d^2 = 0 holds exactly by construction: two-spot complexes are vacuously
complexes, tensor products and direct sums of complexes are complexes, and
unit-triangular conjugation preserves the identity. Homogeneity of entries
is controlled so both the degeneration theorem's family (homogeneous of
degree r) and mixed-degree families can be drawn.
"""

from random import Random

from bggbench.jets import (
    pmat_add,
    pmat_mul,
    pmat_zero,
    poly_add,
    poly_scale,
)
from bggbench.linalg import sym_monomials
from bggbench.rcomplex import ChainMap, FilteredFreeComplex, Homotopy, sum_complexes


def random_poly(rng: Random, field, e, degrees, max_terms=3):
    """Random polynomial with monomial degrees drawn from ``degrees``."""
    out = {}
    for _ in range(rng.randint(1, max_terms)):
        d = rng.choice(degrees)
        monos = sym_monomials(e, d)
        if not monos:
            continue
        mono = rng.choice(monos)
        c = field.from_int(rng.randint(-2, 2))
        if c == field.zero:
            continue
        out = poly_add(field, out, {mono: c})
    return out


def random_two_spot(rng: Random, field, e, N, entry_degrees,
                    max_rank=2, spot0=0):
    """A two-spot complex with random entries (d^2 vacuous)."""
    r0 = rng.randint(1, max_rank)
    r1 = rng.randint(1, max_rank)
    d = [[random_poly(rng, field, e, entry_degrees) for _ in range(r0)]
         for _ in range(r1)]
    return FilteredFreeComplex(field, e, N,
                               {spot0: r0, spot0 + 1: r1}, {spot0: d})


def tensor_complex(A: FilteredFreeComplex, B: FilteredFreeComplex):
    """(A (x) B)^n = sum over i+j=n, with the Koszul sign on the B-side."""
    field = A.field
    e, N = A.nvars, A.precision
    lo = A.n_lo + B.n_lo
    hi = A.n_hi + B.n_hi

    def pairs(n):
        return [(i, n - i) for i in range(A.n_lo, A.n_hi + 1)
                if B.n_lo <= n - i <= B.n_hi
                and A.rank(i) and B.rank(n - i)]

    ranks = {n: sum(A.rank(i) * B.rank(j) for i, j in pairs(n))
             for n in range(lo, hi + 1)}
    diffs = {}
    for n in range(lo, hi):
        rows = ranks.get(n + 1, 0)
        cols = ranks.get(n, 0)
        if rows == 0 or cols == 0:
            continue
        block = pmat_zero(rows, cols)
        src_pairs = pairs(n)
        dst_pairs = pairs(n + 1)

        def offset(plist, key, ra, rb):
            off = 0
            for i, j in plist:
                if (i, j) == key:
                    return off
                off += ra(i) * rb(j)
            return None

        for (i, j) in src_pairs:
            c0 = offset(src_pairs, (i, j), A.rank, B.rank)
            # d_A (x) id: (i, j) -> (i+1, j)
            if (i + 1, j) in dst_pairs:
                r0 = offset(dst_pairs, (i + 1, j), A.rank, B.rank)
                dA = A.diff(i)
                for ai in range(A.rank(i + 1)):
                    for aj in range(A.rank(i)):
                        p = dA[ai][aj]
                        if not p:
                            continue
                        for b in range(B.rank(j)):
                            block[r0 + ai * B.rank(j) + b][
                                c0 + aj * B.rank(j) + b] = dict(p)
            # (-1)^i id (x) d_B: (i, j) -> (i, j+1)
            if (i, j + 1) in dst_pairs:
                r0 = offset(dst_pairs, (i, j + 1), A.rank, B.rank)
                sign = field.one if i % 2 == 0 else field.neg(field.one)
                dB = B.diff(j)
                for bi in range(B.rank(j + 1)):
                    for bj in range(B.rank(j)):
                        p = dB[bi][bj]
                        if not p:
                            continue
                        for a in range(A.rank(i)):
                            cur = block[r0 + a * B.rank(j + 1) + bi][
                                c0 + a * B.rank(j) + bj]
                            block[r0 + a * B.rank(j + 1) + bi][
                                c0 + a * B.rank(j) + bj] = poly_add(
                                field, cur, poly_scale(field, sign, p))
        diffs[n] = block
    return FilteredFreeComplex(field, e, N, ranks, diffs)


def random_complex(rng: Random, field, N, r_hom=None, e=None,
                   max_rank=4, max_spots=4):
    """Random valid complex: a two-spot, a tensor of two-spots, or a sum.

    With ``r_hom`` set, every differential entry is homogeneous of that
    degree (the degeneration theorem's hypothesis); otherwise entry degrees
    mix 0..2.
    """
    e = e if e is not None else rng.randint(1, 3)
    degrees = [r_hom] if r_hom is not None else [0, 1, 2]
    kind = rng.choice(["two", "tensor", "sum"])
    if kind == "two":
        k = random_two_spot(rng, field, e, N, degrees,
                            max_rank=min(max_rank, 3),
                            spot0=rng.randint(0, 1))
    elif kind == "tensor":
        # middle rank of a tensor is a0*b1 + a1*b0, so cap the factors
        a = random_two_spot(rng, field, e, N, degrees,
                            max_rank=max(1, max_rank // 2))
        b = random_two_spot(rng, field, e, N, degrees, max_rank=1,
                            spot0=rng.randint(0, 1))
        k = tensor_complex(a, b)
    else:
        a = random_two_spot(rng, field, e, N, degrees,
                            max_rank=max(1, max_rank // 2))
        b = random_two_spot(rng, field, e, N, degrees,
                            max_rank=max(1, max_rank // 2),
                            spot0=rng.randint(0, 1))
        k = sum_complexes([a, b])
    assert k.n_hi - k.n_lo + 1 <= max_spots
    assert all(k.rank(n) <= max_rank for n in k.spots)
    return k


# -- chain maps and homotopy equivalences --------------------------------------

def random_pmat(rng: Random, field, e, rows, cols, degrees=(0, 1)):
    return [[random_poly(rng, field, e, list(degrees), max_terms=2)
             for _ in range(cols)] for _ in range(rows)]


def random_null_homotopic_map(rng: Random, K: FilteredFreeComplex):
    """f := d o s + s o d for a random s; returns (f, s)."""
    field = K.field
    smaps = {}
    for n in K.spots:
        if K.rank(n) and K.rank(n - 1):
            smaps[n] = random_pmat(rng, field, K.nvars,
                                   K.rank(n - 1), K.rank(n))
    s = Homotopy(K, K, smaps)
    fmaps = {n: s.boundary_expression(n) for n in K.spots}
    f = ChainMap(K, K, fmaps)
    return f, s


def unit_triangular_automorphism(rng: Random, K: FilteredFreeComplex):
    """Random unit (I + nilpotent-order) polynomial matrices per spot, with
    inverses computed by the truncated geometric series."""
    field = K.field
    e, N = K.nvars, K.precision
    U, Uinv = {}, {}
    for n in K.spots:
        r = K.rank(n)
        a = [[random_poly(rng, field, e, [1, 2], max_terms=1)
              if i != j else {} for j in range(r)] for i in range(r)]
        ident = [[({(0,) * e: field.one} if i == j else {})
                  for j in range(r)] for i in range(r)]
        u = pmat_add(field, ident, a)
        # inverse of I + a: alternating geometric series; a has entries in m,
        # so powers beyond N vanish
        inv = [[dict(x) for x in row] for row in ident]
        power = a
        sign = -1
        for _ in range(N):
            term = [[poly_scale(field, field.from_int(sign), x)
                     for x in row] for row in power]
            inv = pmat_add(field, inv, term)
            power = pmat_mul(field, power, a, N)
            if all(not x for row in power for x in row):
                break
            sign = -sign
        U[n] = u
        Uinv[n] = inv
    return U, Uinv


def conjugated_complex(K: FilteredFreeComplex, U, Uinv):
    """The complex with differential U d U^{-1} (isomorphic to K)."""
    field = K.field
    N = K.precision
    diffs = {}
    for n in K.spots:
        if K.rank(n) and K.rank(n + 1):
            m = pmat_mul(field, U[n + 1],
                         pmat_mul(field, K.diff(n), Uinv[n], N), N)
            diffs[n] = m
    return FilteredFreeComplex(K.field, K.nvars, N, dict(K.ranks), diffs)


def contractible_two_spot(field, e, N, spot0, rank=1):
    """R^rank --identity--> R^rank: contractible, s = identity contracts."""
    ident = [[({(0,) * e: field.one} if i == j else {})
              for j in range(rank)] for i in range(rank)]
    return FilteredFreeComplex(field, e, N,
                               {spot0: rank, spot0 + 1: rank}, {spot0: ident})


def random_homotopy_equivalence(rng: Random, K: FilteredFreeComplex):
    """(f, g, s_fg, s_gf) with f g - id and g f - id null-homotopic.

    L is a unit-triangular conjugate of K (+) C for a contractible C; f and g
    are the conjugated inclusion and projection. g f = id exactly; f g - id
    is contracted by the conjugated contraction of C.
    """
    field = K.field
    e, N = K.nvars, K.precision
    spot0 = rng.choice(K.spots[:-1]) if len(K.spots) > 1 else K.n_lo
    C = contractible_two_spot(field, e, N, spot0)
    KC = sum_complexes([K, C])
    U, Uinv = unit_triangular_automorphism(rng, KC)
    L = conjugated_complex(KC, U, Uinv)
    fmaps, gmaps = {}, {}
    for n in L.spots:
        rk, rc = K.rank(n), C.rank(n)
        if rk + rc == 0:
            continue
        incl = pmat_zero(rk + rc, rk)
        proj = pmat_zero(rk, rk + rc)
        for i in range(rk):
            incl[i][i] = {(0,) * e: field.one}
            proj[i][i] = {(0,) * e: field.one}
        fmaps[n] = pmat_mul(field, U[n], incl, N)
        gmaps[n] = pmat_mul(field, proj, Uinv[n], N)
    f = ChainMap(K, L, fmaps)
    g = ChainMap(L, K, gmaps)
    # null homotopy for f o g - id_L: conjugate of -(contraction of C)
    smaps = {}
    for n in L.spots:
        rk, rc = K.rank(n), C.rank(n)
        rk1, rc1 = K.rank(n - 1), C.rank(n - 1)
        if (rk + rc) == 0 or (rk1 + rc1) == 0:
            continue
        block = pmat_zero(rk1 + rc1, rk + rc)
        if rc and rc1 and n == spot0 + 1:
            for i in range(rc):
                block[rk1 + i][rk + i] = {(0,) * e: field.neg(field.one)}
        smaps[n] = pmat_mul(field, U[n - 1],
                            pmat_mul(field, block, Uinv[n], N), N)
    s_fg = Homotopy(L, L, smaps)
    s_gf = Homotopy(K, K, {})  # g f = id exactly
    return f, g, s_fg, s_gf
