"""Independent brute-force syzygy oracle over the exterior algebra.

Self-contained: its own sign convention (bubble-sort parity of concatenated
index lists), its own free-module bookkeeping, and sympy for all elimination.
Used to freeze expected Betti values before trusting the main path.
"""

from itertools import combinations

import sympy


def mono_product(u, t):
    """e_u * e_t as (sign, sorted tuple), or (0, None) on a repeated index."""
    if set(u) & set(t):
        return 0, None
    seq = list(u) + list(t)
    sign = 1
    # bubble sort, counting swaps
    for i in range(len(seq)):
        for j in range(len(seq) - 1 - i):
            if seq[j] > seq[j + 1]:
                seq[j], seq[j + 1] = seq[j + 1], seq[j]
                sign = -sign
    return sign, tuple(seq)


class OracleFree:
    """Free module over Lambda(k^q) on generators with given degrees."""

    def __init__(self, q, gen_degrees):
        self.q = q
        self.gen_degrees = list(gen_degrees)
        self.basis = {}
        for g, d in enumerate(self.gen_degrees):
            for k in range(q + 1):
                for s in combinations(range(q), k):
                    self.basis.setdefault(d - k, []).append((g, s))
        self.pos = {deg: {b: i for i, b in enumerate(items)}
                    for deg, items in self.basis.items()}

    def dim(self, deg):
        return len(self.basis.get(deg, []))


def map_matrix(src: OracleFree, dst: OracleFree, entries, deg):
    """Degree-deg matrix of a map given by E-element entries.

    entries[(i, j)] = dict subset -> coeff sends src generator j to a
    combination of dst generator i multiplied by monomials.
    """
    rows = dst.dim(deg)
    cols = src.dim(deg)
    m = sympy.zeros(rows, cols)
    for c, (j, t) in enumerate(src.basis.get(deg, [])):
        for (i, jj), elem in entries.items():
            if jj != j:
                continue
            for u, coeff in elem.items():
                sign, prod = mono_product(u, t)
                if sign == 0:
                    continue
                r = dst.pos[deg].get((i, prod))
                if r is None:
                    continue
                m[r, c] += sign * coeff
    return m


def syzygy_betti(q, i_max):
    """b_{i,t} = dim Tor_i(k, k)_t over Lambda(k^q), brute force."""
    # step 0: k presented by F0 = E (one generator, degree 0)
    betti = {(0, 0): 1}
    current = OracleFree(q, [0])
    # kernel of the augmentation F0 -> k: everything below degree 0
    kernel_vectors = {}
    for deg, items in current.basis.items():
        if deg == 0:
            continue
        kernel_vectors[deg] = [sympy.eye(len(items))[:, c]
                               for c in range(len(items))]
    for i in range(1, i_max + 1):
        # minimal generators of the kernel: complement of V . kernel
        gen_degrees = []
        gen_vectors = []
        for deg in sorted(kernel_vectors, reverse=True):
            vecs = kernel_vectors[deg]
            if not vecs:
                continue
            higher = kernel_vectors.get(deg + 1, [])
            span_cols = []
            for a in range(q):
                for v in higher:
                    span_cols.append(act_on_free(current, a, deg + 1, v))
            img = (sympy.Matrix.hstack(*span_cols)
                   if span_cols else sympy.zeros(current.dim(deg), 0))
            chosen = []
            acc = img
            for v in vecs:
                cand = sympy.Matrix.hstack(acc, v)
                if cand.rank() > acc.rank():
                    chosen.append(v)
                    acc = cand
            for v in chosen:
                gen_degrees.append(deg)
                gen_vectors.append((deg, v))
        for d in gen_degrees:
            betti[(i, d)] = betti.get((i, d), 0) + 1
        if not gen_degrees:
            break
        # next free module and its map to `current`
        nxt = OracleFree(q, gen_degrees)
        entries = {}
        for j, (deg, v) in enumerate(gen_vectors):
            elem = {}
            for r, (g, s) in enumerate(current.basis[deg]):
                if v[r] != 0:
                    # v lives in the span of basis elements (g, s); express
                    # the map entry as an E-element applied to generator g
                    elem.setdefault((g, s), v[r])
            for (g, s), coeff in elem.items():
                entries.setdefault((g, j), {})[s] = \
                    entries.get((g, j), {}).get(s, 0) + coeff
        kernel_vectors = {}
        for deg in sorted(nxt.basis):
            m = map_matrix(nxt, current, entries, deg)
            kernel_vectors[deg] = [sympy.Matrix(v) for v in m.nullspace()]
        current = nxt
    return betti


def act_on_free(free: OracleFree, a, deg, vec):
    """Multiplication by e_a from degree deg to deg-1 on a column vector."""
    out = sympy.zeros(free.dim(deg - 1), 1)
    for r, (g, s) in enumerate(free.basis[deg]):
        x = vec[r]
        if x == 0:
            continue
        sign, prod = mono_product((a,), s)
        if sign == 0:
            continue
        out[free.pos[deg - 1][(g, prod)]] += sign * x
    return out
