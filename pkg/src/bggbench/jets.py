"""Truncated multivariate polynomial arithmetic (jets in a power-series ring).

A polynomial is a dict from exponent tuples to nonzero scalars. Elements of
R = k[[t_1..t_e]] are represented by their jets modulo m^(N+1); every
operation that could exceed the precision truncates explicitly.

Canonical term order for formatting: descending total degree, then
descending lexicographic on exponent tuples ("3/2*t1^2*t2 - t3").
"""

from __future__ import annotations

import re

from .fields import FieldError


def poly_zero():
    return {}


def poly_const(field, c, nvars):
    c = field.check(c)
    if c == field.zero:
        return {}
    return {(0,) * nvars: c}


def poly_var(field, i, nvars):
    mono = tuple(1 if k == i else 0 for k in range(nvars))
    return {mono: field.one}


def mono_degree(m):
    return sum(m)


def mono_mul(m1, m2):
    return tuple(a + b for a, b in zip(m1, m2))


def poly_add(field, f, g):
    out = dict(f)
    for m, c in g.items():
        s = field.add(out.get(m, field.zero), c)
        if s == field.zero:
            out.pop(m, None)
        else:
            out[m] = s
    return out


def poly_neg(field, f):
    return {m: field.neg(c) for m, c in f.items()}


def poly_sub(field, f, g):
    return poly_add(field, f, poly_neg(field, g))


def poly_scale(field, c, f):
    c = field.check(c)
    if c == field.zero:
        return {}
    return {m: field.mul(c, x) for m, x in f.items()}


def poly_mul(field, f, g, cutoff):
    out = {}
    for m1, c1 in f.items():
        d1 = mono_degree(m1)
        for m2, c2 in g.items():
            if d1 + mono_degree(m2) > cutoff:
                continue
            m = mono_mul(m1, m2)
            s = field.add(out.get(m, field.zero), field.mul(c1, c2))
            if s == field.zero:
                out.pop(m, None)
            else:
                out[m] = s
    return out


def poly_truncate(f, cutoff):
    return {m: c for m, c in f.items() if mono_degree(m) <= cutoff}


def poly_is_zero(f):
    return not f


def poly_degree(f):
    """Maximal total degree; -1 for the zero polynomial."""
    return max((mono_degree(m) for m in f), default=-1)


def poly_order(f):
    """Minimal total degree (the m-adic order); None for zero."""
    return min((mono_degree(m) for m in f), default=None)


def homog_part(f, d):
    return {m: c for m, c in f.items() if mono_degree(m) == d}


def homog_parts(f):
    out = {}
    for m, c in f.items():
        out.setdefault(mono_degree(m), {})[m] = c
    return out


def poly_homogeneous_degree(f):
    """The degree if f is homogeneous and nonzero, else None."""
    degs = {mono_degree(m) for m in f}
    return degs.pop() if len(degs) == 1 else None


# ---------------------------------------------------------------------------
# Formatting and parsing

def _term_key(m):
    return (-mono_degree(m), tuple(-x for x in m))


def poly_format(field, f, single_var=False):
    """Canonical string; variables t1..te (bare "t" when single_var)."""
    if not f:
        return "0"
    parts = []
    for m in sorted(f, key=_term_key):
        c = f[m]
        factors = []
        for i, exp in enumerate(m):
            if exp == 0:
                continue
            name = "t" if single_var else f"t{i + 1}"
            factors.append(name if exp == 1 else f"{name}^{exp}")
        cs = field.format(c)
        if factors and cs == "1":
            term = "*".join(factors)
        elif factors and cs == "-1":
            term = "-" + "*".join(factors)
        elif factors:
            term = cs + "*" + "*".join(factors)
        else:
            term = cs
        parts.append(term)
    out = parts[0]
    for term in parts[1:]:
        if term.startswith("-"):
            out += " - " + term[1:]
        else:
            out += " + " + term
    return out


_VAR_RE = re.compile(r"^t(\d*)(?:\^(\d+))?$")
_NUM_RE = re.compile(r"^\d+(?:/\d+)?$")


class PolyParseError(ValueError):
    pass


def poly_parse(field, s, nvars):
    """Inverse of poly_format; accepts "t" for the single variable if e=1."""
    text = s.strip()
    if not text:
        raise PolyParseError("empty polynomial string")
    # split into signed terms at top level
    terms = []
    sign = 1
    buf = ""
    for ch in text:
        if ch in "+-" and buf.strip():
            terms.append((sign, buf.strip()))
            sign = -1 if ch == "-" else 1
            buf = ""
        elif ch == "-" and not buf.strip():
            sign = -sign
        elif ch == "+" and not buf.strip():
            pass
        else:
            buf += ch
    if buf.strip():
        terms.append((sign, buf.strip()))
    if not terms:
        raise PolyParseError(f"cannot parse polynomial {s!r}")
    out = {}
    for sg, term in terms:
        coeff = field.one
        expo = [0] * nvars
        for factor in (p.strip() for p in term.split("*")):
            if not factor:
                raise PolyParseError(f"empty factor in {term!r}")
            vm = _VAR_RE.match(factor)
            if vm:
                idx_s, pow_s = vm.groups()
                if idx_s == "":
                    if nvars != 1:
                        raise PolyParseError(
                            f"bare variable 't' needs a single-variable ring "
                            f"(got {nvars} variables)")
                    idx = 0
                else:
                    idx = int(idx_s) - 1
                if not 0 <= idx < nvars:
                    raise PolyParseError(
                        f"variable t{idx + 1} out of range 1..{nvars}")
                expo[idx] += int(pow_s) if pow_s else 1
            elif _NUM_RE.match(factor):
                try:
                    coeff = field.mul(coeff, field.parse(factor))
                except FieldError as err:
                    raise PolyParseError(str(err)) from None
            else:
                raise PolyParseError(f"bad factor {factor!r} in {s!r}")
        if sg < 0:
            coeff = field.neg(coeff)
        mono = tuple(expo)
        acc = field.add(out.get(mono, field.zero), coeff)
        if acc == field.zero:
            out.pop(mono, None)
        else:
            out[mono] = acc
    return out


# ---------------------------------------------------------------------------
# Polynomial matrices (lists of rows of Poly)

def pmat_zero(nrows, ncols):
    return [[{} for _ in range(ncols)] for _ in range(nrows)]


def pmat_shape(m):
    return len(m), len(m[0]) if m else 0


def pmat_is_zero(m):
    return all(not e for row in m for e in row)


def pmat_add(field, a, b):
    return [[poly_add(field, x, y) for x, y in zip(r1, r2)]
            for r1, r2 in zip(a, b)]


def pmat_neg(field, a):
    return [[poly_neg(field, x) for x in row] for row in a]


def pmat_mul(field, a, b, cutoff):
    n = len(a)
    k = len(b)
    m = len(b[0]) if b else 0
    out = pmat_zero(n, m)
    for i in range(n):
        for l in range(k):
            f = a[i][l]
            if not f:
                continue
            for j in range(m):
                g = b[l][j]
                if not g:
                    continue
                out[i][j] = poly_add(field, out[i][j],
                                     poly_mul(field, f, g, cutoff))
    return out


def pmat_truncate(m, cutoff):
    return [[poly_truncate(e, cutoff) for e in row] for row in m]


def pmat_apply(field, a, vec, cutoff):
    """Apply a polynomial matrix to a vector of polynomials."""
    out = []
    for row in a:
        acc = {}
        for e, v in zip(row, vec):
            if e and v:
                acc = poly_add(field, acc, poly_mul(field, e, v, cutoff))
        out.append(acc)
    return out
