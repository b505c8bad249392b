"""Workbench file format: JSON documents carrying modules and complexes.

Three schemas: "emodule/1" (graded exterior modules), "scomplex/1" (linear
complexes over the symmetric algebra), "rcomplex/1" (filtered free complexes
over the power-series ring). Serialization is canonical: sorted keys,
scalars in lowest terms, polynomial terms in descending graded-lex order,
so round-trips are byte-exact.
"""

from __future__ import annotations

import json

from .bgg import LinearSComplex, Spot
from .emodule import ExteriorContext, GradedEModule, validate_module
from .fields import FieldError, field_from_tag
from .jets import PolyParseError, poly_format, poly_parse
from .linalg import Matrix
from .rcomplex import FilteredFreeComplex, validate_complex


class WFileError(ValueError):
    """Malformed workbench file: syntax, schema, or shape problems."""


class WFileInvariantError(WFileError):
    """Structurally well-formed but mathematically invalid content."""


SCHEMAS = ("emodule/1", "scomplex/1", "rcomplex/1")


def serialize(obj) -> str:
    """Canonical JSON text for a module or complex."""
    if isinstance(obj, GradedEModule):
        doc = _emodule_doc(obj)
    elif isinstance(obj, LinearSComplex):
        doc = _scomplex_doc(obj)
    elif isinstance(obj, FilteredFreeComplex):
        doc = _rcomplex_doc(obj)
    else:
        raise WFileError(f"cannot serialize {type(obj).__name__}")
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def save_file(obj, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(serialize(obj))


def parse_file(path, validate=True):
    with open(path, "r", encoding="utf-8") as fh:
        return parse_text(fh.read(), validate=validate, name=str(path))


def parse_text(text, validate=True, name="<string>"):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise WFileError(
            f"{name}: JSON syntax error at line {e.lineno}, "
            f"column {e.colno}: {e.msg}") from None
    if not isinstance(doc, dict):
        raise WFileError(f"{name}: top level must be an object")
    schema = doc.get("schema")
    if schema not in SCHEMAS:
        raise WFileError(
            f"{name}: unknown schema {schema!r}; supported: {SCHEMAS}")
    try:
        field = field_from_tag(doc.get("field", ""))
    except FieldError as e:
        raise WFileError(f"{name}: {e}") from None
    if schema == "emodule/1":
        obj = _parse_emodule(doc, field, name)
        if validate:
            rep = validate_module(obj)
            if not rep.ok:
                raise WFileInvariantError(f"{name}: {rep}")
        return obj
    if schema == "scomplex/1":
        return _parse_scomplex(doc, field, name)
    obj = _parse_rcomplex(doc, field, name)
    if validate:
        rep = validate_complex(obj)
        if not rep.ok:
            raise WFileInvariantError(f"{name}: {rep}")
    return obj


# -- emodule -----------------------------------------------------------------

def _emodule_doc(m: GradedEModule):
    field = m.context.field
    action = {}
    for (a, j), mat in sorted(m.action.items()):
        if mat.is_zero():
            continue
        action.setdefault(str(a), {})[str(j)] = \
            [[field.format(x) for x in row] for row in mat.data]
    return {
        "schema": "emodule/1",
        "field": field.tag,
        "q": m.context.q,
        "components": {str(j): d for j, d in sorted(m.components.items())},
        "action": action,
    }


def _parse_emodule(doc, field, name):
    try:
        q = int(doc["q"])
        raw_components = doc["components"]
        raw_action = doc.get("action", {})
    except (KeyError, TypeError, ValueError) as e:
        raise WFileError(f"{name}: bad emodule document: {e}") from None
    ctx = ExteriorContext(q, field)
    components = {}
    for k, v in raw_components.items():
        components[_int_key(k, name)] = int(v)
    action = {}
    for a_s, per_degree in raw_action.items():
        a = _int_key(a_s, name)
        for j_s, rows in per_degree.items():
            j = _int_key(j_s, name)
            want_rows = components.get(j - 1, 0)
            want_cols = components.get(j, 0)
            mat = _scalar_matrix(rows, field, name,
                                 f"action e_{a} at degree {j}")
            if (mat.nrows, mat.ncols) != (want_rows, want_cols):
                raise WFileError(
                    f"{name}: action e_{a} at degree {j} has shape "
                    f"{mat.nrows}x{mat.ncols}, components require "
                    f"{want_rows}x{want_cols}")
            action[(a, j)] = mat
    try:
        return GradedEModule(ctx, components, action)
    except ValueError as e:
        raise WFileError(f"{name}: {e}") from None


# -- scomplex ----------------------------------------------------------------

def _scomplex_doc(L: LinearSComplex):
    field = L.context.field
    diffs = []
    for n in range(L.nspots - 1):
        fam = {}
        for a in range(1, L.context.q + 1):
            m = L.coeff(n, a)
            if not m.is_zero():
                fam[str(a)] = [[field.format(x) for x in row]
                               for row in m.data]
        diffs.append(fam)
    return {
        "schema": "scomplex/1",
        "field": field.tag,
        "q": L.context.q,
        "spots": [{"dim": s.dim, "degree": s.degree} for s in L.spots],
        "differentials": diffs,
    }


def _parse_scomplex(doc, field, name):
    try:
        q = int(doc["q"])
        spots = [Spot(int(s["dim"]), int(s["degree"])) for s in doc["spots"]]
        raw = doc.get("differentials", [])
    except (KeyError, TypeError, ValueError) as e:
        raise WFileError(f"{name}: bad scomplex document: {e}") from None
    ctx = ExteriorContext(q, field)
    diffs = []
    for n, fam in enumerate(raw):
        out = {}
        for a_s, rows in fam.items():
            a = _int_key(a_s, name)
            mat = _scalar_matrix(rows, field, name,
                                 f"coefficient x_{a} at spot {n}")
            out[a] = mat
        diffs.append(out)
    try:
        return LinearSComplex(ctx, spots, diffs)
    except ValueError as e:
        raise WFileInvariantError(f"{name}: {e}") from None


# -- rcomplex ----------------------------------------------------------------

def _rcomplex_doc(K: FilteredFreeComplex):
    diffs = {}
    for n in range(K.n_lo, K.n_hi):
        if K.rank(n) and K.rank(n + 1):
            d = K.diff(n)
            diffs[str(n)] = [[poly_format(K.field, e) for e in row]
                             for row in d]
    return {
        "schema": "rcomplex/1",
        "field": K.field.tag,
        "nvars": K.nvars,
        "precision": K.precision,
        "spots": {str(n): K.rank(n) for n in K.spots},
        "differentials": diffs,
    }


def _parse_rcomplex(doc, field, name):
    try:
        nvars = int(doc["nvars"])
        precision = int(doc["precision"])
        raw_spots = doc["spots"]
        raw_diffs = doc.get("differentials", {})
    except (KeyError, TypeError, ValueError) as e:
        raise WFileError(f"{name}: bad rcomplex document: {e}") from None
    ranks = {_int_key(k, name): int(v) for k, v in raw_spots.items()}
    diffs = {}
    for n_s, rows in raw_diffs.items():
        n = _int_key(n_s, name)
        if not isinstance(rows, list) or any(not isinstance(r, list)
                                             for r in rows):
            raise WFileError(f"{name}: differential at spot {n} must be a "
                             f"matrix of polynomial strings")
        try:
            mat = [[poly_parse(field, e, nvars) for e in row] for row in rows]
        except PolyParseError as e:
            raise WFileError(f"{name}: differential at spot {n}: {e}") \
                from None
        want = (ranks.get(n + 1, 0), ranks.get(n, 0))
        shape = (len(mat), len(mat[0]) if mat else 0)
        if shape != want:
            raise WFileError(
                f"{name}: differential at spot {n} has shape "
                f"{shape[0]}x{shape[1]}, spots require {want[0]}x{want[1]}")
        diffs[n] = mat
    try:
        return FilteredFreeComplex(field, nvars, precision, ranks, diffs)
    except ValueError as e:
        raise WFileError(f"{name}: {e}") from None


# -- shared ------------------------------------------------------------------

def _int_key(s, name):
    try:
        return int(s)
    except (TypeError, ValueError):
        raise WFileError(f"{name}: bad integer key {s!r}") from None


def _scalar_matrix(rows, field, name, what):
    if not isinstance(rows, list) or any(not isinstance(r, list)
                                         for r in rows):
        raise WFileError(f"{name}: {what} must be a matrix (list of rows)")
    try:
        data = [[field.parse(x) for x in row] for row in rows]
    except FieldError as e:
        raise WFileError(f"{name}: {what}: {e}") from None
    ncols = len(data[0]) if data else 0
    if any(len(r) != ncols for r in data):
        raise WFileError(f"{name}: {what}: ragged rows")
    return Matrix(field, len(data), ncols, data, check=False)
