"""Model inputs: hand-derived geometric cohomology modules and synthetic
assemblies.

The geometric models are hard-coded cohomology tables with hand-derived
cup-product matrices, not computed from geometry; each generator's docstring
records the derivation.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

from .emodule import (
    ExteriorContext,
    GradedEModule,
    direct_sum,
    dual_module,
    shift,
    simple_module,
)
from .fields import QQ
from .linalg import Matrix, ext_monomials, wedge_insert, wedge_sign


class ModelError(ValueError):
    pass


GEOMETRIC_KINDS = ("point", "abelian", "curve", "curve_times_p1")


@dataclass(frozen=True)
class ModelSpec:
    """kind plus its parameter (dimension d, genus g, or summand files)."""
    kind: str
    dim: int | None = None
    genus: int | None = None
    files: tuple = ()
    field: object = QQ

    def __post_init__(self):
        if self.kind not in GEOMETRIC_KINDS + ("synthetic_kollar", "custom"):
            raise ModelError(f"unknown model kind {self.kind!r}")


MAX_DIM = 6
MAX_GENUS = 8


def point_model(field=QQ) -> GradedEModule:
    """A point: H^0 = k only, q = 0."""
    return simple_module(ExteriorContext(0, field), 0)


def abelian_model(d: int, field=QQ) -> GradedEModule:
    """An abelian variety of dimension d: q = d, H^i = Lambda^i V sitting in
    degree d - i, with e_a acting by wedging. Dimensions are C(d, i) and the
    action matrices are the signed subset-insertion tables."""
    if not 1 <= d <= MAX_DIM:
        raise ModelError(f"abelian dimension must be 1..{MAX_DIM}")
    ctx = ExteriorContext(d, field)
    components = {d - i: comb(d, i) for i in range(d + 1)}
    action = {}
    for a in range(1, d + 1):
        for i in range(d):
            # e_a: Lambda^i (degree d - i) -> Lambda^(i+1) (degree d - i - 1)
            src = ext_monomials(d, i)
            dst = ext_monomials(d, i + 1)
            dst_idx = {s: k for k, s in enumerate(dst)}
            m = Matrix.zero(field, len(dst), len(src))
            for col, s in enumerate(src):
                sign = wedge_sign(a - 1, s)
                if sign == 0:
                    continue
                row = dst_idx[wedge_insert(a - 1, s)]
                m.data[row][col] = field.one if sign > 0 else \
                    field.neg(field.one)
            action[(a, d - i)] = m
    return GradedEModule(ctx, components, action)


def curve_model(g: int, field=QQ) -> GradedEModule:
    """A curve of genus g: q = g, H^0 = k in degree 1, H^1 = V in degree 0.
    Cup product H^1 (x) H^0 -> H^1 identifies e_a . 1 with the a-th basis
    vector of H^1."""
    if not 1 <= g <= MAX_GENUS:
        raise ModelError(f"genus must be 1..{MAX_GENUS}")
    ctx = ExteriorContext(g, field)
    action = {}
    for a in range(1, g + 1):
        col = [[field.one if i == a - 1 else field.zero] for i in range(g)]
        action[(a, 1)] = Matrix(field, g, 1, col, check=False)
    return GradedEModule(ctx, {1: 1, 0: g}, action)


def curve_times_p1_model(g: int, field=QQ) -> GradedEModule:
    """C x P^1 for a genus-g curve C: d = 2, q = g.

    Kunneth gives H^0 = k (degree 2), H^1 = H^1(C) (degree 1, dim g), and
    H^2 = H^1(C) (x) H^1(P^1) = 0 (degree 0, dim 0). The only cup products
    land in H^1 exactly as for the curve; everything out of H^1 is zero.
    """
    if not 1 <= g <= MAX_GENUS:
        raise ModelError(f"genus must be 1..{MAX_GENUS}")
    ctx = ExteriorContext(g, field)
    action = {}
    for a in range(1, g + 1):
        col = [[field.one if i == a - 1 else field.zero] for i in range(g)]
        action[(a, 2)] = Matrix(field, g, 1, col, check=False)
    return GradedEModule(ctx, {2: 1, 1: g, 0: 0}, action)


def generate(spec: ModelSpec):
    """The module of global-sections type (P) and its dual (Q)."""
    if spec.kind == "point":
        p = point_model(spec.field)
    elif spec.kind == "abelian":
        if spec.dim is None:
            raise ModelError("abelian model needs --dim")
        p = abelian_model(spec.dim, spec.field)
    elif spec.kind == "curve":
        if spec.genus is None:
            raise ModelError("curve model needs --genus")
        p = curve_model(spec.genus, spec.field)
    elif spec.kind == "curve_times_p1":
        if spec.genus is None:
            raise ModelError("curve_times_p1 model needs --genus")
        p = curve_times_p1_model(spec.genus, spec.field)
    elif spec.kind == "synthetic_kollar":
        from .wfile import parse_file
        summands = []
        for i, path in enumerate(spec.files):
            m = parse_file(path)
            if not isinstance(m, GradedEModule):
                raise ModelError(f"summand file {path} is not an emodule")
            summands.append(shift(m, i) if not m.is_zero else None)
        parts = [m for m in summands if m is not None]
        if not parts:
            raise ModelError("all synthetic summands are zero")
        q = direct_sum(parts)
        return dual_module(q), q
    elif spec.kind == "custom":
        from .wfile import parse_file
        if len(spec.files) != 1:
            raise ModelError("custom model needs exactly one file")
        p = parse_file(spec.files[0])
        if not isinstance(p, GradedEModule):
            raise ModelError("custom model file is not an emodule")
    else:
        raise ModelError(f"unknown kind {spec.kind!r}")
    return p, dual_module(p)


def expected_k(spec: ModelSpec) -> int:
    """Albanese fiber dimension of the geometric models: the regularity
    oracle. Zero for the point, abelian varieties (the Albanese is an
    isomorphism), and curves (Abel-Jacobi embeds for g >= 1); one for
    C x P^1 (the P^1 fibers are contracted)."""
    if spec.kind not in GEOMETRIC_KINDS:
        raise ModelError(
            f"expected_k applies to geometric kinds only, not {spec.kind!r}")
    return 1 if spec.kind == "curve_times_p1" else 0
