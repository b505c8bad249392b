"""Graded modules over the exterior algebra E on q generators of degree -1.

A module is its degreewise dimensions plus, for each algebra generator, the
action matrices dropping the degree by one. Multiplication maps must
anticommute (including squares vanishing); ``validate_module`` checks that.
"""

from __future__ import annotations

from dataclasses import dataclass

from .fields import same_field
from .linalg import Matrix, ext_monomials, wedge_insert, wedge_sign


class ModuleError(ValueError):
    pass


@dataclass(frozen=True)
class ExteriorContext:
    """Ambient data: dim V = q, base field; e_1..e_q span V, x_1..x_q its dual."""
    q: int
    field: object

    def __post_init__(self):
        if self.q < 0:
            raise ModuleError("q must be nonnegative")


class GradedEModule:
    """Finite-dimensional graded E-module given by components and action maps.

    ``components`` maps degree -> dimension (only nonzero entries are kept);
    ``action[(a, j)]`` is the matrix of multiplication by e_a from the
    degree-j component to the degree-(j-1) component, for a in 1..q. Missing
    keys mean the zero map (or a zero-dimensional end).
    """

    def __init__(self, context, components, action, check=True):
        self.context = context
        self.components = {j: d for j, d in components.items() if d > 0}
        self.action = {}
        for (a, j), m in action.items():
            if not (1 <= a <= context.q):
                raise ModuleError(f"action index e_{a} out of range 1..{context.q}")
            if self.dim(j) == 0 or self.dim(j - 1) == 0:
                if m is not None and not m.is_zero() and m.nrows * m.ncols:
                    raise ModuleError(
                        f"action ({a},{j}) given but a component is zero")
                continue
            self.action[(a, j)] = m
        if check:
            self._check_shapes()

    def _check_shapes(self):
        for j, d in self.components.items():
            if d < 0:
                raise ModuleError(f"negative dimension at degree {j}")
        for (a, j), m in self.action.items():
            same_field(self.context.field, m.field)
            want = (self.dim(j - 1), self.dim(j))
            if (m.nrows, m.ncols) != want:
                raise ModuleError(
                    f"action e_{a} at degree {j}: shape {m.nrows}x{m.ncols}, "
                    f"expected {want[0]}x{want[1]}")

    # -- basic structure ---------------------------------------------------

    def dim(self, j):
        return self.components.get(j, 0)

    @property
    def support(self):
        return sorted(self.components)

    @property
    def lo(self):
        return min(self.components) if self.components else 0

    @property
    def hi(self):
        return max(self.components) if self.components else 0

    @property
    def is_zero(self):
        return not self.components

    @property
    def width(self):
        return self.hi - self.lo + 1 if self.components else 0

    def total_dim(self):
        return sum(self.components.values())

    def act(self, a, j) -> Matrix:
        """Matrix of e_a on the degree-j component (zero map if absent)."""
        m = self.action.get((a, j))
        if m is not None:
            return m
        return Matrix.zero(self.context.field, self.dim(j - 1), self.dim(j))

    def __eq__(self, other):
        return (isinstance(other, GradedEModule)
                and self.context == other.context
                and self.components == other.components
                and {k: v for k, v in self.action.items() if not v.is_zero()}
                == {k: v for k, v in other.action.items() if not v.is_zero()})

    def __repr__(self):
        dims = ", ".join(f"{j}:{d}" for j, d in sorted(self.components.items(),
                                                       reverse=True))
        return f"GradedEModule(q={self.context.q}, dims={{{dims}}})"


@dataclass
class ValidationReport:
    ok: bool
    problems: list

    def __str__(self):
        if self.ok:
            return "valid"
        lines = [f"invalid ({len(self.problems)} violation(s)):"]
        lines += [f"  - {p}" for p in self.problems]
        return "\n".join(lines)


def validate_module(M: GradedEModule) -> ValidationReport:
    """Check every composable anticommutation identity e_a e_b + e_b e_a = 0."""
    problems = []
    q = M.context.q
    for j in M.support:
        if M.dim(j - 1) == 0 and M.dim(j - 2) == 0:
            continue
        for a in range(1, q + 1):
            for b in range(a, q + 1):
                lhs = M.act(a, j - 1) * M.act(b, j) + M.act(b, j - 1) * M.act(a, j)
                if not lhs.is_zero():
                    problems.append(
                        f"e_{a} e_{b} + e_{b} e_{a} != 0 on degree {j} "
                        f"component; residual rows {lhs.data}")
    return ValidationReport(not problems, problems)


def require_valid(M: GradedEModule):
    report = validate_module(M)
    if not report.ok:
        raise ModuleError(str(report))
    return M


def dual_module(P: GradedEModule) -> GradedEModule:
    """The dual module: degrees mirrored, action matrices transposed.

    No sign twist; transposes preserve anticommutation and every statement
    the workbench verifies is dimension-level.
    """
    require_valid(P)
    ctx = P.context
    components = {-j: d for j, d in P.components.items()}
    action = {}
    for a in range(1, ctx.q + 1):
        for j, d in components.items():
            src = P.action.get((a, 1 - j))
            if src is not None:
                action[(a, j)] = src.transpose()
    return GradedEModule(ctx, components, action)


def shift(M: GradedEModule, j: int) -> GradedEModule:
    """The shifted module with components at l equal to M at j + l."""
    components = {l: d for l, d in
                  ((jj - j, d) for jj, d in M.components.items())}
    action = {(a, jj - j): m for (a, jj), m in M.action.items()}
    return GradedEModule(M.context, components, action)


def direct_sum(mods) -> GradedEModule:
    mods = list(mods)
    if not mods:
        raise ModuleError("direct_sum needs at least one summand")
    ctx = mods[0].context
    for m in mods:
        if m.context != ctx:
            raise ModuleError("direct_sum: context mismatch")
    degrees = sorted({j for m in mods for j in m.components})
    components = {j: sum(m.dim(j) for m in mods) for j in degrees}
    action = {}
    for a in range(1, ctx.q + 1):
        for j in degrees:
            if components.get(j, 0) and components.get(j - 1, 0):
                blocks = [m.act(a, j) for m in mods]
                action[(a, j)] = Matrix.block_diag(ctx.field, blocks)
    return GradedEModule(ctx, components, action)


# ---------------------------------------------------------------------------
# Free modules

class FreeEModule:
    """A free module on generators with prescribed degrees.

    The degree-j component has basis e_S . g for generators g of degree t and
    subsets S of {1..q} with t - |S| = j, ordered by (generator, subset).
    """

    def __init__(self, context, gen_degrees):
        self.context = context
        self.gen_degrees = list(gen_degrees)
        q = context.q
        basis = {}
        for idx, t in enumerate(self.gen_degrees):
            for k in range(q + 1):
                for s in ext_monomials(q, k):
                    basis.setdefault(t - k, []).append((idx, s))
        self.basis = basis
        self._index = {j: {bs: i for i, bs in enumerate(elts)}
                       for j, elts in basis.items()}
        components = {j: len(elts) for j, elts in basis.items()}
        action = {}
        field = context.field
        for a in range(1, q + 1):
            for j, elts in basis.items():
                tgt = basis.get(j - 1)
                if not tgt:
                    continue
                m = Matrix.zero(field, len(tgt), len(elts))
                for col, (idx, s) in enumerate(elts):
                    sign = wedge_sign(a - 1, s)
                    if sign == 0:
                        continue
                    row = self._index[j - 1][(idx, wedge_insert(a - 1, s))]
                    m.data[row][col] = field.one if sign > 0 else \
                        field.neg(field.one)
                action[(a, j)] = m
        self.module = GradedEModule(context, components, action)

    def generator_position(self, idx):
        """(degree, position) of the generator idx inside its component."""
        t = self.gen_degrees[idx]
        return t, self._index[t][(idx, ())]


def exterior_algebra_module(context) -> GradedEModule:
    """E as a module over itself (free of rank one, generator in degree 0)."""
    return FreeEModule(context, [0]).module


def simple_module(context, degree=0) -> GradedEModule:
    """The residue field k placed in a single degree."""
    return GradedEModule(context, {degree: 1}, {})
