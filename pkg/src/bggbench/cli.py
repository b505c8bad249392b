"""Command-line surface of the workbench.

Exit status: 0 on success, 1 on a mathematical failure or refutation (an
invalid module, a failed criterion, disagreeing routes), 2 on usage errors
(bad flags, malformed files).
"""

from __future__ import annotations

import argparse
import sys

from .bgg import (
    build_bgg,
    default_truncation,
    regularity_via_bgg,
    verify_theorem_a,
)
from .emodule import GradedEModule, ModuleError, validate_module
from .fields import QQ, FieldError, field_from_tag
from .models import ModelError, ModelSpec, expected_k, generate
from .rcomplex import (
    FilteredComplexError,
    FilteredFreeComplex,
    homogeneous_degree,
    induce_emodule,
    validate_complex,
)
from .resolution import (
    betti_table,
    default_imax,
    regularity_definition_route,
)
from .spectral import (
    check_degeneration_criterion,
    compute_page,
    degenerates_at,
    e1_total_complex,
    predict_vanishing,
    sum_with_page_check,
)
from .wfile import (
    WFileError,
    WFileInvariantError,
    parse_file,
    save_file,
)


class MathFailure(Exception):
    """Raised to signal exit code 1 with a message."""


class UsageFailure(Exception):
    """Raised to signal exit code 2 with a message."""


def _load(path, want=None, validate=True):
    obj = parse_file(path, validate=validate)
    if want is not None and not isinstance(obj, want):
        raise UsageFailure(
            f"{path}: expected a {want.__name__} document")
    return obj


def _emit(obj, out):
    if out:
        save_file(obj, out)
        print(f"wrote {out}")
    else:
        from .wfile import serialize
        sys.stdout.write(serialize(obj))


# -- subcommand handlers -------------------------------------------------------

def cmd_validate(args):
    try:
        obj = parse_file(args.file, validate=False)
    except WFileInvariantError as e:
        raise MathFailure(str(e)) from None
    if isinstance(obj, GradedEModule):
        rep = validate_module(obj)
    elif isinstance(obj, FilteredFreeComplex):
        rep = validate_complex(obj)
    else:
        print("valid (d^2 = 0 by construction)")
        return
    print(rep)
    if not rep.ok:
        raise MathFailure("validation failed")


def cmd_bgg(args):
    p = _load(args.emodule, GradedEModule)
    L = build_bgg(p)
    if args.out:
        _emit(L, args.out)
    else:
        dims = " -> ".join(f"S^{s.dim}" for s in L.spots)
        print(f"linear complex with {L.nspots} spots: {dims}")
        print(f"generation degrees: "
              f"{[s.degree for s in L.spots]}")


def cmd_betti(args):
    m = _load(args.emodule, GradedEModule)
    table = betti_table(m, args.imax)
    print(table.render(args.format))


def cmd_regularity(args):
    q = _load(args.emodule, GradedEModule)
    imax = args.imax if args.imax is not None else default_imax(q)
    route = args.route
    verdicts = {}
    if route in ("def", "both"):
        verdicts["def"] = regularity_definition_route(q, imax)
    if route in ("bgg", "both"):
        from .emodule import dual_module
        p = dual_module(q)
        T = args.truncation if args.truncation is not None \
            else default_truncation(p)
        verdicts["bgg"] = regularity_via_bgg(p, T)
    if route == "both":
        a, b = verdicts["def"], verdicts["bgg"]
        if a.verdict != b.verdict:
            print(f"definition route: {a}")
            print(f"bgg route:        {b}")
            raise MathFailure("routes disagree")
        print(f"m = {a.verdict} (both routes agree; "
              f"T={b.params['T']}, imax={a.params['i_max']})")
    else:
        (tag, rep), = verdicts.items()
        print(rep)


def cmd_model(args):
    try:
        field = field_from_tag(args.field)
    except FieldError as e:
        raise UsageFailure(str(e)) from None
    spec = ModelSpec(args.kind.replace("-", "_"), dim=args.dim,
                     genus=args.genus,
                     files=tuple(args.summands or []) or
                     ((args.file,) if args.file else ()),
                     field=field)
    p, q = generate(spec)
    chosen = q if args.dual else p
    label = "Q (dual)" if args.dual else "P"
    if spec.kind in ("point", "abelian", "curve", "curve_times_p1"):
        print(f"expected k(X) = {expected_k(spec)}")
    print(f"{label}: {chosen!r}")
    if args.out:
        _emit(chosen, args.out)


def cmd_verify_theorem_a(args):
    summands = []
    for token in args.summands:
        if token == "0":
            summands.append(None)
        else:
            summands.append(_load(token, GradedEModule))
    first = next(s for s in summands if s is not None)
    T = args.truncation if args.truncation is not None else \
        first.width + first.context.q + 4
    rep = verify_theorem_a(summands, T, i_max=args.imax)
    print(rep)
    if not rep.ok:
        raise MathFailure("theorem-A check failed")


def cmd_ss_validate(args):
    try:
        k = _load(args.rcomplex, FilteredFreeComplex, validate=False)
    except WFileInvariantError as e:
        raise MathFailure(str(e)) from None
    rep = validate_complex(k)
    print(rep)
    hom = homogeneous_degree(k)
    print(f"differentials: {hom}")
    if not rep.ok:
        raise MathFailure("d^2 != 0")


def cmd_ss_pages(args):
    k = _load(args.rcomplex, FilteredFreeComplex)
    k = _maybe_retruncate(k, args.precision)
    for r in range(1, args.max_page + 1):
        table = compute_page(k, r, args.pmax)
        print(table.render(args.format))
        if args.format == "text":
            print()


def cmd_ss_criterion(args):
    k = _load(args.rcomplex, FilteredFreeComplex)
    rep = check_degeneration_criterion(k, args.r, kmax=args.kmax)
    print(rep)
    if not rep.passed:
        print("witness " + rep.witness.format(k.field,
                                              single_var=k.nvars == 1))
        raise MathFailure("criterion refuted")


def cmd_ss_degeneration(args):
    k = _load(args.rcomplex, FilteredFreeComplex)
    verdict = degenerates_at(k, args.r, pmax=args.pmax)
    print(verdict)
    if not verdict.degenerates:
        raise MathFailure("degeneration refuted within the window")


def cmd_ss_induce(args):
    k = _load(args.rcomplex, FilteredFreeComplex)
    m = induce_emodule(k, top_degree=args.top_degree)
    print(f"induced module: {m!r}")
    if args.out:
        _emit(m, args.out)


def cmd_ss_e1_check(args):
    k = _load(args.rcomplex, FilteredFreeComplex)
    total, rep = e1_total_complex(k)
    print(rep)
    if not rep.ok:
        raise MathFailure("E_1 bridge failed")


def cmd_ss_predict(args):
    k = _load(args.rcomplex, FilteredFreeComplex)
    T = args.truncation if args.truncation is not None else k.precision
    rep = predict_vanishing(k, T)
    print(rep)
    if rep.discrepancies:
        raise MathFailure("direct check contradicts a certified spot")


def cmd_ss_sum(args):
    parts = [_load(f, FilteredFreeComplex) for f in args.files]
    rep = sum_with_page_check(parts)
    print(rep)
    if args.out:
        _emit(rep.total, args.out)
    if not rep.additivity_ok:
        raise MathFailure("page additivity failed")


def _maybe_retruncate(k, precision):
    if precision is None:
        return k
    if precision > k.precision:
        raise UsageFailure(
            f"cannot raise precision: file carries jets to N = {k.precision}")
    return FilteredFreeComplex(k.field, k.nvars, precision, dict(k.ranks),
                               {n: k.diff(n) for n in range(k.n_lo, k.n_hi)})


# -- parser --------------------------------------------------------------------

def build_parser():
    ap = argparse.ArgumentParser(
        prog="bggbench",
        description="Exact workbench for exterior-algebra modules, their "
                    "linearizations, and m-adic spectral sequences.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a workbench file's invariants")
    p.add_argument("file")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("bgg", help="linearize an exterior module")
    p.add_argument("emodule")
    p.add_argument("--out")
    p.set_defaults(func=cmd_bgg)

    p = sub.add_parser("betti", help="Betti table by minimal syzygies")
    p.add_argument("emodule")
    p.add_argument("--imax", type=int, required=True)
    p.add_argument("--format", choices=("text", "csv"), default="text")
    p.set_defaults(func=cmd_betti)

    p = sub.add_parser("regularity", help="regularity of a non-positively "
                       "graded module")
    p.add_argument("emodule")
    p.add_argument("--route", choices=("def", "bgg", "both"), default="both")
    p.add_argument("--truncation", type=int)
    p.add_argument("--imax", type=int)
    p.set_defaults(func=cmd_regularity)

    p = sub.add_parser("model", help="generate a model module")
    p.add_argument("kind", choices=("point", "abelian", "curve",
                                    "curve-times-p1", "curve_times_p1",
                                    "synthetic-kollar", "synthetic_kollar",
                                    "custom"))
    p.add_argument("--dim", type=int)
    p.add_argument("--genus", type=int)
    p.add_argument("--summands", nargs="+")
    p.add_argument("--file")
    p.add_argument("--field", default="rationals",
                   help='"rationals" or "fp:<p>"')
    p.add_argument("--dual", action="store_true",
                   help="emit the dual module Q instead of P")
    p.add_argument("--out")
    p.set_defaults(func=cmd_model)

    p = sub.add_parser("verify-theorem-a",
                       help="0-regularity and strand splitting of summands")
    p.add_argument("summands", nargs="+",
                   help='emodule files; "0" marks an absent summand')
    p.add_argument("--truncation", type=int)
    p.add_argument("--imax", type=int)
    p.set_defaults(func=cmd_verify_theorem_a)

    ss = sub.add_parser("ss", help="spectral sequences of filtered complexes")
    ss_sub = ss.add_subparsers(dest="ss_command", required=True)

    p = ss_sub.add_parser("validate")
    p.add_argument("rcomplex")
    p.set_defaults(func=cmd_ss_validate)

    p = ss_sub.add_parser("pages")
    p.add_argument("rcomplex")
    p.add_argument("--max-page", type=int, required=True)
    p.add_argument("--pmax", type=int, required=True)
    p.add_argument("--precision", type=int)
    p.add_argument("--format", choices=("text", "csv"), default="text")
    p.set_defaults(func=cmd_ss_pages)

    p = ss_sub.add_parser("criterion")
    p.add_argument("rcomplex")
    p.add_argument("-r", type=int, required=True)
    p.add_argument("--kmax", type=int)
    p.set_defaults(func=cmd_ss_criterion)

    p = ss_sub.add_parser("degeneration")
    p.add_argument("rcomplex")
    p.add_argument("-r", type=int, required=True)
    p.add_argument("--pmax", type=int)
    p.set_defaults(func=cmd_ss_degeneration)

    p = ss_sub.add_parser("induce")
    p.add_argument("rcomplex")
    p.add_argument("--top-degree", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_ss_induce)

    p = ss_sub.add_parser("e1-check")
    p.add_argument("rcomplex")
    p.set_defaults(func=cmd_ss_e1_check)

    p = ss_sub.add_parser("predict-vanishing")
    p.add_argument("rcomplex")
    p.add_argument("--truncation", type=int)
    p.set_defaults(func=cmd_ss_predict)

    p = ss_sub.add_parser("sum")
    p.add_argument("files", nargs="+")
    p.add_argument("--out")
    p.set_defaults(func=cmd_ss_sum)

    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        args.func(args)
    except MathFailure as e:
        print(f"FAIL: {e}", file=sys.stderr)
        return 1
    except (WFileInvariantError,) as e:
        print(f"FAIL: {e}", file=sys.stderr)
        return 1
    except (WFileError, UsageFailure, ModelError, FileNotFoundError) as e:
        print(f"usage error: {e}", file=sys.stderr)
        return 2
    except (ModuleError, FilteredComplexError, FieldError) as e:
        print(f"FAIL: {e}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
