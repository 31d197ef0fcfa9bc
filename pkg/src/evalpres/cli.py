"""Command-line interface: ``evalpres <command> ...``.

Every command writes JSON Lines with rationals as strings, except
``eval``, which prints the single line ``value ± 2^-k``.  Failures are a
JSON object on stderr and exit status 2.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Optional

from . import acceptance
from .cantor import build_homeomorphism, check_assignment
from .config import default_budgets
from .cstar import (
    PresentedCStar,
    VectorName,
    algebra_diagram_emit,
    induce,
    norm,
    opaque_from_manifest,
)
from .duality import composition_operator, composition_oracle, spatial_realization, translate_name
from .errors import EvalPresError, ManifestError
from .evalmap import ProductName, evaluate
from .exactnum import format_gaussian, format_rational, parse_rational, two_pow
from .fixtures import EXACT_UNIT_MAPS, UNIT_MAPS, dyadic_name, permuted_copy, swap_permutation, unit_map
from .space import (
    BUILTINS,
    PointName,
    builtin,
    diagram_emit,
    dyadic_point,
    segment_bounds,
    segment_index,
)
from .starpoly import format_poly, index_of, parse_poly, poly_from_index


def _emit(obj) -> None:
    print(json.dumps(obj, sort_keys=True))


def _load_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise ManifestError(f"cannot read {path}: {exc.strerror}") from None
    except ValueError as exc:
        raise ManifestError(f"{path} is not valid JSON: {exc}") from None


def _rational_point_name(space_label: str, t: Fraction) -> PointName:
    if space_label == "unit_interval":
        return dyadic_name(t)
    if space_label == "segments":
        if t == 0:
            return PointName.constant(0)
        m = 0
        while segment_bounds(m)[0] > t:
            m += 1
        a, b = segment_bounds(m)
        if not a <= t <= b:
            raise ManifestError(f"{t} is not a point of the segments space")
        u = (t - a) * (1 << (m + 1))
        return PointName(lambda k: segment_index(m, Fraction(round(u * (1 << (k + 1))), 1 << (k + 1))))
    raise ManifestError(f"rational coordinates are only meaningful on line spaces, not {space_label}")


def _point_from_file(path: str, space_label: str) -> PointName:
    """A point file holds either {"indices": [...]} or {"coordinate": "p/q"}."""
    data = _load_json(path)
    if "indices" in data:
        return PointName.from_list([int(i) for i in data["indices"]])
    if "coordinate" in data:
        return _rational_point_name(space_label, parse_rational(data["coordinate"]))
    raise ManifestError("point file needs an 'indices' list or a 'coordinate'")


def _point(args, space_label: str) -> PointName:
    if args.point:
        return _point_from_file(args.point, space_label)
    if args.at is not None:
        return _rational_point_name(space_label, parse_rational(args.at))
    raise ManifestError("give a point with --point FILE or --at RATIONAL")


def _algebra(args) -> PresentedCStar:
    if getattr(args, "manifest", None):
        return opaque_from_manifest(_load_json(args.manifest), require_unit=True)
    return induce(builtin(args.space))


def _poly_index(args) -> int:
    if getattr(args, "poly", None) is not None:
        return index_of(parse_poly(args.poly))
    if getattr(args, "index", None) is not None:
        return args.index
    raise ManifestError("give a polynomial with --poly TEXT or --index N")


# -- commands -----------------------------------------------------------------------------

def cmd_space_describe(args):
    X = builtin(args.space)
    _emit({"label": X.label, "diam_bound": format_rational(X.diam_bound),
           "computably_compact": X.tbf is not None, "line_coordinates": X.coordinate is not None,
           "net_sizes": [len(X.net(j)) for j in range(args.depth + 1)]})
    for n in range(args.points):
        row = {"index": n}
        if X.coordinate is not None:
            row["coordinate"] = format_rational(X.coordinate(n))
        row["distance_to_p0"] = format_rational(X.metric(n, 0, args.prec))
        _emit(row)


def cmd_space_diagram(args):
    for e in diagram_emit(builtin(args.space), args.count, args.prec_cap):
        print(e.to_json())


def cmd_algebra_induce(args):
    A = induce(builtin(args.space))
    _emit({"label": A.label, "sup_bound": format_rational(A.gb.sup_bound),
           "lip_bound": format_rational(A.gb.lip_bound), "unit": "x0"})
    for n in range(args.generators):
        _emit({"generator": f"x{n + 1}", "distance_to_point": n, "index": index_of(parse_poly(f"1/1*x{n + 1}"))})


def cmd_algebra_norm(args):
    A = _algebra(args)
    j = _poly_index(args)
    _emit({"index": j, "poly": format_poly(poly_from_index(j)), "prec": args.prec,
           "norm": format_rational(norm(A, j, args.prec))})


def cmd_algebra_diagram(args):
    A = _algebra(args)
    for e in algebra_diagram_emit(A, args.count, args.prec_cap):
        print(e.to_json())


def cmd_eval(args):
    A = induce(builtin(args.space))
    v = VectorName.constant(index_of(parse_poly(args.poly)))
    a = evaluate(A, ProductName(v, _point(args, args.space)), args.prec)
    value = format_rational(a.value.re) if not a.value.im else format_gaussian(a.value)
    print(f"{value} ± 2^-{args.prec}")


def cmd_banach_stone(args):
    if args.space0 != "unit_interval" or args.space1 != "unit_interval":
        raise ManifestError("built-in maps act on unit_interval only")
    A0, A1 = induce(builtin(args.space0)), induce(builtin(args.space1))
    T = composition_oracle(unit_map(args.psi), A0, A1, k_limit=args.prec + 6, budget=args.budget)
    lam = _point(args, args.space1)
    name = spatial_realization(T, A0, A1, lam, budget=args.budget)
    indices = name.to_list(args.prec)
    y = dyadic_point(indices[-1])
    report = {"name": indices, "coordinate": format_rational(y), "prec": args.prec}
    x = dyadic_point(lam(args.prec + 2))
    expected = EXACT_UNIT_MAPS[args.psi](x)
    report["check"] = {"point_approx": format_rational(x), "psi_of_point_approx": format_rational(expected),
                       "within": abs(y - expected) <= two_pow(args.prec) + 2 * two_pow(args.prec + 2)}
    _emit(report)


def cmd_compose(args):
    A = induce(builtin("unit_interval"))
    f = VectorName.constant(index_of(parse_poly(args.poly)))
    g = composition_operator(unit_map(args.psi), A, A, f, args.prec, budget=args.budget)
    for k in range(args.prec + 1):
        m = g(k)
        _emit({"k": k, "index": m, "poly": format_poly(poly_from_index(m))})


def _parse_swaps(text: str):
    pairs = []
    for part in text.split(","):
        a, b = part.split(":")
        pairs.append((int(a), int(b)))
    return pairs


def cmd_translate(args):
    A_plus = induce(builtin(args.space))
    if args.manifest:
        A_op = opaque_from_manifest(_load_json(args.manifest), require_unit=True)
    else:
        A_op = permuted_copy(A_plus, swap_permutation(_parse_swaps(args.swap)))
    if A_op.generator_names is None:
        raise ManifestError("the opaque presentation lists no generator names")
    v = VectorName.constant(index_of(parse_poly(args.poly)))
    w = translate_name(A_op, A_plus, v, args.prec, budget=args.budget)
    for k in range(args.prec + 1):
        m = w(k)
        _emit({"k": k, "index": m, "poly": format_poly(poly_from_index(m))})


def cmd_cantor_homeo(args):
    X = builtin(args.space)
    phi = build_homeomorphism(X, args.depth, budget=args.budget)
    lines = [json.dumps(lv.to_json(), sort_keys=True) for lv in phi.levels[:args.depth + 1]]
    if args.emit:
        with open(args.emit, "w") as fh:
            fh.write("\n".join(lines) + "\n")
    else:
        print("\n".join(lines))
    checks = []
    for s in range(args.depth + 1):
        problems = check_assignment(X, phi.levels[s], phi.levels[s - 1] if s else None)
        checks.append({"level": s, "balls": len(phi.levels[s].entries), "ok": not problems})
    _emit({"report": checks})


def cmd_accept(args):
    numbers = [int(x) for x in args.only.split(",")] if args.only else None
    results = acceptance.run(numbers, emit=lambda r: _emit(json.loads(r.to_json(args.timings))))
    _emit({"summary": {"passed": sum(r.passed for r in results), "total": len(results)}})
    return 0 if all(r.passed for r in results) else 1


# -- parser -------------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    budgets = default_budgets()
    spaces = sorted(BUILTINS)
    p = argparse.ArgumentParser(prog="evalpres", description="Computable presentations of C(X).")
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("space", help="presented compact spaces").add_subparsers(dest="action", required=True)
    d = sp.add_parser("describe")
    d.add_argument("--space", choices=spaces, required=True)
    d.add_argument("--depth", type=int, default=3)
    d.add_argument("--points", type=int, default=4)
    d.add_argument("--prec", type=int, default=8)
    d.set_defaults(func=cmd_space_describe)
    d = sp.add_parser("diagram")
    d.add_argument("--space", choices=spaces, required=True)
    d.add_argument("--count", type=int, default=20)
    d.add_argument("--prec-cap", type=int, default=budgets.precision_cap)
    d.set_defaults(func=cmd_space_diagram)

    al = sub.add_parser("algebra", help="presented C*-algebras").add_subparsers(dest="action", required=True)
    d = al.add_parser("induce")
    d.add_argument("--space", choices=spaces, required=True)
    d.add_argument("--generators", type=int, default=4)
    d.set_defaults(func=cmd_algebra_induce)
    for name, func in (("norm", cmd_algebra_norm), ("diagram", cmd_algebra_diagram)):
        d = al.add_parser(name)
        src = d.add_mutually_exclusive_group(required=True)
        src.add_argument("--space", choices=spaces)
        src.add_argument("--manifest", help="opaque presentation manifest (JSON)")
        if name == "norm":
            d.add_argument("--poly")
            d.add_argument("--index", type=int)
            d.add_argument("--prec", type=int, default=8)
        else:
            d.add_argument("--count", type=int, default=20)
            d.add_argument("--prec-cap", type=int, default=budgets.precision_cap)
        d.set_defaults(func=func)

    d = sub.add_parser("eval", help="evaluate a polynomial at a point")
    d.add_argument("--space", choices=["unit_interval", "segments"], required=True)
    d.add_argument("--poly", required=True)
    d.add_argument("--point")
    d.add_argument("--at")
    d.add_argument("--prec", type=int, default=8)
    d.set_defaults(func=cmd_eval)

    d = sub.add_parser("banach-stone", help="spatial realization of f -> f o psi")
    d.add_argument("--space0", default="unit_interval")
    d.add_argument("--space1", default="unit_interval")
    d.add_argument("--psi", choices=sorted(UNIT_MAPS), required=True)
    d.add_argument("--point")
    d.add_argument("--at")
    d.add_argument("--prec", type=int, default=4)
    d.add_argument("--budget", type=int, default=budgets.composition)
    d.set_defaults(func=cmd_banach_stone)

    d = sub.add_parser("compose", help="name of f o psi on unit_interval")
    d.add_argument("--psi", choices=sorted(UNIT_MAPS), required=True)
    d.add_argument("--poly", required=True)
    d.add_argument("--prec", type=int, default=3)
    d.add_argument("--budget", type=int, default=budgets.composition)
    d.set_defaults(func=cmd_compose)

    d = sub.add_parser("translate", help="translate a name from an opaque presentation")
    d.add_argument("--space", choices=spaces, default="unit_interval")
    src = d.add_mutually_exclusive_group(required=True)
    src.add_argument("--manifest")
    src.add_argument("--swap", help="re-indexed copy, e.g. 0:2,1:3")
    d.add_argument("--poly", required=True, help="vector as a polynomial in the opaque generators")
    d.add_argument("--prec", type=int, default=3)
    d.add_argument("--budget", type=int, default=budgets.composition)
    d.set_defaults(func=cmd_translate)

    d = sub.add_parser("cantor-homeo", help="cylinder assignments of a Cantor presentation")
    d.add_argument("--space", choices=["cantor_standard", "cantor_variant"], required=True)
    d.add_argument("--depth", type=int, default=budgets.cantor_depth)
    d.add_argument("--budget", type=int, default=budgets.cantor)
    d.add_argument("--emit", "--out", dest="emit")
    d.set_defaults(func=cmd_cantor_homeo)

    d = sub.add_parser("accept", help="run the acceptance suite")
    d.add_argument("--only", help="comma-separated criterion numbers")
    d.add_argument("--timings", action="store_true", help="add wall-clock seconds to each row")
    d.set_defaults(func=cmd_accept)
    return p


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        code = args.func(args)
    except EvalPresError as exc:
        print(json.dumps(exc.to_dict(), sort_keys=True), file=sys.stderr)
        return 2
    except ValueError as exc:
        print(json.dumps({"error": "bad-input", "message": str(exc)}, sort_keys=True), file=sys.stderr)
        return 2
    sys.stdout.flush()
    return code or 0


if __name__ == "__main__":
    sys.exit(main())
