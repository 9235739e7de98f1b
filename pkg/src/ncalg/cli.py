"""Command-line front end.

Exit codes: 0 = solved/converged, 1 = inconsistent / singular / diverged /
method disagreement (the result is still printed), 2 = usage or parse error.
"""

from __future__ import annotations

import argparse
import json
import sys

from .algebra import (
    FLOAT,
    RATIONAL,
    Algebra,
    algebra_from_json,
    quaternion_algebra,
)
from .errors import (
    AlgebraError,
    DegreeLimitExceeded,
    EquationSyntaxError,
    NonlinearTerm,
    NotInvertible,
    PivotNotInvertible,
    SingularTensor,
    UnknownSymbol,
)
from .linalg import INCONSISTENT, PARAMETRIC, UNIQUE, UNVERIFIED_ENLARGED
from .newton import CONVERGED, NewtonConfig, newton_solve
from .parser import (
    collect_unknowns,
    evaluate_constant,
    format_element,
    normalize_linear,
    normalize_poly,
    parse_equation,
    parse_expression,
)
from .solvers import SylvesterSystem, solve_field, solve_richardson
from .tensor import TensorOp

_USAGE_ERRORS = (
    EquationSyntaxError,
    UnknownSymbol,
    NonlinearTerm,
    DegreeLimitExceeded,
)


def _load_algebra(source: str, scalar_mode: str) -> Algebra:
    if source == "quaternion":
        return quaternion_algebra(scalar_mode)
    with open(source, "r", encoding="utf-8") as handle:
        return algebra_from_json(json.load(handle), scalar_mode=scalar_mode)


def _sort_unknowns(names) -> list:
    def key(name: str):
        suffix = name[1:] if name.startswith("x") else name
        return (0, int(suffix)) if suffix.isdigit() else (0, 0) if suffix == "" else (1, name)

    return sorted(names, key=key)


def _parse_system(args, algebra: Algebra):
    if args.system_json:
        with open(args.system_json, "r", encoding="utf-8") as handle:
            system = SylvesterSystem.from_json(algebra, json.load(handle))
        unknowns = [f"x{j + 1}" for j in range(system.m_unk)] \
            if system.m_unk > 1 else ["x"]
        return system, unknowns
    pairs = [parse_equation(text, algebra) for text in args.equation]
    names = set()
    for lhs, rhs in pairs:
        names |= collect_unknowns(lhs) | collect_unknowns(rhs)
    if not names:
        raise UnknownSymbol("no unknown appears in the equations")
    unknowns = _sort_unknowns(names)
    return normalize_linear(algebra, pairs, unknowns), unknowns


def _solution_json(sol, unknowns) -> dict:
    residual_norm = (
        max((r.norm() for r in sol.residuals), default=0.0)
        if sol.residuals is not None else None
    )
    return {
        "status": sol.kind,
        "unknowns": unknowns,
        "solution": [format_element(x) for x in sol.x] if sol.x else None,
        "free": [
            {"name": name, "direction": [format_element(d) for d in direction]}
            for name, direction in zip(sol.free_names, sol.nullspace)
        ],
        "residual_norm": residual_norm,
    }


def _solution_lines(sol, unknowns) -> list:
    if sol.kind == INCONSISTENT:
        return ["inconsistent"]
    lines = []
    if sol.kind == UNVERIFIED_ENLARGED:
        lines.append("unverified-enlarged: the enlarged-system candidate does "
                     "not satisfy the original system")
    for idx, name in enumerate(unknowns):
        text = format_element(sol.x[idx])
        extras = [
            f" + {free}*({format_element(direction[idx])})"
            for free, direction in zip(sol.free_names, sol.nullspace)
        ]
        lines.append(f"{name} = {text}{''.join(extras)}")
    if sol.free_names:
        lines.append("free: " + ", ".join(sol.free_names))
    if sol.kind == UNVERIFIED_ENLARGED:
        for idx, r in enumerate(sol.residuals):
            lines.append(f"residual[{idx}] = {format_element(r)}")
    return lines


def _emit(args, payload: dict, lines: list):
    if args.output == "json":
        print(json.dumps(payload, sort_keys=True))
    else:
        for line in lines:
            print(line)


def _solutions_compatible(field_sol, richardson_sol) -> bool:
    if richardson_sol.kind == UNVERIFIED_ENLARGED:
        return False
    if field_sol.kind == INCONSISTENT or richardson_sol.kind == INCONSISTENT:
        return field_sol.kind == richardson_sol.kind
    if field_sol.kind == UNIQUE and richardson_sol.kind == UNIQUE:
        return field_sol.x == richardson_sol.x
    if field_sol.kind == UNIQUE:
        # richardson may report a verified solution without characterizing
        # the full set; same x and no extra directions is still agreement
        return not richardson_sol.nullspace and field_sol.x == richardson_sol.x
    return True


def _cmd_solve(args) -> int:
    algebra = _load_algebra(args.algebra, args.scalar)
    system, unknowns = _parse_system(args, algebra)

    if args.method == "field":
        sol = solve_field(system)
        _emit(args, {**_solution_json(sol, unknowns), "method": "field"},
              _solution_lines(sol, unknowns))
        return 0 if sol.kind in (UNIQUE, PARAMETRIC) else 1

    if args.method == "richardson":
        sol = solve_richardson(system)
        _emit(args, {**_solution_json(sol, unknowns), "method": "richardson"},
              _solution_lines(sol, unknowns))
        return 0 if sol.kind in (UNIQUE, PARAMETRIC) else 1

    # auto: field first, enlarged-system route as a cross-check in exact mode
    field_sol = solve_field(system)
    if algebra.scalar_mode != RATIONAL:
        _emit(args, {**_solution_json(field_sol, unknowns), "method": "field"},
              _solution_lines(field_sol, unknowns))
        return 0 if field_sol.kind in (UNIQUE, PARAMETRIC) else 1

    try:
        richardson_sol = solve_richardson(system)
    except PivotNotInvertible:
        # not a division algebra: the cross-check does not apply
        _emit(args, {**_solution_json(field_sol, unknowns), "method": "field"},
              _solution_lines(field_sol, unknowns))
        return 0 if field_sol.kind in (UNIQUE, PARAMETRIC) else 1
    if _solutions_compatible(field_sol, richardson_sol):
        _emit(args, {**_solution_json(field_sol, unknowns), "method": "auto"},
              _solution_lines(field_sol, unknowns))
        return 0 if field_sol.kind in (UNIQUE, PARAMETRIC) else 1

    payload = {
        "status": "disagreement",
        "unknowns": unknowns,
        "solution": None,
        "free": [],
        "residual_norm": None,
        "method": "auto",
        "field": _solution_json(field_sol, unknowns),
        "richardson": _solution_json(richardson_sol, unknowns),
    }
    lines = ["methods disagree", "field:"]
    lines += ["  " + line for line in _solution_lines(field_sol, unknowns)]
    lines.append("richardson:")
    lines += ["  " + line for line in _solution_lines(richardson_sol, unknowns)]
    _emit(args, payload, lines)
    return 1


def _cmd_newton(args) -> int:
    algebra = _load_algebra(args.algebra, args.scalar)
    lhs, rhs = parse_equation(args.equation, algebra)
    names = collect_unknowns(lhs) | collect_unknowns(rhs)
    if len(names) != 1:
        raise UnknownSymbol(
            "newton needs exactly one unknown, found: " + ", ".join(sorted(names))
        )
    unknown = names.pop()
    poly, target = normalize_poly(algebra, (lhs, rhs), unknown)
    x0 = evaluate_constant(parse_expression(args.x0, algebra), algebra)
    cfg = NewtonConfig(tol=args.tol, max_iter=args.max_iter)
    trace = newton_solve(poly, target, x0, cfg)

    final_x, _, final_norm = trace.iterates[-1]
    payload = {
        "status": trace.status,
        "solution": format_element(final_x),
        "residual_norm": final_norm,
        "iterations": trace.rows(),
    }
    lines = [
        f"k={k}  x = {format_element(x)}  |f(x)-a| = {norm:.6g}"
        for k, (x, _r, norm) in enumerate(trace.iterates)
    ]
    lines.append(f"status: {trace.status}")
    lines.append(f"{unknown} = {format_element(final_x)}")
    _emit(args, payload, lines)
    return 0 if trace.status == CONVERGED else 1


def _cmd_invert_tensor(args) -> int:
    algebra = _load_algebra(args.algebra, args.scalar)
    if args.tensor_json:
        with open(args.tensor_json, "r", encoding="utf-8") as handle:
            op = TensorOp.from_json(algebra, json.load(handle))
    else:
        pair = parse_equation(args.expression + " = 0", algebra)
        names = collect_unknowns(pair[0])
        if len(names) != 1:
            raise UnknownSymbol(
                "the operator expression needs exactly one unknown"
            )
        unknown = names.pop()
        system = normalize_linear(algebra, [pair], [unknown])
        if not system.rhs[0].is_zero():
            raise NonlinearTerm(
                "the operator expression must have no constant term"
            )
        op = system.ops[0][0]
    try:
        inverse = op.invert()
    except SingularTensor:
        _emit(args, {"status": "singular", "tensor": None, "text": None},
              ["tensor is singular"])
        return 1
    _emit(
        args,
        {"status": "ok", "tensor": inverse.to_json(), "text": inverse.to_text()},
        [inverse.to_text()],
    )
    return 0


def _cmd_check(args) -> int:
    algebra = _load_algebra(args.algebra, args.scalar)
    system, unknowns = _parse_system(args, algebra)
    if len(args.x) != len(unknowns):
        raise UnknownSymbol(
            f"need {len(unknowns)} --x values (one per unknown "
            f"{', '.join(unknowns)}), got {len(args.x)}"
        )
    xs = [
        evaluate_constant(parse_expression(text, algebra), algebra)
        for text in args.x
    ]
    residuals = system.residuals(xs)
    worst = max((r.norm() for r in residuals), default=0.0)
    ok = all(
        r.is_zero() if algebra.scalar_mode == RATIONAL else r.is_zero(1e-9)
        for r in residuals
    )
    payload = {
        "status": "ok" if ok else "nonzero",
        "residuals": [format_element(r) for r in residuals],
        "residual_norm": worst,
    }
    lines = [
        f"residual[{idx}] = {format_element(r)}  |.| = {r.norm():.6g}"
        for idx, r in enumerate(residuals)
    ]
    lines.append("ok" if ok else "residual is nonzero")
    _emit(args, payload, lines)
    return 0 if ok else 1


def _build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="ncalg",
        description="Solve linear and polynomial equations over a "
                    "finite-dimensional associative algebra.",
    )
    sub = top.add_subparsers(dest="command", required=True)

    def common(p, default_scalar):
        p.add_argument("--algebra", default="quaternion",
                       help="'quaternion' or a path to an algebra JSON file")
        p.add_argument("--scalar", choices=[RATIONAL, FLOAT],
                       default=default_scalar)
        p.add_argument("--output", choices=["text", "json"], default="text")

    p = sub.add_parser("solve", help="solve a linear system for its unknowns")
    p.add_argument("equation", nargs="*", help="equations like "
                   "'(i+j)*x*k + k*x*(j+k) = 1+k'")
    p.add_argument("--system-json", help="read the system from a JSON file")
    p.add_argument("--method", choices=["auto", "field", "richardson"],
                   default="auto")
    common(p, RATIONAL)
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("newton", help="iterate Newton's method on f(x) = a")
    p.add_argument("equation")
    p.add_argument("--x0", required=True, help="starting point, e.g. '1+j'")
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--max-iter", type=int, default=50)
    common(p, FLOAT)
    p.set_defaults(func=_cmd_newton)

    p = sub.add_parser("invert-tensor",
                       help="invert the operator written as a linear "
                            "expression in x")
    p.add_argument("expression", nargs="?",
                   help="e.g. '(i+j)*x*k + k*x*(j+k)'")
    p.add_argument("--tensor-json", help="read the tensor from a JSON file")
    common(p, RATIONAL)
    p.set_defaults(func=_cmd_invert_tensor)

    p = sub.add_parser("check", help="substitute values and print residuals")
    p.add_argument("equation", nargs="*")
    p.add_argument("--system-json")
    p.add_argument("--x", action="append", default=[],
                   help="value for an unknown, repeat in unknown order")
    common(p, RATIONAL)
    p.set_defaults(func=_cmd_check)

    return top


def run(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except _USAGE_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (OSError, json.JSONDecodeError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (PivotNotInvertible, NotInvertible, SingularTensor) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except AlgebraError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
