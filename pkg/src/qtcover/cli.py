"""Command line front end: ``qtc <command> ...``, JSON on stdout.

Exit codes: 0 success, 1 domain error (bad mathematical input, obstruction),
2 usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from .covering import (CoveringError, build_connected_covering, check_connected_covering,
                       check_freeness_ergodic, classify_coverings, profinite_tower, solve_theta_prime)
from .expr import ExprSyntaxError, parse_expr
from .groups import CocycleError, FiniteAbelianGroup
from .lattice import SingularMatrixError, format_matrix
from .phase import PolySyntaxError, parse_poly
from .smooth import (H3ObstructionError, OutSmoothElement, SmoothCoveringError, build_smooth_covering,
                     homomorphism_report, picard_of, verify_smooth_covering)
from .torus import ThetaMatrix


class UsageError(Exception):
    pass


DOMAIN_ERRORS = (CoveringError, SingularMatrixError, SmoothCoveringError, CocycleError, ValueError)


def parse_theta(text: str) -> ThetaMatrix:
    """theta_12 as a polynomial in t, or a JSON file holding the skew matrix."""
    if os.path.isfile(text):
        with open(text) as fh:
            data = json.load(fh)
        return ThetaMatrix([[parse_poly(str(x)) for x in row] for row in data])
    try:
        return ThetaMatrix.from_entry(parse_poly(text))
    except PolySyntaxError as exc:
        raise UsageError(f"--theta: {exc}") from None


def parse_int_list(text: str, what: str) -> list:
    try:
        return [int(x) for x in text.replace(";", ",").split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"{what}: expected comma separated integers, got {text!r}") from None


def parse_square(text: str, n: int, what: str):
    vals = parse_int_list(text, what)
    if len(vals) != n * n:
        raise UsageError(f"{what}: expected {n * n} entries for n = {n}, got {len(vals)}")
    return tuple(tuple(vals[i * n:(i + 1) * n]) for i in range(n))


def parse_k(text: str | None, n: int):
    if text is None:
        return tuple(tuple(0 for _ in range(n)) for _ in range(n))
    vals = parse_int_list(text, "--K")
    if len(vals) == 1 and n == 2:
        k = vals[0]
        return ((0, k), (-k, 0))
    if len(vals) == 1 and vals[0] == 0:
        return tuple(tuple(0 for _ in range(n)) for _ in range(n))
    return parse_square(text, n, "--K")


def cmd_eval(args) -> dict:
    theta = parse_theta(args.theta)
    try:
        value = parse_expr(args.expr, theta)
    except ExprSyntaxError as exc:
        raise UsageError(str(exc)) from None
    return {"expr": args.expr, "result": str(value), "terms": value.to_json()}


def cmd_solve_theta(args) -> dict:
    theta = parse_theta(args.theta)
    m = parse_square(args.M, theta.n, "--M")
    k = parse_k(args.K, theta.n)
    tp = solve_theta_prime(theta, m, k)
    out = {"M": format_matrix(m), "K": format_matrix(k), "theta_prime": tp.to_json()}
    if theta.n == 2:
        out["theta_prime_12"] = str(tp.entries[0][1])
    return out


def cmd_classify(args) -> dict:
    theta = parse_theta(args.theta)
    rows = classify_coverings(theta, args.max_index, args.kbound, args.support_bound)
    return {"count": len(rows), "rows": rows}


def cmd_check_covering(args) -> dict:
    theta = parse_theta(args.theta)
    m = parse_square(args.M, theta.n, "--M")
    if args.theta_prime is not None:
        tp = ThetaMatrix.from_entry(parse_poly(args.theta_prime)) if theta.n == 2 else parse_theta(args.theta_prime)
    else:
        tp = solve_theta_prime(theta, m, parse_k(args.K, theta.n))
    sys_ = build_connected_covering(theta, m, tp)
    return {
        "M": format_matrix(m),
        "theta_prime": tp.to_json(),
        "invariant_factors": [str(d) for d in sys_.group.invariant_factors],
        "embedding": [[str(x) for x in lam] for lam in sys_.embedding],
        "gauge_params": {",".join(map(str, rep)): [str(x) for x in s]
                         for rep, s in sorted(sys_.gauge_params.items())},
        "checks": check_connected_covering(sys_, args.support_bound),
    }


def load_phi(path: str):
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"--phi: {exc}") from None
    group = FiniteAbelianGroup(tuple(int(d) for d in data["group"]))
    images = [OutSmoothElement.from_json(img) for img in data["images"]]
    return group, images


def cmd_smooth_build(args) -> dict:
    theta = parse_theta(args.theta)
    group, images = load_phi(args.phi)
    report = homomorphism_report(group, images)
    sys_ = build_smooth_covering(theta, group, images)
    return {
        "group": [str(d) for d in group.invariant_factors],
        "homomorphism": report,
        "sigma": sys_.sigma_table(),
        "beta": [{"chi1": list(a), "chi2": list(b), "phase": str(p)} for (a, b), p in sorted(sys_.beta.items())],
        "picard": [{"chi": list(c), "class": picard_of(sys_, c).to_json()} for c in group.characters],
        "checks": verify_smooth_covering(sys_),
    }


def cmd_poset(args) -> dict:
    if args.n < 1 or args.max_index < 1:
        raise UsageError("need --n >= 1 and --max-index >= 1")
    return profinite_tower(args.n, args.max_index)


def cmd_freeness(args) -> dict:
    group = FiniteAbelianGroup(tuple(parse_int_list(args.group, "--group")))
    chars = []
    for part in args.N.split(";"):
        if part.strip():
            chars.append(tuple(parse_int_list(part, "--N")))
    if any(len(c) != group.rank for c in chars):
        raise UsageError(f"--N: characters need {group.rank} coordinates")
    result = check_freeness_ergodic(chars, group)
    return {"free": result["free"], "kernel": [list(g) for g in result["kernel"]],
            "N": [list(c) for c in result["N"]]}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qtc", description="Coverings of quantum tori, in exact arithmetic.")
    parser.add_argument("--pretty", action="store_true", help="indent the JSON output")
    parser.add_argument("--json", action="store_true", help="JSON output (the default)")
    sub = parser.add_subparsers(dest="command", required=True)

    def with_theta(p):
        p.add_argument("--theta", default="t", help="theta_12 as a polynomial in t, or a JSON matrix file")
        return p

    p = with_theta(sub.add_parser("eval", help="evaluate an expression"))
    p.add_argument("expr")
    p.set_defaults(func=cmd_eval)

    p = with_theta(sub.add_parser("solve-theta", help="theta' = M^-1 (theta + K) M^-T"))
    p.add_argument("--M", required=True, help="row-major integer entries, e.g. 2,0,0,1")
    p.add_argument("--K", help="skew correction: k (n = 2) or all n^2 entries")
    p.set_defaults(func=cmd_solve_theta)

    p = with_theta(sub.add_parser("classify", help="connected coverings up to an index bound"))
    p.add_argument("--max-index", type=int, required=True)
    p.add_argument("--kbound", type=int, default=0)
    p.add_argument("--support-bound", type=int, default=4)
    p.set_defaults(func=cmd_classify)

    p = with_theta(sub.add_parser("check-covering", help="build and verify one covering"))
    p.add_argument("--M", required=True)
    p.add_argument("--K")
    p.add_argument("--theta-prime", help="use this theta' instead of solving for it")
    p.add_argument("--support-bound", type=int, default=4)
    p.set_defaults(func=cmd_check_covering)

    p = with_theta(sub.add_parser("smooth-build", help="graded covering with a given Picard homomorphism"))
    p.add_argument("--phi", required=True, help="JSON file {group: [...], images: [{w, M}, ...]}")
    p.set_defaults(func=cmd_smooth_build)

    p = sub.add_parser("poset", help="finite quotients of Z^n ordered by inclusion")
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--max-index", type=int, required=True)
    p.set_defaults(func=cmd_poset)

    p = sub.add_parser("freeness", help="freeness of an ergodic action from its character support")
    p.add_argument("--group", required=True, help="cyclic factors, e.g. 2,2")
    p.add_argument("--N", required=True, help="characters separated by ';', e.g. '0,0;1,0'")
    p.set_defaults(func=cmd_freeness)
    return parser


def _default(obj):
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, (tuple, set, frozenset)):
        return list(obj)
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        result = args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"qtc: error: {exc}", file=sys.stderr)
        return 2
    except H3ObstructionError as exc:
        print(json.dumps({"error": str(exc), "kind": "h3_obstruction"}, sort_keys=True))
        return 1
    except DOMAIN_ERRORS as exc:
        print(json.dumps({"error": str(exc), "kind": type(exc).__name__}, sort_keys=True))
        return 1
    indent = 2 if args.pretty else None
    print(json.dumps(result, sort_keys=True, indent=indent, default=_default))
    return 0


if __name__ == "__main__":
    sys.exit(main())
