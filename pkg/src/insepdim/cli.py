"""Command-line interface.

Exit codes: 0 success, 1 validation or mathematical error, 2 resource guard.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from typing import Sequence

from . import __version__
from .errors import InsepError, NotAField, ResourceGuard
from .kernel import DEFAULT_GUARD

GUARD_ENV = "INSEPDIM_GUARD"


# output

def _flatten(row: dict) -> dict:
    out = {}
    for k, v in row.items():
        if isinstance(v, (list, tuple)):
            out[k] = ",".join(str(x) for x in v)
        elif isinstance(v, dict):
            out[k] = json.dumps(v, sort_keys=True)
        elif isinstance(v, bool):
            out[k] = "true" if v else "false"
        elif v is None:
            out[k] = ""
        else:
            out[k] = v
    return out


def render(data, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(data, sort_keys=True, indent=2)
    rows = data if isinstance(data, list) else [data]
    if fmt == "csv":
        flat = [_flatten(r) for r in rows]
        keys = sorted({k for r in flat for k in r})
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=keys, lineterminator="\n")
        w.writeheader()
        w.writerows(flat)
        return buf.getvalue().rstrip("\n")
    lines = []
    for r in rows:
        flat = _flatten(r)
        lines.append("  ".join(f"{k}={flat[k]}" for k in sorted(flat)))
    return "\n".join(lines)


# argument helpers

def _guard(args) -> int:
    if args.guard is not None:
        return args.guard
    env = os.environ.get(GUARD_ENV)
    if env:
        try:
            value = int(env)
        except ValueError:
            raise InsepError(f"{GUARD_ENV}={env!r} is not an integer") from None
        if value < 1:
            raise InsepError(f"{GUARD_ENV} must be >= 1")
        return value
    return DEFAULT_GUARD


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"{v} must be >= 1")
    return v


def _load_tower(path: str):
    from .insep import TowerPresentation
    from .errors import ValidationError
    try:
        with open(path, encoding="utf-8") as fh:
            return TowerPresentation.loads(fh.read())
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc.strerror}") from None


# commands

def cmd_tau(args):
    from .edim import ed_report
    reports = [ed_report(n, e, args.p).to_json() for n in args.n for e in args.e]
    return reports[0] if len(reports) == 1 else reports


def cmd_dims(args):
    from .truncated import EType, scheme_dims
    out = []
    for e in args.e:
        d = scheme_dims(e, args.p, args.n).to_json()
        d.update({"p": args.p, "e": list(EType.parse(e).e), "n": args.n})
        out.append(d)
    return out[0] if len(out) == 1 else out


def cmd_count(args):
    from . import truncated as T
    guard = _guard(args)
    e = T.EType.parse(args.e)
    out = []
    guarded = False
    for q in args.q or [args.p]:
        T._check_q(args.p, q)
        kw = {"guard": guard, "workers": args.workers}
        try:
            if args.scheme == "alpha":
                ls = [args.l] if args.l else range(1, e.r + 1)
                res = [T.alpha_points(e, l, q, **kw) for l in ls]
            elif args.scheme == "end":
                res = [T.end_points(e, q, **kw)]
            elif args.scheme == "aut":
                res = [T.aut_points(e, q, **kw)]
            else:
                res = [T.aut_wreath_count(args.n, e, q, **kw)]
        except ResourceGuard as exc:
            guarded = True
            res = [_formula_only(args, e, q, str(exc))]
        out.extend(r if isinstance(r, dict) else r.to_json() for r in res)
    result = out[0] if len(out) == 1 else out
    if guarded:
        raise _GuardedResult(result)
    return result


def _formula_only(args, e, q, reason):
    import math
    from . import truncated as T
    if args.scheme == "alpha":
        ls = [args.l] if args.l else list(range(1, e.r + 1))
        closed = [T.alpha_closed_form(e, l, q) for l in ls]
        closed = closed[0] if len(closed) == 1 else closed
    elif args.scheme == "end":
        closed = T.end_closed_form(e, q)
    elif args.scheme == "aut":
        closed = T.aut_closed_form(e, q)
    else:
        closed = math.factorial(args.n) * T.aut_closed_form(e, q) ** args.n
    out = {"p": args.p, "q": q, "e": list(e.e), "scheme": args.scheme, "count": None,
           "closed_form": closed, "match": False, "formula_only": True, "reason": reason}
    if args.scheme == "alpha" and args.l:
        out["l"] = args.l
    if args.scheme == "aut_wreath":
        out["n"] = args.n
    return out


class _GuardedResult(Exception):
    def __init__(self, payload):
        super().__init__("resource guard")
        self.payload = payload


def _analyze(args, with_coefficients: bool):
    from . import insep as I
    pres = _load_tower(args.tower)
    tower = I.build_tower(pres, max_dim=args.max_degree)
    cands = I.scrambled_candidates(tower, args.scramble) if args.scramble is not None else None
    tr = I.normal_generating_sequence(tower, cands)
    coeffs = I.pickert_coefficients(tower, tr)
    cert = I.descent_certificate(tower, tr, coeffs)
    out = {"p": pres.p, "degree": tower.dim, "type": tr.to_json(), "certificate": cert.to_json()}
    if with_coefficients:
        out["coefficients"] = coeffs.to_json()
        out["k_lp_index"] = I.k_lp_index(tower, tr)
    return out


def cmd_type(args):
    return _analyze(args, False)


def cmd_descend(args):
    return _analyze(args, True)


def cmd_example(args):
    from .insep import construct_example
    return construct_example(args.e, args.p, args.seed).to_json()


def cmd_verify(args):
    from .verify import parse_grid, run_checks
    grid = parse_grid(args.grid)
    rows = run_checks(grid, guard=_guard(args), workers=args.workers, fault=args.inject_fault)
    failed = [r for r in rows if not r["ok"]]
    summary = {"checks": len(rows), "failed": len(failed), "rows": rows}
    if failed:
        raise _VerifyFailed(summary if args.format == "json" else rows)
    return summary if args.format == "json" else rows


class _VerifyFailed(Exception):
    def __init__(self, payload):
        super().__init__("verification failed")
        self.payload = payload


# parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["json", "csv", "text"], default="json")
    common.add_argument("--guard", type=_positive, default=None,
                        help=f"enumeration guard (default {DEFAULT_GUARD}; env {GUARD_ENV})")
    common.add_argument("-j", "--workers", type=_positive, default=os.cpu_count() or 1)

    parser = argparse.ArgumentParser(prog="insepdim", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("tau", parents=[common], help="tau(n,e) with both bounds")
    p.add_argument("-p", type=int, required=True)
    p.add_argument("-n", type=int, action="append", required=True)
    p.add_argument("-e", action="append", required=True, help="comma list, e.g. 2,1")
    p.set_defaults(func=cmd_tau)

    p = sub.add_parser("dims", parents=[common], help="scheme dimensions")
    p.add_argument("-p", type=int, required=True)
    p.add_argument("-n", type=int, default=1)
    p.add_argument("-e", action="append", required=True)
    p.set_defaults(func=cmd_dims)

    p = sub.add_parser("count", parents=[common], help="enumerate F_q-points")
    p.add_argument("-p", type=int, required=True)
    p.add_argument("-e", required=True)
    p.add_argument("-q", type=int, action="append")
    p.add_argument("-n", type=int, default=2, help="blocks for aut_wreath")
    p.add_argument("--scheme", choices=["alpha", "end", "aut", "aut_wreath"], required=True)
    p.add_argument("--l", type=int, default=None)
    p.set_defaults(func=cmd_count)

    for name, func, text in (("type", cmd_type, "type and descent bound of a tower file"),
                             ("descend", cmd_descend, "Pickert coefficients of a tower file")):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("tower")
        p.add_argument("--scramble", type=int, default=None,
                       help="replace the generators by a seeded triangular recombination")
        p.add_argument("--max-degree", type=_positive, default=None)
        p.set_defaults(func=func)

    p = sub.add_parser("example", parents=[common], help="example tower of a given type")
    p.add_argument("-p", type=int, required=True)
    p.add_argument("-e", required=True)
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(func=cmd_example)

    p = sub.add_parser("verify", parents=[common], help="run the cross-module checks")
    p.add_argument("--grid", default=None, help="e.g. r<=2,p=2,q<=4")
    p.add_argument("--inject-fault", default=None, help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "max_degree", "unset") is None:
        from .insep import TOWER_GUARD
        args.max_degree = TOWER_GUARD
    fmt = args.format
    try:
        data = args.func(args)
    except _GuardedResult as exc:
        print(render(exc.payload, fmt))
        return 2
    except _VerifyFailed as exc:
        print(render(exc.payload, fmt))
        return 1
    except ResourceGuard as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NotAField as exc:
        print(f"error: not a field at level {exc.level}: {exc}", file=sys.stderr)
        return 1
    except InsepError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(render(data, fmt))
    return 0


if __name__ == "__main__":
    sys.exit(main())
