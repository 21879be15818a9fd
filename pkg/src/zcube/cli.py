"""Command line: series, char, graph, reduce, verify.

Exit status 0 on success, 1 when a verification fails, 2 on usage errors.
Settings resolve as flag, then config file, then built-in default; the
``ZC_DEPTH`` environment variable replaces the built-in default depth only.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

DEFAULT_DEPTH = 12

COMMON = {"depth": DEFAULT_DEPTH, "jobs": None}

DEFAULTS = {
    "series": {"order": "20", "eta": "strip", "kind": "singlet", "via": "closed", "lambda1": "+", "format": "csv"},
    "char": {"format": "text"},
    "graph": {"format": "dot", "dot": "-"},
    "reduce": {"lambda1": "+", "m": 1, "orientation": "+"},
    "verify": {"suite": "all", "max_m": 3},
}


class UsageError(Exception):
    pass


def _ints(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in str(text).split(",") if x.strip())
    except ValueError:
        raise UsageError(f"expected a comma separated list of integers, got {text!r}")


def _sign(text: str) -> str:
    if text not in ("+", "-"):
        raise UsageError(f"expected '+' or '-', got {text!r}")
    return text


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="zcube", description="hypercube DAG calculus and q-series")
    p.add_argument("--legend", action="store_true", help="print the ASCII notation legend")
    p.add_argument("--config", help="JSON file with the same keys as the flags")
    p.add_argument("--jobs", type=int, help="worker processes for verify (default: cores)")
    sub = p.add_subparsers(dest="command")

    s = sub.add_parser("series", help="singlet or triplet q-series")
    s.add_argument("--p", help="comma separated p_i")
    s.add_argument("--r", help="comma separated r_i")
    s.add_argument("--lambda1")
    s.add_argument("--order", help="largest exponent kept (rational)")
    s.add_argument("--eta", choices=["strip", "expand"])
    s.add_argument("--kind", choices=["singlet", "triplet"])
    s.add_argument("--via", choices=["closed", "pipeline"])
    s.add_argument("--hcut", type=int, help="triplet: bound on |h - h0|")
    s.add_argument("--format", choices=["csv", "json"])

    c = sub.add_parser("char", help="character of a graph expression")
    c.add_argument("--expr", required=False)
    c.add_argument("--depth", type=int)
    c.add_argument("--format", choices=["text", "json"])

    g = sub.add_parser("graph", help="DOT or JSON for a graph expression")
    g.add_argument("--expr", required=False)
    g.add_argument("--depth", type=int)
    g.add_argument("--dot", help="output file, '-' for stdout")
    g.add_argument("--format", choices=["dot", "json"])

    r = sub.add_parser("reduce", help="run the gamma / quotient pipeline")
    r.add_argument("--lambda1")
    r.add_argument("--m", type=int)
    r.add_argument("--orientation", choices=["+", "-"])
    r.add_argument("--depth", type=int)
    r.add_argument("--hcut", type=int)
    r.add_argument("--order", help="slot processing order, e.g. 2,1,3")
    r.add_argument("--trace", action="store_true")

    v = sub.add_parser("verify", help="run invariant suites")
    v.add_argument("--suite", choices=["bitword", "dag", "cubes", "bilateral", "characters", "qseries", "loewy", "all"])
    v.add_argument("--max-m", dest="max_m", type=int)
    v.add_argument("--depth", type=int)
    return p


def load_config(path: str | None, command: str | None) -> dict:
    if not path:
        return {}
    try:
        with open(path) as f:
            data = json.load(f)
    except (OSError, json.JSONDecodeError) as ex:
        raise UsageError(f"cannot read config {path}: {ex}")
    if not isinstance(data, dict):
        raise UsageError(f"config {path} must hold a JSON object")
    flat = {k.replace("-", "_"): v for k, v in data.items() if not isinstance(v, dict)}
    nested = data.get(command, {}) if command else {}
    flat.update({k.replace("-", "_"): v for k, v in nested.items()})
    return flat


def resolve(args: argparse.Namespace) -> argparse.Namespace:
    cfg = load_config(args.config, args.command)
    defaults = dict(COMMON, **DEFAULTS.get(args.command, {}))
    env = os.environ.get("ZC_DEPTH")
    if env:
        try:
            defaults["depth"] = int(env)
        except ValueError:
            raise UsageError(f"ZC_DEPTH must be an integer, got {env!r}")
    for key, val in vars(args).items():
        if val is None or val is False:
            if key in cfg:
                setattr(args, key, cfg[key])
            elif val is None and key in defaults:
                setattr(args, key, defaults[key])
    if getattr(args, "depth", None) is not None and (int(args.depth) < 0 or int(args.depth) % 2):
        raise UsageError(f"depth must be even and non-negative, got {args.depth}")
    return args


# -- subcommands --------------------------------------------------------------


def cmd_series(a, out) -> int:
    from . import qseries as qs

    if a.p is None or a.r is None:
        raise UsageError("series needs --p and --r")
    p, r = _ints(a.p), _ints(a.r)
    try:
        params = qs.SeifertParams(p, r)
    except qs.ParamError as ex:
        raise UsageError(str(ex))
    lam1 = _sign(a.lambda1)
    try:
        order = Fraction(str(a.order))
    except ValueError:
        raise UsageError(f"order must be a rational number, got {a.order!r}")
    if a.kind == "triplet":
        s = qs.triplet_series(params, lam1, order, h_cutoff=a.hcut, eta=a.eta)
    elif a.via == "pipeline":
        if a.eta != "strip":
            raise UsageError("--via pipeline produces the eta-stripped series only")
        s = qs.singlet_via_pipeline(params, lam1, order)
    else:
        s = qs.singlet_series(params, lam1, order, eta=a.eta)
    if a.format == "json":
        body = json.loads(s.to_json())
        body.update(
            {
                "kind": a.kind,
                "p": list(p),
                "r": list(r),
                "lambda1": lam1,
                "eta": a.eta,
                "normalization": "character-normalized; no overall q-power chosen",
                "truncation": "all exponents <= order",
            }
        )
        out.write(json.dumps(body, indent=1) + "\n")
    else:
        out.write(s.to_csv())
    return 0


def _evaluate(a):
    from .expr import evaluate

    if not a.expr:
        raise UsageError("--expr is required")
    try:
        return evaluate(a.expr, int(a.depth))
    except ValueError as ex:
        raise UsageError(f"expression {a.expr!r}: {ex}")


def cmd_char(a, out) -> int:
    from .bilateral import BilateralDag
    from .characters import bilateral_char, char_of

    q = _evaluate(a)
    labeled = isinstance(q, BilateralDag) or any(n.h is not None for n in q.nodes.values())
    if labeled:
        cols = bilateral_char(q)
        if a.format == "json":
            body = {str(h): json.loads(c.to_json()) for h, c in sorted(cols.items(), key=lambda t: (t[0] is None, t[0] or 0))}
            out.write(json.dumps(body, indent=1) + "\n")
        else:
            for h, c in sorted(cols.items(), key=lambda t: (t[0] is None, t[0] or 0)):
                for line in c.to_lines().splitlines():
                    out.write(f"h={h} {line}\n")
        return 0
    c = char_of(q)
    out.write((c.to_json() + "\n") if a.format == "json" else c.to_lines())
    return 0


def cmd_graph(a, out) -> int:
    from .dag import canonical_order, to_dot
    from .expr import as_dag

    q = as_dag(_evaluate(a))
    if a.format == "json":
        order = canonical_order(q)
        idx = {v: i for i, v in enumerate(order)}
        body = {
            "nodes": [
                {"id": idx[v], "bits": str(q.nodes[v].color.bits), "depth": q.nodes[v].color.depth, "h": q.nodes[v].h}
                for v in order
            ],
            "edges": sorted([idx[x], idx[y]] for x, y in q.edges),
        }
        text = json.dumps(body, indent=1) + "\n"
    else:
        text = to_dot(q)
        if not text.endswith("\n"):
            text += "\n"
    if a.dot and a.dot != "-":
        with open(a.dot, "w") as f:
            f.write(text)
    else:
        out.write(text)
    return 0


def cmd_reduce(a, out) -> int:
    from .bilateral import ShapeError, pipeline, terminal_check

    lam1 = _sign(a.lambda1)
    order = _ints(a.order) if isinstance(a.order, str) and a.order else None
    try:
        fam, trace = pipeline(lam1, int(a.m), a.orientation, int(a.depth), a.hcut, order)
    except ShapeError as ex:
        raise UsageError(str(ex))
    if a.trace:
        for s in trace:
            out.write(s.line() + "\n")
    last = trace[-1]
    f, n, e = last.census
    out.write(f"result {last.kind}  fragments={f} nodes={n} edges={e}\n")
    ok = terminal_check(lam1, int(a.m), int(a.depth), a.orientation)
    out.write(f"terminal identity {'PASS' if ok else 'FAIL'}\n")
    return 0 if ok else 1


def cmd_verify(a, out) -> int:
    from .suites import checks, run_one

    jobs = a.jobs or os.cpu_count() or 1
    todo = [(s, n, fn, int(a.max_m), int(a.depth)) for s, n, fn in checks(a.suite)]
    if jobs > 1 and len(todo) > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=min(jobs, len(todo))) as ex:
            results = list(ex.map(run_one, todo))
    else:
        results = [run_one(t) for t in todo]
    width = max(len(f"{s}.{n}") for s, n, _, _ in results)
    failed = 0
    for s, n, ok, detail in results:
        failed += not ok
        out.write(f"{'PASS' if ok else 'FAIL'}  {f'{s}.{n}':<{width}}  {detail}\n")
    out.write(f"{len(results) - failed} passed, {failed} failed (max_m={a.max_m}, depth={a.depth})\n")
    return 1 if failed else 0


COMMANDS = {
    "series": cmd_series,
    "char": cmd_char,
    "graph": cmd_graph,
    "reduce": cmd_reduce,
    "verify": cmd_verify,
}


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as ex:
        return int(ex.code or 0)
    if args.legend:
        from .expr import LEGEND

        out.write(LEGEND)
        return 0
    if not args.command:
        parser.print_usage(sys.stderr)
        return 2
    try:
        args = resolve(args)
        return COMMANDS[args.command](args, out)
    except UsageError as ex:
        print(f"zcube {args.command}: {ex}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
