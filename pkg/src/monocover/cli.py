"""Command line entry point: construct, cover, verify, chi, oracle, scaling."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .constructions import ConstructionError, construct_lower_bound
from .engine import EngineConfig, EngineError, cover_few_colours
from .graph import (
    GraphError,
    covering_from_json,
    covering_to_json,
    load_graph,
    save_graph,
    validate_covering,
)
from .kneser import build_kneser, chi_exact, chi_formula
from .oracle import OracleBudgetExceeded, min_cover_exact
from .scaling import FAMILIES, fit_slope, medians, run_scaling, write_rows


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise UsageError(message)


def _dump(obj) -> None:
    json.dump(obj, sys.stdout)
    sys.stdout.write("\n")


def _read_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise GraphError(f"malformed JSON in {path}: {exc}") from None


def cmd_construct(args) -> int:
    out = construct_lower_bound(args.r, args.s, args.alpha, args.n)
    save_graph(out.graph, args.out)
    meta = args.meta or str(Path(args.out).with_suffix(".meta.json"))
    with open(meta, "w") as fh:
        json.dump(out.metadata(), fh)
    _dump({"graph": args.out, "meta": meta, "case": out.case_id, "chi": out.chi, "n": out.n})
    return 0


def _config(args) -> EngineConfig:
    return EngineConfig(target_fraction=args.target_fraction, min_piece=args.min_piece, rng_seed=args.seed)


def cmd_cover(args) -> int:
    g = load_graph(args.input)
    pieces, trace = cover_few_colours(g, args.s, args.alpha, _config(args))
    payload = covering_to_json(pieces)
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(payload, fh)
    else:
        _dump(payload)
    if args.trace:
        with open(args.trace, "w") as fh:
            json.dump(trace.to_json(), fh)
    return 0


def cmd_verify(args) -> int:
    g = load_graph(args.graph)
    pieces = covering_from_json(_read_json(args.cover))
    report = validate_covering(g, pieces, args.s)
    _dump(report.to_json())
    return 0 if report.valid else 1


def cmd_chi(args) -> int:
    result = {"r": args.r, "s": args.s, "alpha": args.alpha, "formula": chi_formula(args.r, args.s, args.alpha)}
    if args.exact:
        found = chi_exact(build_kneser(args.r, args.s, args.alpha), budget=args.budget)
        if found is None:
            result["exact"] = None
        else:
            chi, colouring = found
            result["exact"] = chi
            result["witness"] = {",".join(map(str, x)): c for x, c in colouring.items()}
    _dump(result)
    return 0


def cmd_oracle(args) -> int:
    g = load_graph(args.input)
    size, witness = min_cover_exact(g, args.s)
    _dump({"min_size": size, "witness": covering_to_json(witness)})
    return 0


def cmd_scaling(args) -> int:
    cfg = EngineConfig(target_fraction=args.target_fraction, min_piece=args.min_piece)
    rows = run_scaling(
        args.r, args.s, args.alpha, args.n, range(args.seed, args.seed + args.seeds), args.family, cfg, timing=not args.no_timing
    )
    if args.csv:
        write_rows(rows, args.csv)
    result = {"medians": {str(n): m for n, m in medians(rows).items()}}
    result["slope"] = fit_slope(rows) if len(args.n) >= 2 else None
    _dump(result)
    return 0


def _engine_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--target-fraction", type=float, default=EngineConfig.target_fraction)
    p.add_argument("--min-piece", type=int, default=EngineConfig.min_piece)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="monocover", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", help="write a lower-bound instance")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--alpha", type=int, default=1)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--meta", help="metadata path (default: <out>.meta.json)")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("cover", help="run the covering engine")
    p.add_argument("--in", "--graph", dest="input", required=True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--alpha", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    _engine_flags(p)
    p.add_argument("--out")
    p.add_argument("--trace")
    p.set_defaults(func=cmd_cover)

    p = sub.add_parser("verify", help="check a covering; exit 0 iff valid")
    p.add_argument("--graph", required=True)
    p.add_argument("--cover", required=True)
    p.add_argument("--s", type=int, required=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("chi", help="chromatic number of the Kneser hypergraph")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--alpha", type=int, default=1)
    p.add_argument("--exact", action="store_true")
    p.add_argument("--budget", type=int, default=5_000_000)
    p.set_defaults(func=cmd_chi)

    p = sub.add_parser("oracle", help="exact minimum covering (n <= 16)")
    p.add_argument("--in", "--graph", dest="input", required=True)
    p.add_argument("--s", type=int, required=True)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("scaling", help="engine sizes over an n grid")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--alpha", type=int, default=1)
    p.add_argument("--n", type=int, nargs="+", required=True)
    p.add_argument("--seeds", type=int, default=5)
    p.add_argument("--seed", type=int, default=0, help="first seed")
    p.add_argument("--family", choices=FAMILIES, default="lower-bound")
    p.add_argument("--csv")
    p.add_argument("--no-timing", action="store_true", help="write runtime_ms as 0 for reproducible rows")
    _engine_flags(p)
    p.set_defaults(func=cmd_scaling)
    return parser


def run(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        kind, msg = "usage", str(exc)
    except (GraphError, ConstructionError) as exc:
        kind, msg = "input", str(exc)
    except (EngineError, OracleBudgetExceeded) as exc:
        kind, msg = "engine", str(exc)
    except (ValueError, OSError) as exc:
        kind, msg = "invalid", str(exc)
    print(f"error: {kind}: {' '.join(msg.split())}", file=sys.stderr)
    return 2


def main() -> None:
    sys.exit(run())
