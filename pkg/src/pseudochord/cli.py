"""Command-line entry point.

Exit codes: 0 success, 1 failed verification, 2 invalid input, 3 budget
exceeded, 4 internal invariant violation.
"""
from __future__ import annotations

import argparse
import logging
import os
import sys
import time
from dataclasses import dataclass, replace
from fractions import Fraction

from . import bound, construction, counter, independence, lgv, verify
from .construction import GeometryError, Window
from .counter import BudgetExceeded
from .matching import MatchingError, family_matching, load_matching, serialize_matching
from .subdivision import SubdivisionError

log = logging.getLogger("pseudochord")

EXIT_OK, EXIT_FAILED, EXIT_INPUT, EXIT_BUDGET, EXIT_INTERNAL = 0, 1, 2, 3, 4


@dataclass(frozen=True)
class RunConfig:
    threads: int
    seed: int
    budget: int | None
    fmt: str = "text"

    def __post_init__(self):
        if self.threads < 1:
            raise ValueError("threads must be >= 1")


def _env_int(name: str, default):
    raw = os.environ.get(name)
    if raw is None or raw == "":
        return default
    try:
        return int(raw)
    except ValueError:
        raise ValueError(f"environment variable {name}={raw!r} is not an integer") from None


def make_config(args) -> RunConfig:
    threads = args.threads if args.threads is not None else _env_int("THREADS", None)
    seed = args.seed if args.seed is not None else _env_int("SEED", 0)
    budget = args.budget if args.budget is not None else _env_int("BUDGET", counter.DEFAULT_BUDGET)
    if budget is not None and budget <= 0:
        budget = None
    return RunConfig(threads or os.cpu_count() or 1, seed, budget, args.format)


def _parse_order(text: str) -> list[int]:
    try:
        return [int(t) for t in text.replace(",", " ").split()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad insertion order {text!r}") from None


def count_matching(m, cfg: RunConfig, args) -> int:
    """Count with the options shared by ``count``, ``bn`` and region recomputation."""
    if m.k == 0:
        return 1
    weights = counter.estimate_weights(m, counter.WEIGHT_SAMPLES, cfg.seed)
    if getattr(args, "independence", False):
        return independence.count_with_independence(
            m, args.depth, cfg.seed, trials=args.trials, weights=weights,
            budget=cfg.budget, workers=cfg.threads,
        )
    order = getattr(args, "order", None) or counter.default_order(m, weights)
    return counter.count_arrangements(m, order, workers=cfg.threads, budget=cfg.budget)


def _emit(cfg: RunConfig, text_line: str, tsv_fields) -> None:
    if cfg.fmt == "tsv":
        print("\t".join(str(f) for f in tsv_fields))
    else:
        print(text_line)


def cmd_count(args, cfg: RunConfig) -> int:
    m = load_matching(args.input)
    n = count_matching(m, cfg, args)
    _emit(cfg, str(n), [args.input, m.k, n])
    return EXIT_OK


def cmd_bn(args, cfg: RunConfig) -> int:
    if args.n < 1:
        raise ValueError("n must be >= 1")
    n = count_matching(family_matching([1] * args.n), cfg, args)
    _emit(cfg, str(n), [args.n, n])
    return EXIT_OK


def cmd_verify(args, cfg: RunConfig) -> int:
    tiers = verify.TIERS[: verify.TIERS.index(args.tier) + 1]

    def show(res: verify.Outcome) -> None:
        status = "PASS" if res.ok else "FAIL"
        if cfg.fmt == "tsv":
            print(f"{res.name}\t{res.tier}\t{status}\t{res.seconds:.2f}\t{res.detail}", flush=True)
        else:
            print(f"{status} [{res.tier}] {res.name}: {res.detail} ({res.seconds:.2f}s)", flush=True)

    results = verify.run_checks(tiers, show)
    failed = [r for r in results if not r.ok]
    if cfg.fmt != "tsv":
        print(f"{len(results) - len(failed)}/{len(results)} checks passed")
    return EXIT_FAILED if failed else EXIT_OK


def _table(name: str):
    if os.path.exists(name):
        return bound.load_region_table(name)
    try:
        return bound.builtin_table(name)
    except FileNotFoundError:
        raise ValueError(f"no region table file or builtin table named {name!r}") from None


def cmd_bound(args, cfg: RunConfig) -> int:
    entries = _table(args.table)
    recomputed: dict[str, int] = {}
    for name, source in args.recompute_region or []:
        t0 = time.perf_counter()
        n = count_matching(load_matching(source), cfg, args)
        log.info("%s: %s has %d arrangements (%.2fs)", name, source, n, time.perf_counter() - t0)
        # independent subembeddings of one region multiply
        recomputed[name] = recomputed.get(name, 1) * n
    unknown = set(recomputed) - {e.name for e in entries}
    if unknown:
        raise ValueError(f"regions not in the table: {', '.join(sorted(unknown))}")
    entries = [
        replace(e, count=recomputed[e.name], log2_bound=None, source="computed")
        if e.name in recomputed else e
        for e in entries
    ]
    rep = bound.bound_report(entries, args.r, args.bits)
    sys.stdout.write(rep.tsv() if cfg.fmt == "tsv" else rep.text())
    return EXIT_OK


def cmd_lgv(args, cfg: RunConfig) -> int:
    n = lgv.lgv_count(args.size, args.method)
    lg = lgv.log2_lower(n)
    if cfg.fmt == "tsv":
        print(f"{args.size}\t{lg}" + ("" if args.log2_only else f"\t{n}"))
    elif args.log2_only:
        print(f"log2 >= {lg}")
    else:
        print(n)
    return EXIT_OK


def cmd_regions(args, cfg: RunConfig) -> int:
    regions = construction.named_regions()
    if args.areas or cfg.fmt == "tsv":
        print("signature\tarea\tregion")
        for r in regions:
            print(f"{construction.format_signature(r.signature)}\t{r.area}\t{r.name or '-'}")
        return EXIT_OK
    for r in regions:
        tie = "  (tie resolved by cardinality)" if r.tied else ""
        print(f"{r.name or '?':4} {str(r.area):>6}  {construction.format_signature(r.signature)}{tie}")
    print(f"{len(regions)} regions, total area {sum(r.area for r in regions)}")
    return EXIT_OK


EPSILON_STEPS = 8


def cmd_extract(args, cfg: RunConfig) -> int:
    lines = construction.load_pattern(args.pattern)
    cx, cy = (Fraction(v) for v in args.center)
    side = Fraction(args.side)
    shear = tuple(args.shear) if args.shear else None
    tries = EPSILON_STEPS if args.epsilon_shift else 1
    delta = Fraction(1, 1009)
    for attempt in range(tries):
        shift = delta / 2 ** attempt if attempt else Fraction(0)
        window = Window((cx + shift, cy + shift / 3), side, shear)
        try:
            m = construction.extract_window_matching(lines, window)
            break
        except GeometryError as exc:
            if attempt == tries - 1:
                raise
            log.info("degenerate window (%s); shifting", exc)
    if attempt:
        print(f"window centre shifted to ({window.center[0]}, {window.center[1]})", file=sys.stderr)
    text = serialize_matching(m)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
        print(f"{m.k} chords written to {args.output}", file=sys.stderr)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _add_count_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--order", type=_parse_order, help="explicit insertion order, e.g. 2,0,1")
    p.add_argument("--independence", action="store_true", help="count through independent chords")
    p.add_argument("--trials", type=int, default=independence.DEFAULT_TRIALS,
                   help="random greedy partition trials (default %(default)s)")
    p.add_argument("--depth", type=int, default=independence.DEFAULT_DEPTH,
                   help="recursion depth of the independence scheme (default %(default)s)")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--threads", type=int, help="worker processes (env THREADS; default: all cores)")
    common.add_argument("--seed", type=int, help="seed for sampling and partitions (env SEED; default 0)")
    common.add_argument("--budget", type=int,
                        help=f"max materialized embeddings, <= 0 for none (env BUDGET; default {counter.DEFAULT_BUDGET})")
    common.add_argument("--format", choices=("text", "tsv"), default="text")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="pseudochord", description="Count simple pseudochord arrangements.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("count", parents=[common], help="count arrangements of a matching")
    p.add_argument("input", help='.match file or family such as "(3,2,4)" or "(1)x7"')
    _add_count_options(p)
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("bn", parents=[common], help="number of pseudoline arrangements of order n")
    p.add_argument("n", type=int)
    _add_count_options(p)
    p.set_defaults(func=cmd_bn)

    p = sub.add_parser("verify", parents=[common], help="run the self-check suite")
    p.add_argument("--tier", choices=verify.TIERS, default="fast",
                   help="highest tier to run; lower tiers are included (default fast)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bound", parents=[common], help="assemble the lower bound from a region table")
    p.add_argument("--table", default="rect12", help="table file, or builtin: rect12, matousek, warmup")
    p.add_argument("--r", type=int, default=12, help="number of groups r (default 12)")
    p.add_argument("--bits", type=int, default=bound.DEFAULT_LOG_BITS,
                   help="fractional bits of the rounded-down logarithms; 0 for bit length")
    p.add_argument("--recompute-region", nargs=2, action="append", metavar=("NAME", "MATCHING"),
                   help="replace a region count by counting MATCHING (repeat to multiply sub-windows)")
    _add_count_options(p)
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("lgv", parents=[common], help="determinant count of a grid window")
    p.add_argument("--size", type=int, required=True)
    p.add_argument("--log2-only", action="store_true")
    p.add_argument("--method", choices=("auto", "bareiss", "flint"), default="auto")
    p.set_defaults(func=cmd_lgv)

    p = sub.add_parser("regions", parents=[common], help="regions of the 12-slope construction")
    p.add_argument("--areas", action="store_true", help="TSV of signature, area and region letter")
    p.set_defaults(func=cmd_regions)

    p = sub.add_parser("extract", parents=[common], help="matching cut out of a line pattern by a window")
    p.add_argument("--pattern", required=True,
                   help=f"pattern file or builtin ({', '.join(construction.BUILTIN_PATTERNS)})")
    p.add_argument("--center", nargs=2, required=True, metavar=("X", "Y"))
    p.add_argument("--side", required=True)
    p.add_argument("--shear", nargs=4, type=int, metavar=("A", "B", "C", "D"))
    p.add_argument("--epsilon-shift", action="store_true",
                   help="on a degenerate window retry with a slightly shifted centre")
    p.add_argument("-o", "--output", help="write the .match file here instead of stdout")
    p.set_defaults(func=cmd_extract)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    t0 = time.perf_counter()
    try:
        cfg = make_config(args)
        code = args.func(args, cfg)
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (SubdivisionError, AssertionError) as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except (MatchingError, GeometryError, bound.TableError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    sys.stdout.flush()
    print(f"elapsed {time.perf_counter() - t0:.3f}s", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
