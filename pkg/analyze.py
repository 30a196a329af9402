"""
Command-line entry point.

    python analyze.py efficiency  --input trade.csv
    python analyze.py criticality --input trade.csv --kind edge --top 10 --economies USA,CHN
    python analyze.py robustness  --input trade.csv --kind node --strategies random,criticality
    python analyze.py correlate   --input trade.csv --years 2001-2017
    python analyze.py volumes     --input trade.csv --top 10

Exit codes: 0 success, 1 usage error, 2 data error.
"""

import argparse
import logging
import math
import sys
from typing import List, Optional, Tuple

import config
from logic.errors import TradeNetworkError
from pipeline.runner import COMMANDS, AnalysisRunner, RunConfig

logger = logging.getLogger("analyze")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse exits with 2 on bad usage; this tool reserves 2 for data errors."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(config.EXIT_USAGE, f"{self.prog}: error: {message}\n")


def parse_years(text: Optional[str]) -> Optional[Tuple[int, ...]]:
    """'2001,2005-2007' -> (2001, 2005, 2006, 2007)."""
    if text is None:
        return None
    years = set()
    for part in filter(None, (p.strip() for p in text.split(','))):
        try:
            if '-' in part:
                start, stop = (int(x) for x in part.split('-', 1))
                if stop < start:
                    raise UsageError(f"Empty year range '{part}'")
                years.update(range(start, stop + 1))
            else:
                years.add(int(part))
        except ValueError:
            raise UsageError(f"Invalid year '{part}'") from None
    return tuple(sorted(years))


def parse_p_grid(text: Optional[str]) -> Tuple[float, ...]:
    """'0,0.1,0.2' or 'start:stop:step' (stop included)."""
    if text is None:
        return config.default_p_grid()
    try:
        if ':' in text:
            start, stop, step = (float(x) for x in text.split(':'))
            if step <= 0:
                raise UsageError("p-grid step must be positive")
            # stop is inclusive up to float drift, never exceeded
            count = math.floor((stop - start) / step + 1e-9)
            return tuple(round(start + i * step, 10) for i in range(count + 1))
        return tuple(float(x) for x in text.split(',') if x.strip())
    except ValueError:
        raise UsageError(f"Invalid p-grid '{text}'") from None


def parse_list(text: Optional[str]) -> Tuple[str, ...]:
    if text is None:
        return ()
    return tuple(x.strip() for x in text.split(',') if x.strip())


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="analyze", description="Trade network efficiency, criticality and robustness.")
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--input", required=True, help="Trade CSV: year,exporter,importer,volume")
    parser.add_argument("--groups", help="Group CSV: economy,group (e.g. continents)")
    parser.add_argument("--years", help="Year filter, e.g. 2001,2008,2015-2017")
    parser.add_argument("--mode", help=f"Comma-separated modes from {', '.join(config.MODES)} "
                                       f"(default: {','.join(config.DEFAULT_MODES)})")
    parser.add_argument("--kind", choices=config.KINDS, default=config.KIND_NODE)
    parser.add_argument("--top", type=int, default=config.DEFAULT_TOP_K)
    parser.add_argument("--economies", help="Economy codes whose top relationships get their own file "
                                             "(criticality --kind edge), e.g. USA,RUS,CHN")
    parser.add_argument("--strategies", help=f"Comma-separated from {', '.join(config.STRATEGIES)}")
    parser.add_argument("--p-grid", help="Attack fractions: '0,0.1,0.2' or 'start:stop:step'")
    parser.add_argument("--samples", type=int, default=config.DEFAULT_SAMPLE_BUDGET,
                        help="Monte Carlo budget per p for random attacks")
    parser.add_argument("--seed", type=int, default=config.DEFAULT_SEED)
    parser.add_argument("--format", choices=config.OUTPUT_FORMATS, default=config.DEFAULT_FORMAT)
    parser.add_argument("--out-dir", default=config.DEFAULT_OUT_DIR)
    parser.add_argument("--workers", type=int, default=config.DEFAULT_WORKERS)
    parser.add_argument("--lenient", action="store_true", help="Skip malformed rows instead of failing")
    parser.add_argument("--progress", action="store_true", help="Show progress bars")
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument("--verbose", "-v", action="store_true")
    verbosity.add_argument("--quiet", "-q", action="store_true")
    return parser


def resolve_config(args: argparse.Namespace) -> RunConfig:
    modes = parse_list(args.mode) or config.DEFAULT_MODES
    try:
        return RunConfig(
            command=args.command,
            input_path=args.input,
            groups_path=args.groups,
            years=parse_years(args.years),
            modes=modes,
            kind=args.kind,
            top_k=args.top,
            strategies=parse_list(args.strategies),
            p_grid=parse_p_grid(args.p_grid),
            sample_budget=args.samples,
            seed=args.seed,
            output_format=args.format,
            out_dir=args.out_dir,
            workers=args.workers,
            lenient=args.lenient,
            economies=parse_list(args.economies),
        )
    except TradeNetworkError as e:
        raise UsageError(str(e)) from None


def print_banner(run_config: RunConfig) -> None:
    print("=" * 80)
    print(f"{config.TOOL_NAME} {config.TOOL_VERSION} - {run_config.command}")
    print("=" * 80)
    for key, value in run_config.to_dict().items():
        if key in ('tool', 'version', 'command'):
            continue
        if key == 'p_grid':
            value = f"{value[0]}..{value[-1]} ({len(value)} points)"
        print(f"  {key:<14} {value}")
    print(f"  {'workers':<14} {run_config.workers}")
    print(f"  {'out_dir':<14} {run_config.out_dir}")
    print()


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    level = logging.DEBUG if args.verbose else logging.WARNING if args.quiet else logging.INFO
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")

    try:
        run_config = resolve_config(args)
    except UsageError as e:
        parser.print_usage(sys.stderr)
        print(f"analyze: error: {e}", file=sys.stderr)
        return config.EXIT_USAGE

    if not args.quiet:
        print_banner(run_config)

    try:
        summary = AnalysisRunner(run_config, progress=args.progress).run()
    except (TradeNetworkError, OSError) as e:
        logger.error("%s", e)
        return config.EXIT_DATA

    if not args.quiet:
        print(f"✅ {summary.command}: {len(summary.years)} years, {len(summary.files)} files written")
        if summary.failures:
            print(f"⚠️  {len(summary.failures)} per-year failures (see failures_{summary.command} file)")
    return config.EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
