"""
Batch orchestration: load trade data once, run one analysis across years,
write result files.

Per-year failures (degenerate baselines, constant series) are logged and
written to a failures file; they never abort the other years.
"""

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Dict, List, Optional, Tuple

import pandas as pd

import config
from data.trade_loader import (
    GroupMap, YearlyNetworks, build_yearly_networks, load_group_file, load_trade_file,
)
from logic.criticality import (
    CriticalityTable, criticality, criticality_time_series, economy_top_relationships,
    format_key, group_criticality_by_year, rank_table_by_year,
)
from logic.efficiency import check_mode, network_summary
from logic.errors import MalformedRow, TradeNetworkError, UnknownNode
from logic.network import Network
from logic.robustness import (
    check_attack, check_p_grid, describe_order, make_plan, robustness_curve,
)
from logic.stats import VOLUME_SIDES, criticality_volume_correlation, volume_time_series
from utils.export import write_result
from utils.parallel import ordered_map

logger = logging.getLogger(__name__)

COMMANDS = ('efficiency', 'criticality', 'robustness', 'correlate', 'volumes')

EFFICIENCY_COLUMNS = ['year', 'N', 'N_e', 'V', 'E_A', 'E_W', 'E_Wbar']
CORRELATION_COLUMNS = ['year', 'mode', 'volume', 'n', 'pearson', 'spearman',
                       'pearson_p', 'spearman_p', 'note']
FAILURE_COLUMNS = ['year', 'mode', 'detail', 'error']
INGEST_COLUMNS = ['year', 'N', 'N_e', 'merged_duplicates', 'self_loops']
SKIPPED_COLUMNS = ['line', 'error']


@dataclass(frozen=True)
class RunConfig:
    """Fully resolved configuration of one run."""

    command: str
    input_path: str
    groups_path: Optional[str] = None
    years: Optional[Tuple[int, ...]] = None
    modes: Tuple[str, ...] = config.DEFAULT_MODES
    kind: str = config.KIND_NODE
    top_k: int = config.DEFAULT_TOP_K
    strategies: Tuple[str, ...] = ()
    p_grid: Tuple[float, ...] = field(default_factory=config.default_p_grid)
    sample_budget: int = config.DEFAULT_SAMPLE_BUDGET
    seed: int = config.DEFAULT_SEED
    output_format: str = config.DEFAULT_FORMAT
    out_dir: str = config.DEFAULT_OUT_DIR
    workers: int = config.DEFAULT_WORKERS
    lenient: bool = False
    economies: Tuple[str, ...] = ()

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise TradeNetworkError(f"Unknown command '{self.command}', expected one of {COMMANDS}")
        for mode in self.modes:
            check_mode(mode)
        if self.kind not in config.KINDS:
            raise TradeNetworkError(f"Unknown kind '{self.kind}', expected one of {config.KINDS}")
        if self.top_k < 1:
            raise TradeNetworkError(f"--top must be at least 1, got {self.top_k}")
        if self.sample_budget < 1:
            raise TradeNetworkError(f"--samples must be at least 1, got {self.sample_budget}")
        if self.seed < 0:
            raise TradeNetworkError(f"--seed must be non-negative, got {self.seed}")
        if self.output_format not in config.OUTPUT_FORMATS:
            raise TradeNetworkError(f"Unknown format '{self.output_format}'")
        if self.workers < 1:
            raise TradeNetworkError(f"--workers must be at least 1, got {self.workers}")
        if self.economies and not (self.command == 'criticality' and self.kind == config.KIND_EDGE):
            raise TradeNetworkError("--economies only applies to criticality with --kind edge")

        object.__setattr__(self, 'p_grid', check_p_grid(self.p_grid))
        object.__setattr__(self, 'economies', tuple(self.economies))
        if self.command == 'robustness':
            strategies = self.strategies or (
                config.NODE_STRATEGIES if self.kind == config.KIND_NODE else config.EDGE_STRATEGIES
            )
            for strategy in strategies:
                for mode in self.modes:
                    check_attack(self.kind, strategy, mode)
            object.__setattr__(self, 'strategies', tuple(strategies))

    def to_dict(self) -> Dict:
        """
        Provenance block embedded in every artifact.

        Execution-only settings (worker count, output directory) are left out:
        they never change results.
        """
        return {
            'tool': config.TOOL_NAME,
            'version': config.TOOL_VERSION,
            'command': self.command,
            'input': self.input_path,
            'groups': self.groups_path,
            'years': list(self.years) if self.years is not None else None,
            'modes': list(self.modes),
            'kind': self.kind,
            'top_k': self.top_k,
            'strategies': list(self.strategies),
            'p_grid': list(self.p_grid),
            'sample_budget': self.sample_budget,
            'seed': self.seed,
            'format': self.output_format,
            'lenient': self.lenient,
            'economies': list(self.economies),
        }


@dataclass
class RunSummary:
    command: str
    years: List[int] = field(default_factory=list)
    files: List[Path] = field(default_factory=list)
    failures: List[Dict] = field(default_factory=list)


class AnalysisRunner:
    """Runs one command of the toolkit over every selected year."""

    def __init__(self, run_config: RunConfig, progress: bool = False):
        self.config = run_config
        self.progress = progress
        self.networks: Optional[YearlyNetworks] = None
        self.groups: Optional[GroupMap] = None
        self.skipped: List[MalformedRow] = []

    def load(self) -> Dict[int, Network]:
        """Read and build the yearly networks, applying the year filter."""
        self.skipped = []
        records = load_trade_file(self.config.input_path, lenient=self.config.lenient,
                                  skipped=self.skipped)
        if self.skipped:
            logger.warning("Skipped %d malformed rows in %s", len(self.skipped), self.config.input_path)

        self.networks = build_yearly_networks(records)
        if self.config.groups_path:
            self.groups = load_group_file(self.config.groups_path)

        selected = self.networks
        if self.config.years is not None:
            wanted = set(self.config.years)
            selected = {year: net for year, net in self.networks.items() if year in wanted}
            missing = sorted(wanted - set(selected))
            if missing:
                logger.warning("Years not present in the data: %s", ', '.join(map(str, missing)))
        if not selected:
            logger.warning("No years selected; writing empty results")

        logger.info("Loaded %d years from %s", len(selected), self.config.input_path)
        return dict(sorted(selected.items()))

    def run(self) -> RunSummary:
        networks = self.load()
        summary = RunSummary(command=self.config.command, years=list(networks))
        self._write_ingest_report(summary)
        handler = getattr(self, f"_run_{self.config.command}")
        handler(networks, summary)

        if summary.failures:
            frame = pd.DataFrame(summary.failures, columns=FAILURE_COLUMNS)
            self._write(frame, f"failures_{self.config.command}", summary)
        return summary

    def _write(self, frame: pd.DataFrame, name: str, summary: RunSummary) -> None:
        path = write_result(frame, Path(self.config.out_dir) / name,
                            self.config.output_format, self.config.to_dict())
        logger.info("Wrote %s", path)
        summary.files.append(path)

    def _write_ingest_report(self, summary: RunSummary) -> None:
        """Cleaning counts for every year in the input, plus any skipped rows."""
        networks = self.networks
        rows = []
        for year in sorted(set(networks) | set(networks.empty_years)):
            network = networks.get(year)
            rows.append({
                'year': year,
                'N': network.n_nodes if network is not None else 0,
                'N_e': network.n_edges if network is not None else 0,
                'merged_duplicates': networks.merged_duplicates.get(year, 0),
                'self_loops': networks.self_loops.get(year, 0),
            })
        self._write(pd.DataFrame(rows, columns=INGEST_COLUMNS), 'ingest_report', summary)

        if self.skipped:
            skipped = [{'line': e.line, 'error': str(e)} for e in self.skipped]
            self._write(pd.DataFrame(skipped, columns=SKIPPED_COLUMNS), 'ingest_skipped', summary)

    def _per_year(self, networks: Dict[int, Network], func: Callable[[Network, int], object]) -> List:
        """Apply func(network, inner_workers) per year; years fan out when workers allow."""
        years = list(networks)
        year_workers = min(self.config.workers, max(1, len(years)))
        inner_workers = 1 if year_workers > 1 else self.config.workers
        return ordered_map(lambda year: func(networks[year], inner_workers), years,
                           workers=year_workers)

    @staticmethod
    def _failure(year: int, mode: str, detail: str, error: Exception) -> Dict:
        logger.warning("%d %s %s: %s", year, mode, detail, error)
        return {'year': year, 'mode': mode, 'detail': detail, 'error': str(error)}

    def _run_efficiency(self, networks: Dict[int, Network], summary: RunSummary) -> None:
        rows = self._per_year(networks, lambda net, workers: network_summary(net, workers))
        self._write(pd.DataFrame(rows, columns=EFFICIENCY_COLUMNS), 'efficiency', summary)

    def _run_criticality(self, networks: Dict[int, Network], summary: RunSummary) -> None:
        cfg = self.config

        def sweep(network: Network, workers: int):
            tables, failures = {}, []
            for mode in cfg.modes:
                try:
                    tables[mode] = criticality(network, cfg.kind, mode, workers, self.progress)
                except TradeNetworkError as e:
                    failures.append(self._failure(network.year, mode, cfg.kind, e))
            return tables, failures

        results = self._per_year(networks, sweep)
        by_mode: Dict[str, List[CriticalityTable]] = {mode: [] for mode in cfg.modes}
        for year, (tables, failures) in zip(networks, results):
            summary.failures.extend(failures)
            for mode, table in tables.items():
                by_mode[mode].append(table)
                self._write(table.to_frame(cfg.top_k), f"criticality_{year}_{mode}_{cfg.kind}", summary)
                for economy in cfg.economies:
                    self._write_economy_relationships(table, economy, summary)

        for mode, tables in by_mode.items():
            if not tables:
                continue
            self._write(rank_table_by_year(tables, cfg.top_k), f"criticality_ranks_{mode}_{cfg.kind}", summary)
            if cfg.kind == config.KIND_NODE:
                self._write(criticality_time_series(tables, cfg.top_k),
                            f"criticality_series_{mode}", summary)
                if self.groups is not None:
                    self._write(group_criticality_by_year(tables, self.groups),
                                f"criticality_groups_{mode}", summary)

    def _write_economy_relationships(self, table: CriticalityTable, economy: str,
                                     summary: RunSummary) -> None:
        try:
            top = economy_top_relationships(table, economy, self.config.top_k)
        except UnknownNode as e:
            summary.failures.append(self._failure(table.year, table.mode, f"edge/{economy}", e))
            return
        frame = pd.DataFrame({
            'rank': list(range(1, len(top) + 1)),
            'key': [format_key(key) for key, _ in top],
            'criticality': [score for _, score in top],
        }, columns=['rank', 'key', 'criticality'])
        self._write(frame, f"criticality_{table.year}_{table.mode}_edge_{economy}", summary)

    def _run_robustness(self, networks: Dict[int, Network], summary: RunSummary) -> None:
        cfg = self.config

        def attack(network: Network, workers: int):
            curves, failures = [], []
            for mode in cfg.modes:
                for strategy in cfg.strategies:
                    try:
                        plan = make_plan(network, cfg.kind, strategy, mode, cfg.p_grid,
                                         workers, self.progress)
                        if plan.order:
                            logger.debug("%d %s order %s", network.year, mode, describe_order(plan))
                        curves.append(robustness_curve(network, plan, cfg.sample_budget, cfg.seed,
                                                       workers, self.progress))
                    except TradeNetworkError as e:
                        failures.append(self._failure(network.year, mode, f"{cfg.kind}/{strategy}", e))
            return curves, failures

        for curves, failures in self._per_year(networks, attack):
            summary.failures.extend(failures)
            for curve in curves:
                name = f"robustness_{curve.year}_{curve.mode}_{curve.kind}_{curve.strategy}"
                self._write(curve.to_frame(), name, summary)

    def _run_correlate(self, networks: Dict[int, Network], summary: RunSummary) -> None:
        cfg = self.config

        def correlate(network: Network, workers: int):
            rows = []
            for mode in cfg.modes:
                try:
                    table = criticality(network, config.KIND_NODE, mode, workers, self.progress)
                except TradeNetworkError as e:
                    rows.extend(self._note_rows(network, mode, e))
                    continue
                for side in VOLUME_SIDES:
                    try:
                        report = criticality_volume_correlation(network, side, mode, table)
                        rows.append({**report.to_dict(), 'note': ''})
                    except TradeNetworkError as e:
                        rows.extend(self._note_rows(network, mode, e, sides=(side,)))
            return rows

        for year, rows in zip(networks, self._per_year(networks, correlate)):
            for row in rows:
                if row['note']:
                    summary.failures.append(self._failure(year, row['mode'], row['volume'], row['note']))
            self._write(pd.DataFrame(rows, columns=CORRELATION_COLUMNS), f"correlate_{year}", summary)

    @staticmethod
    def _note_rows(network: Network, mode: str, error: Exception,
                   sides: Tuple[str, ...] = VOLUME_SIDES) -> List[Dict]:
        nan = float('nan')
        return [{
            'year': network.year, 'mode': mode, 'volume': side, 'n': network.n_nodes,
            'pearson': nan, 'spearman': nan, 'pearson_p': nan, 'spearman_p': nan,
            'note': f"{type(error).__name__}: {error}",
        } for side in sides]

    def _run_volumes(self, networks: Dict[int, Network], summary: RunSummary) -> None:
        if not networks:
            for side in VOLUME_SIDES:
                self._write(pd.DataFrame(columns=['year']), f"volumes_{side}", summary)
            return
        for side, frame in volume_time_series(networks, self.config.top_k).items():
            self._write(frame, f"volumes_{side}", summary)
