"""
Robustness under economy (node) and relationship (edge) attacks.

R(p) = E(G(p)) / E(G), where G(p) has the first N_p = round(p * M) candidates
of an attack order removed (M = number of economies or relationships).
Deliberate orders are computed once on the intact network. Random attacks
average R over removal subsets: every subset when C(M, N_p) fits in the
sample budget, otherwise a seeded Monte Carlo estimate.
"""

import itertools
import logging
import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

import config
from logic.criticality import Key, criticality, format_key, rank_keys
from logic.efficiency import efficiency
from logic.errors import DegenerateBaseline, IncompatibleStrategy, TradeNetworkError
from logic.network import Network, remove_edge_positions, remove_node_indices
from utils.parallel import ordered_map

logger = logging.getLogger(__name__)

ROBUSTNESS_MODES = (config.MODE_UNWEIGHTED, config.MODE_WEIGHTED)


def check_p_grid(p_grid: Sequence[float]) -> Tuple[float, ...]:
    grid = tuple(float(p) for p in p_grid)
    if not grid:
        raise TradeNetworkError("p-grid is empty")
    if any(not (0.0 <= p <= 1.0) for p in grid):
        raise TradeNetworkError(f"p-grid values must lie in [0, 1], got {grid}")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise TradeNetworkError(f"p-grid must be strictly ascending, got {grid}")
    return grid


def check_attack(kind: str, strategy: str, mode: str) -> None:
    """
    Raises:
        IncompatibleStrategy: in/out on relationships, value on economies,
            unknown names, or a mode other than unweighted/weighted
    """
    if kind not in config.KINDS:
        raise IncompatibleStrategy(f"Unknown removal kind '{kind}', expected one of {config.KINDS}")
    if mode not in ROBUSTNESS_MODES:
        raise IncompatibleStrategy(f"Robustness is defined for {ROBUSTNESS_MODES}, got '{mode}'")

    allowed = config.NODE_STRATEGIES if kind == config.KIND_NODE else config.EDGE_STRATEGIES
    if strategy not in allowed:
        raise IncompatibleStrategy(
            f"Strategy '{strategy}' does not apply to {kind} attacks (allowed: {', '.join(allowed)})"
        )


def removal_count(p: float, candidates: int) -> int:
    """N_p = round(p * M), halves rounded away from zero."""
    # round first so 0.3 * 10 = 3.0000000000000004 stays 3
    return int(math.floor(round(p * candidates, 9) + 0.5))


@dataclass(frozen=True)
class AttackPlan:
    """Removal order for one strategy plus the attack fractions."""

    kind: str
    strategy: str
    mode: str
    order: Tuple[Key, ...]
    p_grid: Tuple[float, ...]

    def __post_init__(self):
        check_attack(self.kind, self.strategy, self.mode)
        object.__setattr__(self, 'p_grid', check_p_grid(self.p_grid))
        object.__setattr__(self, 'order', tuple(self.order))
        if self.strategy == config.STRATEGY_RANDOM and self.order:
            raise IncompatibleStrategy("Random attacks have no fixed removal order")


@dataclass(frozen=True)
class RobustnessSample:
    p: float
    n_removed: int
    robustness: float
    stderr: Optional[float] = None


@dataclass(frozen=True)
class RobustnessCurve:
    year: int
    kind: str
    strategy: str
    mode: str
    samples: Tuple[RobustnessSample, ...]

    def values(self) -> List[float]:
        return [s.robustness for s in self.samples]

    def to_frame(self) -> pd.DataFrame:
        """Columns p, n_removed, R, stderr (NaN when exact)."""
        return pd.DataFrame({
            'p': [s.p for s in self.samples],
            'n_removed': [s.n_removed for s in self.samples],
            'R': [s.robustness for s in self.samples],
            'stderr': [np.nan if s.stderr is None else s.stderr for s in self.samples],
        }, columns=['p', 'n_removed', 'R', 'stderr'])


def _candidates(network: Network, kind: str) -> Tuple[Key, ...]:
    return network.codes if kind == config.KIND_NODE else network.edge_keys


def _remove(network: Network, kind: str, indices) -> Network:
    if kind == config.KIND_NODE:
        return remove_node_indices(network, indices)
    return remove_edge_positions(network, indices)


def _baseline(network: Network, mode: str) -> float:
    baseline = efficiency(network, mode)
    if not baseline > 0:
        raise DegenerateBaseline(
            f"Baseline {mode} efficiency of network {network.year} is {baseline}; robustness undefined"
        )
    return baseline


def attack_order(network: Network, kind: str, strategy: str, mode: str,
                 workers: int = 1, progress: bool = False) -> Tuple[Key, ...]:
    """
    Static removal order, highest score first, criticality tie-break.

    Scores: criticality (in the given mode), import volume (in), export
    volume (out) or relationship volume (value).
    """
    check_attack(kind, strategy, mode)
    if strategy == config.STRATEGY_RANDOM:
        raise IncompatibleStrategy("Random attacks have no fixed removal order")

    if strategy == config.STRATEGY_CRITICALITY:
        return criticality(network, kind, mode, workers, progress).ranking

    if strategy == config.STRATEGY_VALUE:
        keys = network.edge_keys
        volumes = dict(zip(keys, network.volumes.tolist()))
        return rank_keys(keys, volumes, volumes)

    side = network.import_volumes if strategy == config.STRATEGY_IN else network.export_volumes
    keys = network.codes
    scores = dict(zip(keys, side.tolist()))
    volumes = dict(zip(keys, (network.import_volumes + network.export_volumes).tolist()))
    return rank_keys(keys, scores, volumes)


def make_plan(network: Network, kind: str, strategy: str, mode: str,
              p_grid: Optional[Sequence[float]] = None, workers: int = 1,
              progress: bool = False) -> AttackPlan:
    grid = config.default_p_grid() if p_grid is None else p_grid
    check_attack(kind, strategy, mode)
    order = () if strategy == config.STRATEGY_RANDOM else attack_order(
        network, kind, strategy, mode, workers, progress
    )
    return AttackPlan(kind=kind, strategy=strategy, mode=mode, order=order, p_grid=grid)


def robustness_curve(network: Network, plan: AttackPlan,
                     sample_budget: int = config.DEFAULT_SAMPLE_BUDGET,
                     seed: int = config.DEFAULT_SEED, workers: int = 1,
                     progress: bool = False) -> RobustnessCurve:
    """
    R(p) along the plan's cumulative removal order.

    Random plans are delegated to random_robustness with the given budget and seed.

    Raises:
        DegenerateBaseline: E(G) = 0
    """
    if plan.strategy == config.STRATEGY_RANDOM:
        return random_robustness(network, plan.kind, plan.mode, plan.p_grid,
                                 sample_budget, seed, workers=workers, progress=progress)

    candidates = _candidates(network, plan.kind)
    if len(plan.order) != len(candidates) or set(plan.order) != set(candidates):
        raise TradeNetworkError(
            f"Attack order is not a permutation of the {plan.kind} candidates of network {network.year}"
        )

    baseline = _baseline(network, plan.mode)
    position = {key: i for i, key in enumerate(candidates)}
    order = [position[key] for key in plan.order]
    counts = [removal_count(p, len(candidates)) for p in plan.p_grid]

    def evaluate(n_removed: int) -> float:
        if n_removed == 0:
            return 1.0
        return efficiency(_remove(network, plan.kind, order[:n_removed]), plan.mode) / baseline

    values = ordered_map(evaluate, counts, workers=workers, progress=progress,
                         desc=f"{network.year} {plan.kind} {plan.strategy}")

    return RobustnessCurve(
        year=network.year,
        kind=plan.kind,
        strategy=plan.strategy,
        mode=plan.mode,
        samples=tuple(
            RobustnessSample(p=p, n_removed=n, robustness=r)
            for p, n, r in zip(plan.p_grid, counts, values)
        ),
    )


def _subset_rng(seed: int, p_index: int, sample_index: int) -> np.random.Generator:
    # one stream per (p, sample): results do not depend on evaluation order
    return np.random.default_rng([seed, p_index, sample_index])


def random_robustness(network: Network, kind: str, mode: str,
                      p_grid: Optional[Sequence[float]] = None,
                      sample_budget: int = config.DEFAULT_SAMPLE_BUDGET,
                      seed: int = config.DEFAULT_SEED, exhaustive: bool = True,
                      workers: int = 1, progress: bool = False) -> RobustnessCurve:
    """
    Mean R over random removal subsets of size N_p for each p.

    Args:
        network: Snapshot
        kind: node or edge
        mode: unweighted or weighted
        p_grid: Attack fractions (default 0..0.5 step 0.02)
        sample_budget: Subsets per p; enumeration is used when C(M, N_p) fits
        seed: Non-negative integer seed
        exhaustive: Set False to estimate by Monte Carlo even when enumeration fits
        workers: Threads for subset evaluation
        progress: Show a progress bar

    Returns:
        RobustnessCurve; stderr is None for exactly enumerated points and NaN
        when a Monte Carlo point has a single draw
    """
    check_attack(kind, config.STRATEGY_RANDOM, mode)
    grid = check_p_grid(config.default_p_grid() if p_grid is None else p_grid)
    if sample_budget < 1:
        raise TradeNetworkError(f"Sample budget must be at least 1, got {sample_budget}")
    if seed < 0:
        raise TradeNetworkError(f"Seed must be non-negative, got {seed}")

    baseline = _baseline(network, mode)
    m = len(_candidates(network, kind))

    # task: (p index, N_p, sample index, enumerated subset or None to draw one)
    tasks = []
    sizes = []
    for p_index, p in enumerate(grid):
        n_removed = removal_count(p, m)
        combinations = math.comb(m, n_removed)
        if combinations == 1 or (exhaustive and combinations <= sample_budget):
            subsets = itertools.combinations(range(m), n_removed)
            batch = [(p_index, n_removed, s, subset) for s, subset in enumerate(subsets)]
            sizes.append((p, n_removed, len(batch), False))
        else:
            batch = [(p_index, n_removed, s, None) for s in range(sample_budget)]
            sizes.append((p, n_removed, sample_budget, True))
        tasks.extend(batch)

    def evaluate(task) -> float:
        p_index, n_removed, sample_index, subset = task
        if n_removed == 0:
            return 1.0
        if subset is None:
            rng = _subset_rng(seed, p_index, sample_index)
            subset = np.sort(rng.choice(m, size=n_removed, replace=False))
        return efficiency(_remove(network, kind, subset), mode) / baseline

    values = ordered_map(evaluate, tasks, workers=workers, progress=progress,
                         desc=f"{network.year} {kind} random")

    samples = []
    offset = 0
    for p, n_removed, count, sampled in sizes:
        chunk = values[offset:offset + count]
        offset += count
        mean = math.fsum(chunk) / len(chunk)
        stderr = None
        if sampled:
            stderr = float(np.std(chunk, ddof=1) / math.sqrt(len(chunk))) if len(chunk) > 1 else math.nan
        samples.append(RobustnessSample(p=p, n_removed=n_removed, robustness=mean, stderr=stderr))

    logger.debug("Random %s robustness for %d: %d evaluations", kind, network.year, len(tasks))
    return RobustnessCurve(year=network.year, kind=kind, strategy=config.STRATEGY_RANDOM,
                           mode=mode, samples=tuple(samples))


def robustness_grid(network: Network, kind: str, strategies: Sequence[str], mode: str,
                    p_grid: Optional[Sequence[float]] = None,
                    sample_budget: int = config.DEFAULT_SAMPLE_BUDGET,
                    seed: int = config.DEFAULT_SEED, workers: int = 1,
                    progress: bool = False) -> List[RobustnessCurve]:
    """One curve per strategy, in the order given."""
    curves = []
    for strategy in strategies:
        plan = make_plan(network, kind, strategy, mode, p_grid, workers, progress)
        curves.append(robustness_curve(network, plan, sample_budget, seed, workers, progress))
    return curves


def describe_order(plan: AttackPlan, k: int = 5) -> str:
    """Short human-readable head of a removal order for logs."""
    head = ', '.join(format_key(key) for key in plan.order[:k])
    more = '' if len(plan.order) <= k else f", ... ({len(plan.order)} total)"
    return f"{plan.strategy}: {head}{more}"
