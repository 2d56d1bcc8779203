"""Monte-Carlo simulation of the two-period packaging game.

Each round draws a Poisson(lambda) number of blocks i.i.d. from a strategy
and accounts for revenue two ways: the per-miner *exclusive* metric pays a
fee only when exactly one block holds the transaction (matching the game's
utility definition), while the chain-level throughput metric counts each
included transaction once regardless of duplication.

All randomness flows through per-trial substreams derived from the master
seed via numpy's SeedSequence spawn keys, so reports are reproducible and
earlier trials are unaffected by the trial count.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .equilibrium import MarginalProfile, solve_equilibrium
from .errors import ValidationError
from .mempool import GameParams, Mempool, load_mempool_file
from .strategy import Block, MixedStrategy, SegmentSampler
from .verify import greedy_profile

STRATEGY_NAMES = ("equilibrium", "greedy", "uniform-random-k")


@dataclass(frozen=True)
class RoundOutcome:
    gamma: int
    blocks: list
    per_block_exclusive_revenue: list
    duplicated_tx_count: int
    unique_tx_count: int
    wasted_capacity: float
    chain_revenue: float  # each included tx's fee counted once


@dataclass(frozen=True)
class ExperimentReport:
    strategy: str
    trials: int
    seed: int
    mean_exclusive_revenue: float
    stderr_exclusive_revenue: float
    mean_duplication_rate: float
    mean_unique_tx: float
    mean_chain_revenue: float

    def to_json_dict(self) -> dict:
        return {
            "strategy": self.strategy,
            "trials": self.trials,
            "seed": self.seed,
            "mean_exclusive_revenue": float(self.mean_exclusive_revenue),
            "stderr_exclusive_revenue": float(self.stderr_exclusive_revenue),
            "mean_duplication_rate": float(self.mean_duplication_rate),
            "mean_unique_tx": float(self.mean_unique_tx),
            "mean_chain_revenue": float(self.mean_chain_revenue),
        }


class _ProfileSource:
    """Draws blocks from the segment sampler of a marginal profile."""

    def __init__(self, profile: MarginalProfile, k: int):
        self.sampler = SegmentSampler(profile, k)
        self.k = k

    def draw(self, rng: np.random.Generator, n: int) -> np.ndarray:
        if n == 0:
            return np.empty((0, self.k), dtype=np.int64)
        return self.sampler.select_many(rng.random(n))


class _UniformSource:
    """Each block is an independent uniform k-subset of the mempool."""

    def __init__(self, mempool: Mempool, k: int):
        self.ids = mempool.ids
        self.k = min(k, len(mempool))

    def draw(self, rng: np.random.Generator, n: int) -> np.ndarray:
        if n == 0:
            return np.empty((0, self.k), dtype=np.int64)
        keys = rng.random((n, len(self.ids)))
        idx = np.argpartition(keys, self.k - 1, axis=1)[:, : self.k]
        return self.ids[idx]


def _block_source(name: str, mempool: Mempool, params: GameParams):
    k = params.require_integer_k()
    if name == "equilibrium":
        return _ProfileSource(solve_equilibrium(mempool, params), k)
    if name == "greedy":
        return _ProfileSource(greedy_profile(mempool, params), k)
    if name == "uniform-random-k":
        return _UniformSource(mempool, k)
    raise ValidationError(f"unknown strategy {name!r}; expected one of {STRATEGY_NAMES}")


def _round_metrics(mempool: Mempool, block_ids: np.ndarray):
    """Duplication, throughput, and both revenue accountings for one round."""
    fee_of = dict(zip(mempool.ids.tolist(), (mempool.prices * mempool.sizes).tolist()))
    size_of = dict(zip(mempool.ids.tolist(), mempool.sizes.tolist()))
    flat = block_ids.ravel()
    uniq, counts = np.unique(flat, return_counts=True)
    count_of = dict(zip(uniq.tolist(), counts.tolist()))
    per_block = [
        sum(fee_of[t] for t in row.tolist() if count_of[t] == 1) for row in block_ids
    ]
    duplicated = int(np.sum(counts >= 2))
    wasted = float(sum(size_of[t] * (c - 1) for t, c in count_of.items() if c > 1))
    chain = float(sum(fee_of[t] for t in uniq.tolist()))
    return per_block, duplicated, int(len(uniq)), wasted, chain


def simulate_round(
    mempool: Mempool,
    strategy,
    params: GameParams,
    rng: np.random.Generator,
    gamma: int | None = None,
) -> RoundOutcome:
    """One latency window: gamma ~ Poisson(lambda) blocks drawn i.i.d.

    ``strategy`` may be a MarginalProfile, a MixedStrategy, or a block
    source with a ``draw(rng, n)`` method. Pass ``gamma`` to force the
    block count instead of sampling it.
    """
    k = params.require_integer_k()
    if isinstance(strategy, MarginalProfile):
        source = _ProfileSource(strategy, k)
    elif isinstance(strategy, MixedStrategy):
        source = _MixedSource(strategy)
    else:
        source = strategy
    if gamma is None:
        gamma = int(rng.poisson(params.lam))
    block_ids = source.draw(rng, gamma)
    per_block, duplicated, uniq, wasted, chain = _round_metrics(mempool, block_ids)
    size_of = dict(zip(mempool.ids.tolist(), mempool.sizes.tolist()))
    blocks = [
        Block(frozenset(int(t) for t in row), float(sum(size_of[int(t)] for t in row)), f"miner-{j}")
        for j, row in enumerate(block_ids)
    ]
    return RoundOutcome(gamma, blocks, per_block, duplicated, uniq, wasted, chain)


class _MixedSource:
    def __init__(self, strategy: MixedStrategy):
        self.cum = np.cumsum(strategy.atom_probs)
        self.txsets = [np.array(sorted(s), dtype=np.int64) for s in strategy.atom_txids]
        self.k = strategy.k

    def draw(self, rng: np.random.Generator, n: int) -> np.ndarray:
        if n == 0:
            return np.empty((0, self.k), dtype=np.int64)
        idx = np.minimum(
            np.searchsorted(self.cum, rng.random(n), side="right"), len(self.txsets) - 1
        )
        return np.stack([self.txsets[i] for i in idx])


def _trial_rng(seed: int, strategy_index: int, trial: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(strategy_index, trial)))


def run_experiment(config: dict) -> list:
    """Run the configured strategies and return one ExperimentReport each.

    Config keys: mempool (path or Mempool), lambda, k, trials, seed,
    strategies (subset of equilibrium/greedy/uniform-random-k). Identical
    configs produce identical reports.
    """
    mempool = config["mempool"]
    if not isinstance(mempool, Mempool):
        mempool = load_mempool_file(mempool)
    params = GameParams(k=config["k"], lam=config["lambda"])
    trials = int(config["trials"])
    if trials <= 0:
        raise ValidationError(f"trials must be positive, got {trials}")
    seed = int(config.get("seed", 0))
    names = list(config.get("strategies", ["equilibrium"]))

    fees = mempool.prices * mempool.sizes
    id_order = np.argsort(mempool.ids)
    sorted_ids = mempool.ids[id_order]

    reports = []
    for s_idx, name in enumerate(names):
        source = _block_source(name, mempool, params)
        revenue = np.empty(trials)
        dup_rate = np.empty(trials)
        unique_cnt = np.empty(trials)
        chain_rev = np.empty(trials)
        for t in range(trials):
            rng = _trial_rng(seed, s_idx, t)
            gamma = int(rng.poisson(params.lam))
            draws = source.draw(rng, gamma + 1)
            focal, competitors = draws[0], draws[1:]
            if gamma:
                taken = np.isin(focal, competitors.ravel())
                pos = id_order[np.searchsorted(sorted_ids, focal[~taken])]
                revenue[t] = fees[pos].sum()
                flat = competitors.ravel()
                uniq, counts = np.unique(flat, return_counts=True)
                dup_rate[t] = (counts - 1).sum() / flat.size
                unique_cnt[t] = len(uniq)
                chain_rev[t] = fees[id_order[np.searchsorted(sorted_ids, uniq)]].sum()
            else:
                pos = id_order[np.searchsorted(sorted_ids, focal)]
                revenue[t] = fees[pos].sum()
                dup_rate[t] = 0.0
                unique_cnt[t] = 0.0
                chain_rev[t] = 0.0
        reports.append(
            ExperimentReport(
                strategy=name,
                trials=trials,
                seed=seed,
                mean_exclusive_revenue=float(revenue.mean()),
                stderr_exclusive_revenue=float(revenue.std(ddof=1) / np.sqrt(trials)),
                mean_duplication_rate=float(dup_rate.mean()),
                mean_unique_tx=float(unique_cnt.mean()),
                mean_chain_revenue=float(chain_rev.mean()),
            )
        )
    return reports


def measure_exclusion_frequency(
    profile: MarginalProfile, txid: int, params: GameParams, trials: int, seed: int = 0
) -> float:
    """Empirical probability that txid appears in none of a round's blocks.

    Vectorized over all rounds; the closed-form target is exp(-lambda * p).
    """
    rng = np.random.default_rng(seed)
    gammas = rng.poisson(params.lam, trials)
    total = int(gammas.sum())
    sampler = SegmentSampler(profile, params.require_integer_k())
    if total:
        blocks = sampler.select_many(rng.random(total))
        hit = (blocks == txid).any(axis=1).astype(np.int64)
    else:
        hit = np.zeros(0, dtype=np.int64)
    bounds = np.concatenate([[0], np.cumsum(gammas)])
    hit_cum = np.concatenate([[0], np.cumsum(hit)])
    round_hits = hit_cum[bounds[1:]] - hit_cum[bounds[:-1]]
    return float(np.mean(round_hits == 0))
