"""From marginal probabilities to explicit block distributions and samples.

The exact construction lays the nonzero marginals out as consecutive
segments on [0, k] and reads off a block as the segments covering
{r, r+1, ..., r+k-1} for a uniform r in [0, 1). Each segment has length
at most 1, so it covers at most one probe position and every draw has
exactly k transactions. The variable-size path instead draws transactions
independently and rejects draws outside a capacity window.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .equilibrium import MarginalProfile
from .errors import RejectionBudgetExceeded, ValidationError
from .mempool import Mempool

_SUM_TOL = 1e-9


@dataclass(frozen=True)
class Block:
    """A packaged block: the chosen transaction ids and capacity they use."""

    txids: frozenset
    used_capacity: float
    miner_tag: str | None = None


@dataclass(frozen=True)
class MixedStrategy:
    """Explicit finite distribution over k-subsets.

    atom_probs[i] is the probability of packaging exactly the ids in
    atom_txids[i]. Atoms are ordered by their r-interval start.
    """

    atom_probs: np.ndarray
    atom_txids: tuple
    k: int
    intervals: tuple = field(default=())  # (start, end) of each atom's r-interval

    @property
    def support_size(self) -> int:
        return len(self.atom_probs)

    def induced_marginals(self) -> dict:
        """Analytic per-transaction inclusion probabilities of the atoms."""
        out: dict[int, float] = {}
        for prob, txids in zip(self.atom_probs, self.atom_txids):
            for t in txids:
                out[t] = out.get(t, 0.0) + float(prob)
        return out

    def sample(self, r: float) -> Block:
        cum = np.cumsum(self.atom_probs)
        idx = int(np.searchsorted(cum, r, side="right"))
        idx = min(idx, len(self.atom_txids) - 1)
        txids = self.atom_txids[idx]
        return Block(frozenset(txids), float(len(txids)))

    def to_json_dict(self) -> dict:
        return {
            "atoms": [
                {"p": float(p), "txids": sorted(int(t) for t in txids)}
                for p, txids in zip(self.atom_probs, self.atom_txids)
            ]
        }


class SegmentSampler:
    """Segment layout of a profile, reusable across many draws."""

    def __init__(self, profile: MarginalProfile, k: int | None = None):
        values = np.asarray(profile.values, dtype=np.float64)
        total = float(values.sum())
        if k is None:
            k = int(round(total))
        if abs(total - k) > _SUM_TOL * max(1.0, k):
            raise ValidationError(f"profile marginals sum to {total!r}, expected {k}")
        if np.any(values < 0) or np.any(values > 1 + 1e-12):
            raise ValidationError("profile marginals must lie in [0, 1]")
        nz = values > 0.0
        self.k = k
        self.ids = profile.ids[nz]
        cum = np.concatenate([[0.0], np.cumsum(values[nz])])
        cum[-1] = float(k)  # snap drift so probe positions never fall off the end
        self.cum = cum

    def segment_intervals(self) -> list:
        """(txid, start, end) for each nonzero-probability segment."""
        return [
            (int(t), float(a), float(b))
            for t, a, b in zip(self.ids, self.cum[:-1], self.cum[1:])
        ]

    def select(self, r: float) -> np.ndarray:
        """Ids of the k segments covering r, r+1, ..., r+k-1."""
        pos = r + np.arange(self.k, dtype=np.float64)
        idx = np.searchsorted(self.cum, pos, side="right") - 1
        return self.ids[idx]

    def select_many(self, rs: np.ndarray) -> np.ndarray:
        """(n, k) id matrix for a batch of uniform draws."""
        pos = np.asarray(rs, dtype=np.float64)[:, None] + np.arange(self.k)[None, :]
        idx = np.searchsorted(self.cum, pos.ravel(), side="right") - 1
        return self.ids[idx].reshape(len(rs), self.k)


def corresponding_strategy(profile: MarginalProfile, k: int) -> MixedStrategy:
    """Explicit mixed strategy whose marginals equal the profile exactly.

    Atoms are the intervals between the sorted fractional endpoints of the
    segment layout; all r in one interval select the same k-subset.
    """
    sampler = SegmentSampler(profile, k)
    frac = sampler.cum - np.floor(sampler.cum)
    breaks = np.unique(np.concatenate([[0.0, 1.0], frac[(frac > 0.0) & (frac < 1.0)]]))
    # Rounding can split one logical breakpoint into neighbors 1 ulp apart;
    # collapse anything closer than the marginal-reproduction tolerance.
    keep = np.concatenate([[True], np.diff(breaks) > 1e-12])
    keep[-1] = True
    breaks = breaks[keep]
    probs, txsets, intervals = [], [], []
    for a, b in zip(breaks[:-1], breaks[1:]):
        if b - a <= 1e-12:
            continue
        txids = sampler.select(0.5 * (a + b))
        probs.append(b - a)
        txsets.append(frozenset(int(t) for t in txids))
        intervals.append((float(a), float(b)))
    return MixedStrategy(np.array(probs), tuple(txsets), k, tuple(intervals))


def sample_block(source, r: float, k: int | None = None, miner_tag=None) -> Block:
    """Deterministically map r in [0,1) to a block, from a profile or strategy."""
    if not 0.0 <= r < 1.0:
        raise ValidationError(f"r must lie in [0, 1), got {r!r}")
    if isinstance(source, MixedStrategy):
        block = source.sample(r)
        return Block(block.txids, block.used_capacity, miner_tag)
    txids = SegmentSampler(source, k).select(r)
    return Block(frozenset(int(t) for t in txids), float(len(txids)), miner_tag)


def rejection_sample_block(
    mempool: Mempool,
    profile: MarginalProfile,
    k: float,
    rng: np.random.Generator,
    lower: float | None = None,
    max_attempts: int = 10_000,
    miner_tag=None,
    chunk: int = 256,
):
    """Variable-size block sampling by independent draws plus rejection.

    The profile should target a reduced capacity k' <= k (sum of s*p = k').
    Draws each transaction independently with its marginal probability and
    accepts once the drawn capacity lands in [lower, k]; the default lower
    bound is max(0, 2k' - k). Returns (block, attempts).
    """
    p = np.asarray(profile.values, dtype=np.float64)
    sizes = mempool.sizes
    kprime = float(p @ sizes)
    if lower is None:
        lower = max(0.0, 2.0 * kprime - k)
    eps = 1e-12 * max(1.0, k)
    attempts = 0
    while attempts < max_attempts:
        n = min(chunk, max_attempts - attempts)
        draws = rng.random((n, len(p))) < p
        totals = draws @ sizes
        ok = np.nonzero((totals >= lower - eps) & (totals <= k + eps))[0]
        if ok.size:
            i = int(ok[0])
            chosen = np.nonzero(draws[i])[0]
            txids = frozenset(int(mempool.ids[j]) for j in chosen)
            return Block(txids, float(totals[i]), miner_tag), attempts + i + 1
        attempts += n
    raise RejectionBudgetExceeded(max_attempts, 1.0 / (max_attempts + 1))
