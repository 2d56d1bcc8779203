"""Closed-form equilibrium marginals and the clamp-threshold solver.

The pipeline is: raw marginals (which may fall outside [0,1]) -> smallest
shift ``xhat`` making the truncated marginals use exactly the block
capacity -> clamped profile plus the equilibrium price threshold ``w``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvariantViolation, MempoolFitsInBlock, ValidationError, ZeroLatencyError
from .mempool import GameParams, Mempool

BUDGET_RTOL = 1e-9


@dataclass(frozen=True)
class RawMarginals:
    """Unclamped per-transaction marginals, aligned to mempool order."""

    ids: np.ndarray
    values: np.ndarray

    def as_dict(self) -> dict:
        return {int(i): float(v) for i, v in zip(self.ids, self.values)}


@dataclass(frozen=True)
class MarginalProfile:
    """Equilibrium inclusion probabilities with the clamp shift and threshold.

    ``values[i]`` is the probability that the symmetric equilibrium strategy
    packages transaction ``ids[i]``. ``w`` is the common discounted gas price
    v(tx)*exp(-lambda*p(tx)) of every interior transaction.
    """

    ids: np.ndarray
    values: np.ndarray
    xhat: float
    w: float

    def as_dict(self) -> dict:
        return {int(i): float(v) for i, v in zip(self.ids, self.values)}

    def probability(self, txid: int) -> float:
        idx = np.nonzero(self.ids == txid)[0]
        if idx.size == 0:
            raise KeyError(txid)
        return float(self.values[idx[0]])

    def to_json_dict(self) -> dict:
        return {
            "marginals": [
                {"id": int(i), "p": float(v)} for i, v in zip(self.ids, self.values)
            ],
            "xhat": float(self.xhat),
            "w": float(self.w),
        }


def _check_solver_inputs(mempool: Mempool, params: GameParams):
    if len(mempool) == 0:
        raise ValidationError("empty mempool")
    if params.lam == 0:
        raise ZeroLatencyError()


def compute_phat(mempool: Mempool, params: GameParams) -> RawMarginals:
    """Raw equilibrium marginals for unit-size transactions.

    p(tx) = k/m + (ln v(tx) - mean ln v) / lambda. The values sum to k but
    individual entries may lie outside [0,1].
    """
    _check_solver_inputs(mempool, params)
    if not mempool.is_unit_size:
        raise ValidationError("compute_phat requires unit sizes; use compute_phat_real")
    m = len(mempool)
    values = params.k / m + (mempool.log_prices - mempool.log_prices.mean()) / params.lam
    return RawMarginals(mempool.ids, values)


def compute_phat_real(mempool: Mempool, params: GameParams) -> RawMarginals:
    """Raw marginals for arbitrary positive sizes.

    Capacity-weighted analogue of compute_phat: sum of s(tx)*p(tx) equals k.
    Reduces to compute_phat when every size is 1.
    """
    _check_solver_inputs(mempool, params)
    sums = mempool.total_size
    wmean = float(mempool.sizes @ mempool.log_prices) / sums
    values = params.k / sums + (mempool.log_prices - wmean) / params.lam
    return RawMarginals(mempool.ids, values)


def clamp_sum(values: np.ndarray, sizes: np.ndarray, x: float) -> float:
    """Capacity used by the truncated marginals min(max(p - x, 0), 1)."""
    return float(np.clip(values - x, 0.0, 1.0) @ sizes)


def solve_xhat(raw: RawMarginals, sizes: np.ndarray, k: float) -> float:
    """Smallest x with sum_tx min(max(p(tx)-x,0),1)*s(tx) = k.

    The left side is continuous, non-increasing, and piecewise linear with
    breakpoints at p(tx) and p(tx)-1; we bracket the crossing by binary
    search over the sorted breakpoints and interpolate on the bracketed
    linear segment. O(m log m) total.
    """
    p = np.asarray(raw.values, dtype=np.float64)
    sizes = np.asarray(sizes, dtype=np.float64)
    total = float(sizes.sum())
    if total < k * (1.0 - BUDGET_RTOL):
        raise MempoolFitsInBlock(
            f"total capacity {total:g} < block capacity {k:g}; package everything"
        )
    b = np.sort(np.concatenate([p, p - 1.0]))
    # Left of b[0] every term clamps to 1, so f == total there; if total == k
    # the equation holds on an unbounded interval and b[0] is the canonical
    # leftmost finite answer.
    if clamp_sum(p, sizes, b[0]) <= k:
        return float(b[0])
    lo, hi = 0, len(b) - 1  # f(b[lo]) > k, f(b[hi]) = 0 <= k
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if clamp_sum(p, sizes, b[mid]) > k:
            lo = mid
        else:
            hi = mid
    left, right = float(b[lo]), float(b[hi])
    f_left = clamp_sum(p, sizes, left)
    pos = 0.5 * (left + right)
    slope = -float(sizes[(p > pos) & (p < pos + 1.0)].sum())
    if slope == 0.0:
        # Degenerate flat bracket; only reachable through rounding noise.
        return right if f_left > k else left
    return left + (k - f_left) / slope


def clamp_marginals(
    raw: RawMarginals, xhat: float, mempool: Mempool, params: GameParams
) -> MarginalProfile:
    """Truncate raw marginals at xhat and attach the equilibrium threshold w."""
    values = np.clip(raw.values - xhat, 0.0, 1.0)
    sums = mempool.total_size
    log_w = (
        -params.lam * params.k / sums
        + float(mempool.sizes @ mempool.log_prices) / sums
        + params.lam * xhat
    )
    profile = MarginalProfile(mempool.ids, values, float(xhat), float(np.exp(log_w)))
    used = float(values @ mempool.sizes)
    if abs(used - params.k) > BUDGET_RTOL * max(1.0, params.k):
        raise InvariantViolation(
            f"clamped marginals use capacity {used!r}, expected {params.k!r}"
        )
    return profile


def solve_equilibrium(mempool: Mempool, params: GameParams, mode: str = "fixed") -> MarginalProfile:
    """End-to-end equilibrium profile for a mempool.

    mode="fixed" requires unit sizes and integer k; mode="variable" allows
    arbitrary positive sizes. A mempool that fits entirely in one block
    yields the all-ones profile rather than an error.
    """
    if mode == "fixed":
        params.require_integer_k()
        raw = compute_phat(mempool, params)
    elif mode == "variable":
        raw = compute_phat_real(mempool, params)
    else:
        raise ValidationError(f"unknown mode {mode!r}")
    total = mempool.total_size
    if total <= params.k:
        # Everything fits: all marginals are 1 and any shift at or below
        # min(p)-1 clamps to exactly that.
        xhat = float(raw.values.min() - 1.0)
        values = np.ones(len(mempool))
        sums = total
        log_w = (
            -params.lam * params.k / sums
            + float(mempool.sizes @ mempool.log_prices) / sums
            + params.lam * xhat
        )
        return MarginalProfile(mempool.ids, values, xhat, float(np.exp(log_w)))
    xhat = solve_xhat(raw, mempool.sizes, params.k)
    return clamp_marginals(raw, xhat, mempool, params)
