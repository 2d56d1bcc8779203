"""Expected utility, best responses, and Nash-equilibrium verification.

A miner facing symmetric opponents with marginals q earns, conditional on
mining a block, sum over tx of p_own(tx) * v(tx) * exp(-lambda * q(tx)):
the exponential factor is the probability that none of a Poisson(lambda)
number of competing blocks contains tx. Utility is linear in the miner's
own marginals, so pure k-subsets span all deviations.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .equilibrium import MarginalProfile
from .errors import ValidationError
from .mempool import GameParams, Mempool


@dataclass(frozen=True)
class UtilityReport:
    """Expected gas fee conditional on mining, with per-transaction terms."""

    value: float
    per_tx: dict

    @classmethod
    def from_contributions(cls, ids, contributions):
        per_tx = {int(i): float(c) for i, c in zip(ids, contributions)}
        return cls(float(np.sum(contributions)), per_tx)


@dataclass(frozen=True)
class EquilibriumVerdict:
    passes: bool
    w: float
    worst_violation: float
    witness: dict | None = None

    def to_json_dict(self) -> dict:
        doc = {
            "passes": bool(self.passes),
            "w": float(self.w),
            "worst_violation": float(self.worst_violation),
        }
        if self.witness is not None:
            doc["witness"] = {
                "txids": sorted(int(t) for t in self.witness["txids"]),
                "utility_gain": float(self.witness["utility_gain"]),
            }
        return doc


def _own_vector(own, mempool: Mempool) -> np.ndarray:
    """Normalize a profile, mapping, or pure id-set to marginals in mempool order."""
    if isinstance(own, MarginalProfile):
        if len(own.ids) != len(mempool) or not np.array_equal(own.ids, mempool.ids):
            raise ValidationError("profile does not match the mempool")
        return np.asarray(own.values, dtype=np.float64)
    if isinstance(own, dict):
        return np.array([own.get(int(i), 0.0) for i in mempool.ids], dtype=np.float64)
    chosen = set(int(t) for t in own)
    unknown = chosen - set(int(i) for i in mempool.ids)
    if unknown:
        raise ValidationError(f"pure strategy contains unknown ids {sorted(unknown)}")
    return np.array([1.0 if int(i) in chosen else 0.0 for i in mempool.ids])


def discounted_prices(others: MarginalProfile, mempool: Mempool, params: GameParams) -> np.ndarray:
    """v(tx) * exp(-lambda * q(tx)) against opponents' marginals q."""
    q = _own_vector(others, mempool)
    return mempool.prices * np.exp(-params.lam * q)


def expected_utility(own, others: MarginalProfile, mempool: Mempool, params: GameParams) -> UtilityReport:
    p_own = _own_vector(own, mempool)
    if np.any(p_own < 0) or np.any(p_own > 1 + 1e-12):
        raise ValidationError("own marginals must lie in [0, 1]")
    contributions = p_own * discounted_prices(others, mempool, params)
    return UtilityReport.from_contributions(mempool.ids, contributions)


def best_response(others: MarginalProfile, mempool: Mempool, params: GameParams):
    """Top-k pure strategy against opponents' marginals; ties by input order.

    Returns (tuple of txids in input order, UtilityReport).
    """
    k = params.require_integer_k()
    vt = discounted_prices(others, mempool, params)
    if k >= len(mempool):
        chosen = np.arange(len(mempool))
    else:
        order = np.argsort(-vt, kind="stable")  # stable keeps input order on ties
        chosen = np.sort(order[:k])
    txids = tuple(int(mempool.ids[i]) for i in chosen)
    return txids, expected_utility(set(txids), others, mempool, params)


def verify_equilibrium(
    profile: MarginalProfile, mempool: Mempool, params: GameParams, tol: float = 1e-9
) -> EquilibriumVerdict:
    """Check the threshold condition plus absence of a profitable deviation.

    Requires a w such that every zero-probability transaction has discounted
    price <= w, every certainly-included one >= w, and every interior one
    == w. Violations are measured relative to w.
    """
    p = _own_vector(profile, mempool)
    vt = discounted_prices(profile, mempool, params)
    zero = p <= 0.0
    one = p >= 1.0
    interior = ~zero & ~one

    w = profile.w if getattr(profile, "w", None) else None
    if w is None:
        if interior.any():
            w = float(np.median(vt[interior]))
        else:
            lo = float(vt[zero].max()) if zero.any() else -math.inf
            hi = float(vt[one].min()) if one.any() else math.inf
            w = 0.5 * (max(lo, 0.0) + hi) if math.isfinite(hi) else max(lo, 1.0)
    scale = max(abs(w), 1e-300)

    violations = [0.0]
    if interior.any():
        violations.append(float(np.abs(vt[interior] - w).max()) / scale)
    if zero.any():
        violations.append(max(0.0, float(vt[zero].max()) - w) / scale)
    if one.any():
        violations.append(max(0.0, w - float(vt[one].min())) / scale)
    worst = max(violations)

    br_set, br_util = best_response(profile, mempool, params)
    sym_util = expected_utility(profile, profile, mempool, params)
    gain = br_util.value - sym_util.value
    worst = max(worst, gain / max(abs(sym_util.value), 1.0))

    passes = worst <= tol
    witness = None
    if not passes and gain > 0:
        witness = {"txids": br_set, "utility_gain": gain}
    return EquilibriumVerdict(passes, float(w), float(worst), witness)


def brute_force_check(
    mempool: Mempool, params: GameParams, profile: MarginalProfile, tol: float = 1e-8
) -> EquilibriumVerdict:
    """Enumerate every pure k-subset deviation against the profile.

    Utility is linear in own marginals, so no mixed deviation can beat the
    best pure one. Limited to small instances by design.
    """
    k = params.require_integer_k()
    m = len(mempool)
    n_subsets = math.comb(m, min(k, m))
    if m > 20 or n_subsets > 1_000_000:
        raise ValidationError(f"instance too large for enumeration (m={m}, C(m,k)={n_subsets})")
    vt = discounted_prices(profile, mempool, params)
    sym = expected_utility(profile, profile, mempool, params).value

    best_gain = -math.inf
    best_set: tuple = ()
    for combo in itertools.combinations(range(m), min(k, m)):
        u = float(vt[list(combo)].sum())
        if u - sym > best_gain:
            best_gain = u - sym
            best_set = combo
    passes = best_gain <= tol
    witness = None
    if not passes:
        witness = {
            "txids": tuple(int(mempool.ids[i]) for i in best_set),
            "utility_gain": best_gain,
        }
    w = profile.w if getattr(profile, "w", None) else float("nan")
    return EquilibriumVerdict(passes, w, float(max(best_gain, 0.0)), witness)


def greedy_profile(mempool: Mempool, params: GameParams) -> MarginalProfile:
    """Deterministic top-k-by-price profile (the naive packaging strategy)."""
    k = params.require_integer_k()
    order = np.argsort(-mempool.prices, kind="stable")
    values = np.zeros(len(mempool))
    values[order[: min(k, len(mempool))]] = 1.0
    return MarginalProfile(mempool.ids, values, xhat=0.0, w=0.0)


def uniform_profile(mempool: Mempool, params: GameParams) -> MarginalProfile:
    """Every transaction equally likely: p = k/m."""
    m = len(mempool)
    values = np.full(m, min(params.k / m, 1.0))
    return MarginalProfile(mempool.ids, values, xhat=0.0, w=0.0)
