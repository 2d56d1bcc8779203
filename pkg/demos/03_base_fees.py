"""Endogenous base-fee bounds from the equilibrium strategy.

v_low is the gas price below which a transaction is never packaged and
v_high the price that guarantees inclusion in every block. The shift-aware
mode accounts for clamping; the plain closed forms only agree when no
marginal had to be clamped.
"""

import numpy as np

from txpack import GameParams, Mempool, Transaction, base_fee, solve_equilibrium

prices = [1.0, np.exp(1), np.exp(-1 / 12), np.exp(5 / 12), 1.0, 1.0, np.exp(-3)]
mempool = Mempool([Transaction(i + 1, v) for i, v in enumerate(prices)])
params = GameParams(k=3, lam=1.0)

for mode in ("xhat_aware", "paper_closed_form"):
    fb = base_fee(mempool, params, mode)
    print(f"{mode:>18}: v_low = {fb.v_low:.6f}   v_high = {fb.v_high:.6f}")

fb = base_fee(mempool, params, "xhat_aware")
profile = solve_equilibrium(mempool, params)
print("\nclassification against the shift-aware bounds:")
for tx, p in zip(mempool, profile.values):
    if tx.gas_price < fb.v_low:
        zone = "below v_low  -> never packaged"
    elif tx.gas_price > fb.v_high:
        zone = "above v_high -> always packaged"
    else:
        zone = "between      -> randomized"
    print(f"  tx{tx.id}: v = {tx.gas_price:.4f}  p = {p:.3f}  {zone}")
