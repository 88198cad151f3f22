"""Error against lambda at 20 dB, the best lambda per SNR, and the mu/norm trade-off.

With exact data the smallest error always sits at lambda = 0. Noise is
amplified by ||Q_lambda||, which shrinks as lambda grows, so the optimum
moves into the interior as the SNR drops.
"""

import math

import numpy as np

from framerecon import expharness as eh

base = eh.ExperimentConfig(n=90, m_list=(20,), trials=20, master_seed=3)

sweep = eh.run_lambda_sweep(base, 20.0, lambda_grid=eh.LOG_GRID[::5])
print("L-curve at 20 dB (m = 20, 20 realizations)")
for r in sweep:
    print(f"  lambda = {r.lam:9.2e}   mean relative error = {r.rel_err_mean:.4f}")
best = min(sweep, key=lambda r: r.rel_err_mean)
print(f"  minimum near lambda = {best.lam:.2e}")

config = eh.ExperimentConfig(n=90, m_list=(20,), lambda_grid=eh.LOG_GRID,
                             snr_list=(0.0, 10.0, 20.0, 30.0, math.inf), trials=20, master_seed=3)
print("\nmean lambda_opt per SNR")
for p in eh.run_snr_lambdaopt(config):
    print(f"  SNR {p.snr_db:>5} dB: {p.lambda_opt_mean:.4f} +- {p.lambda_opt_std:.4f}")

print("\nmu versus ||Q|| for lambda = 0, 0.1, ..., 1")
curve = eh.run_tradeoff_curve(base, 20.0)
for r in curve:
    print(f"  lambda = {r.lam:3.1f}   mu = {r.mu_mean:7.3f}   ||Q|| = {r.op_norm_mean:7.3f}")
print("  ||Q_1|| is the smallest norm:", np.isclose(curve[-1].op_norm_mean, min(r.op_norm_mean for r in curve)))
