"""Reconstructing a function that is not quite the target.

The data come from e^x plus a random trigonometric polynomial of degree
n/2. Even without measurement noise such a perturbation lies mostly
outside the reconstruction space, and Q_0 still gives the smallest error
because it minimizes the quasi-optimality constant.
"""

import math

from framerecon import expharness as eh

config = eh.ExperimentConfig(n=90, m_list=(10, 20), snr_list=(math.inf, 20.0, 10.0),
                             trials=20, master_seed=5, mode="bias")
rows = eh.run_bias_table(config)

for m in config.m_list:
    print(f"m = {m}")
    for lam in (0.0, 0.5, 1.0):
        cells = [r for r in rows if r.m == m and r.lam == lam]
        errs = "  ".join(f"{('inf' if math.isinf(r.snr_db) else f'{r.snr_db:g} dB'):>6}: {r.rel_err_mean:.4f}"
                         for r in cells)
        print(f"  lambda = {lam:3.1f}   {errs}")
