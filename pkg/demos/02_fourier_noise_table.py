"""A reduced noise table for nonuniform Fourier samples of e^x on [-1/2, 1/2].

181 jittered frequencies, reconstruction in 21 integer-frequency
exponentials (m = 10). Fifty realizations instead of a thousand keep the
run short; the SNR = inf column of Q_0 and its mu = kappa = 1 columns are
already sharp.
"""

import math
import sys

from framerecon import expharness as eh

config = eh.ExperimentConfig(n=90, m_list=(10,), trials=50, master_seed=1)
rows = eh.run_noise_table(config)

snrs = config.snr_list
print(f"{'lambda':>6} " + " ".join(f"{'err@' + ('inf' if math.isinf(s) else f'{s:g}dB'):>10}" for s in snrs)
      + f" {'||Q||':>8} {'mu':>7} {'kappa':>7}")
for i, lam in enumerate(config.lambda_grid):
    block = rows[i * len(snrs):(i + 1) * len(snrs)]
    errs = " ".join(f"{r.rel_err_mean:10.4f}" for r in block)
    r = block[0]
    print(f"{lam:6.1f} {errs} {r.op_norm_mean:8.3f} {r.mu_mean:7.3f} {r.kappa_mean:7.3f}")

print("\nmean cos(phi) =", rows[0].cos_angle_mean, " failed trials:", rows[0].failed_trials)
print("\nCSV form of the first rows:")
eh.emit_csv(rows[:3], sys.stdout)
