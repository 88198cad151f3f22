"""Q_lambda on a frame small enough to check by hand.

Sampling vectors e1 and 2 e2 in R^2, reconstruction space spanned by
t = (1, 1)/sqrt(2). Since t lies inside the sampling span the angle is
zero and Q_0 attains mu = 1, while Q_1 has the smaller operator norm.
"""

import numpy as np

from framerecon import framekit as fk
from framerecon import reconstruct as rc

sampling = fk.FiniteFrame(np.diag([1.0, 2.0]))
recon = fk.FiniteFrame(np.array([[1.0], [1.0]]) / np.sqrt(2))
model = fk.from_finite_frame(sampling, recon)

print("cos(phi) =", round(model.cos_angle, 12))
print("frame bounds (A, B) =", model.bounds)
print()
print(f"{'lambda':>7} {'C':>28} {'||Q||':>8} {'mu':>8} {'mu bound':>9} {'kappa':>6}")
for lam in (0.0, 0.25, 0.5, 0.75, 1.0):
    q = rc.build_qlambda(model, lam)
    d = rc.diagnostics(q)
    coeffs = np.array2string(q.coeff_matrix.real.ravel(), precision=5)
    print(f"{lam:7.2f} {coeffs:>28} {d.op_norm:8.5f} {d.quasi_opt:8.5f} {d.quasi_bound:9.5f} {d.kappa:6.3f}")

# In coordinates, Q U^* is an oblique projector onto span(t).
for lam in (0.0, 1.0):
    p = rc.ambient_matrix(rc.build_qlambda(model, lam), sampling, recon)
    oracle = fk.lambda_projector_oracle(sampling, recon, lam)
    print(f"\nQ_{lam:g} U* =\n{p.real.round(6)}\nmatches explicit projector:", np.allclose(p, oracle))
