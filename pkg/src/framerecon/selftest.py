"""Oracle invariant suite runnable without pytest.

Every check compares a Gram-level computation with a brute-force
construction on small explicit frames, or verifies an identity that must
hold for any input. Returns one :class:`Check` per property.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import framekit as fk
from . import numkernel as nk
from . import reconstruct as rc

LAMBDAS = (0.0, 0.1, 0.3, 0.5, 0.7, 0.9, 1.0)


@dataclass
class Check:
    name: str
    worst: float
    limit: float

    @property
    def passed(self) -> bool:
        return self.worst <= self.limit


def _cplx(rng, rows, cols):
    return rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))


def random_frames(rng, max_dim=12):
    """A redundant sampling frame and a nearby independent reconstruction system."""
    while True:
        big_n = int(rng.integers(3, max_dim + 1))
        dim_u = int(rng.integers(2, big_n + 1))
        basis = _cplx(rng, big_n, dim_u)
        u = basis @ _cplx(rng, dim_u, int(rng.integers(dim_u, dim_u + 5)))
        m = int(rng.integers(1, dim_u + 1))
        t = basis @ _cplx(rng, dim_u, m) + 0.3 * _cplx(rng, big_n, m)
        s = np.linalg.svd(t, compute_uv=False)
        if s[-1] > 1e-3 * s[0]:
            return fk.FiniteFrame(u), fk.FiniteFrame(t)


def _rel(a, b):
    return float(np.abs(a - b).max() / max(1.0, np.abs(b).max()))


def run(instances: int = 200, seed: int = 0):
    rng = np.random.default_rng(seed)
    worst = {k: 0.0 for k in ("penrose", "pinv_sqrt", "tight1", "oracle", "idempotent",
                              "perfect", "orderings", "quasi_bound")}
    for _ in range(instances):
        u, t = random_frames(rng)
        a = u.vectors
        p = nk.pinv(a)
        worst["penrose"] = max(worst["penrose"], _rel(a @ p @ a, a), _rel(p @ a @ p, p),
                               _rel(a @ p, (a @ p).conj().T), _rel(p @ a, (p @ a).conj().T))
        g = u.gram()
        r = nk.psd_pinv_sqrt(g)
        worst["pinv_sqrt"] = max(worst["pinv_sqrt"], _rel(r @ r, nk.pinv(g)))
        worst["tight1"] = max(worst["tight1"], _rel(r @ a.conj().T, a.conj().T @ nk.psd_pinv_sqrt(u.frame_operator())))

        model = fk.from_finite_frame(u, t)
        norms, mus = [], []
        for lam in LAMBDAS:
            q = rc.build_qlambda(model, lam)
            amb = rc.ambient_matrix(q, u, t)
            worst["oracle"] = max(worst["oracle"], _rel(amb, fk.lambda_projector_oracle(u, t, lam)))
            worst["idempotent"] = max(worst["idempotent"], _rel(amb @ amb, amb))
            worst["perfect"] = max(worst["perfect"], rc.perfectness_defect(q))
            norms.append(rc.operator_norm(q))
            mus.append(rc.quasi_optimality(q))
            worst["quasi_bound"] = max(worst["quasi_bound"], mus[-1] / rc.quasi_bound(model, lam) - 1.0)
        norms, mus = np.array(norms), np.array(mus)
        worst["orderings"] = max(worst["orderings"], norms[-1] / norms.min() - 1.0,
                                 mus[0] / mus.min() - 1.0, abs(mus[0] * model.cos_angle - 1.0))

    limits = {"penrose": 1e-10, "pinv_sqrt": 1e-10, "tight1": 1e-10, "oracle": 1e-8,
              "idempotent": 1e-8, "perfect": 1e-8, "orderings": 1e-8, "quasi_bound": 1e-8}
    return [Check(name, worst[name], limits[name]) for name in worst]
