"""Monte Carlo driver for the nonuniform Fourier experiments.

One trial draws a frequency set, builds the model for every requested
``m``, and evaluates every ``Q_lambda`` on the grid against exact, noisy or
biased data. Each trial owns three independent random streams keyed by
``(master_seed, trial, purpose)``, so any subset of trials reproduces
bit-for-bit regardless of order or worker count.
"""

from __future__ import annotations

import csv
import io
import json
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from typing import List, Optional, Sequence

import numpy as np

from . import fouriersim as fs
from . import reconstruct as rc
from .errors import ContractViolation, IllPosedError, InvariantViolation, NumericalFailure

log = logging.getLogger(__name__)

TABLE_GRID = tuple(round(0.1 * i, 1) for i in range(11))
LOG_GRID = (0.0,) + tuple(float(x) for x in np.logspace(-6, 0, 61))
TABLE_SNRS = (math.inf, 20.0, 10.0)

# Relative slack for the per-realization theorem checks.
CHECK_RTOL = 1e-8
CHECK_ATOL = 1e-12
# Errors this close to the minimum count as ties; the smallest lambda wins.
LAMBDA_OPT_TIE_RTOL = 1e-10

STREAM_TAGS = {"frequencies": 1, "noise": 2, "bias": 3}
_MASK64 = (1 << 64) - 1

AGGREGATE_HEADER = (
    "m", "lambda", "snr_db", "rel_err_mean", "rel_err_std", "op_norm_mean", "op_norm_std",
    "mu_mean", "mu_std", "kappa_mean", "kappa_std", "cos_angle_mean", "cos_angle_std",
    "failed_trials",
)
LAMBDAOPT_HEADER = ("m", "snr_db", "lambda_opt_mean", "lambda_opt_std", "trials", "failed_trials")


def stream(master_seed: int, trial: int, purpose: str, *extra: int) -> np.random.Generator:
    """Counter-based (Philox) generator keyed by seed, trial and purpose."""
    key = [master_seed & _MASK64, trial, STREAM_TAGS[purpose], *extra]
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(key)))


def _snr_key(snr_db: float) -> int:
    return int(np.float64(snr_db).view(np.uint64))


@dataclass
class ExperimentConfig:
    n: int = 90
    m_list: Sequence[int] = (10,)
    lambda_grid: Sequence[float] = TABLE_GRID
    snr_list: Sequence[float] = TABLE_SNRS
    trials: int = 1000
    master_seed: int = 0
    mode: str = "noise"
    output_format: str = "csv"
    solver: str = "direct"
    check_invariants: bool = True
    workers: int = 1

    def __post_init__(self):
        self.m_list = tuple(int(m) for m in self.m_list)
        self.lambda_grid = tuple(float(x) for x in self.lambda_grid)
        self.snr_list = tuple(float(s) for s in self.snr_list)
        if self.n < 1:
            raise ContractViolation("n must be positive")
        if not self.m_list or min(self.m_list) < 0:
            raise ContractViolation("m_list must hold nonnegative counts")
        if self.trials < 1:
            raise ContractViolation("trials must be at least 1")
        grid = self.lambda_grid
        if not grid or any(not 0.0 <= x <= 1.0 for x in grid):
            raise ContractViolation("lambda grid values must lie in [0, 1]")
        if any(b <= a for a, b in zip(grid, grid[1:])):
            raise ContractViolation("lambda grid must be strictly ascending")
        if not self.snr_list or any(math.isnan(s) for s in self.snr_list):
            raise ContractViolation("snr_list must be nonempty and free of NaN")
        if self.mode not in ("noise", "bias"):
            raise ContractViolation(f"mode must be noise or bias, got {self.mode!r}")
        if self.mode == "bias" and self.n % 2:
            raise ContractViolation("bias mode needs an even n")
        if self.output_format not in ("csv", "json"):
            raise ContractViolation(f"unknown output format {self.output_format!r}")
        if self.solver not in ("direct", "cg", "iterative"):
            raise ContractViolation(f"unknown solver {self.solver!r}")
        if self.workers < 1:
            raise ContractViolation("workers must be at least 1")


@dataclass
class TrialResult:
    """Everything one trial produced for one ``m``.

    ``rel_err`` has shape ``(len(lambda_grid), len(snr_list))``; the
    diagnostic arrays have one entry per grid point.
    """

    trial: int
    m: int
    failed: bool = False
    rel_err: Optional[np.ndarray] = None
    op_norm: Optional[np.ndarray] = None
    mu: Optional[np.ndarray] = None
    kappa: Optional[np.ndarray] = None
    cos_angle: float = float("nan")


@dataclass
class AggregateRow:
    m: int
    lam: float
    snr_db: float
    rel_err_mean: float
    rel_err_std: float
    op_norm_mean: float
    op_norm_std: float
    mu_mean: float
    mu_std: float
    kappa_mean: float
    kappa_std: float
    cos_angle_mean: float
    cos_angle_std: float
    failed_trials: int = 0


@dataclass
class LambdaOptPoint:
    m: int
    snr_db: float
    lambda_opt_mean: float
    lambda_opt_std: float
    trials: int
    failed_trials: int = 0


def _violation(what, **dump):
    raise InvariantViolation(f"per-realization check failed: {what}", dump=dump)


def _leq(a, b):
    return a <= b * (1.0 + CHECK_RTOL) + CHECK_ATOL


def _coefficients(q, model, lam, d, solver):
    if solver == "direct" or lam == 0.0:
        return rc.apply(q, d)
    return rc.solve_normal_equations(model, lam, d, method="iterative")


def run_trial(config: ExperimentConfig, trial: int) -> List[TrialResult]:
    """Evaluate one realization of the frequencies for every ``m``."""
    scheme = fs.draw_frequencies(config.n, stream(config.master_seed, trial, "frequencies"))
    norm_sq = fs.EXP_NORM_SQ
    exact = fs.fhat_exp(scheme.omegas)

    # Perturbations depend on (trial, snr) only, so every m sees the same data.
    perturbations = []
    for snr in config.snr_list:
        if config.mode == "noise":
            rng = stream(config.master_seed, trial, "noise", _snr_key(snr))
            noisy = fs.add_noise(exact, fs.NoiseSpec(snr), norm_sq, rng)
            perturbations.append((noisy, float(np.linalg.norm(noisy - exact))))
        else:
            rng = stream(config.master_seed, trial, "bias", _snr_key(snr))
            a = fs.draw_bias(fs.BiasSpec(snr, config.n + 1), config.n, norm_sq, rng)
            perturbations.append((exact + fs.bias_measurements(scheme, a), float(np.linalg.norm(a))))

    grid = config.lambda_grid
    out = []
    for m in config.m_list:
        model = fs.build_fourier_model(scheme, m)
        target = fs.exp_target(scheme, m)
        res = TrialResult(trial, m)
        try:
            cos_phi = model.cos_angle
            rc._require_angle(model)
        except IllPosedError as exc:
            log.info("trial %d, m=%d excluded: %s", trial, m, exc)
            res.failed = True
            out.append(res)
            continue
        res.cos_angle = cos_phi
        res.rel_err = np.empty((len(grid), len(config.snr_list)))
        res.op_norm = np.empty(len(grid))
        res.mu = np.empty(len(grid))
        res.kappa = np.empty(len(grid))
        best = target.best_approx_error(model)
        for i, lam in enumerate(grid):
            q = rc.build_qlambda(model, lam)
            res.op_norm[i] = rc.operator_norm(q)
            res.mu[i] = rc.quasi_optimality(q)
            res.kappa[i] = rc.lsq_condition(model, lam)
            for s, (d, pert_norm) in enumerate(perturbations):
                c = _coefficients(q, model, lam, d, config.solver)
                abs_err, rel = rc.error_norms(c, target, model)
                res.rel_err[i, s] = rel
                if config.check_invariants:
                    if config.mode == "noise":
                        bound = res.mu[i] * best + res.op_norm[i] * pert_norm
                    else:
                        bound = res.mu[i] * (best + pert_norm)
                    if not _leq(abs_err, bound):
                        _violation("error bound", trial=trial, m=m, lam=lam, snr=config.snr_list[s],
                                   error=abs_err, bound=bound)
            if config.check_invariants:
                qb = rc.quasi_bound(model, lam)
                kb = rc.kappa_bound(model, lam)
                if not _leq(res.mu[i], qb):
                    _violation("quasi-optimality bound", trial=trial, m=m, lam=lam, mu=res.mu[i], bound=qb)
                if not _leq(res.kappa[i] ** 2, kb):
                    _violation("condition bound", trial=trial, m=m, lam=lam, kappa=res.kappa[i], bound=kb)
        if config.check_invariants:
            _check_orderings(config, res)
        out.append(res)
    return out


def _check_orderings(config, res):
    grid = config.lambda_grid
    if grid[0] == 0.0:
        mu0 = res.mu[0]
        if not _leq(mu0, res.mu.min()):
            _violation("mu(Q_0) is not minimal", trial=res.trial, m=res.m, mu=res.mu.tolist())
        if not math.isclose(mu0, 1.0 / res.cos_angle, rel_tol=CHECK_RTOL):
            _violation("mu(Q_0) != 1/cos(phi)", trial=res.trial, m=res.m, mu0=mu0, cos=res.cos_angle)
    if grid[-1] == 1.0:
        if not _leq(res.op_norm[-1], res.op_norm.min()):
            _violation("||Q_1|| is not minimal", trial=res.trial, m=res.m, op_norm=res.op_norm.tolist())
    if np.any(np.diff(res.kappa) < -CHECK_RTOL * res.kappa[1:]):
        # Monotone condition numbers are only conjectured; report, do not abort.
        log.info("trial %d, m=%d: kappa not monotone in lambda", res.trial, res.m)


def run_trials(config: ExperimentConfig, trials: Optional[Sequence[int]] = None) -> List[List[TrialResult]]:
    """Results indexed by trial (in the order given), each a list over ``m``."""
    idx = list(range(config.trials)) if trials is None else list(trials)
    if config.workers == 1:
        return [run_trial(config, t) for t in idx]
    with ProcessPoolExecutor(max_workers=config.workers) as pool:
        return list(pool.map(run_trial, [config] * len(idx), idx))


def _mean_std(values):
    v = np.asarray(values, dtype=float)
    if v.size == 0:
        return float("nan"), float("nan")
    mean = float(np.mean(v))
    std = float(np.std(v, ddof=1)) if v.size > 1 else 0.0
    return mean, std


def aggregate(config: ExperimentConfig, results: List[List[TrialResult]]) -> List[AggregateRow]:
    rows = []
    for mi, m in enumerate(config.m_list):
        per_m = [r[mi] for r in results]
        ok = [r for r in per_m if not r.failed]
        failed = len(per_m) - len(ok)
        if not ok:
            raise NumericalFailure(f"every trial failed for m={m}")
        cos_mean, cos_std = _mean_std([r.cos_angle for r in ok])
        for i, lam in enumerate(config.lambda_grid):
            norm = _mean_std([r.op_norm[i] for r in ok])
            mu = _mean_std([r.mu[i] for r in ok])
            kappa = _mean_std([r.kappa[i] for r in ok])
            for s, snr in enumerate(config.snr_list):
                err = _mean_std([r.rel_err[i, s] for r in ok])
                rows.append(AggregateRow(m, lam, snr, *err, *norm, *mu, *kappa, cos_mean, cos_std, failed))
    return rows


def run_noise_table(config: ExperimentConfig) -> List[AggregateRow]:
    if config.mode != "noise":
        raise ContractViolation("run_noise_table needs mode='noise'")
    return aggregate(config, run_trials(config))


def run_bias_table(config: ExperimentConfig) -> List[AggregateRow]:
    if config.mode != "bias":
        raise ContractViolation("run_bias_table needs mode='bias'")
    return aggregate(config, run_trials(config))


def _with(config, **changes):
    params = {f.name: getattr(config, f.name) for f in fields(config)}
    params.update(changes)
    return ExperimentConfig(**params)


def run_lambda_sweep(config: ExperimentConfig, snr_db: float,
                     lambda_grid: Sequence[float] = LOG_GRID) -> List[AggregateRow]:
    """Mean error (and diagnostics) per ``lambda`` at one SNR, for L-curve plots."""
    sweep = _with(config, lambda_grid=tuple(lambda_grid), snr_list=(snr_db,))
    return aggregate(sweep, run_trials(sweep))


def lambda_opt(config: ExperimentConfig, results: List[List[TrialResult]]) -> List[LambdaOptPoint]:
    """Per trial and SNR the grid value minimizing the error; aggregated per ``m``."""
    grid = np.asarray(config.lambda_grid)
    points = []
    for mi, m in enumerate(config.m_list):
        ok = [r[mi] for r in results if not r[mi].failed]
        failed = len(results) - len(ok)
        for s, snr in enumerate(config.snr_list):
            picks = [_argmin_lambda(grid, r.rel_err[:, s]) for r in ok]
            mean, std = _mean_std(picks)
            points.append(LambdaOptPoint(m, snr, mean, std, len(ok), failed))
    return points


def _argmin_lambda(grid, errors):
    best = errors.min()
    return float(grid[np.flatnonzero(errors <= best * (1.0 + LAMBDA_OPT_TIE_RTOL))[0]])


def run_snr_lambdaopt(config: ExperimentConfig) -> List[LambdaOptPoint]:
    return lambda_opt(config, run_trials(config))


def run_tradeoff_curve(config: ExperimentConfig, snr_db: float) -> List[AggregateRow]:
    """Mean ``(mu, ||Q||)`` per ``lambda`` in grid order."""
    curve = _with(config, snr_list=(snr_db,))
    return aggregate(curve, run_trials(curve))


def _fmt(x) -> str:
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    x = float(x)
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return f"{x:.9g}"


def _row_values(row):
    values = list(asdict(row).values())
    return [_fmt(v) for v in values]


def _header_for(rows, kind):
    if kind is None:
        kind = "lambdaopt" if rows and isinstance(rows[0], LambdaOptPoint) else "aggregate"
    return AGGREGATE_HEADER if kind == "aggregate" else LAMBDAOPT_HEADER


def emit_csv(rows, destination, kind: Optional[str] = None) -> None:
    """Write rows with a fixed header; ``destination`` is a path or text stream."""
    header = _header_for(rows, kind)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow(_row_values(row))
    _write(buf.getvalue(), destination)


def emit_json(rows, destination, kind: Optional[str] = None, metadata: Optional[dict] = None) -> None:
    header = _header_for(rows, kind)
    records = []
    for row in rows:
        values = _row_values(row)
        records.append({h: _json_value(v) for h, v in zip(header, values)})
    doc = {"metadata": metadata or {}, "rows": records}
    _write(json.dumps(doc, indent=1) + "\n", destination)


def _json_value(text):
    if text in ("inf", "-inf", "nan"):
        return text
    value = float(text)
    return int(value) if "." not in text and "e" not in text and value.is_integer() else value


def _write(text, destination):
    if hasattr(destination, "write"):
        destination.write(text)
    else:
        with open(destination, "w", newline="") as fh:
            fh.write(text)


def parse_csv(source) -> list:
    """Inverse of :func:`emit_csv` (values as printed, 9 significant digits)."""
    text = source.read() if hasattr(source, "read") else open(source).read()
    reader = csv.reader(io.StringIO(text))
    header = tuple(next(reader))
    cls = AggregateRow if header == AGGREGATE_HEADER else LambdaOptPoint
    if header not in (AGGREGATE_HEADER, LAMBDAOPT_HEADER):
        raise ContractViolation(f"unrecognized header {header}")
    names = [f.name for f in fields(cls)]
    int_fields = {"m", "failed_trials", "trials"}
    rows = []
    for rec in reader:
        kwargs = {name: (int(v) if name in int_fields else float(v)) for name, v in zip(names, rec)}
        rows.append(cls(**kwargs))
    return rows
