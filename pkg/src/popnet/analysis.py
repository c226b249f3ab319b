"""Transition detection, logistic fits, curvature, and batch experiments.

A "transition" is a persistent swap of which group holds the higher mean
centrality as the threshold grows. Curvature summarizes how sharp the swap
is: the averaged absolute logistic growth rates of the two group curves,
zero when no transition happens at all.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, replace

import numpy as np
from scipy.optimize import minimize
from scipy.special import expit
from scipy.stats import spearmanr

from .errors import ArgumentError, ConvergenceError
from .sgc import SGCConfig, generate_sgc, scaled_leader_rate
from .sweep import SweepResult, group_series, threshold_sweep, valid_mask

log = logging.getLogger(__name__)

SIMPLEX_XATOL = 1e-8
SIMPLEX_MAX_EVALS = 10_000


@dataclass
class LogisticFit:
    """y(t) = L / (1 + exp(-g*(t - t0))) fitted by Nelder-Mead least squares."""

    L: float
    g: float
    t0: float
    residual: float
    converged: bool


@dataclass
class TransitionReport:
    transition_threshold: int | None
    persistent: bool
    gap_at_transition: float | None
    degree_changeover_threshold: int | None
    curvature: float

    def to_dict(self) -> dict:
        return {
            "transition_threshold": self.transition_threshold,
            "persistent": self.persistent,
            "gap_at_transition": self.gap_at_transition,
            "degree_changeover_threshold": self.degree_changeover_threshold,
            "curvature": self.curvature,
        }


def detect_transition(series_a, series_b, thresholds=None, valid=None):
    """Smallest t where b overtakes a and stays above for every later valid t.

    ``valid`` masks out thresholds where the graph was empty; trailing
    invalid entries never break persistence. Returns None when b never
    persistently exceeds a.
    """
    a = np.asarray(series_a, dtype=np.float64)
    b = np.asarray(series_b, dtype=np.float64)
    if a.shape != b.shape:
        raise ArgumentError("series length mismatch")
    n = a.shape[0]
    if thresholds is None:
        thresholds = np.arange(n)
    else:
        thresholds = np.asarray(thresholds)
        if thresholds.shape[0] != n:
            raise ArgumentError("thresholds length mismatch")
    if valid is None:
        valid = np.ones(n, dtype=bool)
    else:
        valid = np.asarray(valid, dtype=bool)

    above = b > a
    best = None
    suffix_ok = True
    for i in range(n - 1, -1, -1):
        if not valid[i]:
            continue
        suffix_ok = suffix_ok and bool(above[i])
        if suffix_ok:
            best = int(thresholds[i])
    return best


def fit_logistic(thresholds, values) -> LogisticFit:
    """Least-squares logistic fit via derivative-free simplex minimization.

    Initialized at L = max(values), t0 = the half-max crossing, g = +-1 by
    series direction; stops when the simplex diameter falls below 1e-8 or
    after 10,000 evaluations. A constant series short-circuits to an exact
    g = 0 fit.
    """
    t = np.asarray(thresholds, dtype=np.float64)
    y = np.asarray(values, dtype=np.float64)
    if t.shape != y.shape:
        raise ArgumentError("thresholds/values length mismatch")
    if t.shape[0] < 4:
        raise ArgumentError("logistic fit needs at least 4 points")
    if np.any(y < 0):
        raise ArgumentError("logistic fit expects nonnegative values")

    if np.ptp(y) == 0.0:
        # any flat curve is fit exactly by g = 0 and L = 2*value
        return LogisticFit(L=2.0 * float(y[0]), g=0.0, t0=float(np.median(t)),
                           residual=0.0, converged=True)

    peak = float(y.max())
    increasing = y[-1] >= y[0]
    half = peak / 2.0
    crossing = np.flatnonzero(y >= half) if increasing else np.flatnonzero(y <= half)
    t0 = float(t[crossing[0]]) if crossing.size else float(np.median(t))
    g0 = 1.0 if increasing else -1.0

    def sse(params):
        amp, rate, mid = params
        pred = abs(amp) * expit(rate * (t - mid))
        d = pred - y
        return float(d @ d)

    res = minimize(
        sse, x0=np.array([peak, g0, t0]), method="Nelder-Mead",
        options={"xatol": SIMPLEX_XATOL, "fatol": np.inf,
                 "maxfev": SIMPLEX_MAX_EVALS, "maxiter": SIMPLEX_MAX_EVALS},
    )
    amp, rate, mid = res.x
    # the stopping rule treats the evaluation cap as a normal stop (step-like
    # series leave the objective flat in g, where the simplex can wander);
    # unconverged means the optimizer produced garbage, not that it stopped
    converged = bool(np.isfinite(res.fun) and np.all(np.isfinite(res.x)))
    return LogisticFit(L=abs(float(amp)), g=float(rate), t0=float(mid),
                       residual=float(np.sqrt(res.fun / t.shape[0])),
                       converged=converged)


def curvature(fit_a: LogisticFit, fit_b: LogisticFit, transition_present: bool) -> float:
    """Mean absolute growth rate of the two fits; zero without a transition."""
    if not (fit_a.converged and fit_b.converged):
        raise ConvergenceError("curvature needs converged logistic fits")
    if not transition_present:
        return 0.0
    return (abs(fit_a.g) + abs(fit_b.g)) / 2.0


def degree_changeover(result: SweepResult, group_a: str, group_b: str):
    """First threshold where group_b's mean degree exceeds group_a's."""
    thresholds, a = group_series(result, group_a, "mean_degree")
    _, b = group_series(result, group_b, "mean_degree")
    hits = np.flatnonzero(b > a)
    return int(thresholds[hits[0]]) if hits.size else None


def transition_report(result: SweepResult, group_a: str, group_b: str) -> TransitionReport:
    """Full transition analysis of one sweep (a = early leader, b = late)."""
    thresholds, a = group_series(result, group_a, "mean_eigencentrality")
    _, b = group_series(result, group_b, "mean_eigencentrality")
    ok = valid_mask(result)
    t_star = detect_transition(a, b, thresholds=thresholds, valid=ok)

    gap = None
    if t_star is not None:
        idx = int(np.flatnonzero(thresholds == t_star)[0])
        if idx > 0:
            prev = result.records[idx - 1]
            if len(prev.eigenvalues_normalized) >= 2:
                gap = float(prev.eigenvalues_normalized[1])

    if t_star is None:
        curv = 0.0  # no transition: curvature is zero by definition, no fit needed
    else:
        fit_a = fit_logistic(thresholds[ok], a[ok])
        fit_b = fit_logistic(thresholds[ok], b[ok])
        curv = curvature(fit_a, fit_b, True)
    return TransitionReport(
        transition_threshold=t_star,
        persistent=t_star is not None,
        gap_at_transition=gap,
        degree_changeover_threshold=degree_changeover(result, group_a, group_b),
        curvature=curv,
    )


def derive_seed(master_seed: int, *indices) -> int:
    """Reproducible per-job seed from a master seed and job indices."""
    ss = np.random.SeedSequence([int(master_seed) & 0xFFFFFFFFFFFFFFFF, *indices])
    return int(ss.generate_state(1, np.uint64)[0])


@dataclass
class BetaGridCell:
    alpha: float
    beta: float
    curvatures: list
    transitions: list
    warnings: list

    @property
    def mean_curvature(self) -> float:
        return float(np.mean(self.curvatures))


@dataclass
class BetaGridResult:
    alphas: list
    betas: list
    cells: list  # row-major over (alpha, beta)

    def cell(self, alpha: float, beta: float) -> BetaGridCell:
        for c in self.cells:
            if c.alpha == alpha and c.beta == beta:
                return c
        raise ArgumentError(f"no cell for alpha={alpha}, beta={beta}")

    def surface(self) -> np.ndarray:
        out = np.empty((len(self.alphas), len(self.betas)))
        for i, a in enumerate(self.alphas):
            for j, b in enumerate(self.betas):
                out[i, j] = self.cell(a, b).mean_curvature
        return out


def _run_transition(cfg: SGCConfig, k_eigs: int, threads: int = 1):
    model = generate_sgc(cfg)
    result = threshold_sweep(model.graph, model.meta,
                             groups=["leader", "celebrity"],
                             k_eigs=k_eigs, threads=threads)
    return transition_report(result, "leader", "celebrity"), model.warnings


def beta_grid_experiment(base_cfg: SGCConfig, alpha_grid, beta_grid, reps: int,
                         k_eigs: int = 2, threads: int = 1) -> BetaGridResult:
    """Mean transition curvature for every (alpha, beta) pair, over ``reps``
    independent seeded runs in beta-targeted leader mode."""
    if reps < 1:
        raise ArgumentError("reps must be at least 1")
    cells = []
    for i, alpha in enumerate(alpha_grid):
        for j, beta in enumerate(beta_grid):
            curvatures = []
            transitions = []
            warnings = []
            for rep in range(reps):
                cfg = replace(base_cfg, leader_target="beta",
                              beta_alpha=float(alpha), beta_beta=float(beta),
                              seed=derive_seed(base_cfg.seed, i, j, rep))
                report, run_warnings = _run_transition(cfg, k_eigs, threads)
                curvatures.append(report.curvature)
                transitions.append(report.transition_threshold)
                warnings.extend(run_warnings)
            cells.append(BetaGridCell(float(alpha), float(beta), curvatures,
                                      transitions, warnings))
            log.info("beta grid cell alpha=%s beta=%s mean curvature %.4f",
                     alpha, beta, cells[-1].mean_curvature)
    return BetaGridResult(list(alpha_grid), list(beta_grid), cells)


@dataclass
class DegreeRatioCell:
    ratio: float
    p_leader: float
    seeds: list
    changeover_thresholds: list
    transition_thresholds: list
    skipped: str | None = None


def degree_ratio_experiment(base_cfg: SGCConfig, ratios, reps: int,
                            k_eigs: int = 2, threads: int = 1) -> list:
    """Degree-changeover vs transition thresholds across initial degree ratios.

    For each target ratio the leader attachment rate is rescaled so the
    expected initial leader/celebrity mean-degree ratio matches; infeasible
    rates (outside (p_celeb, 1)) skip the cell with a diagnostic.
    """
    if reps < 1:
        raise ArgumentError("reps must be at least 1")
    cells = []
    for i, ratio in enumerate(ratios):
        p = scaled_leader_rate(base_cfg, float(ratio))
        if p >= 1.0 or p <= 0.0 or p < base_cfg.p_celeb:
            cells.append(DegreeRatioCell(
                float(ratio), p, [], [], [],
                skipped=f"required p_leader={p:.6f} infeasible",
            ))
            log.warning("degree-ratio cell %s skipped: p_leader=%.6f", ratio, p)
            continue
        seeds, changeovers, transitions = [], [], []
        for rep in range(reps):
            seed = derive_seed(base_cfg.seed, i, rep)
            cfg = replace(base_cfg, p_leader=p, seed=seed)
            report, _ = _run_transition(cfg, k_eigs, threads)
            seeds.append(seed)
            changeovers.append(report.degree_changeover_threshold)
            transitions.append(report.transition_threshold)
        cells.append(DegreeRatioCell(float(ratio), p, seeds, changeovers, transitions))
    return cells


def changeover_transition_correlation(cells) -> float:
    """Spearman rank correlation between changeover and transition thresholds,
    pooled over all non-skipped runs where both exist."""
    xs, ys = [], []
    for cell in cells:
        if cell.skipped:
            continue
        for c, t in zip(cell.changeover_thresholds, cell.transition_thresholds):
            if c is not None and t is not None:
                xs.append(c)
                ys.append(t)
    if len(xs) < 3:
        raise ArgumentError("not enough paired thresholds for a rank correlation")
    rho = spearmanr(xs, ys).statistic
    return float(rho)
