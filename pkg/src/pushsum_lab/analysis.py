"""Consensus-error series, the geometric rate certificate, and empirical
rate estimation.

The certificate states that the l2 distance of the estimates from the exact
average is bounded by c * rho^k for every round k, with
rho = (1 - eta^(N-1))^(1/(N-1)) and c assembled from the run's early x-mass
magnitudes.  For small eta the certificate is extremely loose (rho sits just
below 1); the informative empirical counterpart is the fitted per-round
contraction factor of the error tail.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .engine import RunRecord


class AnalysisError(ValueError):
    pass


def consensus_error(run: RunRecord) -> np.ndarray:
    """e(k): l2 distance of the estimates from the initial-average consensus
    point, one value per recorded round (all coordinates pooled in the
    vector case)."""
    target = run.x[0].mean(axis=0)
    dev = run.z - target
    return np.sqrt((dev.reshape(run.rounds + 1, -1) ** 2).sum(axis=1))


def theoretical_rho(n_agents: int, eta: float) -> float:
    """(1 - eta^(N-1))^(1/(N-1)); underflows to 1.0 for very large N."""
    if n_agents <= 2:
        raise AnalysisError(f"need more than 2 agents, got {n_agents}")
    if not 0 < eta < 1:
        raise AnalysisError(f"eta={eta} outside (0, 1)")
    p = n_agents - 1
    return float(np.exp(np.log1p(-(eta**p)) / p))


@dataclass(frozen=True)
class RateBound:
    """Constants of the geometric error envelope e(k) <= c * rho^k."""

    rho: float
    c0: float
    c1: float
    c2: float
    c3: float
    c: float
    eta: float
    n_agents: int
    K: int
    x_l1_norms: tuple[float, ...]  # ||x(k)||_1 for k = 0..K+1


def bound_constants(run: RunRecord, eta: float) -> RateBound:
    """Evaluate the envelope constants on a finished run.

    c is the largest of c1 and the per-round candidates
    (c2 * rho^(-k) + c3) * ||x(k)||_1 for k = 0..K+1.
    """
    n = run.n
    k_horizon = run.schedule.K
    if k_horizon < 0:
        raise AnalysisError("bound constants need a perturbed-schedule run")
    rho = theoretical_rho(n, eta)
    if rho >= 1.0:
        raise AnalysisError(
            "rate formula underflows to 1.0 at this scale; no finite envelope"
        )
    eta_pow = eta ** (n - 1)  # equals 1 - rho^(n-1) exactly
    c0 = 2.0 * (1.0 + rho ** (-(n - 1))) / eta_pow
    x_flat = run.x.reshape(run.rounds + 1, -1)
    l1 = [float(np.abs(x_flat[k]).sum()) for k in range(k_horizon + 2)]
    c1 = 2.0 * np.sqrt(n) * c0 * l1[k_horizon + 1] * eta ** (-n) * rho ** (-k_horizon - 2)
    c2 = 2.0 * np.sqrt(n) * eta ** (-n) - (n - 1) / np.sqrt(n)
    c3 = c0 * eta ** (-n) / (np.sqrt(n) * rho)
    candidates = [c1] + [(c2 * rho ** (-k) + c3) * l1[k] for k in range(k_horizon + 2)]
    return RateBound(
        rho=rho, c0=float(c0), c1=float(c1), c2=float(c2), c3=float(c3),
        c=float(max(candidates)), eta=eta, n_agents=n, K=k_horizon,
        x_l1_norms=tuple(l1),
    )


def verify_bound(series, bound: RateBound) -> tuple[bool, int, float]:
    """Check e(k) <= c * rho^k (with 1e-9 slack) against an error series.

    Returns ``(holds, worst_k, worst_ratio)`` where the worst ratio is
    max_k e(k) / (c * rho^k).
    """
    series = np.asarray(series, dtype=float)
    envelope = bound.c * bound.rho ** np.arange(len(series))
    ratios = series / envelope
    worst_k = int(np.argmax(ratios))
    worst = float(ratios[worst_k])
    return worst <= 1.0 + 1e-9, worst_k, worst


def fit_linear_rate(series, tail_fraction: float) -> float:
    """Per-round contraction factor exp(slope of log e(k)) fitted on the last
    ``tail_fraction`` of the series.

    Zero entries are excluded; if the whole tail is exactly zero the series
    already converged and 0.0 is returned.
    """
    if not 0 < tail_fraction <= 1:
        raise AnalysisError(f"tail_fraction={tail_fraction} outside (0, 1]")
    series = np.asarray(series, dtype=float)
    if np.any(series < 0):
        raise AnalysisError("error series has negative entries")
    start = len(series) - max(2, int(np.ceil(tail_fraction * len(series))))
    ks = np.arange(len(series))[max(0, start):]
    tail = series[max(0, start):]
    keep = tail > 0
    if not keep.any():
        return 0.0
    if keep.sum() < 2:
        raise AnalysisError("too few positive entries in the fitted tail")
    slope = np.polyfit(ks[keep], np.log(tail[keep]), 1)[0]
    return float(np.exp(slope))


def write_error_csv(series, path) -> None:
    """``round,error`` rows."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["round", "error"])
        for k, e in enumerate(np.asarray(series, dtype=float)):
            w.writerow([k, repr(float(e))])
