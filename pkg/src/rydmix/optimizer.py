"""Constrained maximisation of the sensitivity modification coefficient.

For a target MW detuning delta_M the RF field must satisfy
delta_M = a + k*omega with 0 < a <= a_max and omega_min <= omega <=
omega_max, and the achievable sensitivity scales with
eta = |J_k(a/omega)|.  Each integer branch k reduces to a 1-D problem in
omega which is bracketed on a dense grid and polished by golden-section
search; the best branch wins.  The second-order shift is neglected here
(it is orders of magnitude below omega and does not move eta).
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from .bessel import bessel_j, bessel_j_many
from .parallel import thread_map

logger = logging.getLogger(__name__)

GRID_POINTS = 2001
GOLDEN_REL_TOL = 1e-9


class InfeasibleError(ValueError):
    """No (k, omega) satisfies the constraint box for this detuning."""


@dataclass(frozen=True)
class ConstraintBox:
    a_max: float
    omega_min: float
    omega_max: float

    def __post_init__(self):
        if self.a_max <= 0:
            raise ValueError("a_max must be > 0")
        if not 0 < self.omega_min <= self.omega_max:
            raise ValueError("need 0 < omega_min <= omega_max")


@dataclass(frozen=True)
class OptimizationResult:
    delta_M: float
    eta_m: float
    a_star: float
    omega_star: float
    k_star: int


def optimize(delta_M: float, box: ConstraintBox, grid_points: int = GRID_POINTS,
             rel_tol: float = GOLDEN_REL_TOL) -> OptimizationResult:
    """Best modification coefficient for one target detuning.

    Ties between branches resolve to the smallest k, then the smallest
    omega (the grid argmax picks the first maximiser).
    """
    if delta_M <= 0:
        raise InfeasibleError(f"delta_M must be > 0, got {delta_M}")
    best: OptimizationResult | None = None
    for k in range(0, math.ceil(delta_M / box.omega_min) + 1):
        interval = _feasible_interval(delta_M, k, box)
        if interval is None:
            continue
        eta, omega = _branch_maximum(delta_M, k, interval, grid_points, rel_tol)
        if eta <= 0.0:
            continue
        if best is None or eta > best.eta_m:
            a = delta_M if k == 0 else delta_M - k * omega
            best = OptimizationResult(delta_M=float(delta_M), eta_m=float(eta),
                                      a_star=float(a), omega_star=float(omega),
                                      k_star=k)
    if best is None:
        raise InfeasibleError(
            f"no k >= 0 admits 0 < a <= {box.a_max} with omega in "
            f"[{box.omega_min}, {box.omega_max}] for delta_M = {delta_M}"
        )
    return best


def _feasible_interval(delta_M: float, k: int, box: ConstraintBox):
    """Omega interval where a = delta_M - k*omega lies in (0, a_max]."""
    if k == 0:
        if not 0.0 < delta_M <= box.a_max:
            return None
        return box.omega_min, box.omega_max
    lo = max(box.omega_min, (delta_M - box.a_max) / k)
    hi = min(box.omega_max, delta_M / k)
    if lo > hi:
        return None
    return lo, hi


def _branch_objective(delta_M: float, k: int):
    if k == 0:
        return lambda w: abs(bessel_j(0, delta_M / w))
    return lambda w: abs(bessel_j(k, (delta_M - k * w) / w))


def _branch_maximum(delta_M: float, k: int, interval, grid_points: int,
                    rel_tol: float) -> tuple[float, float]:
    lo, hi = interval
    if hi - lo <= 0.0:
        return _branch_objective(delta_M, k)(lo), lo
    omegas = np.linspace(lo, hi, grid_points)
    ratios = delta_M / omegas if k == 0 else (delta_M - k * omegas) / omegas
    valid = (delta_M - k * omegas) > 0 if k > 0 else np.ones_like(omegas, bool)
    values = np.where(valid, np.abs(bessel_j_many(k, np.where(valid, ratios, 1.0))), -1.0)
    best = int(np.argmax(values))
    bracket_lo = omegas[max(best - 1, 0)]
    bracket_hi = omegas[min(best + 1, grid_points - 1)]
    f = _branch_objective(delta_M, k)
    omega = _golden_max(f, bracket_lo, bracket_hi, rel_tol * max(1.0, hi))
    if k > 0 and delta_M - k * omega <= 0.0:
        omega = omegas[best]
    return f(omega), omega


def _golden_max(f, lo: float, hi: float, xtol: float) -> float:
    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - inv_phi * (b - a)
    d = a + inv_phi * (b - a)
    fc, fd = f(c), f(d)
    while b - a > xtol:
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - inv_phi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + inv_phi * (b - a)
            fd = f(d)
    return 0.5 * (a + b)


def sensitivity_map(delta_range, box: ConstraintBox,
                    grid_points: int = GRID_POINTS) -> list[OptimizationResult | None]:
    """optimize() per detuning; infeasible points become None, not errors."""
    deltas = list(delta_range)
    if any(b < a for a, b in zip(deltas, deltas[1:])):
        raise ValueError("delta_range must be sorted ascending")

    def solve(delta_M: float):
        try:
            return optimize(delta_M, box, grid_points=grid_points)
        except InfeasibleError as exc:
            logger.warning("delta_M = %g infeasible: %s", delta_M, exc)
            return None

    return thread_map(solve, deltas)


def sensitivity_in_field_units(result: OptimizationResult,
                               resonant_baseline: float) -> float:
    """Field sensitivity at the optimum, baseline / eta_m."""
    if resonant_baseline <= 0:
        raise ValueError("baseline must be > 0")
    return resonant_baseline / result.eta_m
