"""Adiabatic synthesis of the heterodyne beat signal.

In the adiabatic limit (beat frequency far below every relaxation and
Rabi scale) the medium tracks the instantaneous steady state of the
effective model rebuilt with the beating MW Rabi magnitude

    omega_M(t) = sqrt(omega_L^2 + omega_s^2 + 2 omega_L omega_s cos(2 pi delta_f t)).

The trace records delta_T(t) = kappa * (Im rho_21(t) - Im rho_21 at
omega_s = 0), the transmission change a photodetector would see up to the
scale kappa.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, replace

import numpy as np

from .hamiltonian import ModelVariant, build_effective_generator
from .lindblad import DecayRates, steady_state
from .parallel import thread_map
from .system import SystemParams


class AdiabaticityWarning(UserWarning):
    """Beat frequency is not far below the probe relaxation rate."""


class InsufficientSpanError(ValueError):
    """Trace does not cover the required number of beat periods."""


@dataclass(frozen=True)
class HeterodyneTrace:
    times: np.ndarray
    values: np.ndarray
    kappa: float
    variant: ModelVariant
    params: SystemParams

    def __post_init__(self):
        ts = np.asarray(self.times, dtype=float)
        vals = np.asarray(self.values, dtype=float)
        if ts.size != vals.size:
            raise ValueError("times and values differ in length")
        if not np.all(np.diff(ts) > 0):
            raise ValueError("times must be strictly increasing")
        if self.params.delta_f <= 0:
            raise ValueError("delta_f must be > 0 for a beat trace")
        span = ts[-1] - ts[0]
        if span < 2.0 / self.params.delta_f - 1e-9:
            raise ValueError("trace must span at least two beat periods")
        object.__setattr__(self, "times", ts)
        object.__setattr__(self, "values", vals)


def synthesize(params: SystemParams, variant: ModelVariant,
               delta_p_probe: float | None = None, samples_per_period: int = 256,
               n_periods: int = 2, k: int = 1, m_max: int = 50,
               kappa: float = 1.0) -> HeterodyneTrace:
    """Quasi-static heterodyne trace over `n_periods` beat periods.

    Only the effective variants are meaningful here.  The probe operating
    point defaults to the steepest-slope detuning from
    `default_probe_point`.  Warns when delta_f > gamma2/100 (adiabatic
    following becomes questionable).
    """
    if variant not in (ModelVariant.EFFECTIVE, ModelVariant.EFFECTIVE_NO_2ND):
        raise ValueError("heterodyne synthesis supports the effective variants only")
    if samples_per_period < 64:
        raise ValueError("samples_per_period must be >= 64")
    if n_periods < 2:
        raise ValueError("need at least two beat periods")
    if params.delta_f <= 0:
        raise ValueError("delta_f must be > 0")
    gamma2 = params.gamma[1]
    if gamma2 > 0 and params.delta_f > gamma2 / 100.0:
        warnings.warn(
            f"delta_f = {params.delta_f:g} is above gamma2/100 = {gamma2 / 100.0:g}; "
            "the adiabatic approximation degrades",
            AdiabaticityWarning,
            stacklevel=2,
        )
    if delta_p_probe is None:
        delta_p_probe = default_probe_point(params, k=k, m_max=m_max)

    period = 1.0 / params.delta_f
    times = np.linspace(0.0, n_periods * period, n_periods * samples_per_period + 1)
    beat = np.cos(2.0 * np.pi * params.delta_f * times)
    omega_m = np.sqrt(params.omega_L ** 2 + params.omega_s ** 2
                      + 2.0 * params.omega_L * params.omega_s * beat)

    include = variant is ModelVariant.EFFECTIVE
    point = replace(params, delta_p=delta_p_probe)
    rates = DecayRates.from_params(point)

    def im21(om: float) -> float:
        h, _ = build_effective_generator(point, k, include_second_order=include,
                                         omega_M=om, m_max=m_max)
        return float(steady_state(h, rates).imag[1, 0])

    baseline = im21(params.omega_L)
    values = kappa * (np.array(thread_map(im21, omega_m)) - baseline)
    return HeterodyneTrace(times=times, values=values, kappa=kappa,
                           variant=variant, params=point)


def amplitude(trace: HeterodyneTrace) -> float:
    """(max - min)/2 of delta_T over the first full beat period."""
    period = 1.0 / trace.params.delta_f
    span = trace.times[-1] - trace.times[0]
    if span < period - 1e-9:
        raise InsufficientSpanError(
            f"trace spans {span:g} us, below one beat period {period:g} us"
        )
    sel = trace.times <= trace.times[0] + period + 1e-9
    window = trace.values[sel]
    return 0.5 * (window.max() - window.min())


def default_probe_point(params: SystemParams, k: int = 1, m_max: int = 50,
                        span: float = 15.0, points: int = 301,
                        step: float = 0.2) -> float:
    """Probe detuning with the steepest response to the MW Rabi magnitude.

    Coarse deterministic scan: central difference of Im rho_21 with
    respect to omega_M about omega_L, evaluated with the effective model.
    """
    grid = np.linspace(-span, span, points)
    rates = DecayRates.from_params(params)

    def trace_at(om: float) -> np.ndarray:
        def point(dp: float) -> float:
            p = replace(params, delta_p=dp)
            h, _ = build_effective_generator(p, k, omega_M=om, m_max=m_max)
            return float(steady_state(h, rates).imag[1, 0])

        return np.array(thread_map(point, grid))

    upper = trace_at(params.omega_L + step)
    lower = trace_at(params.omega_L - step)
    slope = np.abs(upper - lower) / (2.0 * step)
    return float(grid[int(np.argmax(slope))])
