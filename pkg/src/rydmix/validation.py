"""Self-contained invariant checks behind the `validate` CLI command.

Every check returns a CheckResult and uses only this package (no external
reference libraries), so a passing run certifies the installed artifact.
The unitary-equivalence check runs on a frequency-reduced geometry to
keep the fixed-step propagator integration fast; the identity being
tested is geometry-independent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .bessel import bessel_j, bessel_j_many
from .hamiltonian import build_effective_generator, build_original, build_rotated, control_rotation
from .lindblad import DecayRates, dissipator, propagate, steady_state
from .optimizer import ConstraintBox, optimize
from .system import TWO_PI, SystemParams, second_order_shift, solve_rf_resonance


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def _result(name: str, measured: float, bound: float, fmt: str = "%.3e") -> CheckResult:
    return CheckResult(name, measured <= bound,
                       f"max deviation {fmt % measured} (bound {fmt % bound})")


def check_bessel_parity() -> CheckResult:
    worst = 0.0
    for n in range(0, 31):
        for x in (0.3, 1.7, 5.0, 9.9, 14.2, 26.0, 40.0):
            worst = max(worst, abs(bessel_j(-n, x) - (-1.0) ** n * bessel_j(n, x)))
    return _result("bessel_parity", worst, 1e-14)


def check_bessel_recurrence() -> CheckResult:
    worst = 0.0
    for n in range(-30, 31):
        for x in np.linspace(0.1, 40.0, 37):
            lhs = bessel_j(n - 1, x) + bessel_j(n + 1, x)
            rhs = (2.0 * n / x) * bessel_j(n, x)
            worst = max(worst, abs(lhs - rhs))
    return _result("bessel_recurrence", worst, 1e-10)


def check_bessel_normalization() -> CheckResult:
    worst = 0.0
    for x in (0.5, 3.0, 8.0, 13.0, 21.0, 33.0, 40.0):
        n_top = math.ceil(x) + 40
        total = sum(bessel_j(n, x) ** 2 for n in range(-n_top, n_top + 1))
        worst = max(worst, abs(total - 1.0))
    return _result("bessel_normalization", worst, 1e-12)


def check_dissipator_trace() -> CheckResult:
    rng = np.random.default_rng(7)
    rates = DecayRates(0.1, 4.0, 0.25, 1.5)
    worst = 0.0
    for _ in range(50):
        m = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        rho = m + m.conj().T
        worst = max(worst, abs(np.trace(dissipator(rho, rates))))
    return _result("dissipator_trace", worst, 1e-14)


def _reference_params() -> SystemParams:
    from .config import reference_params
    return reference_params()


def check_second_order_scaling() -> CheckResult:
    params = _reference_params()
    lo = second_order_shift(params, k=1, omega_M=20.0)
    hi = second_order_shift(params, k=1, omega_M=40.0)
    return _result("second_order_scaling", abs(hi - 4.0 * lo), 1e-12)


def check_rf_tuning_closure() -> CheckResult:
    params = _reference_params()
    tuning = solve_rf_resonance(600.0, 0.5, 1, params)
    retuned = replace(params, omega=tuning.omega, A_prime=params.A + tuning.a)
    shift = second_order_shift(retuned, k=1)
    residual = abs(600.0 - (tuning.a + tuning.omega - shift))
    return _result("rf_tuning_closure", residual, 1e-9)


def check_steady_state_fixed_point() -> CheckResult:
    params = _reference_params()
    rates = DecayRates.from_params(params)
    h, _ = build_effective_generator(params, k=1)
    rho_ss = steady_state(h, rates)
    traj = propagate(lambda t: h, rates, rho_ss, t_end=1.0, dt=2e-4, nu_max=50.0)
    drift = float(np.abs(traj.states[-1] - rho_ss).max())
    return _result("steady_state_fixed_point", drift, 1e-8)


def check_propagation_conservation() -> CheckResult:
    params = _reference_params()
    rates = DecayRates.from_params(params)
    h, _ = build_effective_generator(replace(params, delta_p=3.0), k=1)
    rho0 = np.zeros((4, 4), dtype=complex)
    rho0[0, 0] = 1.0
    traj = propagate(lambda t: h, rates, rho0, t_end=100.0, dt=4e-4,
                     nu_max=50.0, store_stride=500)
    trace_drift = float(np.abs(np.einsum("tii->t", traj.states) - 1.0).max())
    herm_drift = float(np.abs(traj.states - traj.states.conj().transpose(0, 2, 1)).max())
    return _result("propagation_conservation", max(trace_drift, herm_drift), 1e-8)


def _schrodinger_propagator(h_of_t, t_end: float, dt: float) -> np.ndarray:
    """Fixed-step RK4 for dP/dt = -i 2 pi h(t) P, P(0) = identity."""
    prop = np.eye(4, dtype=complex)
    n_steps = int(round(t_end / dt))

    def rhs(p, h):
        return -1j * TWO_PI * (h @ p)

    for step in range(n_steps):
        t = step * dt
        h1 = h_of_t(t)
        h2 = h_of_t(t + 0.5 * dt)
        h4 = h_of_t(t + dt)
        k1 = rhs(prop, h1)
        k2 = rhs(prop + 0.5 * dt * k1, h2)
        k3 = rhs(prop + 0.5 * dt * k2, h2)
        k4 = rhs(prop + dt * k3, h4)
        prop = prop + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return prop


def check_rotated_equivalence(t_end: float = 1.0) -> CheckResult:
    # frequency-reduced geometry so the fixed-step integration stays cheap
    params = SystemParams(
        omega_p_rabi=0.1, omega_c_rabi=2.0, delta_p=0.3, delta_c=2.1,
        omega_L=4.0, omega_s=0.0, delta_f=1e-3, delta_M=60.0,
        A=2.0, A_prime=2.0 + 0.5 * 40.3, omega=40.3,
        gamma=(0.0, 1.0, 0.01, 0.01),
    )
    n_max = 25
    omega_m = params.omega_m_magnitude
    nu_max = (abs(params.delta_c) + params.delta_M + 2 * params.A_prime
              + 10 * params.omega + omega_m)
    dt = 1.0 / (50.0 * nu_max) / 4.0
    p_orig = _schrodinger_propagator(
        lambda t: build_original(params, t, omega_M_value=omega_m), t_end, dt)
    p_rot = _schrodinger_propagator(
        lambda t: build_rotated(params, t, n_max=n_max), t_end, dt)
    n_steps = int(round(t_end / dt))
    u_end = control_rotation(params, n_steps * dt)
    deviation = float(np.linalg.norm(p_rot - u_end.conj().T @ p_orig, ord=2))
    return _result("rotated_equivalence", deviation, 1e-6)


def check_optimizer_grid_agreement() -> CheckResult:
    box = ConstraintBox(a_max=1000.0, omega_min=100.0, omega_max=500.0)
    worst = 0.0
    for delta_m in (150.0, 450.0, 700.0, 1200.0, 1700.0, 2000.0):
        got = optimize(delta_m, box)
        best = 0.0
        for k in range(0, math.ceil(delta_m / box.omega_min) + 1):
            lo = box.omega_min if k == 0 else max(box.omega_min, (delta_m - box.a_max) / k)
            hi = box.omega_max if k == 0 else min(box.omega_max, delta_m / k)
            if k == 0 and not 0 < delta_m <= box.a_max:
                continue
            if lo > hi:
                continue
            omegas = np.linspace(lo, hi, 40001)
            a = np.full_like(omegas, delta_m) if k == 0 else delta_m - k * omegas
            mask = a > 0
            if not mask.any():
                continue
            vals = np.abs(bessel_j_many(k, a[mask] / omegas[mask]))
            best = max(best, float(vals.max()))
        worst = max(worst, abs(got.eta_m - best))
    return _result("optimizer_grid_agreement", worst, 1e-4)


CHECKS = {
    "bessel_parity": check_bessel_parity,
    "bessel_recurrence": check_bessel_recurrence,
    "bessel_normalization": check_bessel_normalization,
    "dissipator_trace": check_dissipator_trace,
    "second_order_scaling": check_second_order_scaling,
    "rf_tuning_closure": check_rf_tuning_closure,
    "steady_state_fixed_point": check_steady_state_fixed_point,
    "propagation_conservation": check_propagation_conservation,
    "rotated_equivalence": check_rotated_equivalence,
    "optimizer_grid_agreement": check_optimizer_grid_agreement,
}


def run_checks(names=None) -> list[CheckResult]:
    if names is None:
        selected = list(CHECKS)
    else:
        unknown = sorted(set(names) - set(CHECKS))
        if unknown:
            raise ValueError(f"unknown checks: {', '.join(unknown)}")
        selected = [n for n in CHECKS if n in set(names)]
    return [CHECKS[name]() for name in selected]
