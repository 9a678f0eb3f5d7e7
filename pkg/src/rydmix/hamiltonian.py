"""Builders for the three four-level model Hamiltonians.

All builders return H/(2*pi*hbar) as a 4x4 complex array in the x(2 pi)
MHz convention of `system`.  Three models are covered:

* original    -- time-dependent interaction-picture form with explicit
                 drive phases and the Stark modulation on the diagonal,
* rotated     -- the same dynamics after removing the Stark modulation by
                 a unitary, which expands each leg into Bessel-weighted
                 sidebands,
* effective   -- the time-independent reduction keeping one sideband per
                 leg plus the second-order shift.

`build_effective` returns the matrix with positive detunings on the
diagonal (its eigenvalues read directly as detunings); the physical
Hamiltonian carries the opposite overall sign, so use
`build_effective_generator` when feeding a Lindblad solver.
"""

from __future__ import annotations

import cmath
import math
from enum import Enum
from functools import lru_cache

import numpy as np

from .bessel import bessel_j
from .system import TWO_PI, EffectiveDetunings, SystemParams, second_order_shift


class ModelVariant(Enum):
    ORIGINAL = "original"
    ROTATED = "rotated"
    EFFECTIVE = "effective"
    EFFECTIVE_NO_2ND = "effective_no_2nd"


def heterodyne_omega_m(params: SystemParams, t: float) -> complex:
    """Instantaneous complex MW Rabi omega_L + omega_s exp(i 2 pi delta_f t)."""
    return params.omega_L + params.omega_s * cmath.exp(1j * TWO_PI * params.delta_f * t)


def build_original(params: SystemParams, t: float,
                   omega_M_value: complex | None = None) -> np.ndarray:
    """Interaction-picture Hamiltonian at time t (microseconds).

    Off-diagonals -Omega/2 with phases exp(i 2 pi Delta t) on the probe,
    coupling and MW legs; diagonals A(1+cos 2 pi omega t) and
    A'(1+cos 2 pi omega t) on the two Rydberg states.
    """
    if omega_M_value is None:
        omega_M_value = heterodyne_omega_m(params, t)
    h = np.zeros((4, 4), dtype=complex)
    h[0, 1] = -0.5 * params.omega_p_rabi * cmath.exp(1j * TWO_PI * params.delta_p * t)
    h[1, 2] = -0.5 * params.omega_c_rabi * cmath.exp(1j * TWO_PI * params.delta_c * t)
    h[2, 3] = -0.5 * omega_M_value * cmath.exp(1j * TWO_PI * params.delta_M * t)
    h += h.conj().T
    stark = 1.0 + math.cos(TWO_PI * params.omega * t)
    h[2, 2] = params.A * stark
    h[3, 3] = params.A_prime * stark
    return h


def control_rotation(params: SystemParams, t: float) -> np.ndarray:
    """Unitary removing the Stark modulation, exp(-i * integral of H_C).

    Diagonal with phases phi = 2 pi X t + (X/omega) sin(2 pi omega t) on
    the two Rydberg states (X = A, A'); phi(0) = 0.
    """
    s = math.sin(TWO_PI * params.omega * t) / params.omega
    phi3 = params.A * (TWO_PI * t + s)
    phi4 = params.A_prime * (TWO_PI * t + s)
    return np.diag([1.0, 1.0, cmath.exp(-1j * phi3), cmath.exp(-1j * phi4)])


def _min_sideband_order(params: SystemParams) -> int:
    return math.ceil(max(abs(params.A), abs(params.a)) / params.omega) + 20


@lru_cache(maxsize=32)
def _sideband_coefficients(params: SystemParams, n_max: int):
    orders = np.arange(-n_max, n_max + 1)
    coupling = np.array([bessel_j(n, params.A / params.omega) for n in orders])
    mw = np.array([bessel_j(n, params.a / params.omega) for n in orders])
    return orders, coupling, mw


def build_rotated(params: SystemParams, t: float, n_max: int = 40) -> np.ndarray:
    """Sideband-expanded Hamiltonian at time t, truncated at |n| <= n_max.

    Coupling leg  -Omega_c/2 sum_n J_n(A/omega) exp(i 2 pi (delta_c - A - n omega) t),
    MW leg        -Omega_M/2 sum_m J_m(a/omega) exp(i 2 pi (delta_M - a - m omega) t),
    probe leg unchanged, no diagonal.
    """
    if n_max < _min_sideband_order(params):
        raise ValueError(f"n_max must be >= {_min_sideband_order(params)}")
    orders, c_coef, m_coef = _sideband_coefficients(params, n_max)
    h = np.zeros((4, 4), dtype=complex)
    h[0, 1] = -0.5 * params.omega_p_rabi * cmath.exp(1j * TWO_PI * params.delta_p * t)
    h[1, 2] = -0.5 * params.omega_c_rabi * np.sum(
        c_coef * np.exp(1j * TWO_PI * (params.delta_c - params.A - orders * params.omega) * t))
    omega_m = params.omega_m_magnitude
    h[2, 3] = -0.5 * omega_m * np.sum(
        m_coef * np.exp(1j * TWO_PI * (params.delta_M - params.a - orders * params.omega) * t))
    h += h.conj().T
    return h


def build_effective(params: SystemParams, k: int, include_second_order: bool = True,
                    omega_M: float | None = None,
                    m_max: int = 50) -> tuple[np.ndarray, EffectiveDetunings]:
    """Time-independent effective Hamiltonian for sideband k.

    Returns the positive-detuning matrix: off-diagonals Omega_p/2,
    J_0(A/omega) Omega_c/2 and J_k(a/omega) Omega_M/2, diagonal
    (0, delta_p, delta_p + delta_c_eff, delta_p + delta_c_eff + delta_M_eff).
    With include_second_order=False the shift is forced to zero in both
    effective detunings (the model that ignores second-order mixing).
    """
    k = int(k)
    if omega_M is None:
        omega_M = params.omega_m_magnitude
    if include_second_order:
        shift = second_order_shift(params, k, m_max, omega_M=omega_M)
    else:
        shift = 0.0
    dc_eff = params.delta_c - params.A - 0.5 * shift
    dm_eff = params.delta_M - params.a - k * params.omega + shift
    det = EffectiveDetunings(delta_M_shift=shift, delta_c_eff=dc_eff,
                             delta_M_eff=dm_eff, a=params.a, k=k)
    coupling = 0.5 * bessel_j(0, params.A / params.omega) * params.omega_c_rabi
    mw = 0.5 * bessel_j(k, params.a / params.omega) * omega_M
    dp = params.delta_p
    h = np.array([
        [0.0, 0.5 * params.omega_p_rabi, 0.0, 0.0],
        [0.5 * params.omega_p_rabi, dp, coupling, 0.0],
        [0.0, coupling, dp + dc_eff, mw],
        [0.0, 0.0, mw, dp + dc_eff + dm_eff],
    ], dtype=complex)
    return h, det


def build_effective_generator(params: SystemParams, k: int,
                              include_second_order: bool = True,
                              omega_M: float | None = None,
                              m_max: int = 50) -> tuple[np.ndarray, EffectiveDetunings]:
    """Effective model as the solver-sign generator H/(2*pi*hbar)."""
    h, det = build_effective(params, k, include_second_order, omega_M, m_max)
    return -h, det


# ---------------------------------------------------------------------------
# Drive-frame forms: same dynamics in the frame co-rotating with all three
# drives, where the probe coherence rho_21 is stationary.  These are what
# the spectroscopy sweeps integrate; the frame shift is the diagonal
# (0, delta_p, delta_p + delta_c, delta_p + delta_c + delta_M) and leaves
# rho_21 comparisons between models unchanged.
# ---------------------------------------------------------------------------

def build_original_drive_frame(params: SystemParams, t: float,
                               omega_M_value: complex | None = None) -> np.ndarray:
    if omega_M_value is None:
        omega_M_value = heterodyne_omega_m(params, t)
    stark = 1.0 + math.cos(TWO_PI * params.omega * t)
    h = np.zeros((4, 4), dtype=complex)
    h[0, 1] = -0.5 * params.omega_p_rabi
    h[1, 0] = -0.5 * params.omega_p_rabi
    h[1, 2] = -0.5 * params.omega_c_rabi
    h[2, 1] = -0.5 * params.omega_c_rabi
    h[2, 3] = -0.5 * omega_M_value
    h[3, 2] = -0.5 * np.conj(omega_M_value)
    h[1, 1] = -params.delta_p
    h[2, 2] = params.A * stark - params.delta_p - params.delta_c
    h[3, 3] = params.A_prime * stark - params.delta_p - params.delta_c - params.delta_M
    return h


def build_rotated_drive_frame(params: SystemParams, t: float, k: int,
                              n_max: int = 40) -> np.ndarray:
    if n_max < _min_sideband_order(params):
        raise ValueError(f"n_max must be >= {_min_sideband_order(params)}")
    orders, c_coef, m_coef = _sideband_coefficients(params, n_max)
    h = np.zeros((4, 4), dtype=complex)
    h[0, 1] = -0.5 * params.omega_p_rabi
    h[1, 2] = -0.5 * params.omega_c_rabi * np.sum(
        c_coef * np.exp(-1j * TWO_PI * orders * params.omega * t))
    h[2, 3] = -0.5 * params.omega_m_magnitude * np.sum(
        m_coef * np.exp(1j * TWO_PI * (k - orders) * params.omega * t))
    h += h.conj().T
    dc0 = params.delta_c - params.A
    dm0 = params.delta_M - params.a - k * params.omega
    h[1, 1] = -params.delta_p
    h[2, 2] = -(params.delta_p + dc0)
    h[3, 3] = -(params.delta_p + dc0 + dm0)
    return h
