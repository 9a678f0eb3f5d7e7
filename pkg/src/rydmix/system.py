"""Parameter containers and the RF-tuning algebra.

Unit convention used everywhere in this package: a frequency-like value nu
is stored as the plain number in "x(2 pi) MHz" notation, i.e. the physical
angular frequency is 2*pi*nu Mrad/s.  Time is in microseconds, so every
phase is 2*pi*nu*t and every decay factor is exp(-2*pi*gamma*t).  This lets
laboratory-style parameter sets be transcribed digit for digit.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, replace

from .bessel import bessel_j

TWO_PI = 2.0 * math.pi


class FarDetuningWarning(UserWarning):
    """Total MW Rabi frequency is not small against the MW detuning."""


class SidebandResonanceError(ValueError):
    """A sideband other than the selected one is resonant with the MW field."""


class RfConvergenceError(RuntimeError):
    """The RF tuning fixed point did not converge (pathological geometry)."""


@dataclass(frozen=True)
class SystemParams:
    """All drive and decay parameters of one simulation run.

    Fields (all in the x(2 pi) MHz convention above):

    omega_p_rabi, omega_c_rabi  probe / coupling Rabi frequencies
    delta_p, delta_c            probe / coupling detunings
    omega_L, omega_s            local and signal MW Rabi frequencies
    delta_f                     local/signal beat frequency
    delta_M                     MW detuning from the Rydberg transition
    A, A_prime                  RF Stark modulation amplitudes of the two
                                Rydberg states (level shift A*(1+cos(2 pi
                                omega t)) and same with A_prime)
    omega                       Stark modulation frequency (twice the RF
                                carrier frequency)
    gamma                       decay rates (gamma1..gamma4)
    """

    omega_p_rabi: float
    omega_c_rabi: float
    delta_p: float
    delta_c: float
    omega_L: float
    omega_s: float
    delta_f: float
    delta_M: float
    A: float
    A_prime: float
    omega: float
    gamma: tuple[float, float, float, float]

    def __post_init__(self):
        for name in ("omega_p_rabi", "omega_c_rabi", "omega_L", "omega_s"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")
        if len(self.gamma) != 4 or any(g < 0 for g in self.gamma):
            raise ValueError("gamma must be four non-negative rates")
        object.__setattr__(self, "gamma", tuple(float(g) for g in self.gamma))
        if self.omega <= 0:
            raise ValueError("omega must be > 0")
        total = abs(self.omega_L + self.omega_s)
        if total > 0.2 * abs(self.delta_M):
            warnings.warn(
                f"MW Rabi {total:g} exceeds 0.2*|delta_M| = {0.2 * abs(self.delta_M):g}; "
                "the far-detuned treatment degrades here",
                FarDetuningWarning,
                stacklevel=2,
            )

    @property
    def a(self) -> float:
        """Differential Stark amplitude A' - A."""
        return self.A_prime - self.A

    @property
    def omega_m_magnitude(self) -> float:
        """Static MW Rabi magnitude at zero beat phase, omega_L + omega_s."""
        return self.omega_L + self.omega_s


@dataclass(frozen=True)
class EffectiveDetunings:
    """Derived detunings of the time-independent effective model."""

    delta_M_shift: float  # second-order sideband shift
    delta_c_eff: float    # delta_c - A - shift/2
    delta_M_eff: float    # delta_M - a - k*omega + shift
    a: float
    k: int


def second_order_shift(params: SystemParams, k: int, m_max: int = 50,
                       omega_M: float | None = None) -> float:
    """Second-order level shift from off-resonant sideband mixing.

    Sums omega_M^2 J_m(a/omega)^2 / (2 (k - m) omega) over sidebands
    m != k with |m| <= m_max.  The denominators are evaluated at the
    resonant operating point of sideband k (detuning (k - m)*omega of
    sideband m), which is the self-consistent choice when the RF field is
    tuned; evaluating the raw detunings delta_M - a - m*omega instead
    would feed the shift back into its own denominators.

    Scales exactly quadratically in omega_M.  Raises
    SidebandResonanceError when some other sideband is itself resonant
    with the actual MW detuning (|delta_M - a - m*omega| < 1e-6).
    """
    k = int(k)
    if m_max < abs(k) + 5:
        raise ValueError(f"m_max must be >= |k| + 5, got {m_max}")
    if omega_M is None:
        omega_M = params.omega_m_magnitude
    a = params.a
    w = params.omega
    for m in range(-m_max, m_max + 1):
        if m == k:
            continue
        if abs(params.delta_M - a - m * w) < 1e-6:
            raise SidebandResonanceError(
                f"sideband m={m} is resonant: |delta_M - a - m*omega| < 1e-6"
            )
    if omega_M == 0.0:
        return 0.0
    ratio = a / w
    j_sq = [bessel_j(m, ratio) ** 2 for m in range(m_max + 1)]
    total = 0.0
    for m in range(-m_max, m_max + 1):
        if m == k:
            continue
        total += j_sq[abs(m)] / (2.0 * (k - m) * w)
    return omega_M ** 2 * total


@dataclass(frozen=True)
class RfTuning:
    """Solved RF operating point for a target MW detuning."""

    omega: float          # modulation frequency
    a: float              # differential Stark amplitude, ratio * omega
    delta_m_shift: float  # second-order shift at the solution
    delta_c: float        # coupling detuning that zeroes delta_c_eff, A + shift/2


def solve_rf_resonance(delta_M: float, ratio: float, k: int, params: SystemParams,
                       m_max: int = 50, tol: float = 1e-9,
                       max_iter: int = 100) -> RfTuning:
    """Tune the RF field so sideband k is resonant with the MW detuning.

    Solves delta_M = a + k*omega - shift(omega) with a = ratio*omega by
    plain fixed-point iteration on omega (the shift is a <1% correction,
    so the substitution contracts strongly).  The residual of the
    resonance condition at the returned omega is below `tol`.
    """
    k = int(k)
    if k < 0:
        raise ValueError("k must be >= 0")
    if ratio <= 0:
        raise ValueError("ratio must be > 0")
    if delta_M <= 0:
        raise ValueError("delta_M must be > 0")
    w = delta_M / (ratio + k)
    for _ in range(max_iter):
        probe = replace(params, omega=w, A_prime=params.A + ratio * w, delta_M=delta_M)
        shift = second_order_shift(probe, k, m_max)
        residual = delta_M - ((ratio + k) * w - shift)
        if abs(residual) <= tol:
            return RfTuning(omega=w, a=ratio * w, delta_m_shift=shift,
                            delta_c=params.A + 0.5 * shift)
        w = (delta_M + shift) / (ratio + k)
    raise RfConvergenceError(
        f"RF tuning did not converge in {max_iter} iterations "
        f"(delta_M={delta_M}, ratio={ratio}, k={k})"
    )


def second_order_bound(ratio: float, k: int, m_max: int = 50) -> float:
    """Upper bound on |shift / (J_k(a/omega) * omega_M)| at fixed a/omega.

    Uses the substitution omega_M J_k <= 0.1 omega, giving
    |sum_{m != k} 0.1 J_m(ratio)^2 / (-2 (m - k) J_k(ratio)^2)|.
    Returns math.inf when |J_k(ratio)| < 1e-12 (the bound diverges at the
    zeros of J_k).
    """
    k = int(k)
    if ratio <= 0:
        raise ValueError("ratio must be > 0")
    if m_max < abs(k) + 5:
        raise ValueError(f"m_max must be >= |k| + 5, got {m_max}")
    jk = bessel_j(k, ratio)
    if abs(jk) < 1e-12:
        return math.inf
    j_sq = [bessel_j(m, ratio) ** 2 for m in range(m_max + 1)]
    total = 0.0
    for m in range(-m_max, m_max + 1):
        if m == k:
            continue
        total += 0.1 * j_sq[abs(m)] / (-2.0 * (m - k) * jk ** 2)
    return abs(total)
