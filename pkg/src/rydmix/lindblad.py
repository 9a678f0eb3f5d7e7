"""Four-level master-equation engine.

Equation of motion, with h = H/(2*pi*hbar) in the MHz convention and time
in microseconds:

    d(rho)/dt = 2*pi * ( i [rho, h] + D(rho) )

The relaxation matrix D implements a strict 4 -> 3 -> 2 -> 1 population
cascade with diagonal (g2 r22, g3 r33 - g2 r22, g4 r44 - g3 r33, -g4 r44)
and off-diagonal damping -(g_i + g_j)/2 * r_ij; it is traceless by
construction.  Steady states come from a vectorised 16x16 linear solve
with the first row replaced by the trace constraint; time propagation is
classical fixed-step fourth-order Runge-Kutta.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .system import TWO_PI, SystemParams


class DegenerateSteadyStateError(RuntimeError):
    """Steady-state solve failed: the generator's null space is degenerate."""

    def __init__(self, rank: int, residual: float):
        self.rank = rank
        self.residual = residual
        super().__init__(
            f"degenerate steady state (numerical rank {rank} of 16, residual {residual:.2e})"
        )


class StepSizeError(ValueError):
    """Requested step exceeds the resolution bound dt <= 1/(50 nu_max)."""


class WindowError(ValueError):
    """Averaging window shorter than one slow period."""


@dataclass(frozen=True)
class DecayRates:
    gamma1: float
    gamma2: float
    gamma3: float
    gamma4: float

    def __post_init__(self):
        if min(self.gamma1, self.gamma2, self.gamma3, self.gamma4) < 0:
            raise ValueError("decay rates must be >= 0")

    @classmethod
    def from_params(cls, params: SystemParams) -> "DecayRates":
        return cls(*params.gamma)

    def pair_rate(self, i: int, j: int) -> float:
        """gamma_ij = (gamma_i + gamma_j)/2 for 0-based level indices."""
        g = (self.gamma1, self.gamma2, self.gamma3, self.gamma4)
        return 0.5 * (g[i] + g[j])

    def pair_matrix(self) -> np.ndarray:
        g = np.array([self.gamma1, self.gamma2, self.gamma3, self.gamma4])
        return 0.5 * (g[:, None] + g[None, :])


def dissipator(rho: np.ndarray, rates: DecayRates) -> np.ndarray:
    """Relaxation matrix D(rho); supports batched (..., 4, 4) input."""
    rho = np.asarray(rho, dtype=complex)
    out = -rates.pair_matrix() * rho
    g2, g3, g4 = rates.gamma2, rates.gamma3, rates.gamma4
    out[..., 0, 0] = g2 * rho[..., 1, 1]
    out[..., 1, 1] = g3 * rho[..., 2, 2] - g2 * rho[..., 1, 1]
    out[..., 2, 2] = g4 * rho[..., 3, 3] - g3 * rho[..., 2, 2]
    out[..., 3, 3] = -g4 * rho[..., 3, 3]
    return out


def master_rhs(rho: np.ndarray, h: np.ndarray, rates: DecayRates) -> np.ndarray:
    """d(rho)/dt for generator h; batched over leading axes."""
    comm = rho @ h - h @ rho
    return TWO_PI * (1j * comm + dissipator(rho, rates))


def liouvillian(h: np.ndarray, rates: DecayRates) -> np.ndarray:
    """16x16 matrix L with vec(d rho/dt) = L vec(rho), row-major vec."""
    eye = np.eye(4)
    comm = np.kron(eye, h.T) - np.kron(h, eye)
    diss = np.zeros((16, 16), dtype=complex)
    basis = np.zeros((4, 4), dtype=complex)
    for i in range(4):
        for j in range(4):
            basis[:] = 0.0
            basis[i, j] = 1.0
            diss[:, 4 * i + j] = dissipator(basis, rates).reshape(-1)
    return TWO_PI * (1j * comm + diss)


_TRACE_COLUMNS = (0, 5, 10, 15)


def steady_state(h: np.ndarray, rates: DecayRates) -> np.ndarray:
    """Unique steady state of a time-independent generator.

    Vectorises the generator, replaces the first row with the trace
    constraint, and solves the linear system.  Raises
    DegenerateSteadyStateError (with the numerical rank) when the null
    space is not one-dimensional.
    """
    lv = liouvillian(h, rates)
    mod = lv.copy()
    mod[0, :] = 0.0
    mod[0, list(_TRACE_COLUMNS)] = 1.0
    rhs = np.zeros(16, dtype=complex)
    rhs[0] = 1.0
    try:
        vec = np.linalg.solve(mod, rhs)
    except np.linalg.LinAlgError:
        rank = int(np.linalg.matrix_rank(mod))
        raise DegenerateSteadyStateError(rank, float("inf")) from None
    residual = float(np.abs(lv @ vec).max())
    scale = max(1.0, float(np.abs(lv).max()))
    if not np.all(np.isfinite(vec)) or residual > 1e-9 * scale:
        rank = int(np.linalg.matrix_rank(mod))
        raise DegenerateSteadyStateError(rank, residual)
    return vec.reshape(4, 4)


@dataclass(frozen=True)
class Trajectory:
    """Sampled density-matrix path: times (N,) and states (N, 4, 4)."""

    times: np.ndarray
    states: np.ndarray

    def expectation(self, observable: np.ndarray) -> np.ndarray:
        """tr(rho(t) * observable) at every stored sample."""
        return np.einsum("tij,ji->t", self.states, observable)


def propagate(h_of_t, rates: DecayRates, rho0: np.ndarray, t_end: float, dt: float,
              nu_max: float | None = None, store_stride: int = 1) -> Trajectory:
    """Fixed-step RK4 integration of the master equation.

    h_of_t(t) must return the 4x4 generator at time t.  When `nu_max`
    (largest frequency present in h_of_t, MHz) is given, dt must satisfy
    dt <= 1/(50*nu_max) or StepSizeError is raised.  Every
    `store_stride`-th sample is kept (t = 0 always included).
    """
    if dt <= 0 or t_end <= 0:
        raise ValueError("dt and t_end must be > 0")
    if nu_max is not None and nu_max > 0 and dt > 1.0 / (50.0 * nu_max):
        raise StepSizeError(
            f"dt = {dt:g} exceeds 1/(50*nu_max) = {1.0 / (50.0 * nu_max):g}"
        )
    n_steps = max(1, int(round(t_end / dt)))
    rho = np.array(rho0, dtype=complex)
    times = [0.0]
    states = [rho.copy()]
    t = 0.0
    for step in range(1, n_steps + 1):
        rho = _rk4_step(rho, t, dt, h_of_t, rates)
        t = step * dt
        if step % store_stride == 0 or step == n_steps:
            times.append(t)
            states.append(rho.copy())
    return Trajectory(times=np.array(times), states=np.stack(states))


def _rk4_step(rho, t, dt, h_of_t, rates):
    h1 = h_of_t(t)
    h2 = h_of_t(t + 0.5 * dt)
    h4 = h_of_t(t + dt)
    k1 = master_rhs(rho, h1, rates)
    k2 = master_rhs(rho + 0.5 * dt * k1, h2, rates)
    k3 = master_rhs(rho + 0.5 * dt * k2, h2, rates)
    k4 = master_rhs(rho + dt * k3, h4, rates)
    return rho + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def propagate_batch(h_of_t, rates: DecayRates, rho0: np.ndarray, t_start: float,
                    t_span: float, dt: float) -> np.ndarray:
    """RK4 over a batch of states without storing the path.

    h_of_t(t) returns (B, 4, 4) (or broadcastable); rho0 is (B, 4, 4).
    Returns the batch at t_start + n*dt covering t_span.
    """
    n_steps = max(1, int(round(t_span / dt)))
    rho = np.array(rho0, dtype=complex)
    for step in range(n_steps):
        rho = _rk4_step(rho, t_start + step * dt, dt, h_of_t, rates)
    return rho


def average_observable_batch(h_of_t, rates: DecayRates, rho0: np.ndarray,
                             t_start: float, t_window: float, dt: float,
                             observable: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Left-rule time average of tr(rho * observable) while integrating on.

    Returns (averages over the window, final batch state).  Samples are
    taken at t_start + j*dt for j = 0..n-1, so a window that is an exact
    integer number of sample periods averages a sinusoid to zero.
    """
    n_steps = max(1, int(round(t_window / dt)))
    rho = np.array(rho0, dtype=complex)
    acc = np.zeros(rho.shape[0], dtype=complex)
    for step in range(n_steps):
        acc += np.einsum("bij,ji->b", rho, observable)
        rho = _rk4_step(rho, t_start + step * dt, dt, h_of_t, rates)
    return acc / n_steps, rho


def time_averaged_observable(trajectory: Trajectory, observable: np.ndarray,
                             t_start: float, slow_period: float | None = None) -> complex:
    """Mean of tr(rho(t) * observable) over the window t >= t_start.

    When `slow_period` is given the window is truncated to the largest
    whole number of periods (left-closed), and WindowError is raised if
    less than one period fits.
    """
    times = trajectory.times
    sel = times >= t_start - 1e-12
    if not sel.any():
        raise WindowError("no samples at or after t_start")
    t_sel = times[sel]
    values = trajectory.expectation(observable)[sel]
    if slow_period is not None:
        span = t_sel[-1] - t_sel[0]
        n_periods = int(np.floor(span / slow_period + 1e-9))
        if n_periods < 1:
            raise WindowError(
                f"window {span:g} us is shorter than one slow period {slow_period:g} us"
            )
        keep = t_sel < t_sel[0] + n_periods * slow_period - 1e-12
        # left-closed window: exactly n_periods * (samples per period)
        values = values[keep]
    return complex(np.mean(values))


def assert_density_matrix(rho: np.ndarray, herm_tol: float = 1e-10,
                          trace_tol: float = 1e-10, positivity_tol: float = 1e-8) -> None:
    """Raise if rho is not Hermitian / unit-trace / positive within tolerance."""
    herm = np.abs(rho - rho.conj().T).max()
    if herm > herm_tol:
        raise ValueError(f"not Hermitian: deviation {herm:.2e}")
    tr = abs(np.trace(rho) - 1.0)
    if tr > trace_tol:
        raise ValueError(f"trace deviates from 1 by {tr:.2e}")
    eigs = np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))
    if eigs.min() < -positivity_tol:
        raise ValueError(f"negative eigenvalue {eigs.min():.2e}")
