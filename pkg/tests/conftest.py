import numpy as np
import pytest

from rydmix.lindblad import DecayRates
from rydmix.system import SystemParams

# reference operating point: probe 0.1, coupling 10, coupling detuning
# 5 + 1.8135/2, MW Rabi 40 at detuning 600, Stark amplitudes (5, 5 + 0.5*omega)
# modulated at omega = 401.209, decay (0, 5, 0.003, 0.003) -- all x(2 pi) MHz
FIG_OMEGA = 401.209
FIG_DELTA_C = 5.0 + 1.8135 / 2
FIG_SHIFT = 1.8135


@pytest.fixture
def fig2_params() -> SystemParams:
    return SystemParams(
        omega_p_rabi=0.1,
        omega_c_rabi=10.0,
        delta_p=0.0,
        delta_c=FIG_DELTA_C,
        omega_L=40.0,
        omega_s=0.0,
        delta_f=1e-3,
        delta_M=600.0,
        A=5.0,
        A_prime=5.0 + 0.5 * FIG_OMEGA,
        omega=FIG_OMEGA,
        gamma=(0.0, 5.0, 0.003, 0.003),
    )


@pytest.fixture
def fig2_rates(fig2_params) -> DecayRates:
    return DecayRates.from_params(fig2_params)


def random_density_matrix(rng: np.random.Generator) -> np.ndarray:
    m = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    rho = m @ m.conj().T
    return rho / np.trace(rho)


def random_hermitian(rng: np.random.Generator) -> np.ndarray:
    m = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    return m + m.conj().T
