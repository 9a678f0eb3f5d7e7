import math
from dataclasses import replace

import pytest

from rydmix.bessel import bessel_j
from rydmix.system import (FarDetuningWarning, RfConvergenceError, SidebandResonanceError,
                           SystemParams, second_order_bound, second_order_shift,
                           solve_rf_resonance)

J1_FIRST_ZERO = 3.8317059702075123


def test_params_validation(fig2_params):
    with pytest.raises(ValueError):
        replace(fig2_params, omega=0.0)
    with pytest.raises(ValueError):
        replace(fig2_params, omega_c_rabi=-1.0)
    with pytest.raises(ValueError):
        replace(fig2_params, gamma=(0.0, -5.0, 0.0, 0.0))


def test_far_detuning_warning(fig2_params):
    with pytest.warns(FarDetuningWarning):
        replace(fig2_params, delta_M=100.0)


def test_derived_fields(fig2_params):
    assert fig2_params.a == fig2_params.A_prime - fig2_params.A
    assert fig2_params.omega_m_magnitude == 40.0


class TestSecondOrderShift:
    def test_reference_regression(self, fig2_params):
        # caption value 1.8135 of the stock operating point
        assert second_order_shift(fig2_params, k=1) == pytest.approx(1.8135, abs=5e-4)

    def test_zero_drive(self, fig2_params):
        silent = replace(fig2_params, omega_L=0.0, omega_s=0.0)
        assert second_order_shift(silent, k=1) == 0.0

    def test_quadratic_scaling(self, fig2_params):
        full = second_order_shift(fig2_params, k=1)
        half = second_order_shift(fig2_params, k=1, omega_M=20.0)
        assert full == pytest.approx(4.0 * half, rel=1e-13)

    def test_direct_resummation(self, fig2_params):
        # independent sum of omega_M^2 J_m^2 / (2 (k-m) omega) over |m| <= 50
        w = fig2_params.omega
        ratio = fig2_params.a / w
        expected = sum(
            40.0 ** 2 * bessel_j(m, ratio) ** 2 / (2.0 * (1 - m) * w)
            for m in range(-50, 51) if m != 1)
        assert second_order_shift(fig2_params, k=1) == pytest.approx(expected, rel=1e-14)

    def test_sideband_resonance_error(self, fig2_params):
        # park the MW detuning exactly on the m = 2 sideband
        poisoned = replace(fig2_params, delta_M=fig2_params.a + 2 * fig2_params.omega)
        with pytest.raises(SidebandResonanceError):
            second_order_shift(poisoned, k=1)

    def test_m_max_precondition(self, fig2_params):
        with pytest.raises(ValueError):
            second_order_shift(fig2_params, k=1, m_max=4)


class TestRfResonance:
    def test_reference_tuning(self, fig2_params):
        tuning = solve_rf_resonance(600.0, 0.5, 1, fig2_params)
        assert tuning.omega == pytest.approx(401.209, abs=1e-3)
        assert tuning.a == pytest.approx(0.5 * tuning.omega, rel=1e-15)
        assert tuning.delta_c == pytest.approx(5.0 + 1.8135 / 2, abs=5e-4)

    def test_residual_closure(self, fig2_params):
        tuning = solve_rf_resonance(600.0, 0.5, 1, fig2_params)
        retuned = replace(fig2_params, omega=tuning.omega,
                          A_prime=fig2_params.A + tuning.a)
        shift = second_order_shift(retuned, k=1)
        assert abs(600.0 - (tuning.a + 1 * tuning.omega - shift)) <= 1e-9

    def test_zero_drive_exact(self, fig2_params):
        silent = replace(fig2_params, omega_L=0.0, omega_s=0.0, delta_M=500.0)
        tuning = solve_rf_resonance(500.0, 1.0, 0, silent)
        assert tuning.omega == 500.0
        assert tuning.a == 500.0
        assert tuning.delta_m_shift == 0.0
        assert tuning.delta_c == silent.A

    def test_preconditions(self, fig2_params):
        with pytest.raises(ValueError):
            solve_rf_resonance(600.0, -0.5, 1, fig2_params)
        with pytest.raises(ValueError):
            solve_rf_resonance(600.0, 0.5, -1, fig2_params)
        with pytest.raises(ValueError):
            solve_rf_resonance(-600.0, 0.5, 1, fig2_params)

    def test_non_convergence_is_reported(self, fig2_params):
        with pytest.raises(RfConvergenceError):
            solve_rf_resonance(600.0, 0.5, 1, fig2_params, tol=1e-18, max_iter=3)


class TestSecondOrderBound:
    @pytest.mark.parametrize("ratio", [0.1, 3.83])
    def test_exceeds_unity(self, ratio):
        assert second_order_bound(ratio, k=1) > 1.0

    def test_exceeds_unity_near_seven(self):
        # the third quoted ratio "7" abbreviates the second J1 zero at
        # 7.0156, where the bound diverges; at 7.000 exactly it is 0.92
        assert second_order_bound(7.0156, k=1) > 1.0
        assert max(second_order_bound(r, 1) for r in (6.98, 7.0, 7.02, 7.04)) > 1.0

    def test_small_at_first_maximum(self):
        assert second_order_bound(1.8412, k=1) < 0.2

    def test_infinite_sentinel_at_bessel_zero(self):
        assert second_order_bound(J1_FIRST_ZERO, k=1) == math.inf

    def test_m_max_convergence(self):
        for ratio in (0.3, 1.8412, 4.6, 10.0):
            for k in (0, 1, 3):
                base = second_order_bound(ratio, k, m_max=50)
                if math.isinf(base):
                    continue
                assert second_order_bound(ratio, k, m_max=80) == pytest.approx(base, abs=1e-10)

    def test_curve_crosses_unity(self):
        import numpy as np
        ratios = np.linspace(0.05, 8.0, 400)
        values = [second_order_bound(r, 1) for r in ratios]
        assert max(values) > 1.0
        assert min(values) < 0.2

    def test_preconditions(self):
        with pytest.raises(ValueError):
            second_order_bound(-1.0, 1)
        with pytest.raises(ValueError):
            second_order_bound(1.0, 1, m_max=3)
