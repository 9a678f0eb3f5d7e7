import math

import mpmath
import numpy as np
import pytest

from rydmix.bessel import MAX_ORDER, bessel_j, bessel_j_argmax, bessel_j_many


def series_oracle(n: int, x: float, terms: int = 80) -> float:
    """Independent ascending-series evaluation, summed to machine convergence."""
    total = 0.0
    for j in range(terms):
        total += (-1.0) ** j * (x / 2.0) ** (n + 2 * j) / (
            math.factorial(j) * math.factorial(n + j))
    return total


def test_value_at_origin():
    assert bessel_j(0, 0.0) == 1.0
    assert bessel_j(3, 0.0) == 0.0


def test_j1_half_matches_series_oracle():
    expected = series_oracle(1, 0.5)
    assert expected == pytest.approx(0.2422684576748739, abs=1e-15)
    assert bessel_j(1, 0.5) == pytest.approx(expected, abs=1e-14)


def test_parity_example():
    assert bessel_j(-1, 0.5) == pytest.approx(-bessel_j(1, 0.5), abs=1e-15)


@pytest.mark.parametrize("n", range(0, 31, 3))
def test_parity_identity(n):
    for x in (0.2, 1.3, 4.0, 9.7, 13.5, 27.0, 40.0):
        assert abs(bessel_j(-n, x) - (-1.0) ** n * bessel_j(n, x)) <= 1e-14


def test_recurrence_identity():
    worst = 0.0
    for n in range(-30, 31):
        for x in np.linspace(0.1, 40.0, 31):
            lhs = bessel_j(n - 1, x) + bessel_j(n + 1, x)
            rhs = (2.0 * n / x) * bessel_j(n, x)
            worst = max(worst, abs(lhs - rhs))
    assert worst <= 1e-10


@pytest.mark.parametrize("x", [0.5, 3.0, 8.0, 12.0, 17.0, 29.0, 40.0])
def test_sum_rule_normalization(x):
    n_top = math.ceil(x) + 40
    total = sum(bessel_j(n, x) ** 2 for n in range(-n_top, n_top + 1))
    assert abs(total - 1.0) <= 1e-12


def test_absolute_accuracy_against_mpmath():
    mpmath.mp.dps = 30
    worst = 0.0
    for n in list(range(0, 12)) + [20, 40, 75, 120, 200]:
        for x in (0.0, 1e-3, 0.7, 2.0, 5.5, 11.9, 12.0, 12.1, 18.0, 33.0, 50.0):
            ref = float(mpmath.besselj(n, x))
            worst = max(worst, abs(bessel_j(n, x) - ref))
    assert worst <= 1e-12


def test_seam_continuity():
    # both branches evaluated just inside their domains agree at the boundary
    for n in range(0, 25):
        below = bessel_j(n, 12.0)       # series branch
        above = bessel_j(n, 12.0 + 1e-13)  # recurrence branch
        assert abs(below - above) <= 1e-12


def test_negative_argument_symmetry():
    for n in (0, 1, 2, 5):
        for x in (0.4, 3.0, 15.0):
            assert bessel_j(n, -x) == pytest.approx((-1.0) ** n * bessel_j(n, x), abs=1e-14)


def test_vectorised_matches_scalar():
    xs = np.array([-20.0, -3.0, 0.0, 0.4, 11.99, 12.01, 35.0])
    many = bessel_j_many(4, xs)
    for x, v in zip(xs, many):
        assert v == pytest.approx(bessel_j(4, float(x)), abs=1e-14)


def test_domain_errors():
    with pytest.raises(ValueError):
        bessel_j(MAX_ORDER + 1, 1.0)
    with pytest.raises(ValueError):
        bessel_j(-(MAX_ORDER + 1), 1.0)
    with pytest.raises(ValueError):
        bessel_j(0, math.nan)
    with pytest.raises(ValueError):
        bessel_j(0, math.inf)


# first positive maxima frozen from a golden-section search over the
# series oracle (independently confirmed by the derivative zeros of
# mpmath.besselj to 30 digits)
ARGMAX_CASES = [
    (1, 1.8411837813406593, 0.5818652242815964),
    (2, 3.0542369282271403, 0.4864986822690032),
    (3, 4.2011889412105285, 0.4343944268405248),
]


@pytest.mark.parametrize("n, x_star, j_max", ARGMAX_CASES)
def test_argmax_known_values(n, x_star, j_max):
    got_x, got_j = bessel_j_argmax(n)
    assert got_x == pytest.approx(x_star, abs=1e-9)
    assert got_j == pytest.approx(j_max, abs=1e-12)


def test_argmax_is_stationary():
    for n in (1, 2, 3, 7, 20, 50):
        x_star, j_max = bessel_j_argmax(n)
        h = 1e-5
        grad = (bessel_j(n, x_star + h) - bessel_j(n, x_star - h)) / (2 * h)
        assert abs(grad) <= 1e-10
        assert j_max == pytest.approx(bessel_j(n, x_star), abs=1e-15)


def test_argmax_domain():
    with pytest.raises(ValueError):
        bessel_j_argmax(0)
    with pytest.raises(ValueError):
        bessel_j_argmax(51)
