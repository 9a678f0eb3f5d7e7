"""Integer-order Bessel functions of the first kind.

Self-contained J_n(x) for the sideband sums used throughout the package:
an ascending power series for |x| <= 12 and Miller's backward recurrence,
normalised with the even-order sum rule J_0 + 2*sum_m J_{2m} = 1, for
larger arguments (Abramowitz & Stegun 9.1.10, 9.1.27, 9.1.46).  The two
branches agree to better than 1e-12 at the seam.

Supported domain: |n| <= 200, finite real x; absolute error below 1e-12
for |x| <= 50.  Series accumulation runs in extended precision so the
alternating-series cancellation near the seam stays harmless.
"""

from __future__ import annotations

import numpy as np

MAX_ORDER = 200

_SERIES_CUTOFF = 12.0
_SUM_RULE_MARGIN = 40  # start index headroom, N = ceil(x) + margin
_RESCALE = 1e250


def bessel_j(n: int, x: float) -> float:
    """J_n(x) for integer n with |n| <= 200 and finite real x."""
    return float(bessel_j_many(n, np.array([x], dtype=float))[0])


def bessel_j_many(n: int, x) -> np.ndarray:
    """Vectorised J_n over an array of arguments (single integer order)."""
    n = int(n)
    if abs(n) > MAX_ORDER:
        raise ValueError(f"order out of range: |{n}| > {MAX_ORDER}")
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    if not np.all(np.isfinite(xs)):
        raise ValueError("argument must be finite")

    sign = 1.0
    order = n
    if order < 0:
        # J_{-n}(x) = (-1)^n J_n(x)
        order = -order
        if order % 2:
            sign = -sign

    ax = np.abs(xs)
    out = np.empty_like(ax)
    small = ax <= _SERIES_CUTOFF
    if small.any():
        out[small] = _ascending_series(order, ax[small])
    if (~small).any():
        out[~small] = _miller_recurrence(order, ax[~small])
    if order % 2:
        # J_n(-x) = (-1)^n J_n(x)
        out = np.where(xs < 0, -out, out)
    return sign * out


def _ascending_series(n: int, ax: np.ndarray) -> np.ndarray:
    """Power series sum_j (-1)^j (x/2)^{n+2j} / (j! (n+j)!), extended precision."""
    half = ax.astype(np.longdouble) / 2.0
    term = np.ones_like(half)
    for i in range(1, n + 1):
        term *= half / np.longdouble(i)
    total = term.copy()
    half_sq = half * half
    for j in range(1, 400):
        term *= -half_sq / (np.longdouble(j) * np.longdouble(n + j))
        total += term
        if np.all(np.abs(term) <= 1e-24 * (np.abs(total) + np.longdouble(1e-300))):
            break
    return total.astype(float)


def _miller_recurrence(n: int, ax: np.ndarray) -> np.ndarray:
    """Backward recurrence f_{m-1} = (2m/x) f_m - f_{m+1}, sum-rule normalised."""
    start = int(np.ceil(ax.max())) + _SUM_RULE_MARGIN
    start = max(start, n + _SUM_RULE_MARGIN)
    if start % 2:
        start += 1
    inv_x = 1.0 / ax.astype(np.longdouble)
    f_up = np.zeros(ax.shape, dtype=np.longdouble)   # f_{m+1}
    f = np.full(ax.shape, np.longdouble(1e-30))      # f_m seed
    norm = np.zeros_like(f)                          # J_0 + 2*sum of even orders
    target = np.zeros_like(f)
    for m in range(start, 0, -1):
        f_down = (2.0 * m) * inv_x * f - f_up
        f_up, f = f, f_down
        idx = m - 1
        if idx == n:
            target = f.copy()
        if idx > 0 and idx % 2 == 0:
            norm += 2.0 * f
        big = np.abs(f) > _RESCALE
        if big.any():
            scale = np.where(big, np.longdouble(1.0 / _RESCALE), np.longdouble(1.0))
            f = f * scale
            f_up = f_up * scale
            norm = norm * scale
            target = target * scale
    norm += f  # loop ends with f = f_0
    return (target / norm).astype(float)


def bessel_j_argmax(n: int) -> tuple[float, float]:
    """First positive maximum of J_n for 1 <= n <= 50.

    Returns (x_star, J_n(x_star)).  The maximum is bracketed by a coarse
    scan below the first zero and refined by golden-section search; the
    bracket is tight enough that |dJ_n/dx| < 1e-10 at the returned point.
    """
    n = int(n)
    if not 1 <= n <= 50:
        raise ValueError(f"order out of range for argmax: {n}")
    # first zero of J_n sits above n + 1.86 n^(1/3); scan up to there
    hi = n + 2.5 * n ** (1.0 / 3.0) + 3.0
    xs = np.arange(0.02, hi, 0.02)
    js = bessel_j_many(n, xs)
    idx = None
    for i in range(1, len(js) - 1):
        if js[i] > js[i - 1] and js[i] >= js[i + 1]:
            idx = i
            break
    if idx is None:
        raise RuntimeError(f"no bracket found for the first maximum of J_{n}")
    lo, up = xs[idx - 1], xs[idx + 1]
    x_star = float(_golden_max(lambda x: bessel_j(n, x), lo, up, 1e-10))
    # golden section stalls at the sqrt(eps) plateau of the objective;
    # polish the stationary point on J_n' = (J_{n-1} - J_{n+1})/2 instead
    for _ in range(8):
        grad = 0.5 * (bessel_j(n - 1, x_star) - bessel_j(n + 1, x_star))
        curv = 0.25 * (bessel_j(n - 2, x_star) - 2.0 * bessel_j(n, x_star)
                       + bessel_j(n + 2, x_star))
        if curv == 0.0:
            break
        step = grad / curv
        x_star -= step
        if abs(step) < 1e-13:
            break
    return x_star, bessel_j(n, x_star)


def _golden_max(f, lo: float, hi: float, xtol: float) -> float:
    inv_phi = (np.sqrt(5.0) - 1.0) / 2.0
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
