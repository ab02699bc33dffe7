"""Real-argument special functions used by every density series.

Gamma is delegated to the C library (``math.gamma``/``math.lgamma``) behind
the contracts below; digamma, the reflection helpers and the three-parameter
Mittag-Leffler series are implemented here.  All scalar cores are plain
Python functions that numba can compile directly, so the series kernels share
one implementation with this module.
"""

from __future__ import annotations

import math

import numpy as np

from .backend import kernels
from .errors import NonConvergenceError, PoleError
from .params import FLAG_ACCURACY, FLAG_OK, DensityValue, MittagLefflerParams
from .series import DEFAULT_EPS_ABS, DEFAULT_EPS_REL, term_cap

_EULER_GAMMA = 0.5772156649015328606

# digamma asymptotic series coefficients: -B_{2n}/(2n) for x**(-2n)
_DIGAMMA_ASY = (-1.0 / 12.0, 1.0 / 120.0, -1.0 / 252.0, 1.0 / 240.0,
                -1.0 / 132.0, 691.0 / 32760.0, -1.0 / 12.0)


def sinpi(x: float) -> float:
    """sin(pi*x) with argument reduction (exact zeros at integers)."""
    r = x - 2.0 * round(0.5 * x)
    if r == 0.0 or r == 1.0 or r == -1.0:
        return 0.0
    return math.sin(math.pi * r)


def cospi(x: float) -> float:
    """cos(pi*x) with argument reduction."""
    r = abs(x - 2.0 * round(0.5 * x))
    if r == 0.5:
        return 0.0
    return math.cos(math.pi * r)


def is_nonpositive_int(x: float) -> bool:
    return x <= 0.0 and x == math.floor(x)


def gamma(x: float) -> float:
    """Gamma function.

    Raises
    ------
    PoleError
        If ``x`` is zero or a negative integer.
    OverflowError
        If ``|Gamma(x)|`` exceeds the double range (|x| > ~171.6).
    """
    if is_nonpositive_int(x):
        raise PoleError(f"gamma pole at x={x}")
    try:
        return math.gamma(x)
    except ValueError as exc:  # pragma: no cover - pole caught above
        raise PoleError(f"gamma pole at x={x}") from exc


def reciprocal_gamma(x: float) -> float:
    """1/Gamma(x), defined for every real ``x`` (zero at the poles of Gamma).

    For very negative non-integer ``x`` the value overflows the double range
    and ``+-inf`` is returned with the correct sign.
    """
    if is_nonpositive_int(x):
        return 0.0
    if x >= 0.5:
        if x > 171.61:
            return math.exp(-math.lgamma(x))
        return 1.0 / math.gamma(x)
    # reflection: 1/Gamma(x) = Gamma(1-x) * sin(pi x) / pi
    s = sinpi(x)
    lg = math.lgamma(1.0 - x)
    if lg + math.log(abs(s)) - math.log(math.pi) > 709.0:
        return math.inf if s > 0 else -math.inf
    return math.exp(lg) * s / math.pi


def lg_rgamma(x: float) -> tuple[float, float]:
    """(log|1/Gamma(x)|, sign); sign 0 and log -inf at poles of Gamma."""
    if is_nonpositive_int(x):
        return -math.inf, 0.0
    if x > 0.0:
        return -math.lgamma(x), 1.0
    s = sinpi(x)
    return (math.lgamma(1.0 - x) + math.log(abs(s)) - math.log(math.pi),
            1.0 if s > 0.0 else -1.0)


def _digamma_core(x: float) -> float:
    # recurrence up to x >= 10, then the Bernoulli asymptotic series
    acc = 0.0
    while x < 10.0:
        acc -= 1.0 / x
        x += 1.0
    inv2 = 1.0 / (x * x)
    series = 0.0
    p = inv2
    for coef in _DIGAMMA_ASY:
        series += coef * p
        p *= inv2
    return acc + math.log(x) - 0.5 / x + series


def digamma(x: float) -> float:
    """Digamma (logarithmic derivative of Gamma) for real non-pole arguments."""
    if is_nonpositive_int(x):
        raise PoleError(f"digamma pole at x={x}")
    if x < 0.0:
        # phi(x) = phi(1-x) - pi*cot(pi*x)
        return _digamma_core(1.0 - x) - math.pi * cospi(x) / sinpi(x)
    return _digamma_core(x)


def mittag_leffler(p: MittagLefflerParams, z: float, *,
                   eps_rel: float = DEFAULT_EPS_REL,
                   eps_abs: float = DEFAULT_EPS_ABS,
                   cap: int | None = None) -> DensityValue:
    """Three-parameter Mittag-Leffler function ``M^c_{a,b}(z)`` for real z >= 0.

    The sum uses compensated accumulation and stops once two consecutive
    terms fall below tolerance (surviving the exact-zero terms produced when
    ``a*n + b`` hits a pole of Gamma).  ``DensityValue.err_estimate`` carries
    the first-omitted-term heuristic bound.
    """
    if z < 0.0:
        raise PoleError(f"mittag_leffler requires z >= 0, got {z}")
    if z == 0.0:
        return DensityValue(reciprocal_gamma(p.b), 0.0, 1)
    cap = term_cap(cap)
    lgc_c = math.lgamma(p.c)
    # non-positive b zeroes the first ~|b|/a terms (Gamma poles); the stop
    # rule must outlast the longest possible zero run
    stop_run = 2 + (int(-p.b / p.a) + 1 if p.b <= 0.0 else 0)
    n0 = min(cap, 96)
    while True:
        ns = np.arange(n0, dtype=np.float64)
        lg_den, sgn = _rgamma_table(p.a * ns + p.b)
        lgc = (_lgamma_arr(p.c + ns) - lgc_c - _lgamma_arr(ns + 1.0)) + lg_den
        val, err, terms, status = kernels().affine_log_series(
            np.array([math.log(z)]), lgc, sgn, ns,
            np.ones(n0), np.zeros(n0), eps_rel, eps_abs, stop_run)
        if status[0] != 1 or n0 >= cap:
            break
        n0 = min(cap, n0 * 4)
    if status[0] != 0:
        raise NonConvergenceError(
            f"mittag_leffler did not converge within {cap} terms "
            f"(a={p.a}, b={p.b}, c={p.c}, z={z})")
    flag = FLAG_ACCURACY if err[0] > 1e-11 * abs(val[0]) else FLAG_OK
    return DensityValue(float(val[0]), float(err[0]), int(terms[0]), flag)


def _lgamma_arr(x: np.ndarray) -> np.ndarray:
    return np.vectorize(math.lgamma, otypes=[np.float64])(x)


def _rgamma_table(x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized ``lg_rgamma``: (log|1/Gamma|, sign) arrays."""
    out_lg = np.empty(x.shape, dtype=np.float64)
    out_sg = np.empty(x.shape, dtype=np.float64)
    for i, v in enumerate(x.ravel()):
        lg, sg = lg_rgamma(float(v))
        out_lg.flat[i] = lg
        out_sg.flat[i] = sg
    return out_lg, out_sg
