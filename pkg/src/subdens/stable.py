"""Densities and Mellin transforms of the one-sided stable subordinator, its
inverse, and their integer powers.

Both series are evaluated in the reduced variable given by self-similarity
(``y = x * t**(-1/alpha)`` for the subordinator, ``y = x * t**(-alpha)`` for
its inverse), in log space with sign tracking.  The subordinator series
suffers catastrophic cancellation as ``y -> 0+`` (its inverse as
``y -> +inf``); evaluations whose compensation residue exceeds ``flag_rel``
times the value are accuracy-flagged, and for ``alpha = 1/2``, where the
exact closed forms exist, the flagged points fall back to them.

Sign convention: the published series for the subordinator density carries
``(-1)**k`` on the k-th term, which makes the leading (k=1) term negative;
the residue computation and the ``alpha = 1/2`` closed form both give
``(-1)**(k-1)``, which is what this module uses (densities are nonnegative).
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np
from scipy.special import loggamma as _cloggamma

from .errors import DomainError, StripError
from .params import (FLAG_ACCURACY, FLAG_CLOSED_FORM, FLAG_OK, DensityValue,
                     LimitStructure, StableParams)
from .series import (DEFAULT_FLAG_REL, eval_affine_series, require_converged,
                     term_cap)
from .specfun import sinpi

_SQRT_PI = math.sqrt(math.pi)
_LOG_PI = math.log(math.pi)


# ---------------------------------------------------------------------------
# closed forms at alpha = 1/2 (used as fallbacks and as test oracles)

def stable_half_pdf(x, t=1.0):
    """Exact density of the 1/2-stable subordinator (Laplace exponent s**0.5)."""
    x = np.asarray(x, dtype=np.float64)
    return t * x ** -1.5 * np.exp(-t * t / (4.0 * x)) / (2.0 * _SQRT_PI)


def inv_stable_half_pdf(x, t=1.0):
    """Exact density of the inverse 1/2-stable subordinator."""
    x = np.asarray(x, dtype=np.float64)
    return np.exp(-x * x / (4.0 * t)) / math.sqrt(math.pi * t)


# ---------------------------------------------------------------------------
# series tables

@lru_cache(maxsize=128)
def _stable_table(alpha: float, n: int):
    k = np.arange(1, n + 1, dtype=np.float64)
    s = np.array([sinpi(alpha * float(kk)) for kk in k])
    with np.errstate(divide="ignore"):
        lgc = (np.vectorize(math.lgamma)(1.0 + k * alpha)
               - np.vectorize(math.lgamma)(k + 1.0)
               + np.log(np.abs(s)) - _LOG_PI)
    sgn = np.where(k % 2 == 1, 1.0, -1.0) * np.sign(s)
    pw = -(1.0 + alpha * k)
    one = np.ones(n)
    zero = np.zeros(n)
    return lgc, sgn, pw, one, zero


@lru_cache(maxsize=128)
def _inv_stable_table(alpha: float, n: int):
    k = np.arange(0, n, dtype=np.float64)
    s = np.array([sinpi(alpha * float(kk + 1)) for kk in k])
    with np.errstate(divide="ignore"):
        lgc = (np.vectorize(math.lgamma)((1.0 + k) * alpha)
               - np.vectorize(math.lgamma)(k + 1.0)
               + np.log(np.abs(s)) - _LOG_PI)
    sgn = np.where(k % 2 == 0, 1.0, -1.0) * np.sign(s)
    pw = k.copy()
    return lgc, sgn, pw, np.ones(n), np.zeros(n)


# ---------------------------------------------------------------------------
# grid evaluators

def stable_pdf_grid(p: StableParams, xs, *, flag_rel: float = DEFAULT_FLAG_REL,
                    cap: int | None = None):
    """Density of the stable subordinator on an array of points.

    Returns ``(values, err_estimates, terms_used, flags)``.
    """
    xs = np.ascontiguousarray(xs, dtype=np.float64)
    if np.any(xs <= 0.0):
        raise DomainError("stable_pdf requires x > 0")
    tpow = p.t ** (-1.0 / p.alpha)
    y = xs * tpow
    val, err, terms, status = eval_affine_series(
        lambda n: _stable_table(p.alpha, n), np.log(y),
        cap=cap, what="stable series")
    require_converged(status, "stable series", cap)
    flags = np.where((err > flag_rel * np.abs(val)) | (status == 2),
                     FLAG_ACCURACY, FLAG_OK)
    val = val * tpow
    err = err * tpow
    if p.alpha == 0.5:
        m = flags == FLAG_ACCURACY
        if m.any():
            cf = stable_half_pdf(xs[m], p.t)
            val[m] = cf
            err[m] = 4.0 * np.finfo(float).eps * cf
            terms[m] = 0
            flags[m] = FLAG_CLOSED_FORM
    return val, err, terms, flags.astype(np.int8)


def inv_stable_pdf_grid(p: StableParams, xs, *, flag_rel: float = DEFAULT_FLAG_REL,
                        cap: int | None = None):
    """Density of the inverse stable subordinator on an array of points
    (entire in x; defined for x >= 0)."""
    xs = np.ascontiguousarray(xs, dtype=np.float64)
    if np.any(xs < 0.0):
        raise DomainError("inv_stable_pdf requires x >= 0")
    tpow = p.t ** (-p.alpha)
    val = np.empty_like(xs)
    err = np.zeros_like(xs)
    terms = np.ones(xs.shape, dtype=np.int64)
    flags = np.zeros(xs.shape, dtype=np.int8)
    zero = xs == 0.0
    if zero.any():
        val[zero] = tpow / math.gamma(1.0 - p.alpha)
    pos = ~zero
    if pos.any():
        y = xs[pos] * tpow
        v, e, tm, status = eval_affine_series(
            lambda n: _inv_stable_table(p.alpha, n), np.log(y),
            cap=cap, what="inverse stable series")
        require_converged(status, "inverse stable series", cap)
        f = np.where((e > flag_rel * np.abs(v)) | (status == 2),
                     FLAG_ACCURACY, FLAG_OK)
        v = v * tpow
        e = e * tpow
        if p.alpha == 0.5:
            m = f == FLAG_ACCURACY
            if m.any():
                cf = inv_stable_half_pdf(xs[pos][m], p.t)
                v[m] = cf
                e[m] = 4.0 * np.finfo(float).eps * cf
                tm[m] = 0
                f[m] = FLAG_CLOSED_FORM
        val[pos] = v
        err[pos] = e
        terms[pos] = tm
        flags[pos] = f
    return val, err, terms, flags


def _scalar(grid_fn, p, x, **kw) -> DensityValue:
    v, e, t, f = grid_fn(p, np.array([x], dtype=np.float64), **kw)
    return DensityValue(float(v[0]), float(e[0]), int(t[0]), int(f[0]))


def stable_pdf(p: StableParams, x: float, **kw) -> DensityValue:
    """Density of the stable subordinator at a point x > 0."""
    return _scalar(stable_pdf_grid, p, x, **kw)


def inv_stable_pdf(p: StableParams, x: float, **kw) -> DensityValue:
    """Density of the inverse stable subordinator at a point x >= 0."""
    return _scalar(inv_stable_pdf_grid, p, x, **kw)


# ---------------------------------------------------------------------------
# integer powers (change of variables y = x**(1/n) on the base series)

def _power_transform(grid_fn, p, n, xs, kw):
    if not (isinstance(n, (int, np.integer)) and n >= 1):
        raise DomainError(f"power must be an integer >= 1, got {n}")
    xs = np.ascontiguousarray(xs, dtype=np.float64)
    if np.any(xs <= 0.0):
        raise DomainError("power densities require x > 0")
    root = xs ** (1.0 / n)
    jac = root / (n * xs)          # (1/n) x^{1/n - 1}
    v, e, t, f = grid_fn(p, root, **kw)
    return v * jac, e * jac, t, f


def stable_power_pdf_grid(p: StableParams, n: int, xs, **kw):
    """Density of the n-th power of the stable subordinator."""
    return _power_transform(stable_pdf_grid, p, n, xs, kw)


def inv_stable_power_pdf_grid(p: StableParams, n: int, xs, **kw):
    """Density of the n-th power of the inverse stable subordinator."""
    return _power_transform(inv_stable_pdf_grid, p, n, xs, kw)


def stable_power_pdf(p: StableParams, n: int, x: float, **kw) -> DensityValue:
    v, e, t, f = stable_power_pdf_grid(p, n, np.array([x]), **kw)
    return DensityValue(float(v[0]), float(e[0]), int(t[0]), int(f[0]))


def inv_stable_power_pdf(p: StableParams, n: int, x: float, **kw) -> DensityValue:
    v, e, t, f = inv_stable_power_pdf_grid(p, n, np.array([x]), **kw)
    return DensityValue(float(v[0]), float(e[0]), int(t[0]), int(f[0]))


# ---------------------------------------------------------------------------
# Mellin transforms (log-gamma evaluation, removable singularity at s=1)

def stable_mellin(p: StableParams, s) -> complex:
    """Mellin transform E[X**(s-1)] of the stable subordinator in the strip
    Re(s) < 1 + alpha (first pole line at s = 1 + alpha)."""
    s = complex(s)
    if s.real >= 1.0 + p.alpha:
        raise StripError(
            f"stable Mellin transform requires Re(s) < 1 + alpha = {1 + p.alpha}")
    w = 1.0 - s
    out = np.exp(_cloggamma(1.0 + w / p.alpha) - _cloggamma(1.0 + w)
                 - (w / p.alpha) * math.log(p.t))
    return complex(out)


def inv_stable_mellin(p: StableParams, s) -> complex:
    """Mellin transform of the inverse stable subordinator, Re(s) > 0."""
    s = complex(s)
    if s.real <= 0.0:
        raise StripError("inverse stable Mellin transform requires Re(s) > 0")
    w = (1.0 - s) * p.alpha
    out = np.exp(_cloggamma(s) - _cloggamma(1.0 - w) - w * math.log(p.t))
    return complex(out)


# ---------------------------------------------------------------------------
# x -> 0+ behavior

def inv_stable_limit0(p: StableParams) -> float:
    """lim_{x->0+} of the inverse stable density: t**(-alpha)/Gamma(1-alpha)."""
    return p.t ** (-p.alpha) / math.gamma(1.0 - p.alpha)


def inv_stable_power_limit0(p: StableParams, n: int = 1) -> LimitStructure:
    """Leading x->0+ behavior of the n-th power density.

    The published constant for this limit uses the k=n series term and can be
    negative; the k=1 term of the power series gives the actual leading
    behavior ``x**(1/n - 1) * t**(-alpha) / (n*Gamma(1-alpha))``, which this
    returns (for n=1 it reduces to the plain limit).
    """
    if not (isinstance(n, (int, np.integer)) and n >= 1):
        raise DomainError(f"power must be an integer >= 1, got {n}")
    return LimitStructure(1.0 / n - 1.0, 0.0, 0.0, inv_stable_limit0(p) / n)
