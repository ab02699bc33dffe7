"""Densities of products and quotients of independent (inverse) stable
subordinators, via residue summation of their Mellin transforms.

Product of inverses: the transform ``H1(s) H2(s)`` has double poles at the
non-positive integers, so each series term carries a digamma bracket and a
``log(x)`` factor.  The series here is the k-from-0 residue form (the
published k-from-1 statement is the same series shifted, up to the sign of
the ``(a1-a2)``-sine correction, which the residue expansion fixes as minus).

Product of subordinators: ``F1(s) F2(s)`` is analytic in the *left*
half-plane (the density is exponentially flat at 0); its poles sit at
``s = 1 + k*a1`` and ``s = 1 + m*a2``.  Summing those residues gives a
descending-power series, with merged double-pole (digamma/log) terms when
``k*a1 == m*a2`` and dropped terms when the pole lands on an integer (killed
by the double zero of ``1/Gamma(1-s)**2``).  The published ascending-power
form cannot represent this density; see the module tests.

Quotient of inverses: the residue at ``s=-k`` carries ``Gamma(k+2)/k! =
k+1``; the published series drops that factor (at a1=a2=1/2 it then fails to
normalize), so the factor is kept.  For ``a1 > a2`` the series is summed via
the exact reflection ``q_{a1,a2}(x) = x**-2 * q_{a2,a1}(1/x)`` (the swapped
series is entire); for ``a1 == a2`` the radius is 1 and the reflection maps
``x > 1`` inside, leaving a narrow band near ``x = 1`` that is evaluated by
numerical Mellin inversion and flagged.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

from .errors import DomainError
from .params import (FLAG_ACCURACY, FLAG_MELLIN, FLAG_OK, DensityValue,
                     LimitStructure, PairParams, StableParams)
from .series import DEFAULT_FLAG_REL, eval_affine_series, require_converged, term_cap
from .specfun import digamma, lg_rgamma, sinpi
from . import stable as _stable

_LOG_PI = math.log(math.pi)
_EPS = np.finfo(np.float64).eps

# pole-collision thresholds for the product-of-subordinators series
_ITOL = 1e-9   # |c - round(c)|: pole killed by the 1/Gamma(1-s)^2 double zero
_CTOL = 1e-9   # |k*a1 - m*a2|: poles merged into one double-pole term


# ---------------------------------------------------------------------------
# product of inverse subordinators

@lru_cache(maxsize=64)
def _product_inv_table(a1: float, a2: float, n: int):
    """Affine rows (two per k) for the reduced series in y = x*t^-(a1+a2)."""
    nk = (n + 1) // 2
    lgc = np.empty(2 * nk)
    sgn = np.empty(2 * nk)
    pw = np.empty(2 * nk)
    aff0 = np.empty(2 * nk)
    aff1 = np.empty(2 * nk)
    for k in range(nk):
        g = (math.lgamma((k + 1) * a1) + math.lgamma((k + 1) * a2)
             - 2.0 * math.lgamma(k + 1.0))
        s1 = sinpi((k + 1) * a1)
        s2 = sinpi((k + 1) * a2)
        q = (2.0 * digamma(k + 1.0) - a1 * digamma((k + 1) * a1)
             - a2 * digamma((k + 1) * a2))
        d = ((a1 + a2) * sinpi((k + 1) * (a1 + a2))
             - (a1 - a2) * sinpi((k + 1) * (a1 - a2)))
        i = 2 * k
        ss = s1 * s2
        lgc[i] = g + (math.log(abs(ss)) if ss != 0.0 else -math.inf) - 2.0 * _LOG_PI
        sgn[i] = math.copysign(1.0, ss) if ss != 0.0 else 0.0
        pw[i] = k
        aff0[i] = q
        aff1[i] = -1.0
        lgc[i + 1] = g + (math.log(abs(d)) if d != 0.0 else -math.inf) \
            - math.log(2.0 * math.pi)
        sgn[i + 1] = -math.copysign(1.0, d) if d != 0.0 else 0.0
        pw[i + 1] = k
        aff0[i + 1] = 1.0
        aff1[i + 1] = 0.0
    return lgc, sgn, pw, aff0, aff1


def product_inv_pdf_grid(p: PairParams, xs, *,
                         flag_rel: float = DEFAULT_FLAG_REL,
                         cap: int | None = None):
    """Density of the product of two independent inverse stable subordinators."""
    xs = np.ascontiguousarray(xs, dtype=np.float64)
    if np.any(xs <= 0.0):
        raise DomainError("product_inv_pdf requires x > 0")
    a1, a2 = sorted((p.alpha1, p.alpha2))  # series symmetric: canonical order
    s = a1 + a2
    tpow = p.t ** (-s)
    y = xs * tpow
    val, err, terms, status = eval_affine_series(
        lambda n: _product_inv_table(a1, a2, n), np.log(y),
        stop_run=6, cap=cap, what="product-inverse series")
    require_converged(status, "product-inverse series", cap)
    val = val * tpow
    err = err * tpow
    flags = np.where((err > flag_rel * np.abs(val)) | (status == 2),
                     FLAG_ACCURACY, FLAG_OK).astype(np.int8)
    return val, err, terms, flags


def product_inv_pdf(p: PairParams, x: float, **kw) -> DensityValue:
    v, e, t, f = product_inv_pdf_grid(p, np.array([x], dtype=np.float64), **kw)
    return DensityValue(float(v[0]), float(e[0]), int(t[0]), int(f[0]))


def product_inv_limit0(p: PairParams) -> LimitStructure:
    """x->0+ behavior ``c1*log(x) + c0`` (k=0 residue; c1 < 0)."""
    a1, a2, t = p.alpha1, p.alpha2, p.t
    s = a1 + a2
    C = math.gamma(a1) * math.gamma(a2) * t ** (-s) / math.pi ** 2
    ss = sinpi(a1) * sinpi(a2)
    q0 = 2.0 * digamma(1.0) - a1 * digamma(a1) - a2 * digamma(a2)
    d0 = (a1 + a2) * sinpi(a1 + a2) - (a1 - a2) * sinpi(a1 - a2)
    c1 = -C * ss
    c0 = C * ss * (q0 + s * math.log(t)) - C * d0 * math.pi / 2.0
    return LimitStructure(0.0, 0.0, c1, c0)


# ---------------------------------------------------------------------------
# product of stable subordinators (descending powers, pole merging)

@lru_cache(maxsize=64)
def _product_stable_poles(a1: float, a2: float, n: int):
    """First n surviving pole rows (sorted by ascending pole order c).

    Row = (lgc, sgn, pw, aff0, aff1) for the reduced variable
    y = x * t^-(1/a1 + 1/a2); simple poles have aff = (1, 0), merged double
    poles carry the digamma/log bracket (aff1 = 1).
    """
    kmax = int(n * max(a1, a2) / min(a1, a2)) + n + 4
    cand = [(k * a1, 1, k) for k in range(1, kmax)]
    cand += [(m * a2, 2, m) for m in range(1, kmax)]
    cand.sort()
    rows = []
    i = 0
    while i < len(cand) and len(rows) < n:
        c, fam, k = cand[i]
        merged = (i + 1 < len(cand)
                  and abs(cand[i + 1][0] - c) <= _CTOL * max(1.0, c))
        if abs(c - round(c)) <= _ITOL * max(1.0, c):
            i += 2 if merged else 1
            continue
        if merged:
            k1 = k if fam == 1 else cand[i + 1][2]
            m2 = cand[i + 1][2] if cand[i + 1][1] == 2 else k
            lgg, _ = lg_rgamma(-c)
            lgc = -math.lgamma(k1 + 1.0) - math.lgamma(m2 + 1.0) + 2.0 * lgg
            sgn = 1.0 if (k1 + m2) % 2 == 0 else -1.0
            b = (-2.0 * digamma(-c) + digamma(k1 + 1.0) / a1
                 + digamma(m2 + 1.0) / a2)
            rows.append((lgc, sgn, -1.0 - c, b, 1.0))
            i += 2
        else:
            ao = a2 if fam == 1 else a1
            lgo, sgo = lg_rgamma(-c / ao)
            lgg, _ = lg_rgamma(-c)
            lgc = -math.lgamma(k + 1.0) + 2.0 * lgg - lgo - math.log(ao)
            sgn = (1.0 if k % 2 == 0 else -1.0) * sgo
            rows.append((lgc, sgn, -1.0 - c, 1.0, 0.0))
            i += 1
    arr = np.array(rows, dtype=np.float64).reshape(-1, 5)
    return (np.ascontiguousarray(arr[:, 0]), np.ascontiguousarray(arr[:, 1]),
            np.ascontiguousarray(arr[:, 2]), np.ascontiguousarray(arr[:, 3]),
            np.ascontiguousarray(arr[:, 4]))


def product_stable_pdf_grid(p: PairParams, xs, *,
                            flag_rel: float = DEFAULT_FLAG_REL,
                            cap: int | None = None):
    """Density of the product of two independent stable subordinators."""
    xs = np.ascontiguousarray(xs, dtype=np.float64)
    if np.any(xs <= 0.0):
        raise DomainError("product_stable_pdf requires x > 0")
    a1, a2 = sorted((p.alpha1, p.alpha2))
    s = 1.0 / a1 + 1.0 / a2
    tpow = p.t ** (-s)
    y = xs * tpow
    val, err, terms, status = eval_affine_series(
        lambda n: _product_stable_poles(a1, a2, n), np.log(y),
        stop_run=4, cap=cap, what="product-stable series")
    require_converged(status, "product-stable series", cap)
    val = val * tpow
    err = err * tpow
    flags = np.where((err > flag_rel * np.abs(val)) | (status == 2),
                     FLAG_ACCURACY, FLAG_OK).astype(np.int8)
    return val, err, terms, flags


def product_stable_pdf(p: PairParams, x: float, **kw) -> DensityValue:
    v, e, t, f = product_stable_pdf_grid(p, np.array([x], dtype=np.float64), **kw)
    return DensityValue(float(v[0]), float(e[0]), int(t[0]), int(f[0]))


def product_stable_limit0(p: PairParams) -> LimitStructure:
    """Leading term of the residue series: the x -> +infinity tail.

    The transform is analytic in the left half-plane, so the density has no
    power-log behavior at 0+ (it is exponentially flat there) and the
    published 0+ statement has no valid instantiation; the structure returned
    here describes the descending leading term, ``at_infinity=True``.
    """
    a1, a2 = sorted((p.alpha1, p.alpha2))
    lgc, sgn, pw, aff0, aff1 = _product_stable_poles(a1, a2, 4)
    c = -1.0 - pw[0]
    s = 1.0 / a1 + 1.0 / a2
    coef = sgn[0] * math.exp(lgc[0]) * p.t ** (c * s)
    if aff1[0] == 0.0:
        return LimitStructure(pw[0], 0.0, 0.0, coef, at_infinity=True)
    # double pole: coef * (log y + b) with log y = log x - S log t
    return LimitStructure(pw[0], 0.0, coef,
                          coef * (aff0[0] - s * math.log(p.t)), at_infinity=True)


# ---------------------------------------------------------------------------
# quotient of inverse subordinators

@lru_cache(maxsize=64)
def _quotient_table(a1: float, a2: float, n: int):
    k = np.arange(1, n + 1, dtype=np.float64)
    lgc = np.empty(n)
    sgn = np.empty(n)
    for i, kk in enumerate(k):
        l1, s1 = lg_rgamma(1.0 - kk * a1)
        l2, s2 = lg_rgamma(1.0 + kk * a2)
        lgc[i] = l1 + l2 + math.log(kk)
        sgn[i] = (1.0 if (int(kk) - 1) % 2 == 0 else -1.0) * s1 * s2
    pw = k - 1.0
    return lgc, sgn, pw, np.ones(n), np.zeros(n)


def _quotient_direct(a1: float, a2: float, ys: np.ndarray, cap):
    val, err, terms, status = eval_affine_series(
        lambda n: _quotient_table(a1, a2, n), np.log(ys),
        stop_run=2, cap=cap, what="quotient series")
    return val, err, terms, status


def quotient_inv_pdf_grid(p: PairParams, xs, *,
                          flag_rel: float = DEFAULT_FLAG_REL,
                          cap: int | None = None):
    """Density of the quotient of two independent inverse stable subordinators.

    Independent of t when a1 == a2.  Points outside the series' practical
    convergence domain (only the band near x=1 when a1 == a2) fall back to
    numerical Mellin inversion and are flagged.
    """
    xs = np.ascontiguousarray(xs, dtype=np.float64)
    if np.any(xs <= 0.0):
        raise DomainError("quotient_inv_pdf requires x > 0")
    a1, a2, t = p.alpha1, p.alpha2, p.t
    capn = term_cap(cap)
    val = np.empty_like(xs)
    err = np.empty_like(xs)
    terms = np.zeros(xs.shape, dtype=np.int64)
    flags = np.zeros(xs.shape, dtype=np.int8)
    tpow = t ** (a2 - a1)          # q(x,t) = t^(a2-a1) * q(x * t^(a2-a1), 1)
    y_all = xs * tpow

    # choose, per point, the series orientation that converges
    if a1 < a2:
        direct = np.ones(xs.shape, dtype=bool)
    elif a1 > a2:
        direct = np.zeros(xs.shape, dtype=bool)
    else:
        direct = y_all <= 1.0
    hard = np.zeros(xs.shape, dtype=bool)
    if a1 == a2:
        # radius 1: terms ~ y^k, cost ~ log(eps)/log(y)
        with np.errstate(divide="ignore"):
            ymin = np.minimum(y_all, 1.0 / y_all)
            need = np.where(ymin >= 1.0, np.inf, -34.0 / np.log(ymin))
        hard = need > 0.8 * capn
    for sel, swapped in ((direct & ~hard, False), (~direct & ~hard, True)):
        if not sel.any():
            continue
        if swapped:
            ys = 1.0 / y_all[sel]
            v, e, tm, status = _quotient_direct(a2, a1, ys, cap)
            jac = tpow / (y_all[sel] ** 2)
        else:
            v, e, tm, status = _quotient_direct(a1, a2, y_all[sel], cap)
            jac = tpow
        require_converged(status, "quotient series", cap)
        val[sel] = v * jac
        err[sel] = e * jac
        terms[sel] = tm
        flags[sel] = np.where((e * jac > flag_rel * np.abs(v * jac))
                              | (status == 2), FLAG_ACCURACY, FLAG_OK)
    if hard.any():
        from .oracle import ContourSpec, mellin_invert
        spec = ContourSpec(c=1.0, half_height=60.0, node_count=512,
                           strip=(0.0, 2.0))
        for i in np.nonzero(hard)[0]:
            r = mellin_invert(lambda s: quotient_mellin(p, s), spec, float(xs[i]))
            val[i] = r.value
            err[i] = r.err_estimate
            terms[i] = -1
            flags[i] = FLAG_MELLIN
    return val, err, terms, flags


def quotient_inv_pdf(p: PairParams, x: float, **kw) -> DensityValue:
    v, e, t, f = quotient_inv_pdf_grid(p, np.array([x], dtype=np.float64), **kw)
    return DensityValue(float(v[0]), float(e[0]), int(t[0]), int(f[0]))


def quotient_limit0(p: PairParams) -> LimitStructure:
    """x->0+ limit 1/(Gamma(1-a1) Gamma(1+a2) t^(a1-a2)) (the k=1 term)."""
    v = (p.t ** (p.alpha2 - p.alpha1)
         / (math.gamma(1.0 - p.alpha1) * math.gamma(1.0 + p.alpha2)))
    return LimitStructure(0.0, 0.0, 0.0, v)


# ---------------------------------------------------------------------------
# Mellin transforms of the three composite densities (oracle targets)

def product_inv_mellin(p: PairParams, s) -> complex:
    return (_stable.inv_stable_mellin(StableParams(p.alpha1, p.t), s)
            * _stable.inv_stable_mellin(StableParams(p.alpha2, p.t), s))


def product_stable_mellin(p: PairParams, s) -> complex:
    return (_stable.stable_mellin(StableParams(p.alpha1, p.t), s)
            * _stable.stable_mellin(StableParams(p.alpha2, p.t), s))


def quotient_mellin(p: PairParams, s) -> complex:
    return (_stable.inv_stable_mellin(StableParams(p.alpha1, p.t), s)
            * _stable.inv_stable_mellin(StableParams(p.alpha2, p.t), 2.0 - s))
