"""Numba kernels: @njit scalar-loop versions of the hot paths.

Mirrors ``_kernels_numpy`` name-for-name; see that module for semantics.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit

_EPS = np.finfo(np.float64).eps
_LOG_MAX = 700.0


@njit(cache=True)
def affine_log_series(L, lgc, sgn, pw, aff0, aff1, eps_rel, eps_abs, stop_run):
    npts = L.shape[0]
    nterms = lgc.shape[0]
    val = np.zeros(npts)
    err = np.zeros(npts)
    terms = np.zeros(npts, dtype=np.int64)
    status = np.ones(npts, dtype=np.int8)
    for i in range(npts):
        Li = L[i]
        s = 0.0
        comp = 0.0
        sum_abs = 0.0
        last = 0.0
        run = 0
        used = 0
        st = 1
        for k in range(nterms):
            z = lgc[k] + pw[k] * Li
            used = k + 1
            if z > _LOG_MAX:
                s = np.inf
                st = 2
                break
            term = sgn[k] * math.exp(z) * (aff0[k] + aff1[k] * Li)
            if not math.isfinite(term):
                s = np.inf
                st = 2
                break
            a = abs(term)
            y = term - comp
            t_new = s + y
            comp = (t_new - s) - y
            s = t_new
            sum_abs += a
            last = a
            if a <= eps_rel * abs(s) + eps_abs:
                run += 1
                if run >= stop_run:
                    st = 0
                    break
            else:
                run = 0
        val[i] = s
        err[i] = np.inf if st == 2 else last + abs(comp) + _EPS * sum_abs
        terms[i] = used
        status[i] = st
    return val, err, terms, status


@njit(cache=True)
def _kanter_scalar(u, e, alpha):
    th = math.pi * u
    la = (alpha * math.log(math.sin(alpha * th))
          + (1.0 - alpha) * math.log(math.sin((1.0 - alpha) * th))
          - math.log(math.sin(th))) / (1.0 - alpha)
    return math.exp((1.0 - alpha) / alpha * (la - math.log(e)))


@njit(cache=True)
def kanter(u, e, alpha):
    n = u.shape[0]
    out = np.empty(n)
    for i in range(n):
        out[i] = _kanter_scalar(u[i], e[i], alpha)
    return out


@njit(cache=True)
def tempered_increments(gen, count, alpha, lam, scale):
    out = np.empty(count)
    proposals = 0
    for i in range(count):
        while True:
            u = gen.random()
            if u < 1e-16:
                u = 1e-16
            elif u > 1.0 - 1e-16:
                u = 1.0 - 1e-16
            e = gen.standard_exponential()
            x = _kanter_scalar(u, e, alpha) * scale
            proposals += 1
            if gen.random() < math.exp(-lam * x):
                out[i] = x
                break
    return out, proposals


@njit(cache=True)
def invtemp_paths(gen, n, alpha, lam, t, dw):
    scale = dw ** (1.0 / alpha)
    out = np.empty(n)
    for i in range(n):
        D = 0.0
        w = 0.0
        while D <= t:
            while True:
                u = gen.random()
                if u < 1e-16:
                    u = 1e-16
                elif u > 1.0 - 1e-16:
                    u = 1.0 - 1e-16
                e = gen.standard_exponential()
                x = _kanter_scalar(u, e, alpha) * scale
                if gen.random() < math.exp(-lam * x):
                    break
            D += x
            w += dw
        out[i] = w
    return out


@njit(cache=True)
def kde_eval(grid, data, h):
    m = grid.shape[0]
    n = data.shape[0]
    out = np.zeros(m)
    inv = 1.0 / h
    for j in range(n):
        d = data[j]
        for i in range(m):
            z = (grid[i] - d) * inv
            if z > -8.0 and z < 8.0:
                out[i] += math.exp(-0.5 * z * z)
    return out / (n * h * math.sqrt(2.0 * math.pi))
