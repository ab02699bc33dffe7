"""Pure-numpy kernels: vectorized fallbacks for the numba hot loops.

Each function mirrors one in ``_kernels_numba`` (same name, signature and
semantics).  Series kernels vectorize across evaluation points and loop over
terms in Python; samplers vectorize across paths.
"""

from __future__ import annotations

import numpy as np

_EPS = np.finfo(np.float64).eps
_LOG_MAX = 700.0


def affine_log_series(L, lgc, sgn, pw, aff0, aff1, eps_rel, eps_abs, stop_run):
    """Sum ``sgn_k * exp(lgc_k + pw_k*L) * (aff0_k + aff1_k*L)`` per point.

    Kahan-compensated with the shared stop rule; returns
    ``(value, err_estimate, terms_used, converged)``.
    """
    npts = L.shape[0]
    nterms = lgc.shape[0]
    s = np.zeros(npts)
    comp = np.zeros(npts)
    sum_abs = np.zeros(npts)
    last = np.zeros(npts)
    run = np.zeros(npts, dtype=np.int64)
    terms = np.zeros(npts, dtype=np.int64)
    status = np.ones(npts, dtype=np.int8)   # 1 = cap exhausted
    active = np.arange(npts)
    err_state = np.errstate(invalid="ignore", over="ignore")
    err_state.__enter__()
    for k in range(nterms):
        La = L[active]
        z = lgc[k] + pw[k] * La
        term = np.where(z > _LOG_MAX, np.inf,
                        sgn[k] * np.exp(np.minimum(z, _LOG_MAX)) *
                        (aff0[k] + aff1[k] * La))
        bad = ~np.isfinite(term)
        a = np.abs(term)
        # Kahan update
        y = term - comp[active]
        t_new = s[active] + y
        comp[active] = (t_new - s[active]) - y
        s[active] = t_new
        sum_abs[active] += a
        last[active] = a
        small = a <= eps_rel * np.abs(s[active]) + eps_abs
        run[active] = np.where(small, run[active] + 1, 0)
        terms[active] = k + 1
        done = (run[active] >= stop_run) | bad
        if done.any():
            status[active[done & ~bad]] = 0
            status[active[bad]] = 2
            s[active[bad]] = np.inf
            active = active[~done]
            if active.size == 0:
                break
    err_state.__exit__(None, None, None)
    err = last + np.abs(comp) + _EPS * sum_abs
    err[status == 2] = np.inf
    return s, err, terms, status


def kanter(u, e, alpha):
    """One-sided stable variates (Laplace transform exp(-s**alpha)) from
    uniforms ``u`` and unit exponentials ``e``."""
    th = np.pi * u
    la = (alpha * np.log(np.sin(alpha * th))
          + (1.0 - alpha) * np.log(np.sin((1.0 - alpha) * th))
          - np.log(np.sin(th))) / (1.0 - alpha)
    return np.exp((1.0 - alpha) / alpha * (la - np.log(e)))


def tempered_increments(gen, count, alpha, lam, scale):
    """``count`` draws of a tempered stable increment: stable(scale) draws
    accepted with probability exp(-lam*x).  Returns (draws, proposals_used)."""
    out = np.empty(count)
    need = np.arange(count)
    proposals = 0
    while need.size:
        u = np.clip(gen.random(need.size), 1e-16, 1.0 - 1e-16)
        e = gen.standard_exponential(need.size)
        x = kanter(u, e, alpha) * scale
        proposals += need.size
        acc = gen.random(need.size) < np.exp(-lam * x)
        out[need[acc]] = x[acc]
        need = need[~acc]
    return out, proposals


def invtemp_paths(gen, n, alpha, lam, t, dw):
    """First passage of a tempered stable path above level t on a dw-grid.

    Step-synchronous across paths: every grid step draws increments for all
    still-active paths, so the draw order differs from the numba per-path
    version (per-backend determinism only).
    """
    scale = dw ** (1.0 / alpha)
    w = np.zeros(n)
    D = np.zeros(n)
    active = np.arange(n)
    while active.size:
        inc, _ = tempered_increments(gen, active.size, alpha, lam, scale)
        D[active] += inc
        w[active] += dw
        active = active[D[active] <= t]
    return w


def kde_eval(grid, data, h):
    """Gaussian KDE evaluated at ``grid`` (Silverman-style bandwidth ``h``)."""
    out = np.zeros(grid.shape[0])
    norm = 1.0 / (data.shape[0] * h * np.sqrt(2.0 * np.pi))
    block = 1 << 15
    for i in range(0, data.shape[0], block):
        d = data[i:i + block]
        z = (grid[:, None] - d[None, :]) / h
        out += np.exp(-0.5 * z * z).sum(axis=1)
    return out * norm
