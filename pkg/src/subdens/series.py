"""Shared series-evaluation defaults and the grow-until-converged driver.

Termination rule (used by every series in the package): a term counts as
small when ``|term| <= eps_rel*|partial| + eps_abs``; summation stops after
``stop_run`` consecutive small terms.  The run length is 2 by default and 3
for the product series, whose sine factors can zero out two adjacent rows at
once.  The reported error estimate is the magnitude of the last (smallest)
term plus the accumulated compensation residue of the Kahan sum.
"""

from __future__ import annotations

import os
from typing import Callable

import numpy as np

from .backend import kernels
from .errors import NonConvergenceError

DEFAULT_EPS_REL = 1e-14
DEFAULT_EPS_ABS = 1e-300
#: relative error-estimate threshold beyond which a value is accuracy-flagged
DEFAULT_FLAG_REL = 1e-11

TERM_CAP_ENV = "SUBORD_TERM_CAP"
DEFAULT_TERM_CAP = 10_000


def term_cap(override: int | None = None) -> int:
    """Global series term cap; ``SUBORD_TERM_CAP`` overrides the default."""
    if override is not None:
        return int(override)
    env = os.environ.get(TERM_CAP_ENV)
    if env:
        try:
            return max(8, int(env))
        except ValueError:
            pass
    return DEFAULT_TERM_CAP


TableBuilder = Callable[[int], tuple[np.ndarray, ...]]


def eval_affine_series(build: TableBuilder, logx: np.ndarray, *,
                       eps_rel: float = DEFAULT_EPS_REL,
                       eps_abs: float = DEFAULT_EPS_ABS,
                       stop_run: int = 2,
                       cap: int | None = None,
                       initial: int = 128,
                       what: str = "series"):
    """Evaluate ``sum_k sgn_k exp(lgc_k + pw_k*L) * (aff0_k + aff1_k*L)``.

    ``build(n)`` must return the first ``n`` table rows ``(lgc, sgn, pw,
    aff0, aff1)``.  The table grows geometrically until every point
    converges or the term cap is reached.

    Returns ``(values, err_estimates, terms_used, status)`` arrays; status
    is 0 for converged points, 1 when the term cap was exhausted, 2 when a
    term overflowed the double range (hopeless-cancellation region; value
    and error are +inf and the caller flags the point).
    """
    logx = np.ascontiguousarray(logx, dtype=np.float64)
    cap = term_cap(cap)
    n = min(cap, initial)
    while True:
        tables = [np.ascontiguousarray(a, dtype=np.float64) for a in build(n)]
        val, err, terms, status = kernels().affine_log_series(
            logx, *tables, eps_rel, eps_abs, stop_run)
        if not (status == 1).any() or n >= cap:
            return val, err, terms, status
        n = min(cap, n * 4)


def require_converged(status: np.ndarray, what: str, cap: int | None = None) -> None:
    """Raise if any point exhausted the term cap (status 1).  Overflowed
    points (status 2) are left to the caller's accuracy flagging."""
    if (status == 1).any():
        raise NonConvergenceError(
            f"{what}: {int((status == 1).sum())} point(s) did not converge "
            f"within {term_cap(cap)} terms")
