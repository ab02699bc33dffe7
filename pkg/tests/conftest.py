import math

import numpy as np
import pytest
from scipy.integrate import quad

import subdens as sd


def logquad(pdf_scalar, lo=1e-12, hi=1e12, **kw):
    """Integrate a scalar density over (lo, hi) in log coordinates."""
    val, err = quad(lambda v: pdf_scalar(math.exp(v)) * math.exp(v),
                    math.log(lo), math.log(hi), limit=400, **kw)
    return val


@pytest.fixture
def rng():
    return np.random.default_rng(20260811)


def sanitized(grid_fn):
    return sd.sanitized_pdf(grid_fn)


def stable_small_value_cdf(alpha, u):
    """P(D_alpha(1) <= u) for small u, from the saddle-point form of the
    density, A u^-b exp(-c u^-q).  Exact at alpha=1/2 (Levy); used only to
    bound the sub-float64 tail remainders in normalization tests."""
    q = alpha / (1.0 - alpha)
    b = (2.0 - alpha) / (2.0 - 2.0 * alpha)
    c = (1.0 - alpha) * alpha ** q
    A = alpha ** (1.0 / (2.0 - 2.0 * alpha)) / math.sqrt(2.0 * math.pi * (1.0 - alpha))
    val, _ = quad(lambda w: A * w ** -b * math.exp(-c * w ** -q), 0.0, u,
                  limit=200)
    return val


def total_mass(grid_fn, lo=1e-12, hi=1e30, n=16385):
    """Mass of a density: Simpson in log coordinates on a dense grid.

    The wide upper cut covers the x**(-alpha) subordinator tails (mass beyond
    1e30 is < 1e-9 for every family under test); evaluating the whole grid at
    once also gives `sanitized_pdf` the context it needs to zero the
    cancellation-dominated ends.
    """
    from scipy.integrate import simpson

    pdf = sd.sanitized_pdf(grid_fn)
    v = np.linspace(math.log(lo), math.log(hi), n)
    x = np.exp(v)
    return float(simpson(pdf(x) * x, x=v))


def mellin_of_density(grid_fn, s, lo=1e-14, v_hi=33.0, n=65537):
    """Numerical Mellin transform of a density by dense-grid Simpson in log
    coordinates (the grid gives `sanitized_pdf` the context to clip the
    cancellation-dominated ends).

    ``v_hi`` is the upper limit in log(x); for algebraic tails it must cover
    ~46/(pole_edge - Re(s)) e-foldings.  The integrand is assembled in log
    space so windows far beyond the float range of x**s are usable.
    """
    from scipy.integrate import simpson

    pdf = sd.sanitized_pdf(grid_fn)
    s = complex(s)
    v = np.linspace(math.log(lo), v_hi, n)
    x = np.exp(v)
    f = pdf(x)
    with np.errstate(divide="ignore"):
        m = s.real * v + np.where(f > 0.0, np.log(np.where(f > 0, f, 1.0)),
                                  -np.inf)
    w = np.exp(np.minimum(m, 700.0)) * np.exp(1j * s.imag * v)
    return complex(simpson(w, x=v))


def inv_stable_mass_with_tail(alpha, t, **kw):
    """Inverse-stable mass plus the analytic remainder beyond the reachable
    region: P(E > x_cut) = P(D(1) <= t * x_cut^(-1/alpha))."""
    p = sd.StableParams(alpha, t)
    pdf = sd.sanitized_pdf(lambda xs: sd.inv_stable_pdf_grid(p, xs))
    v = np.linspace(math.log(1e-12), math.log(1e6), 16385)
    x = np.exp(v)
    y = pdf(x)
    from scipy.integrate import simpson

    mass = float(simpson(y * x, x=v))
    nz = np.nonzero(y > 0)[0]
    x_cut = x[nz[-1]] if nz.size else 1e6
    return mass + stable_small_value_cdf(alpha, t * x_cut ** (-1.0 / alpha))
