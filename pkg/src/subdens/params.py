"""Parameter records and the density-evaluation result type."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError

# Flags carried by DensityValue / grid evaluations.
FLAG_OK = 0            # converged, error estimate within tolerance
FLAG_ACCURACY = 1      # series converged but cancellation error exceeds tolerance
FLAG_CLOSED_FORM = 2   # value comes from an exact closed-form fallback
FLAG_MELLIN = 3        # value comes from the numerical Mellin-inversion fallback

FLAG_NAMES = {FLAG_OK: None,
              FLAG_ACCURACY: "accuracy",
              FLAG_CLOSED_FORM: "closed-form-fallback",
              FLAG_MELLIN: "mellin-fallback"}

#: flags whose rows are marked ``terms=-1`` in CSV output (value is suspect or
#: produced by the quadrature fallback)
SUSPECT_FLAGS = (FLAG_ACCURACY, FLAG_MELLIN)


@dataclass(frozen=True)
class DensityValue:
    """One scalar density evaluation.

    Attributes
    ----------
    value : float
        The density estimate.
    err_estimate : float
        Heuristic absolute error bound: magnitude of the first omitted term
        plus the accumulated compensation residue of the summation.
    terms_used : int
        Number of series terms summed (0 for closed-form paths).
    flag : int
        One of the FLAG_* constants above.
    """

    value: float
    err_estimate: float
    terms_used: int
    flag: int = FLAG_OK

    @property
    def flag_name(self) -> str | None:
        return FLAG_NAMES[self.flag]

    @property
    def suspect(self) -> bool:
        return self.flag in SUSPECT_FLAGS


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise DomainError(msg)


def _finite(*vals) -> bool:
    return all(np.isfinite(v) for v in vals)


@dataclass(frozen=True)
class StableParams:
    """Stability index and time of a one-sided stable subordinator."""

    alpha: float
    t: float = 1.0

    def __post_init__(self):
        _require(_finite(self.alpha, self.t), "parameters must be finite")
        _require(0.0 < self.alpha < 1.0, f"alpha must lie in (0,1), got {self.alpha}")
        _require(self.t > 0.0, f"t must be positive, got {self.t}")


@dataclass(frozen=True)
class TemperedParams:
    """Stability index, tempering rate and time of a tempered stable subordinator."""

    alpha: float
    lam: float
    t: float = 1.0

    def __post_init__(self):
        _require(_finite(self.alpha, self.lam, self.t), "parameters must be finite")
        _require(0.0 < self.alpha < 1.0, f"alpha must lie in (0,1), got {self.alpha}")
        _require(self.lam >= 0.0, f"lambda must be >= 0, got {self.lam}")
        _require(self.t > 0.0, f"t must be positive, got {self.t}")

    @property
    def stable(self) -> StableParams:
        return StableParams(self.alpha, self.t)


@dataclass(frozen=True)
class PairParams:
    """Indices of two independent subordinators entering a product or quotient."""

    alpha1: float
    alpha2: float
    t: float = 1.0

    def __post_init__(self):
        _require(_finite(self.alpha1, self.alpha2, self.t), "parameters must be finite")
        _require(0.0 < self.alpha1 < 1.0, f"alpha1 must lie in (0,1), got {self.alpha1}")
        _require(0.0 < self.alpha2 < 1.0, f"alpha2 must lie in (0,1), got {self.alpha2}")
        _require(self.t > 0.0, f"t must be positive, got {self.t}")

    def swapped(self) -> "PairParams":
        return PairParams(self.alpha2, self.alpha1, self.t)


@dataclass(frozen=True)
class IGParams:
    """Scale, drift and time of the inverse-Gaussian (hitting-time) process."""

    delta: float
    gamma: float = 0.0
    t: float = 1.0

    def __post_init__(self):
        _require(_finite(self.delta, self.gamma, self.t), "parameters must be finite")
        _require(self.delta > 0.0, f"delta must be positive, got {self.delta}")
        _require(self.gamma >= 0.0, f"gamma must be >= 0, got {self.gamma}")
        _require(self.t > 0.0, f"t must be positive, got {self.t}")


@dataclass(frozen=True)
class MittagLefflerParams:
    """Parameters (a, b, c) of the three-parameter Mittag-Leffler function.

    ``a > 0`` and ``c > 0``; ``b`` may be any real.  Series terms whose
    gamma-denominator argument ``a*n + b`` lands on a pole contribute zero.
    """

    a: float
    b: float
    c: float = 1.0

    def __post_init__(self):
        _require(_finite(self.a, self.b, self.c), "parameters must be finite")
        _require(self.a > 0.0, f"a must be positive, got {self.a}")
        _require(self.c > 0.0, f"c must be positive, got {self.c}")


@dataclass(frozen=True)
class GridSpec:
    """Evaluation grid for CLI output."""

    x_min: float
    x_max: float
    points: int
    spacing: str = "linear"

    def __post_init__(self):
        _require(_finite(self.x_min, self.x_max), "grid bounds must be finite")
        _require(self.x_min > 0.0, f"x_min must be positive, got {self.x_min}")
        _require(self.x_max > self.x_min,
                 f"x_max must exceed x_min, got [{self.x_min}, {self.x_max}]")
        _require(self.points >= 2, f"points must be >= 2, got {self.points}")
        _require(self.spacing in ("linear", "log"),
                 f"spacing must be 'linear' or 'log', got {self.spacing!r}")

    def xs(self) -> np.ndarray:
        if self.spacing == "log":
            return np.geomspace(self.x_min, self.x_max, self.points)
        return np.linspace(self.x_min, self.x_max, self.points)


@dataclass(frozen=True)
class LimitStructure:
    """Leading behavior ``x**exponent * (c2*log(x)**2 + c1*log(x) + c0)``.

    Describes a density near an endpoint (x -> 0+ for the inverse families,
    x -> +infinity for the product of stable subordinators, whose transform
    has no poles in the left half-plane and whose density is exponentially
    flat at the origin).
    """

    exponent: float
    c2: float
    c1: float
    c0: float
    at_infinity: bool = False

    def __call__(self, x) -> np.ndarray:
        lx = np.log(x)
        return np.power(x, self.exponent) * (self.c2 * lx * lx + self.c1 * lx + self.c0)
