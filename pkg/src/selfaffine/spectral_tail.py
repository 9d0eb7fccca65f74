"""Log-periodogram estimators of d and order-statistic tail estimators of H."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    BadOrdinateCount,
    NonPositiveTail,
    TooShort,
    ZeroOrdinate,
)
from .scaling import HurstEstimate
from .timeseries import ReturnsSeries, _freeze

#: bandwidth exponents: m = T^0.5 ordinates for GPH, m = T^0.9 for Robinson
GPH_EXPONENT = 0.5
ROBINSON_EXPONENT = 0.9
#: tail fraction used by the order-statistic estimators
TAIL_FRACTION = 0.05


@dataclass(frozen=True)
class Periodogram:
    """Ordinates I(lambda_j) at the harmonic frequencies j = 1..m."""

    T: int
    ordinates: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "ordinates", _freeze(self.ordinates))
        if np.any(~np.isfinite(self.ordinates)) or np.any(self.ordinates < 0):
            raise ValueError("ordinates must be finite and non-negative")

    def frequencies(self) -> np.ndarray:
        return 2.0 * math.pi * np.arange(1, len(self.ordinates) + 1) / self.T


@dataclass(frozen=True)
class DEstimate:
    """Fractional-integration order estimate with its regression diagnostics."""

    d: float
    method: str
    m: int
    standard_error: float
    intercept: float = float("nan")

    def __post_init__(self):
        if not math.isfinite(self.d):
            raise ValueError("estimate must be finite")
        if self.m < 3:
            raise ValueError("need at least three ordinates")

    @property
    def value(self) -> float:
        return self.d


def periodogram(r: ReturnsSeries, m: int) -> Periodogram:
    """I(lambda_j) = |sum_t x_t exp(-i lambda_j t)|^2 / (2 pi T), j = 1..m."""
    T = len(r)
    if not 1 <= m <= (T - 1) // 2:
        raise BadOrdinateCount(f"m must lie in [1, {(T - 1) // 2}], got {m}")
    spec = np.abs(np.fft.rfft(r.values)[1 : m + 1]) ** 2 / (2.0 * math.pi * T)
    return Periodogram(T=T, ordinates=spec)


def _log_periodogram_fit(r: ReturnsSeries, m: int,
                         x: np.ndarray) -> tuple[float, float, float]:
    """OLS slope, intercept and slope standard error for ln I on regressor x."""
    I = periodogram(r, m).ordinates
    if np.any(I == 0.0):
        raise ZeroOrdinate("zero periodogram ordinate in the regression band")
    y = np.log(I)
    xd = x - x.mean()
    sxx = float(xd @ xd)
    slope = float(xd @ (y - y.mean())) / sxx
    intercept = float(y.mean() - slope * x.mean())
    resid = y - intercept - slope * x
    dof = max(len(y) - 2, 1)
    se = math.sqrt(float(resid @ resid) / dof / sxx)
    return slope, intercept, se


def gph_regressor(lam: np.ndarray) -> np.ndarray:
    """-2 ln|1 - exp(-i lambda)| = -2 ln(2 sin(lambda/2))."""
    return -2.0 * np.log(2.0 * np.sin(lam / 2.0))


def estimate_gph(r: ReturnsSeries) -> DEstimate:
    """Log-periodogram estimate of d over m = T^0.5 ordinates."""
    T = len(r)
    if T < 100:
        raise TooShort("need T >= 100")
    m = int(math.floor(T ** GPH_EXPONENT))
    lam = 2.0 * math.pi * np.arange(1, m + 1) / T
    slope, intercept, se = _log_periodogram_fit(r, m, gph_regressor(lam))
    return DEstimate(d=slope, method="gph", m=m, standard_error=se,
                     intercept=intercept)


def estimate_robinson(r: ReturnsSeries) -> DEstimate:
    """Log-periodogram regression on ln(lambda_j) over m = T^0.9 ordinates.

    The slope b estimates -2d; m is capped at the largest usable harmonic
    index (T-1)/2.
    """
    T = len(r)
    if T < 100:
        raise TooShort("need T >= 100")
    m = min(int(math.floor(T ** ROBINSON_EXPONENT)), (T - 1) // 2)
    lam = 2.0 * math.pi * np.arange(1, m + 1) / T
    slope, intercept, se = _log_periodogram_fit(r, m, np.log(lam))
    return DEstimate(d=-slope / 2.0, method="robinson", m=m,
                     standard_error=se / 2.0, intercept=intercept)


TAIL_METHODS = ("pickands", "hill", "hr")


def estimate_tail(r: ReturnsSeries, method: str) -> HurstEstimate:
    """Order-statistic estimate of H from the upper tail of raw returns.

    Values are sorted descending (ties broken by original index) and the
    Pickands, Hill or de Haan-Resnick formula is applied with m = 0.05*T
    tail observations; alpha is recoverable as 1/H.
    """
    if method not in TAIL_METHODS:
        raise ValueError(f"unknown tail method {method!r}")
    T = len(r)
    if T < 100:
        raise TooShort("need T >= 100")
    m = int(math.floor(TAIL_FRACTION * T))
    order = np.argsort(-r.values, kind="stable")
    x = r.values[order]  # x[0] = x_(1) >= x[1] = x_(2) >= ...

    if method == "pickands":
        d1 = x[m - 1] - x[2 * m - 1]
        d2 = x[2 * m - 1] - x[4 * m - 1]
        if d1 <= 0.0 or d2 <= 0.0:
            raise NonPositiveTail("tied boundary order statistics")
        H = (math.log(d1) - math.log(d2)) / math.log(2.0)
    elif method == "hill":
        if x[m - 1] <= 0.0:
            raise NonPositiveTail("x_(m) must be positive")
        H = float(np.mean(np.log(x[: m - 1]))) - math.log(x[m - 1])
    else:  # hr
        if x[0] <= 0.0 or x[m - 1] <= 0.0:
            raise NonPositiveTail("x_(1) and x_(m) must be positive")
        H = (math.log(x[0]) - math.log(x[m - 1])) / math.log(m)
    return HurstEstimate(H=float(H), method=method, intercepts=(),
                         n_points=m, residual_sse=0.0)
