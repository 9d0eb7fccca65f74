"""Rescaled range analysis and partition-function fluctuation analysis."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import AllZeroIncrements, TooShort, ZeroDispersion, ZeroPartition
from .timeseries import LogPricePath, ReturnsSeries, _freeze

#: log-grid start, step, and the fraction of T capping the largest scale
GRID_LNMIN = 1.6
GRID_STEP = 0.15
GRID_CAP = 0.1


@dataclass(frozen=True)
class ScaleGrid:
    """Ascending block sizes used for one scaling regression."""

    T: int
    scales: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "scales", tuple(int(n) for n in self.scales))
        if len(self.scales) < 3:
            raise TooShort("scale grid needs at least three scales")
        if any(b <= a for a, b in zip(self.scales, self.scales[1:])):
            raise ValueError("scales must be strictly ascending")
        if self.scales[0] < 5 or self.scales[-1] > GRID_CAP * self.T:
            raise ValueError("scales must lie in [5, 0.1*T]")


def time_scale_grid(T: int) -> ScaleGrid:
    """Scale grid on ln(n) = 1.6, 1.75, ... up to the quantized cap ln(0.1*T).

    The cap is 0.15*int(ln(0.1*T)/0.15) with int rounding down; each grid
    point is rounded half-up to an integer and duplicates are dropped.
    """
    if T < 100:
        raise TooShort("need T >= 100 for the time-scale grid")
    ln_max = GRID_STEP * math.floor(math.log(GRID_CAP * T) / GRID_STEP)
    scales: list[int] = []
    k = 0
    while GRID_LNMIN + GRID_STEP * k <= ln_max + 1e-9:
        scales.append(int(math.floor(math.exp(GRID_LNMIN + GRID_STEP * k) + 0.5)))
        k += 1
    scales = sorted(set(scales))
    if len(scales) < 3:
        raise TooShort(f"grid for T={T} has fewer than three scales")
    return ScaleGrid(T=T, scales=tuple(scales))


@dataclass(frozen=True)
class QGrid:
    """Moment orders for the partition function."""

    variant: str
    values: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(float(q) for q in self.values))
        if not self.values or any(q <= 0 for q in self.values):
            raise ValueError("q values must be positive")
        if any(b <= a for a, b in zip(self.values, self.values[1:])):
            raise ValueError("q values must be strictly ascending")


_Q_VARIANTS = {
    "fa1": tuple(round(0.1 * k, 10) for k in range(1, 11)),
    "fa2": tuple(round(0.3 * k, 10) for k in range(1, 11)),
    "fa3": tuple(round(0.5 * k, 10) for k in range(1, 11)),
}


def qgrid(variant: str) -> QGrid:
    """The preset moment grids fa1/fa2/fa3."""
    try:
        return QGrid(variant=variant, values=_Q_VARIANTS[variant])
    except KeyError:
        raise ValueError(f"unknown q-grid variant {variant!r}") from None


def custom_qgrid(values: Sequence[float]) -> QGrid:
    return QGrid(variant="custom", values=tuple(values))


@dataclass(frozen=True)
class HurstEstimate:
    """Point estimate with its regression diagnostics."""

    H: float
    method: str
    intercepts: tuple[float, ...]
    n_points: int
    residual_sse: float

    def __post_init__(self):
        if not math.isfinite(self.H):
            raise ValueError("estimate must be finite")

    @property
    def value(self) -> float:
        return self.H

    @property
    def intercept(self) -> float:
        return self.intercepts[0] if self.intercepts else math.nan


def _block_ratios(seg: np.ndarray, M: int, n: int) -> np.ndarray:
    """R_m/S_m over M contiguous blocks of one subdivision pass."""
    b = seg.reshape(M, n)
    mu = b.mean(axis=1)
    dev = b - mu[:, None]
    S = np.sqrt((dev * dev).mean(axis=1))
    if np.any(S == 0.0):
        raise ZeroDispersion(f"constant block at scale {n}")
    x = np.cumsum(dev, axis=1)
    # the full-block cumulative deviation is analytically zero; pin it so the
    # range always includes that endpoint
    x[:, -1] = 0.0
    R = x.max(axis=1) - x.min(axis=1)
    return R / S


def rs_statistic(r: ReturnsSeries, n: int) -> float:
    """Average rescaled range over 2M blocks at time scale n.

    Blocks start at the first observation; when M*n < T a second pass starts
    at observation L+1 with L = T - n*M, otherwise the first pass is counted
    twice.
    """
    z = r.values
    T = len(z)
    if not 2 <= n <= T:
        raise ValueError(f"scale n={n} out of range for T={T}")
    M = T // n
    first = _block_ratios(z[: M * n], M, n)
    L = T - M * n
    second = _block_ratios(z[L : L + M * n], M, n) if L else first
    return float((first.sum() + second.sum()) / (2 * M))


def estimate_rra(r: ReturnsSeries, grid: ScaleGrid | None = None) -> HurstEstimate:
    """Hurst exponent: OLS slope of ln[(R/S)_n] on ln(n) over the grid."""
    if grid is None:
        grid = time_scale_grid(len(r))
    y = np.log([rs_statistic(r, n) for n in grid.scales])
    x = np.log(grid.scales)
    xd = x - x.mean()
    H = float(np.sum(xd * (y - y.mean())) / np.sum(xd * xd))
    intercept = float(y.mean() - H * x.mean())
    resid = y - intercept - H * x
    return HurstEstimate(H=H, method="rra", intercepts=(intercept,),
                         n_points=len(grid.scales), residual_sse=float(resid @ resid))


def _block_increments(p: np.ndarray, n: int) -> np.ndarray:
    """|p_{mn} - p_{(m-1)n}| over both subdivision passes (2M values)."""
    T = len(p) - 1
    M = T // n
    v1 = np.abs(np.diff(p[: M * n + 1 : n]))
    L = T - M * n
    v2 = np.abs(np.diff(p[L : L + M * n + 1 : n])) if L else v1
    return np.concatenate([v1, v2])


def partition_function(p: LogPricePath, n: int, q: float) -> float:
    """q-th order partition function at time scale n: half the sum of v_m^q."""
    T = len(p) - 1
    if not 2 <= n <= T:
        raise ValueError(f"scale n={n} out of range for T={T}")
    if q <= 0:
        raise ValueError("q must be positive")
    v = _block_increments(p.values, n)
    if not np.any(v > 0.0):
        raise AllZeroIncrements(f"all block increments are zero at scale {n}")
    return float(0.5 * np.sum(v ** q))


def estimate_fa(r: ReturnsSeries, qs: QGrid,
                grid: ScaleGrid | None = None) -> HurstEstimate:
    """Fluctuation-analysis Hurst exponent from the fixed-effects fit.

    Stacks ln S_q(T,n) over the full (q, n) grid and fits per-q intercepts
    a(q) with one slope parameter through slope(q) = -1 + H*q, solved in
    closed form by within-q demeaned OLS of (ln S_q + ln n) on q*ln n.
    """
    if grid is None:
        grid = time_scale_grid(len(r))
    p = LogPricePath.from_returns(r)
    q = np.asarray(qs.values)
    lnn = np.log(grid.scales)
    lnS = np.empty((len(q), len(lnn)))
    for j, n in enumerate(grid.scales):
        v = _block_increments(p.values, n)
        S = 0.5 * np.power(v[None, :], q[:, None]).sum(axis=1)
        if np.any(S <= 0.0):
            raise ZeroPartition(f"zero partition function at scale {n}")
        lnS[:, j] = np.log(S)
    Y = lnS + lnn[None, :]
    X = q[:, None] * lnn[None, :]
    Yd = Y - Y.mean(axis=1, keepdims=True)
    Xd = X - X.mean(axis=1, keepdims=True)
    H = float(np.sum(Xd * Yd) / np.sum(Xd * Xd))
    a = lnS.mean(axis=1) - (H * q - 1.0) * lnn.mean()
    resid = lnS - a[:, None] - (H * q[:, None] - 1.0) * lnn[None, :]
    return HurstEstimate(H=H, method=f"fa:{qs.variant}", intercepts=tuple(a),
                         n_points=lnS.size, residual_sse=float(np.sum(resid * resid)))
