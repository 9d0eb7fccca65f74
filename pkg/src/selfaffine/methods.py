"""Registry mapping estimator tags to the functions behind them."""
from __future__ import annotations

from typing import Callable, Union

from .scaling import HurstEstimate, estimate_fa, estimate_rra, qgrid
from .spectral_tail import DEstimate, estimate_gph, estimate_robinson, estimate_tail
from .timeseries import ReturnsSeries

Estimate = Union[HurstEstimate, DEstimate]

_REGISTRY: dict[str, Callable[[ReturnsSeries], Estimate]] = {
    "rra": estimate_rra,
    "fa1": lambda r: estimate_fa(r, qgrid("fa1")),
    "fa2": lambda r: estimate_fa(r, qgrid("fa2")),
    "fa3": lambda r: estimate_fa(r, qgrid("fa3")),
    "gph": estimate_gph,
    "robinson": estimate_robinson,
    "pickands": lambda r: estimate_tail(r, "pickands"),
    "hill": lambda r: estimate_tail(r, "hill"),
    "hr": lambda r: estimate_tail(r, "hr"),
}

METHODS = tuple(_REGISTRY)

#: methods whose point value is d rather than H
D_METHODS = ("gph", "robinson")


def estimate(method: str, r: ReturnsSeries) -> Estimate:
    """Run one estimator by tag, returning its full diagnostic object."""
    try:
        fn = _REGISTRY[method]
    except KeyError:
        raise ValueError(f"unknown method {method!r}") from None
    return fn(r)


def estimate_point(method: str, r: ReturnsSeries) -> float:
    """Scalar point estimate (H or d) for Monte Carlo aggregation."""
    return float(estimate(method, r).value)
