"""Implied volatility by sign scan plus bracketed root refinement."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.optimize import brentq

from .analytic import inverse_value, quanto_inverse_value, standard_value
from .core import Money, OptionSide, ProductClass

VOL_LO = 1e-4
VOL_HI = 10.0
SCAN_POINTS = 400
MAX_ITER = 200


class ImpliedVolError(ValueError):
    pass


@dataclass(frozen=True)
class IvResult:
    sigma: float
    iterations: int
    residual: float
    # number of sign changes of price(sigma) - target seen on the scan grid
    n_roots: int = 1

    @property
    def multiple(self) -> bool:
        return self.n_roots > 1


def value_in_vol(product_class, side: OptionSide, S, K, xbar, r, r_f, tau, denom: Optional[str] = None):
    """Per-unit price of the class as a function of volatility alone."""
    w = side.omega
    if product_class in (ProductClass.STANDARD, ProductClass.DIRECT):
        return lambda s: standard_value(w, S, K, r, r_f, s, tau)
    if product_class is ProductClass.INVERSE:
        return lambda s: inverse_value(w, S, K, r, r_f, s, tau, denom or "base")
    if product_class in (ProductClass.STANDARD_QUANTO, ProductClass.QUANTO_DIRECT):
        return lambda s: xbar * standard_value(w, S, K, r, r_f, s, tau)
    if r_f != 0.0:
        raise ValueError("quanto inverse pricing assumes a zero foreign rate")
    return lambda s: quanto_inverse_value(w, S, K, xbar, r, s, tau)


def implied_vol(
    product_class: ProductClass,
    side: OptionSide,
    target_price,
    S: float,
    K: float,
    xbar: float = 1.0,
    r: float = 0.0,
    r_f: float = 0.0,
    tau: float = 0.0,
    denom: Optional[str] = None,
) -> IvResult:
    """Smallest volatility in [1e-4, 10] reproducing ``target_price``.

    Quanto inverse prices are not monotone in vol, so several roots can
    exist; the smallest is returned and ``n_roots`` reports how many the
    scan found rather than choosing silently.
    """
    target = target_price.amount if isinstance(target_price, Money) else float(target_price)
    if tau <= 0:
        raise ImpliedVolError("implied vol needs tau > 0")
    if not np.isfinite(target) or target <= 0:
        raise ImpliedVolError("target price is below the attainable range")
    f = value_in_vol(product_class, side, S, K, xbar, r, r_f, tau, denom)
    grid = np.geomspace(VOL_LO, VOL_HI, SCAN_POINTS)
    gap = np.asarray(f(grid)) - target
    if np.all(gap < 0):
        raise ImpliedVolError(f"target {target!r} is above the attainable range (max {gap.max() + target!r})")
    if np.all(gap > 0):
        raise ImpliedVolError(f"target {target!r} is below the attainable range (min {gap.min() + target!r})")

    sign = np.sign(gap)
    crossings = np.flatnonzero(sign[:-1] * sign[1:] <= 0)
    # a zero landing exactly on a grid node shows up in two adjacent pairs
    crossings = crossings[np.concatenate(([True], np.diff(crossings) > 1))] if crossings.size else crossings
    if crossings.size == 0:
        raise ImpliedVolError("no root in the volatility bracket")
    i = crossings[0]
    lo, hi = grid[i], grid[i + 1]
    tol = 1e-10 * max(1.0, abs(target))
    if gap[i] == 0:
        root, iters = lo, 0
    else:
        root, info = brentq(
            lambda s: f(s) - target, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps,
            maxiter=MAX_ITER, full_output=True,
        )
        iters = info.iterations
    residual = float(f(root) - target)
    if abs(residual) > tol:
        raise ImpliedVolError(f"root refinement stalled with residual {residual!r}")
    return IvResult(float(root), int(iters), residual, int(crossings.size))
