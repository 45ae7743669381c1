"""Closed-form GBM prices: standard/direct, inverse and quanto inverse.

All ``*_value`` functions work per unit of notional and broadcast over numpy
arrays; the ``price_*`` wrappers attach denominations.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import (
    EXPIRY_EPS,
    USD,
    Currency,
    MarketState,
    Money,
    OptionContract,
    OptionSide,
    ProductClass,
    norm_cdf,
)
from .payoff import payoff_amount


class NegativePriceError(ArithmeticError):
    pass


@dataclass(frozen=True)
class PriceQuote:
    value: Money
    product_class: ProductClass
    side: OptionSide
    inputs: MarketState


def _scalar(x):
    x = np.asarray(x)
    return float(x) if x.ndim == 0 else x


def _split_expired(tau):
    tau = np.asarray(tau, dtype=float)
    if np.any(tau < 0):
        raise ValueError("negative time to expiry")
    expired = tau <= EXPIRY_EPS
    return expired, np.where(expired, 1.0, tau)


def _clip_roundoff(value, scale):
    # cancellation in far OTM wings can leave a few ulps below zero
    if np.any(value < -1e-12 * np.maximum(scale, 1.0)):
        raise NegativePriceError(f"negative option value {np.min(value)!r}")
    return np.maximum(value, 0.0)


def standard_value(omega, S, K, r, r_f, sigma, tau):
    """Garman-Kohlhagen value in quote currency per unit of base."""
    S, K, sigma = (np.asarray(a, dtype=float) for a in (S, K, sigma))
    expired, t = _split_expired(tau)
    sig = np.where(expired, 1.0, sigma)
    if np.any(sig <= 0):
        raise ValueError("vol must be positive before expiry")
    s = sig * np.sqrt(t)
    d1 = (np.log(S / K) + (r - r_f + 0.5 * sig * sig) * t) / s
    d2 = d1 - s
    live = omega * (
        np.exp(-r_f * t) * S * norm_cdf(omega * d1) - np.exp(-r * t) * K * norm_cdf(omega * d2)
    )
    live = _clip_roundoff(live, S)
    intrinsic = np.maximum(omega * (S - K), 0.0)
    return _scalar(np.where(expired, intrinsic, live))


def inverse_value(omega, S, K, r, r_f, sigma, tau, denom: str = "base"):
    """Inverse option value; ``base`` is coins, ``quote`` is its dollar value.

    The coin value is the dollar value divided by spot, which is the
    foreign/domestic put-call duality for the BTC/USD rate.
    """
    usd = standard_value(omega, S, K, r, r_f, sigma, tau)
    if denom == "quote":
        return usd
    if denom == "base":
        return _scalar(np.asarray(usd) / np.asarray(S, dtype=float))
    raise ValueError(f"denom must be 'base' or 'quote', not {denom!r}")


def quanto_inverse_value(omega, S, K, xbar, r, sigma, tau):
    """Quanto inverse value in the payout currency.

    omega * exp(-r tau) * xbar * [N(omega d2) - exp((s^2 - r) tau) K/S N(omega d3)]
    """
    S, K, sigma = (np.asarray(a, dtype=float) for a in (S, K, sigma))
    expired, t = _split_expired(tau)
    sig = np.where(expired, 1.0, sigma)
    if np.any(sig <= 0):
        raise ValueError("vol must be positive before expiry")
    s = sig * np.sqrt(t)
    d2 = (np.log(S / K) + (r - 0.5 * sig * sig) * t) / s
    d3 = d2 - s
    growth = np.exp((sig * sig - r) * t)
    live = omega * np.exp(-r * t) * xbar * (
        norm_cdf(omega * d2) - growth * (K / S) * norm_cdf(omega * d3)
    )
    live = _clip_roundoff(live, xbar)
    at_expiry = payoff_amount(ProductClass.QUANTO_INVERSE, omega, K, S, xbar)
    return _scalar(np.where(expired, at_expiry, live))


def price_standard(side: OptionSide, S, K, r, r_f, sigma, tau, denom: Currency = USD) -> PriceQuote:
    value = standard_value(side.omega, S, K, r, r_f, sigma, tau)
    return PriceQuote(Money(value, denom), ProductClass.STANDARD, side, MarketState(S, sigma, r, r_f, tau))


def price_inverse(
    side: OptionSide,
    S,
    K,
    r,
    r_f,
    sigma,
    tau,
    denom: str = "base",
    base: Currency = Currency("BTC"),
    quote: Currency = USD,
) -> PriceQuote:
    value = inverse_value(side.omega, S, K, r, r_f, sigma, tau, denom)
    ccy = base if denom == "base" else quote
    return PriceQuote(Money(value, ccy), ProductClass.INVERSE, side, MarketState(S, sigma, r, r_f, tau))


def price_quanto_inverse(side: OptionSide, S, K, xbar, r, sigma, tau, denom: Currency = USD) -> PriceQuote:
    value = quanto_inverse_value(side.omega, S, K, xbar, r, sigma, tau)
    return PriceQuote(
        Money(value, denom), ProductClass.QUANTO_INVERSE, side, MarketState(S, sigma, r, 0.0, tau)
    )


def parity_gap(call, put, S, K, xbar, r, sigma, tau):
    """(C - P) minus the forward value of the quanto inverse point value."""
    forward = np.exp(-r * tau) * xbar * (1.0 - np.exp((sigma * sigma - r) * tau) * K / S)
    return _scalar(np.asarray(call) - np.asarray(put) - forward)


def unit_value(product_class: ProductClass, omega: int, K, xbar, market: MarketState, denom: Optional[str] = None):
    """Per-unit value of any class under ``market``.

    Standard quanto and quanto direct are valued as ``xbar`` times the
    vanilla value (fixed multiplier, no correlation adjustment).
    """
    S, sigma, r, r_f, tau = market.spot, market.vol, market.rate_dom, market.rate_for, market.tau
    if product_class in (ProductClass.STANDARD, ProductClass.DIRECT):
        return standard_value(omega, S, K, r, r_f, sigma, tau)
    if product_class is ProductClass.INVERSE:
        return inverse_value(omega, S, K, r, r_f, sigma, tau, denom or "base")
    if product_class in (ProductClass.STANDARD_QUANTO, ProductClass.QUANTO_DIRECT):
        return xbar * standard_value(omega, S, K, r, r_f, sigma, tau)
    if r_f != 0.0:
        raise ValueError("quanto inverse pricing assumes a zero foreign rate")
    return quanto_inverse_value(omega, S, K, xbar, r, sigma, tau)


def price(contract: OptionContract, market: MarketState, denom: Optional[str] = None) -> PriceQuote:
    """Price ``contract`` including notional.

    ``denom`` only matters for inverse contracts: ``base`` (default, coins)
    or ``quote``.
    """
    cls = contract.product_class
    value = contract.notional * unit_value(
        cls, contract.side.omega, contract.strike, contract.xbar, market, denom
    )
    ccy = contract.payoff_denom
    if cls is ProductClass.INVERSE and denom == "quote":
        ccy = contract.underlying_quote
    return PriceQuote(Money(value, ccy), cls, contract.side, market)
