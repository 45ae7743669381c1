"""Closed-form Greeks for inverse and quanto inverse options, and a
central-difference engine used to check them.

Theta is reported as -df/dtau throughout.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Callable, Optional, Sequence

import numpy as np

from .analytic import quanto_inverse_value, standard_value
from .core import USD, Currency, MarketState, OptionSide, ProductClass, d_values, norm_cdf, norm_pdf

GREEK_NAMES = ("delta", "gamma", "vega", "volga", "vanna", "theta")


@dataclass(frozen=True)
class GreekReport:
    price: float
    delta: float
    gamma: float
    vega: float
    volga: float
    vanna: float
    theta: float
    denom: Currency = USD

    def as_dict(self) -> dict:
        return {k: getattr(self, k) for k in ("price",) + GREEK_NAMES}


@dataclass(frozen=True)
class BumpSpec:
    """Central-difference step sizes.

    ``h_spot`` is relative to spot; ``h_vol`` and ``h_tau`` are absolute.
    Second derivatives use ``curvature_scale`` times the first-order steps,
    capped at 1e-3 of the respective scale, to keep round-off in check.
    """

    h_spot: float = 1e-5
    h_vol: float = 1e-5
    h_tau: float = 1e-5
    curvature_scale: float = 100.0
    richardson: bool = True

    def __post_init__(self):
        for name in ("h_spot", "h_vol", "h_tau"):
            h = getattr(self, name)
            if not 0 < h <= 1e-3:
                raise ValueError(f"{name} must lie in (0, 1e-3]")
        if self.curvature_scale < 1:
            raise ValueError("curvature_scale must be >= 1")


def greeks_inverse(side: OptionSide, S, K, r, r_f, sigma, tau, denom: str = "quote") -> GreekReport:
    """Greeks of the inverse option.

    ``quote``: sensitivities of its dollar value (Garman-Kohlhagen with a
    foreign rate). ``base``: sensitivities of its coin value, i.e. the
    dollar value divided by spot.
    """
    if np.any(np.asarray(tau) <= 0):
        raise ValueError("Greeks are undefined at expiry")
    w = side.omega
    d = d_values(S, K, r, r_f, sigma, tau)
    sq = np.sqrt(tau)
    df_for = np.exp(-r_f * tau)
    df_dom = np.exp(-r * tau)
    pdf1 = norm_pdf(d.d1)
    price = standard_value(w, S, K, r, r_f, sigma, tau)
    delta = w * df_for * norm_cdf(w * d.d1)
    gamma = df_for * pdf1 / (S * sigma * sq)
    vega = df_for * S * pdf1 * sq
    volga = vega * d.d1 * d.d2 / sigma
    vanna = -df_for * pdf1 * d.d2 / sigma
    theta = (
        -df_for * S * pdf1 * sigma / (2 * sq)
        + w * r_f * df_for * S * norm_cdf(w * d.d1)
        - w * r * df_dom * K * norm_cdf(w * d.d2)
    )
    if denom == "quote":
        return GreekReport(price, delta, gamma, vega, volga, vanna, theta, USD)
    if denom != "base":
        raise ValueError(f"denom must be 'base' or 'quote', not {denom!r}")
    # quotient rule on V / S
    return GreekReport(
        price / S,
        delta / S - price / S**2,
        gamma / S - 2 * delta / S**2 + 2 * price / S**3,
        vega / S,
        volga / S,
        vanna / S - vega / S**2,
        theta / S,
        Currency("BTC"),
    )


def greeks_quanto_inverse(side: OptionSide, S, K, xbar, r, sigma, tau) -> GreekReport:
    """Greeks of the quanto inverse option, already multiplied by ``xbar``.

    The volga is the reconciled form: the phi(d3) term enters with sign
    -2 tau (K/S) e^{(s^2-2r)tau} sigma phi(d3) (-d1/sigma - sqrt(tau)),
    independent of omega.
    """
    if np.any(np.asarray(tau) <= 0):
        raise ValueError("Greeks are undefined at expiry")
    w = side.omega
    d = d_values(S, K, r, 0.0, sigma, tau)
    sq = np.sqrt(tau)
    disc = np.exp(-r * tau)
    carry = np.exp((sigma * sigma - 2 * r) * tau)
    cdf3 = norm_cdf(w * d.d3)
    pdf2 = norm_pdf(d.d2)
    pdf3 = norm_pdf(d.d3)
    dd3_dsigma = -d.d1 / sigma - sq

    price = quanto_inverse_value(w, S, K, 1.0, r, sigma, tau)
    delta = w * carry * K / S**2 * cdf3
    gamma = carry * K / S**3 * (pdf3 / (sigma * sq) - 2 * w * cdf3)
    vega = disc * pdf2 * sq - 2 * w * sigma * tau * carry * K / S * cdf3
    volga = disc * sq * pdf2 * d.d1 * d.d2 / sigma - 2 * tau * carry * K / S * (
        w * cdf3 * (1 + 2 * sigma * sigma * tau) + sigma * pdf3 * dd3_dsigma
    )
    vanna = w * carry * K / S**2 * (2 * tau * sigma * cdf3 + w * pdf3 * dd3_dsigma)
    theta = -disc * (pdf2 * sigma / (2 * sq) - w * r * norm_cdf(w * d.d2)) + w * carry * K / S * (
        sigma * sigma - 2 * r
    ) * cdf3
    return GreekReport(
        xbar * price,
        xbar * delta,
        xbar * gamma,
        xbar * vega,
        xbar * volga,
        xbar * vanna,
        xbar * theta,
        USD,
    )


def quanto_inverse_volga_as_printed(side: OptionSide, S, K, xbar, r, sigma, tau):
    """Volga with the bracket exactly as typeset in the published table.

    Kept only so tests can show where it departs from finite differences.
    """
    w = side.omega
    d = d_values(S, K, r, 0.0, sigma, tau)
    sq = np.sqrt(tau)
    carry = np.exp((sigma * sigma - 2 * r) * tau)
    first = np.exp(-r * tau) * sq * norm_pdf(d.d2) * d.d2 * d.d1 / sigma
    bracket = norm_cdf(w * d.d3) * (1 + 2 * sigma * sigma * tau) - sigma * norm_pdf(d.d3) * (
        -d.d1 / sigma - sq
    )
    return xbar * (first - w * 2 * K / S * tau * carry * bracket)


Pricer = Callable[[MarketState], float]


def _central(f, x, h):
    return (f(x + h) - f(x - h)) / (2 * h)


def _second(f, x, h):
    return (f(x + h) - 2 * f(x) + f(x - h)) / (h * h)


def _extrapolate(rule, f, x, h, richardson):
    coarse = rule(f, x, h)
    if not richardson:
        return coarse
    fine = rule(f, x, h / 2)
    return (4 * fine - coarse) / 3


def fd_greeks(pricer: Pricer, market: MarketState, bumps: Optional[BumpSpec] = None) -> GreekReport:
    """Central finite-difference Greeks of ``pricer`` at ``market``."""
    bumps = bumps or BumpSpec()
    S, sigma, tau = market.spot, market.vol, market.tau
    if tau <= 0:
        raise ValueError("finite differences need tau > 0")
    k = bumps.curvature_scale
    hS = bumps.h_spot * S
    hS2 = min(bumps.h_spot * k, 1e-3) * S
    hv = min(bumps.h_vol, 1e-3 * sigma)
    hv2 = min(bumps.h_vol * k, 1e-3 * sigma)
    ht = min(bumps.h_tau, tau / 10)
    rich = bumps.richardson

    def at_spot(x):
        return pricer(replace(market, spot=x))

    def at_vol(x):
        return pricer(replace(market, vol=x))

    def at_tau(x):
        return pricer(replace(market, tau=x))

    def mixed(hs, hv_):
        def p(ds, dv):
            return pricer(replace(market, spot=S + ds, vol=sigma + dv))

        return (p(hs, hv_) - p(hs, -hv_) - p(-hs, hv_) + p(-hs, -hv_)) / (4 * hs * hv_)

    vanna = mixed(hS2, hv2)
    if rich:
        vanna = (4 * mixed(hS2 / 2, hv2 / 2) - vanna) / 3

    return GreekReport(
        price=pricer(market),
        delta=_extrapolate(_central, at_spot, S, hS, rich),
        gamma=_extrapolate(_second, at_spot, S, hS2, rich),
        vega=_extrapolate(_central, at_vol, sigma, hv, rich),
        volga=_extrapolate(_second, at_vol, sigma, hv2, rich),
        vanna=vanna,
        theta=-_extrapolate(_central, at_tau, tau, ht, rich),
    )


def greek_curves(
    strikes: Sequence[float],
    spot: float = 25000.0,
    xbar: float = 25000.0,
    sigma: float = 0.75,
    r: float = 0.0,
    maturities_days: Sequence[float] = (10, 30, 90),
) -> list[dict]:
    """Greeks against strike for inverse and quanto inverse, both sides."""
    strikes = np.asarray(strikes, dtype=float)
    if strikes.size == 0 or np.any(strikes <= 0):
        raise ValueError("strike grid must be nonempty and positive")
    rows = []
    for days in maturities_days:
        tau = days / 365.0
        for side in (OptionSide.CALL, OptionSide.PUT):
            sets = {
                "inverse": greeks_inverse(side, spot, strikes, r, 0.0, sigma, tau),
                "quanto-inverse": greeks_quanto_inverse(side, spot, strikes, xbar, r, sigma, tau),
            }
            for label, rep in sets.items():
                values = {k: np.broadcast_to(v, strikes.shape) for k, v in rep.as_dict().items()}
                for i, K in enumerate(strikes):
                    row = {"class": label, "side": side.name.lower(), "tau_days": days, "strike": float(K)}
                    row.update({k: float(values[k][i]) for k in values})
                    rows.append(row)
    return rows


def greeks_for(product_class, side: OptionSide, S, K, xbar, r, r_f, sigma, tau, denom: Optional[str] = None) -> GreekReport:
    """Closed-form Greeks per unit notional for any product class."""
    if product_class is ProductClass.INVERSE:
        return greeks_inverse(side, S, K, r, r_f, sigma, tau, denom or "base")
    if product_class is ProductClass.QUANTO_INVERSE:
        if r_f != 0.0:
            raise ValueError("quanto inverse pricing assumes a zero foreign rate")
        return greeks_quanto_inverse(side, S, K, xbar, r, sigma, tau)
    rep = greeks_inverse(side, S, K, r, r_f, sigma, tau, "quote")
    if product_class in (ProductClass.STANDARD, ProductClass.DIRECT):
        return rep
    return GreekReport(*(xbar * v for v in rep.as_dict().values()), denom=rep.denom)
