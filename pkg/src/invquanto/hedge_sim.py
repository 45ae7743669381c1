"""Discrete delta hedging of an option on a non-tradable index.

The index and the hedge instrument are correlated GBMs driven by
W_index = rho * W + sqrt(1 - rho^2) * W_perp, where W drives the hedge.
The hedger sells the option at its closed-form value, holds the
delta-equivalent dollar exposure in the hedge instrument, keeps the rest in
cash at rate r, and reports the discounted terminal P&L (account minus
payoff) in the quote currency.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from .analytic import quanto_inverse_value, standard_value
from .core import MarketState, OptionContract, ProductClass, norm_cdf
from .mc_oracle import PathConfig, run_blocks

QUANTILE_LEVELS = (0.01, 0.05, 0.50, 0.95, 0.99)
GREEK_SOURCES = ("inverse", "quanto-inverse")


@dataclass(frozen=True)
class HedgeSimConfig:
    mu_index: float
    sigma_index: float
    mu_hedge: float
    sigma_hedge: float
    rho: float
    rebalance_dt: float
    greek_source: Optional[str] = None
    paths: PathConfig = field(default_factory=lambda: PathConfig(n_paths=10_000))

    def __post_init__(self):
        if not (math.isfinite(self.rho) and -1.0 <= self.rho <= 1.0):
            raise ValueError(f"correlation must lie in [-1, 1], got {self.rho!r}")
        if not (self.sigma_index > 0 and self.sigma_hedge > 0):
            raise ValueError("volatilities must be positive")
        if not self.rebalance_dt > 0:
            raise ValueError("rebalance interval must be positive")
        if self.greek_source is not None and self.greek_source not in GREEK_SOURCES:
            raise ValueError(f"greek_source must be one of {GREEK_SOURCES}")


@dataclass(frozen=True)
class HedgeReport:
    mean_pnl: float
    std_pnl: float
    quantiles: dict
    mean_se: float
    n_paths: int
    n_steps: int

    def rows(self) -> list[tuple[str, float]]:
        out = [("mean_pnl", self.mean_pnl), ("std_pnl", self.std_pnl), ("mean_se", self.mean_se)]
        out += [(f"q{int(round(q * 100)):02d}", v) for q, v in self.quantiles.items()]
        out += [("n_paths", self.n_paths), ("n_steps", self.n_steps)]
        return out


def _greek_source(contract: OptionContract, cfg: HedgeSimConfig) -> str:
    natural = "quanto-inverse" if contract.product_class is ProductClass.QUANTO_INVERSE else "inverse"
    if contract.product_class in (ProductClass.STANDARD_QUANTO, ProductClass.QUANTO_DIRECT):
        raise ValueError("hedge simulation covers inverse, quanto inverse and vanilla contracts")
    if cfg.greek_source is not None and cfg.greek_source != natural:
        raise ValueError(f"{cfg.greek_source} Greeks do not price a {contract.product_class.value} contract")
    return natural


def _value_and_delta(source: str, contract: OptionContract, market: MarketState, sigma: float):
    """Dollar value and spot delta as functions of (S, tau), per contract."""
    w, K, N, r, r_f = contract.side.omega, contract.strike, contract.notional, market.rate_dom, market.rate_for
    if source == "inverse":

        def value(S, tau):
            return N * standard_value(w, S, K, r, r_f, sigma, tau)

        def delta(S, tau):
            s = sigma * np.sqrt(tau)
            d1 = (np.log(S / K) + (r - r_f + 0.5 * sigma * sigma) * tau) / s
            return N * w * np.exp(-r_f * tau) * norm_cdf(w * d1)

        def payoff(S):
            return N * np.maximum(w * (S - K), 0.0)

    else:
        xbar = contract.xbar

        def value(S, tau):
            return N * quanto_inverse_value(w, S, K, xbar, r, sigma, tau)

        def delta(S, tau):
            s = sigma * np.sqrt(tau)
            d3 = (np.log(S / K) + (r - 1.5 * sigma * sigma) * tau) / s
            return N * xbar * w * np.exp((sigma * sigma - 2 * r) * tau) * K / (S * S) * norm_cdf(w * d3)

        def payoff(S):
            return N * xbar * np.maximum(w * (S - K), 0.0) / S

    return value, delta, payoff


def simulate_hedge(contract: OptionContract, market: MarketState, cfg: HedgeSimConfig) -> HedgeReport:
    tau = market.tau
    if not tau > 0:
        raise ValueError("hedging needs time to expiry")
    if cfg.rebalance_dt > tau * (1 + 1e-12):
        raise ValueError("rebalance interval exceeds time to expiry")
    source = _greek_source(contract, cfg)
    value, delta, payoff = _value_and_delta(source, contract, market, cfg.sigma_index)

    n_steps = max(1, int(round(tau / cfg.rebalance_dt)))
    dt = tau / n_steps
    r = market.rate_dom
    growth = math.exp(r * dt)
    eps = math.sqrt(max(0.0, 1.0 - cfg.rho * cfg.rho))
    sq = math.sqrt(dt)
    drift_x = (cfg.mu_index - 0.5 * cfg.sigma_index**2) * dt
    drift_y = (cfg.mu_hedge - 0.5 * cfg.sigma_hedge**2) * dt
    S0 = market.spot
    V0 = value(S0, tau)
    # bound memory per block to ~2^21 normals; depends on inputs only
    paths = replace(cfg.paths, block_size=min(cfg.paths.block_size, max(16, 2**21 // n_steps)))

    def one_block(z):
        if paths.antithetic:
            z = np.concatenate((z, -z))
        n = z.shape[0]
        S = np.full(n, S0)
        Y = np.full(n, S0)
        units = delta(S, tau)
        cash = V0 - units * Y
        for k in range(n_steps):
            zw, zp = z[:, k, 0], z[:, k, 1]
            S = S * np.exp(drift_x + cfg.sigma_index * sq * (cfg.rho * zw + eps * zp))
            Y = Y * np.exp(drift_y + cfg.sigma_hedge * sq * zw)
            cash = cash * growth
            if k < n_steps - 1:
                # delta-equivalent dollar exposure in the hedge instrument
                target = delta(S, tau - (k + 1) * dt) * S / Y
                cash = cash - (target - units) * Y
                units = target
        pnl = (cash + units * Y - payoff(S)) * math.exp(-r * tau)
        if paths.antithetic:
            half = n // 2
            # keep the pair structure visible to the caller: [+z | -z]
            return np.stack((pnl[:half], pnl[half:]), axis=1)
        return pnl[:, None]

    pnl2d = run_blocks(paths, paths.n_draws, (n_steps, 2), one_block)
    pnl = pnl2d.ravel()
    units_for_se = pnl2d.mean(axis=1)
    mean_se = float(np.std(units_for_se, ddof=1) / math.sqrt(units_for_se.size))
    qs = np.quantile(pnl, QUANTILE_LEVELS)
    return HedgeReport(
        mean_pnl=float(np.mean(pnl)),
        std_pnl=float(np.std(pnl, ddof=1)),
        quantiles={q: float(v) for q, v in zip(QUANTILE_LEVELS, qs)},
        mean_se=mean_se,
        n_paths=int(pnl.size),
        n_steps=n_steps,
    )
