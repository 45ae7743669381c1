"""Pricing, Greeks and verification for inverse and quanto inverse crypto options."""

__version__ = "0.1.0"

from .analytic import price, price_inverse, price_quanto_inverse, price_standard
from .core import (
    BTC,
    ETH,
    USD,
    Currency,
    MarketState,
    Money,
    OptionContract,
    OptionSide,
    ProductClass,
    QuantoFix,
    make_contract,
)
from .greeks import GreekReport, greeks_for, greeks_inverse, greeks_quanto_inverse
from .implied_vol import implied_vol
from .payoff import Settlement, payoff

__all__ = [
    "BTC", "ETH", "USD", "Currency", "GreekReport", "MarketState", "Money", "OptionContract",
    "OptionSide", "ProductClass", "QuantoFix", "Settlement", "greeks_for", "greeks_inverse",
    "greeks_quanto_inverse", "implied_vol", "make_contract", "payoff", "price", "price_inverse",
    "price_quanto_inverse", "price_standard",
]
