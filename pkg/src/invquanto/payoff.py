"""Terminal payoffs for the six product classes."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .core import (
    BTC,
    ETH,
    USD,
    Currency,
    DenominationError,
    Money,
    OptionContract,
    OptionSide,
    ProductClass,
    QuantoFix,
)


@dataclass(frozen=True)
class Settlement:
    price: float
    # instantaneous spot at settlement, used to translate coin payoffs to USD
    spot_at_settlement: Optional[float] = None

    def __post_init__(self):
        if not self.price > 0:
            raise ValueError("settlement price must be positive")
        if self.spot_at_settlement is not None and not self.spot_at_settlement > 0:
            raise ValueError("spot at settlement must be positive")


def payoff_amount(product_class: ProductClass, omega: int, strike: float, settle, xbar: float = 1.0):
    """Per-unit-notional payoff, vectorised over ``settle``."""
    settle = np.asarray(settle, dtype=float)
    intrinsic = np.maximum(omega * (settle - strike), 0.0)
    if product_class in (ProductClass.STANDARD, ProductClass.DIRECT):
        out = intrinsic
    elif product_class is ProductClass.INVERSE:
        out = intrinsic / settle
    elif product_class in (ProductClass.STANDARD_QUANTO, ProductClass.QUANTO_DIRECT):
        out = xbar * intrinsic
    else:
        out = xbar * intrinsic / settle
    return float(out) if out.ndim == 0 else out


def payoff(contract: OptionContract, settlement: Settlement) -> Money:
    amount = payoff_amount(
        contract.product_class,
        contract.side.omega,
        contract.strike,
        settlement.price,
        contract.xbar,
    )
    return Money(contract.notional * amount, contract.payoff_denom)


def usd_translation(inverse_payoff: Money, settlement: Settlement, contract: OptionContract) -> Money:
    """Value a coin-settled payoff in the quote currency at the settlement spot."""
    if inverse_payoff.denom != contract.underlying_base:
        raise DenominationError(
            f"expected a {contract.underlying_base} amount, got {inverse_payoff.denom}"
        )
    if settlement.spot_at_settlement is None:
        raise ValueError("spot_at_settlement is required for translation")
    return Money(inverse_payoff.amount * settlement.spot_at_settlement, contract.underlying_quote)


def payoff_table(settle_grid: Sequence[float], contracts: Sequence[OptionContract]) -> list[list[Money]]:
    if len(settle_grid) == 0:
        raise ValueError("settlement grid is empty")
    return [[payoff(c, Settlement(s)) for s in settle_grid] for c in contracts]


BTC_GRID = (10000.0, 20000.0, 30000.0, 40000.0, 50000.0)
ETH_GRID = (500.0, 1000.0, 1500.0, 2000.0, 2500.0)

TABLE1_ROWS = (
    ("standard", ProductClass.STANDARD),
    ("inverse", ProductClass.INVERSE),
    ("standard-quanto", ProductClass.STANDARD_QUANTO),
    ("quanto-inverse", ProductClass.QUANTO_INVERSE),
)


def table1_contracts(panel: str) -> list[tuple[str, OptionContract]]:
    """Contracts behind the two payoff-comparison panels, calls first."""
    if panel == "BTC":
        base, strike, grid = BTC, 25000.0, BTC_GRID
        inverse_fix = QuantoFix(22500.0, BTC, USD)
    elif panel == "ETH":
        base, strike, grid = ETH, 1750.0, ETH_GRID
        inverse_fix = QuantoFix(2000.0, ETH, USD)
    else:
        raise ValueError(f"unknown panel {panel!r}")
    # the standard quanto pays bitcoin in both panels
    standard_fix = QuantoFix(1.0 / 22500.0, USD, BTC)
    out = []
    for side in (OptionSide.CALL, OptionSide.PUT):
        for label, cls in TABLE1_ROWS:
            fix = None
            if cls is ProductClass.STANDARD_QUANTO:
                fix = standard_fix
            elif cls is ProductClass.QUANTO_INVERSE:
                fix = inverse_fix
            contract = OptionContract(base, USD, cls, side, strike, quanto=fix)
            out.append((label, contract))
    return out


def table1() -> list[dict]:
    """Both payoff-comparison panels as flat records."""
    records = []
    for panel, grid in (("BTC", BTC_GRID), ("ETH", ETH_GRID)):
        labelled = table1_contracts(panel)
        matrix = payoff_table(grid, [c for _, c in labelled])
        for (label, contract), row in zip(labelled, matrix):
            for settle, value in zip(grid, row):
                records.append(
                    {
                        "panel": panel,
                        "side": "call" if contract.side is OptionSide.CALL else "put",
                        "product": label,
                        "settle": settle,
                        "currency": str(value.denom),
                        "value": value.amount,
                    }
                )
    return records

