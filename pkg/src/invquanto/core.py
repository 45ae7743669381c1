"""Domain types, denomination algebra and shared numeric primitives."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from datetime import datetime
from typing import Optional, Union

import numpy as np
from scipy.special import ndtr

ArrayLike = Union[float, np.ndarray]

DAYS_PER_YEAR = 365.0
# Below this many years an option is treated as expired.
EXPIRY_EPS = 1e-12


class DegenerateInputError(ValueError):
    """Raised when d-values are requested at zero vol or zero time."""


class DenominationError(TypeError):
    """Raised on arithmetic between amounts in different currencies."""


@dataclass(frozen=True)
class Currency:
    code: str

    def __post_init__(self):
        if not self.code or not self.code.isalnum() or self.code != self.code.upper():
            raise ValueError(f"invalid currency code {self.code!r}")

    def __str__(self):
        return self.code


USD = Currency("USD")
USDT = Currency("USDT")
BTC = Currency("BTC")
ETH = Currency("ETH")
SOL = Currency("SOL")


class OptionSide(enum.IntEnum):
    CALL = 1
    PUT = -1

    @property
    def omega(self) -> int:
        return int(self)

    @classmethod
    def parse(cls, text: str) -> "OptionSide":
        key = text.strip().lower()
        if key in ("call", "c"):
            return cls.CALL
        if key in ("put", "p"):
            return cls.PUT
        raise ValueError(f"unknown option side {text!r}")


class ProductClass(enum.Enum):
    STANDARD = "standard"
    DIRECT = "direct"
    INVERSE = "inverse"
    STANDARD_QUANTO = "standard-quanto"
    QUANTO_DIRECT = "quanto-direct"
    QUANTO_INVERSE = "quanto-inverse"

    @property
    def is_quanto(self) -> bool:
        return self in (
            ProductClass.STANDARD_QUANTO,
            ProductClass.QUANTO_DIRECT,
            ProductClass.QUANTO_INVERSE,
        )

    @classmethod
    def parse(cls, text: str) -> "ProductClass":
        key = text.strip().lower().replace("_", "-")
        for member in cls:
            if member.value == key:
                return member
        raise ValueError(f"unknown product class {text!r}")


@dataclass(frozen=True)
class QuantoFix:
    """Fixed conversion multiplier applied to a payoff.

    ``xbar`` is used exactly as it appears in the payoff: for a quanto
    inverse on BTC/USD paying dollars it is USD per BTC (e.g. 22500), for a
    standard quanto paying bitcoin it is BTC per USD (e.g. 1/22500).
    """

    xbar: float
    source_denom: Currency
    target_denom: Currency

    def __post_init__(self):
        if not (self.xbar > 0 and math.isfinite(self.xbar)):
            raise ValueError("quanto fix must be a positive finite number")
        if self.source_denom == self.target_denom:
            raise ValueError("quanto fix must change the denomination")


@dataclass(frozen=True)
class OptionContract:
    underlying_base: Currency
    underlying_quote: Currency
    product_class: ProductClass
    side: OptionSide
    strike: float
    notional: float = 1.0
    quanto: Optional[QuantoFix] = None
    expiry: Optional[datetime] = None

    def __post_init__(self):
        if not self.strike > 0:
            raise ValueError("strike must be positive")
        if not self.notional > 0:
            raise ValueError("notional must be positive")
        if self.product_class.is_quanto and self.quanto is None:
            raise ValueError(f"missing quanto fix for {self.product_class.value}")
        if not self.product_class.is_quanto and self.quanto is not None:
            raise ValueError(f"{self.product_class.value} takes no quanto fix")

    @property
    def payoff_denom(self) -> Currency:
        cls = self.product_class
        if cls in (ProductClass.STANDARD, ProductClass.DIRECT):
            return self.underlying_quote
        if cls is ProductClass.INVERSE:
            return self.underlying_base
        return self.quanto.target_denom

    @property
    def xbar(self) -> float:
        return self.quanto.xbar if self.quanto is not None else 1.0


@dataclass(frozen=True)
class MarketState:
    spot: float
    vol: float
    rate_dom: float = 0.0
    rate_for: float = 0.0
    tau: float = 0.0

    def __post_init__(self):
        if not self.spot > 0:
            raise ValueError("spot must be positive")
        if not self.tau >= 0:
            raise ValueError("tau must be nonnegative")
        if self.tau > 0 and not self.vol > 0:
            raise ValueError("vol must be positive before expiry")


@dataclass(frozen=True)
class Money:
    amount: float
    denom: Currency

    def _check(self, other: "Money") -> None:
        if not isinstance(other, Money):
            raise DenominationError(f"cannot combine Money with {type(other).__name__}")
        if other.denom != self.denom:
            raise DenominationError(f"{self.denom} vs {other.denom}")

    def __add__(self, other: "Money") -> "Money":
        self._check(other)
        return Money(self.amount + other.amount, self.denom)

    def __sub__(self, other: "Money") -> "Money":
        self._check(other)
        return Money(self.amount - other.amount, self.denom)

    def __neg__(self) -> "Money":
        return Money(-self.amount, self.denom)

    def __mul__(self, k: float) -> "Money":
        if isinstance(k, Money):
            raise DenominationError("Money * Money is not an amount")
        return Money(self.amount * k, self.denom)

    __rmul__ = __mul__

    def __truediv__(self, k: float) -> "Money":
        if isinstance(k, Money):
            raise DenominationError("use .amount for ratios of amounts")
        return Money(self.amount / k, self.denom)

    def __lt__(self, other: "Money") -> bool:
        self._check(other)
        return self.amount < other.amount

    def __le__(self, other: "Money") -> bool:
        self._check(other)
        return self.amount <= other.amount

    def __str__(self):
        return f"{self.denom} {self.amount!r}"


@dataclass(frozen=True)
class DValues:
    d1: ArrayLike
    d2: ArrayLike
    d3: ArrayLike
    # sigma * sqrt(tau), kept for callers that need it
    vol_sqrt_t: ArrayLike = field(repr=False, default=0.0)


def norm_cdf(x: ArrayLike) -> ArrayLike:
    """Standard normal CDF, accurate to ~1 ulp across the real line."""
    x = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x)):
        raise ValueError("norm_cdf requires finite input")
    out = ndtr(x)
    return float(out) if out.ndim == 0 else out


def norm_pdf(x: ArrayLike) -> ArrayLike:
    x = np.asarray(x, dtype=float)
    out = np.exp(-0.5 * x * x) / math.sqrt(2.0 * math.pi)
    return float(out) if out.ndim == 0 else out


def d_values(S, K, r, r_f, sigma, tau) -> DValues:
    """d1, d2 = d1 - s, d3 = d2 - s with s = sigma * sqrt(tau)."""
    S, K, sigma, tau = (np.asarray(a, dtype=float) for a in (S, K, sigma, tau))
    if np.any(tau <= 0) or np.any(sigma <= 0):
        raise DegenerateInputError("d-values need sigma > 0 and tau > 0")
    if np.any(S <= 0) or np.any(K <= 0):
        raise ValueError("spot and strike must be positive")
    s = sigma * np.sqrt(tau)
    d1 = (np.log(S / K) + (r - r_f + 0.5 * sigma * sigma) * tau) / s
    d2 = d1 - s
    d3 = d2 - s
    if d1.ndim == 0:
        return DValues(float(d1), float(d2), float(d3), float(s))
    return DValues(d1, d2, d3, s)


def discount(r: float, tau: ArrayLike) -> ArrayLike:
    tau_arr = np.asarray(tau, dtype=float)
    if np.any(tau_arr < 0):
        raise ValueError("negative time to expiry")
    out = np.exp(-r * tau_arr)
    return float(out) if out.ndim == 0 else out


def year_fraction(start: datetime, end: datetime) -> float:
    """ACT/365 fixed, measured to the second."""
    return (end - start).total_seconds() / (DAYS_PER_YEAR * 86400.0)


def make_contract(
    product_class: ProductClass,
    side: OptionSide,
    strike: float,
    base: Currency = BTC,
    xbar: Optional[float] = None,
    notional: float = 1.0,
    quote: Currency = USD,
) -> OptionContract:
    """Contract with the usual denominations for its class.

    Quanto inverse pays the quote currency, standard quanto pays the coin,
    and quanto direct pays the quote currency on a stablecoin strike.
    """
    fix = None
    if product_class is ProductClass.QUANTO_INVERSE and xbar is not None:
        fix = QuantoFix(xbar, base, quote)
    elif product_class is ProductClass.STANDARD_QUANTO and xbar is not None:
        fix = QuantoFix(xbar, quote, base)
    elif product_class is ProductClass.QUANTO_DIRECT and xbar is not None:
        fix = QuantoFix(xbar, USDT, quote)
    elif xbar is not None:
        raise ValueError(f"{product_class.value} takes no quanto fix")
    return OptionContract(base, quote, product_class, side, strike, notional, fix)
