"""Instrument names and option-chain CSV files.

Instrument grammar: ``ASSET-DDMMMYY-STRIKE-C|P``, e.g. ``BTC-30SEP22-25000-C``.
The canonical form has an uppercase asset and month, the day without a
leading zero and the strike in shortest decimal form.
"""

from __future__ import annotations

import csv
import io
import logging
import math
import re
from dataclasses import dataclass
from datetime import date, datetime, timezone
from typing import Iterable, Optional, Sequence, TextIO

from .analytic import unit_value
from .core import EXPIRY_EPS, Currency, MarketState, OptionSide, ProductClass, year_fraction
from .greeks import GREEK_NAMES, greeks_for
from .implied_vol import ImpliedVolError, implied_vol

log = logging.getLogger(__name__)

MONTHS = ("JAN", "FEB", "MAR", "APR", "MAY", "JUN", "JUL", "AUG", "SEP", "OCT", "NOV", "DEC")
TOKEN_NAMES = ("asset", "expiry", "strike", "side")
INPUT_HEADER = ("instrument", "class", "spot", "vol", "rate", "quanto_fix", "observed_price")
OUTPUT_HEADER = ("instrument", "price", "delta", "gamma", "vega", "volga", "vanna", "theta", "implied_vol")

_EXPIRY_RE = re.compile(r"^(\d{1,2})([A-Za-z]{3})(\d{2})$")
_STRIKE_RE = re.compile(r"^\d+(\.\d+)?$")


class InstrumentParseError(ValueError):
    def __init__(self, text: str, token: int, reason: str):
        self.text = text
        self.token = token
        self.token_name = TOKEN_NAMES[token] if 0 <= token < len(TOKEN_NAMES) else "structure"
        super().__init__(f"{text!r}: bad {self.token_name} (token {token}): {reason}")


class ChainError(ValueError):
    def __init__(self, line: int, reason: str):
        self.line = line
        self.reason = reason
        super().__init__(f"line {line}: {reason}")


def format_strike(strike: float) -> str:
    if strike == int(strike) and abs(strike) < 1e16:
        return str(int(strike))
    return repr(float(strike))


@dataclass(frozen=True)
class InstrumentName:
    asset: Currency
    expiry: date
    strike: float
    side: OptionSide

    def __str__(self):
        e = self.expiry
        side = "C" if self.side is OptionSide.CALL else "P"
        return f"{self.asset.code}-{e.day}{MONTHS[e.month - 1]}{e.year % 100:02d}-{format_strike(self.strike)}-{side}"


def parse_instrument(text: str) -> InstrumentName:
    parts = text.strip().split("-")
    if len(parts) != 4:
        # the first missing token, or 4 for trailing extras
        raise InstrumentParseError(text, min(len(parts), 4), "expected 4 dash-separated tokens")
    asset, expiry, strike, side = parts

    if not asset or not asset.isalnum():
        raise InstrumentParseError(text, 0, f"asset {asset!r} must be alphanumeric")
    m = _EXPIRY_RE.match(expiry)
    if not m:
        raise InstrumentParseError(text, 1, f"expiry {expiry!r} is not DDMMMYY")
    month = m.group(2).upper()
    if month not in MONTHS:
        raise InstrumentParseError(text, 1, f"unknown month {m.group(2)!r}")
    try:
        when = date(2000 + int(m.group(3)), MONTHS.index(month) + 1, int(m.group(1)))
    except ValueError as exc:
        raise InstrumentParseError(text, 1, str(exc)) from None
    if not _STRIKE_RE.match(strike):
        raise InstrumentParseError(text, 2, f"strike {strike!r} is not a decimal number")
    k = float(strike)
    if not (k > 0 and math.isfinite(k)):
        raise InstrumentParseError(text, 2, "strike must be positive")
    if side.upper() not in ("C", "P"):
        raise InstrumentParseError(text, 3, f"side {side!r} must be C or P")
    return InstrumentName(
        Currency(asset.upper()), when, k, OptionSide.CALL if side.upper() == "C" else OptionSide.PUT
    )


def normalize_instrument(text: str) -> str:
    return str(parse_instrument(text))


@dataclass(frozen=True)
class ChainRow:
    instrument: InstrumentName
    product_class: ProductClass
    spot: float
    vol: float
    rate: float
    quanto_fix: Optional[float] = None
    observed_price: Optional[float] = None
    line: int = 0


def _number(cell: str, name: str, line: int, *, positive=False, optional=False) -> Optional[float]:
    cell = cell.strip()
    if cell == "":
        if optional:
            return None
        raise ChainError(line, f"missing {name}")
    try:
        value = float(cell)
    except ValueError:
        raise ChainError(line, f"{name} {cell!r} is not a number") from None
    if not math.isfinite(value):
        raise ChainError(line, f"{name} must be finite")
    if positive and value <= 0:
        raise ChainError(line, f"{name} must be positive")
    return value


def _row(record: Sequence[str], line: int) -> ChainRow:
    if len(record) != len(INPUT_HEADER):
        raise ChainError(line, f"expected {len(INPUT_HEADER)} fields, got {len(record)}")
    name, cls, spot, vol, rate, fix, observed = record
    try:
        instrument = parse_instrument(name)
    except InstrumentParseError as exc:
        raise ChainError(line, str(exc)) from None
    try:
        product_class = ProductClass.parse(cls)
    except ValueError as exc:
        raise ChainError(line, str(exc)) from None
    xbar = _number(fix, "quanto fix", line, positive=True, optional=True)
    if product_class.is_quanto and xbar is None:
        raise ChainError(line, "missing quanto fix")
    if not product_class.is_quanto and xbar is not None:
        raise ChainError(line, f"quanto fix given for {product_class.value}")
    return ChainRow(
        instrument,
        product_class,
        _number(spot, "spot", line, positive=True),
        _number(vol, "vol", line, positive=True),
        _number(rate, "rate", line),
        xbar,
        _number(observed, "observed price", line, positive=True, optional=True),
        line,
    )


def load_chain(stream: TextIO, lenient: bool = False) -> list[ChainRow]:
    """Read a chain CSV. Strict mode stops at the first bad row."""
    reader = csv.reader(stream)
    header = next(reader, None)
    if header is None or tuple(h.strip() for h in header) != INPUT_HEADER:
        raise ChainError(1, f"header must be {','.join(INPUT_HEADER)}")
    rows = []
    for record in reader:
        line = reader.line_num
        if not any(cell.strip() for cell in record):
            continue
        try:
            rows.append(_row(record, line))
        except ChainError as exc:
            if not lenient:
                raise
            log.warning("skipping %s", exc)
    return rows


def _cell(x: Optional[float]) -> str:
    return "" if x is None else format(x, ".17g")


def write_chain(rows: Iterable[ChainRow], stream: TextIO) -> None:
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(INPUT_HEADER)
    for r in rows:
        w.writerow(
            [str(r.instrument), r.product_class.value, _cell(r.spot), _cell(r.vol), _cell(r.rate),
             _cell(r.quanto_fix), _cell(r.observed_price)]
        )


@dataclass(frozen=True)
class PricedRow:
    instrument: str
    price: float
    # Greeks are blank for expired rows
    delta: Optional[float] = None
    gamma: Optional[float] = None
    vega: Optional[float] = None
    volga: Optional[float] = None
    vanna: Optional[float] = None
    theta: Optional[float] = None
    implied_vol: Optional[float] = None


def emit_priced_chain(rows: Sequence[PricedRow], stream: TextIO) -> None:
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(OUTPUT_HEADER)
    for r in rows:
        w.writerow([r.instrument] + [_cell(getattr(r, k)) for k in OUTPUT_HEADER[1:]])


def read_priced_chain(stream: TextIO) -> list[PricedRow]:
    reader = csv.reader(stream)
    header = next(reader, None)
    if header is None or tuple(header) != OUTPUT_HEADER:
        raise ChainError(1, f"header must be {','.join(OUTPUT_HEADER)}")
    out = []
    for record in reader:
        line = reader.line_num
        if len(record) != len(OUTPUT_HEADER):
            raise ChainError(line, "wrong field count")
        values = [_number(c, k, line, optional=(k != "price")) for k, c in zip(OUTPUT_HEADER[1:], record[1:])]
        out.append(PricedRow(record[0], *values))
    return out


def expiry_instant(expiry: date) -> datetime:
    """Expiries are taken at 00:00 UTC on the expiry date."""
    return datetime(expiry.year, expiry.month, expiry.day, tzinfo=timezone.utc)


def dumps_priced(rows: Sequence[PricedRow]) -> str:
    buf = io.StringIO()
    emit_priced_chain(rows, buf)
    return buf.getvalue()


def row_tau(row: ChainRow, asof: datetime) -> float:
    """ACT/365 time from ``asof`` to expiry, floored at zero."""
    return max(0.0, year_fraction(asof, expiry_instant(row.instrument.expiry)))


def price_row(row: ChainRow, asof: datetime) -> PricedRow:
    """Per-unit price and Greeks of one row; inverse rows are in coins."""
    inst = row.instrument
    tau = row_tau(row, asof)
    xbar = row.quanto_fix if row.quanto_fix is not None else 1.0
    market = MarketState(row.spot, row.vol, row.rate, 0.0, tau)
    value = float(unit_value(row.product_class, inst.side.omega, inst.strike, xbar, market))
    if tau <= EXPIRY_EPS:
        return PricedRow(str(inst), value)
    rep = greeks_for(row.product_class, inst.side, row.spot, inst.strike, xbar, row.rate, 0.0, row.vol, tau)
    iv = None
    if row.observed_price is not None:
        try:
            iv = implied_vol(
                row.product_class, inst.side, row.observed_price, row.spot, inst.strike, xbar, row.rate, 0.0, tau
            ).sigma
        except ImpliedVolError as exc:
            log.warning("line %d: no implied vol: %s", row.line, exc)
    greeks = {k: float(getattr(rep, k)) for k in GREEK_NAMES}
    return PricedRow(str(inst), value, implied_vol=iv, **greeks)


def price_chain(rows: Sequence[ChainRow], asof: datetime) -> list[PricedRow]:
    # rows are independent; no state carries from one to the next
    return [price_row(r, asof) for r in rows]
