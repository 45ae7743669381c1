"""Command-line front end.

Exit codes: 0 success, 2 validation error, 3 verification failure.
Single results go to stdout as shortest round-trip decimals; tables are CSV
written to ``--out`` (or stdout where no file is required).
"""

from __future__ import annotations

import argparse
import csv
import io
import logging
import math
import re
import sys
from datetime import datetime, timezone
from typing import Optional, Sequence

import numpy as np

from . import __version__
from .analytic import unit_value
from .chain_io import ChainError, emit_priced_chain, load_chain, price_chain
from .core import DAYS_PER_YEAR, BTC, Currency, MarketState, OptionSide, ProductClass, make_contract
from .greeks import GREEK_NAMES, greek_curves, greeks_for
from .hedge_sim import HedgeSimConfig, simulate_hedge
from .implied_vol import ImpliedVolError, implied_vol
from .mc_oracle import PathConfig
from .payoff import Settlement, payoff, table1, usd_translation
from .verify import run_all, write_report

EXIT_OK, EXIT_INVALID, EXIT_VERIFY = 0, 2, 3

log = logging.getLogger("invquanto")

_DUR_RE = re.compile(r"^(\d+)([dh])$")


class UsageError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        # argparse exits 2 on its own; route through the same path as other validation errors
        raise UsageError(message)


def duration(text: str) -> float:
    """``<int>d`` or ``<int>h`` as an ACT/365 year fraction."""
    m = _DUR_RE.match(text.strip())
    if not m:
        raise argparse.ArgumentTypeError(f"bad duration {text!r}: expected an integer followed by d or h")
    n = int(m.group(1))
    days = n if m.group(2) == "d" else n / 24.0
    return days / DAYS_PER_YEAR


def finite(text: str) -> float:
    try:
        x = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not a number") from None
    if not math.isfinite(x):
        raise argparse.ArgumentTypeError(f"{text!r} is not finite")
    return x


def positive(text: str) -> float:
    x = finite(text)
    if x <= 0:
        raise argparse.ArgumentTypeError(f"{text!r} must be positive")
    return x


def count(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if n < 1:
        raise argparse.ArgumentTypeError(f"{text!r} must be at least 1")
    return n


def product_class(text: str) -> ProductClass:
    try:
        return ProductClass.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def side(text: str) -> OptionSide:
    try:
        return OptionSide.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def spot_grid(text: str) -> np.ndarray:
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"bad grid {text!r}: expected LO:HI:N")
    lo, hi, n = positive(parts[0]), positive(parts[1]), count(parts[2])
    if hi < lo or (n == 1 and hi != lo):
        raise argparse.ArgumentTypeError(f"bad grid {text!r}")
    return np.linspace(lo, hi, n)


def listed(kind):
    def parse(text: str):
        items = [t for t in text.split(",") if t.strip()]
        if not items:
            raise argparse.ArgumentTypeError("empty list")
        return [kind(t.strip()) for t in items]

    return parse


def timestamp(text: str) -> datetime:
    try:
        t = datetime.fromisoformat(text.strip().replace("Z", "+00:00"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad timestamp {text!r}") from None
    return t if t.tzinfo else t.replace(tzinfo=timezone.utc)


def _contract_flags(p, with_vol=True, with_tau=True):
    p.add_argument("--class", dest="cls", type=product_class, required=True)
    p.add_argument("--side", type=side, required=True)
    p.add_argument("--strike", type=positive, required=True)
    p.add_argument("--quanto-fix", type=positive)
    p.add_argument("--notional", type=positive, default=1.0)
    p.add_argument("--asset", default="BTC")
    p.add_argument("--denom", choices=("base", "quote"), help="inverse contracts only; default base")
    if with_tau:
        p.add_argument("--spot", type=positive, required=True)
        p.add_argument("--rate", type=finite, required=True)
        p.add_argument("--rate-foreign", type=finite, default=0.0)
        p.add_argument("--tau", type=duration, required=True)
    if with_vol:
        p.add_argument("--vol", type=positive, required=True)


def build_parser() -> argparse.ArgumentParser:
    root = _Parser(prog="invquanto", description="Inverse and quanto inverse option analytics.")
    root.add_argument("--version", action="version", version=__version__)
    sub = root.add_subparsers(dest="command", required=True, parser_class=_Parser)

    _contract_flags(sub.add_parser("price", help="closed-form price"))
    g = sub.add_parser("greeks", help="closed-form price and Greeks as CSV")
    _contract_flags(g)
    g.add_argument("--out")

    p = sub.add_parser("payoff", help="terminal payoff")
    _contract_flags(p, with_vol=False, with_tau=False)
    p.add_argument("--settle", type=positive, required=True)
    p.add_argument("--spot-at-settle", type=positive, help="translate a coin payoff to the quote currency")

    t = sub.add_parser("table1", help="both payoff comparison panels as CSV")
    t.add_argument("--out")

    s = sub.add_parser("surface", help="price and Greeks over spot, maturity and vol grids")
    s.add_argument("--class", dest="cls", type=product_class, required=True)
    s.add_argument("--side", type=side, default=OptionSide.CALL)
    s.add_argument("--strike", type=positive, default=25000.0)
    s.add_argument("--quanto-fix", type=positive)
    s.add_argument("--rate", type=finite, default=0.0)
    s.add_argument("--spot-grid", type=spot_grid, required=True)
    s.add_argument("--tau", type=listed(duration), required=True)
    s.add_argument("--vol", type=listed(positive), required=True)
    s.add_argument("--out", required=True)

    c = sub.add_parser("curves", help="Greeks against strike for inverse and quanto inverse")
    c.add_argument("--strike-grid", type=spot_grid, default=spot_grid("5000:60000:111"))
    c.add_argument("--out", required=True)

    v = sub.add_parser("verify", help="run every oracle comparison")
    v.add_argument("--paths", type=count, default=1_000_000)
    v.add_argument("--seed", type=int, default=20220930)
    v.add_argument("--grid", type=count, default=50)
    v.add_argument("--workers", type=count, default=1)
    v.add_argument("--out")

    i = sub.add_parser("iv", help="implied volatility")
    _contract_flags(i, with_vol=False)
    i.add_argument("--price", type=positive, required=True)

    h = sub.add_parser("hedge", help="discrete delta hedge with a correlated instrument")
    h.add_argument("--class", dest="cls", type=product_class, default=ProductClass.INVERSE)
    h.add_argument("--side", type=side, default=OptionSide.CALL)
    h.add_argument("--spot", type=positive, default=25000.0)
    h.add_argument("--strike", type=positive, default=25000.0)
    h.add_argument("--quanto-fix", type=positive)
    h.add_argument("--notional", type=positive, default=1.0)
    h.add_argument("--vol", type=positive, default=0.75, help="index volatility")
    h.add_argument("--hedge-vol", type=positive, help="hedge instrument volatility; default matches --vol")
    h.add_argument("--mu-index", type=finite, default=0.0)
    h.add_argument("--mu-hedge", type=finite, default=0.0)
    h.add_argument("--rate", type=finite, default=0.0)
    h.add_argument("--tau", type=duration, default=duration("30d"))
    h.add_argument("--rho", type=finite, required=True)
    h.add_argument("--rebalance", type=duration, required=True)
    h.add_argument("--paths", type=count, required=True)
    h.add_argument("--seed", type=int, default=20220930)
    h.add_argument("--workers", type=count, default=1)
    h.add_argument("--out")

    ch = sub.add_parser("chain", help="option chain batch jobs")
    chsub = ch.add_subparsers(dest="chain_command", required=True, parser_class=_Parser)
    cp = chsub.add_parser("price", help="price every row of a chain CSV")
    cp.add_argument("--in", dest="src", required=True)
    cp.add_argument("--out", required=True)
    cp.add_argument("--asof", type=timestamp, help="valuation time, default now (UTC)")
    cp.add_argument("--lenient", action="store_true")
    return root


def _num(x) -> str:
    return repr(float(x))


def _write_csv(out: Optional[str], header, rows) -> None:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_num(v) if isinstance(v, (float, np.floating)) else v for v in row])
    text = buf.getvalue()
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _contract(args):
    asset = Currency(args.asset.upper()) if hasattr(args, "asset") else BTC
    return make_contract(args.cls, args.side, args.strike, asset, args.quanto_fix, args.notional)


def _denom(args) -> Optional[str]:
    if args.denom is not None and args.cls is not ProductClass.INVERSE:
        raise UsageError("--denom applies to inverse contracts only")
    return args.denom


def _market(args, vol=None) -> MarketState:
    return MarketState(args.spot, args.vol if vol is None else vol, args.rate, args.rate_foreign, args.tau)


def cmd_price(args) -> int:
    c = _contract(args)
    v = c.notional * unit_value(c.product_class, c.side.omega, c.strike, c.xbar, _market(args), _denom(args))
    print(_num(v))
    return EXIT_OK


def cmd_greeks(args) -> int:
    c = _contract(args)
    if args.tau <= 0:
        raise UsageError("Greeks are undefined at expiry")
    rep = greeks_for(c.product_class, c.side, args.spot, c.strike, c.xbar, args.rate, args.rate_foreign,
                     args.vol, args.tau, _denom(args))
    values = [c.notional * float(v) for v in rep.as_dict().values()]
    _write_csv(args.out, ("price",) + GREEK_NAMES, [values])
    return EXIT_OK


def cmd_payoff(args) -> int:
    c = _contract(args)
    if args.denom is not None:
        raise UsageError("--denom does not apply to payoff; use --spot-at-settle to translate")
    amount = payoff(c, Settlement(args.settle, args.spot_at_settle))
    if args.spot_at_settle is not None:
        if c.product_class is not ProductClass.INVERSE:
            raise UsageError("--spot-at-settle translates inverse payoffs only")
        amount = usd_translation(amount, Settlement(args.settle, args.spot_at_settle), c)
    print(_num(amount.amount))
    return EXIT_OK


def cmd_table1(args) -> int:
    records = table1()
    header = ("panel", "side", "product", "settle", "currency", "value")
    _write_csv(args.out, header, [[r[k] for k in header] for r in records])
    return EXIT_OK


def cmd_surface(args) -> int:
    cls = args.cls
    if cls.is_quanto and args.quanto_fix is None:
        raise UsageError(f"missing quanto fix for {cls.value}")
    if not cls.is_quanto and args.quanto_fix is not None:
        raise UsageError(f"{cls.value} takes no quanto fix")
    xbar = args.quanto_fix or 1.0
    rows = []
    for tau in args.tau:
        if tau <= 0:
            raise UsageError("surface maturities must be positive")
        for vol in args.vol:
            rep = greeks_for(cls, args.side, args.spot_grid, args.strike, xbar, args.rate, 0.0, vol, tau)
            cols = {k: np.broadcast_to(v, args.spot_grid.shape) for k, v in rep.as_dict().items()}
            for j, S in enumerate(args.spot_grid):
                rows.append([tau * DAYS_PER_YEAR, vol, float(S)] + [float(cols[k][j]) for k in cols])
    _write_csv(args.out, ("tau_days", "vol", "spot", "price") + GREEK_NAMES, rows)
    return EXIT_OK


def cmd_curves(args) -> int:
    records = greek_curves(args.strike_grid)
    header = ("class", "side", "tau_days", "strike", "price") + GREEK_NAMES
    _write_csv(args.out, header, [[r[k] for k in header] for r in records])
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.paths < 2 or args.paths % 2:
        raise UsageError("--paths must be even (antithetic pairs)")
    results = run_all(args.paths, args.seed, args.grid, args.workers, progress=lambda s: log.info("checking %s", s))
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            write_report(results, fh)
    else:
        write_report(results, sys.stdout)
    failed = [r.name for r in results if not r.passed]
    for name in failed:
        print(f"FAIL {name}", file=sys.stderr)
    return EXIT_VERIFY if failed else EXIT_OK


def cmd_iv(args) -> int:
    c = _contract(args)
    try:
        res = implied_vol(c.product_class, c.side, args.price / c.notional, args.spot, c.strike, c.xbar,
                          args.rate, args.rate_foreign, args.tau, _denom(args))
    except ImpliedVolError as exc:
        raise UsageError(str(exc)) from None
    if res.multiple:
        print(f"warning: {res.n_roots} volatilities match this price; reporting the smallest", file=sys.stderr)
    print(_num(res.sigma))
    return EXIT_OK


def cmd_hedge(args) -> int:
    c = make_contract(args.cls, args.side, args.strike, BTC, args.quanto_fix, args.notional)
    cfg = HedgeSimConfig(
        mu_index=args.mu_index,
        sigma_index=args.vol,
        mu_hedge=args.mu_hedge,
        sigma_hedge=args.hedge_vol or args.vol,
        rho=args.rho,
        rebalance_dt=args.rebalance,
        paths=PathConfig(seed=args.seed, n_paths=args.paths, workers=args.workers),
    )
    rep = simulate_hedge(c, MarketState(args.spot, args.vol, args.rate, 0.0, args.tau), cfg)
    _write_csv(args.out, ("metric", "value"), [[k, float(v) if isinstance(v, float) else v] for k, v in rep.rows()])
    return EXIT_OK


def cmd_chain(args) -> int:
    asof = args.asof or datetime.now(timezone.utc)
    try:
        with open(args.src, encoding="utf-8", newline="") as fh:
            rows = load_chain(fh, lenient=args.lenient)
    except OSError as exc:
        raise UsageError(f"cannot read {args.src}: {exc.strerror}") from None
    priced = price_chain(rows, asof)
    with open(args.out, "w", encoding="utf-8", newline="") as fh:
        emit_priced_chain(priced, fh)
    return EXIT_OK


COMMANDS = {
    "price": cmd_price,
    "greeks": cmd_greeks,
    "payoff": cmd_payoff,
    "table1": cmd_table1,
    "surface": cmd_surface,
    "curves": cmd_curves,
    "verify": cmd_verify,
    "iv": cmd_iv,
    "hedge": cmd_hedge,
    "chain": cmd_chain,
}


def run(argv: Optional[Sequence[str]] = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(message)s")
    try:
        args = build_parser().parse_args(argv)
        return COMMANDS[args.command](args)
    except (UsageError, ChainError, ValueError, OSError) as exc:
        print(f"invquanto: error: {exc}", file=sys.stderr)
        return EXIT_INVALID


def main() -> None:
    sys.exit(run())
