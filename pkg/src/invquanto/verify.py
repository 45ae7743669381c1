"""Oracle comparisons behind the ``verify`` command.

Each check compares closed forms against an independent computation
(finite differences, Monte Carlo, or an algebraic identity) and reports the
worst discrepancy together with its tolerance.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import Callable, Optional, TextIO

import numpy as np
from scipy.stats import binom

from .analytic import inverse_value, parity_gap, quanto_inverse_value, standard_value, unit_value
from .core import BTC, MarketState, OptionSide, ProductClass, make_contract
from .greeks import GREEK_NAMES, BumpSpec, fd_greeks, greeks_inverse, greeks_quanto_inverse
from .mc_oracle import PathConfig, mc_price

REPORT_HEADER = ("check", "n_cases", "n_fail", "allowed_fail", "worst", "tolerance", "passed")

# per-point breach probability of a 3-sigma band
THREE_SIGMA_TAIL = 0.0027


@dataclass(frozen=True)
class CheckResult:
    name: str
    n_cases: int
    n_fail: int
    allowed_fail: int
    worst: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.n_fail <= self.allowed_fail


def _sides(n):
    return [OptionSide.CALL if i % 2 == 0 else OptionSide.PUT for i in range(n)]


def check_duality(n: int = 100, seed: int = 1) -> CheckResult:
    """USD value of an inverse option equals spot times its coin value."""
    rng = np.random.default_rng(seed)
    worst, fails, tol = 0.0, 0, 1e-12
    for side in _sides(n):
        S = 25000 * np.exp(rng.uniform(-1, 1))
        K, sigma = 25000 * np.exp(rng.uniform(-0.5, 0.5)), rng.uniform(0.1, 2.5)
        tau, r, r_f = rng.uniform(1, 730) / 365, rng.uniform(-0.01, 0.1), rng.uniform(0, 0.05)
        usd = inverse_value(side.omega, S, K, r, r_f, sigma, tau, "quote")
        coins = inverse_value(side.omega, S, K, r, r_f, sigma, tau, "base")
        err = abs(usd - S * coins) / max(abs(usd), 1e-300)
        worst = max(worst, err)
        fails += err > tol
    return CheckResult("duality", n, fails, 0, worst, tol)


def check_parity(n: int = 100, seed: int = 2) -> CheckResult:
    """Quanto inverse call minus put equals its forward point value."""
    rng = np.random.default_rng(seed)
    worst, fails, tol = 0.0, 0, 1e-12
    for _ in range(n):
        S, K = 25000 * np.exp(rng.uniform(-1, 1)), 25000 * np.exp(rng.uniform(-0.5, 0.5))
        xbar, sigma = rng.uniform(1000, 50000), rng.uniform(0.1, 2.5)
        tau, r = rng.uniform(1, 365) / 365, rng.uniform(-0.01, 0.1)
        c = quanto_inverse_value(1, S, K, xbar, r, sigma, tau)
        p = quanto_inverse_value(-1, S, K, xbar, r, sigma, tau)
        err = abs(parity_gap(c, p, S, K, xbar, r, sigma, tau)) / xbar
        worst = max(worst, err)
        fails += err > tol
    return CheckResult("parity", n, fails, 0, worst, tol)


def fd_cases(n: int, seed: int = 3):
    """Random points in normalized units (K = 1, X = 1).

    Greeks are homogeneous in (S, K) and linear in X, so this loses nothing
    and keeps finite-difference round-off below the comparison floor.
    """
    rng = np.random.default_rng(seed)
    for side in _sides(n):
        yield (
            side,
            float(np.exp(rng.uniform(-0.6, 0.6))),
            float(rng.uniform(0.2, 2.0)),
            float(rng.uniform(5, 365) / 365),
            float(rng.uniform(-0.02, 0.08)),
            float(rng.uniform(0.0, 0.05)),
        )


def _fd_sets(side, S, sigma, tau, r, r_f):
    w = side.omega
    yield (
        "inverse-quote",
        greeks_inverse(side, S, 1.0, r, r_f, sigma, tau, "quote"),
        lambda m: standard_value(w, m.spot, 1.0, m.rate_dom, m.rate_for, m.vol, m.tau),
        MarketState(S, sigma, r, r_f, tau),
    )
    yield (
        "inverse-base",
        greeks_inverse(side, S, 1.0, r, r_f, sigma, tau, "base"),
        lambda m: inverse_value(w, m.spot, 1.0, m.rate_dom, m.rate_for, m.vol, m.tau),
        MarketState(S, sigma, r, r_f, tau),
    )
    yield (
        "quanto-inverse",
        greeks_quanto_inverse(side, S, 1.0, 1.0, r, sigma, tau),
        lambda m: quanto_inverse_value(w, m.spot, 1.0, 1.0, m.rate_dom, m.vol, m.tau),
        MarketState(S, sigma, r, 0.0, tau),
    )


def fd_errors(n: int = 200, seed: int = 3, bumps: Optional[BumpSpec] = None) -> dict:
    """Worst relative (floored at 1) FD discrepancy per (set, greek)."""
    worst: dict = {}
    for case in fd_cases(n, seed):
        for label, cf, pricer, market in _fd_sets(*case):
            fd = fd_greeks(pricer, market, bumps)
            for g in GREEK_NAMES:
                a, b = getattr(cf, g), getattr(fd, g)
                err = abs(a - b) / max(1.0, abs(b))
                worst[(label, g)] = max(worst.get((label, g), 0.0), err)
    return worst


def check_greeks(n: int = 200, seed: int = 3, tol: float = 1e-6) -> list[CheckResult]:
    worst = fd_errors(n, seed)
    out = []
    for label in ("inverse-quote", "inverse-base", "quanto-inverse"):
        for g in GREEK_NAMES:
            e = worst[(label, g)]
            out.append(CheckResult(f"fd-{label}-{g}", n, int(e > tol), 0, e, tol))
    return out


MC_CASES = (
    (ProductClass.STANDARD, None),
    (ProductClass.DIRECT, None),
    (ProductClass.INVERSE, "base"),
    (ProductClass.INVERSE, "quote"),
    (ProductClass.STANDARD_QUANTO, None),
    (ProductClass.QUANTO_DIRECT, None),
    (ProductClass.QUANTO_INVERSE, None),
)


def _xbar_for(cls: ProductClass):
    if cls is ProductClass.QUANTO_INVERSE:
        return 25000.0
    if cls is ProductClass.STANDARD_QUANTO:
        return 1.0 / 22500.0
    if cls is ProductClass.QUANTO_DIRECT:
        return 1.0
    return None


def allowed_breaches(n: int) -> int:
    """99th percentile of the number of 3-sigma breaches among ``n`` honest points."""
    return int(binom.ppf(0.99, n, THREE_SIGMA_TAIL))


def check_mc(grid: int = 50, paths: int = 1_000_000, seed: int = 20220930, workers: int = 1) -> list[CheckResult]:
    out = []
    for c_idx, (cls, denom) in enumerate(MC_CASES):
        rng = np.random.default_rng([seed & (2**63 - 1), 100 + c_idx])
        xbar = _xbar_for(cls)
        fails, worst = 0, 0.0
        for i, side in enumerate(_sides(grid)):
            # moneyness within a few vol-widths so no point is trivially zero
            S = 25000 * float(np.exp(rng.uniform(-0.2, 0.2)))
            K = 25000 * float(np.exp(rng.uniform(-0.2, 0.2)))
            sigma, tau = float(rng.uniform(0.3, 1.5)), float(rng.uniform(30, 365) / 365)
            r = float(rng.uniform(0.0, 0.05))
            r_f = 0.0 if cls is ProductClass.QUANTO_INVERSE else float(rng.uniform(0.0, 0.03))
            market = MarketState(S, sigma, r, r_f, tau)
            contract = make_contract(cls, side, K, BTC, xbar)
            cfg = PathConfig(seed=(seed * 1_000_003 + c_idx * 10_007 + i) & (2**64 - 1), n_paths=paths, workers=workers)
            est = mc_price(contract, market, cfg, denom)
            exact = unit_value(cls, side.omega, K, contract.xbar, market, denom)
            diff = abs(est.value.amount - exact)
            if est.std_error > 0:
                z = diff / est.std_error
            else:
                z = 0.0 if diff <= 1e-12 * max(1.0, abs(exact)) else float("inf")
            worst = max(worst, z)
            fails += z > 3.0
        name = f"mc-{cls.value}" + (f"-{denom}" if cls is ProductClass.INVERSE else "")
        out.append(CheckResult(name, grid, fails, allowed_breaches(grid), worst, 3.0))
    return out


def check_anchors() -> list[CheckResult]:
    """Published price levels for the quanto inverse call at S=30000, K=X=25000."""
    anchors = (
        (10, 2.0, 4123.0, 5.0),
        (90, 2.0, 4080.0, 10.0),
        (180, 2.0, 3490.0, 10.0),
        (90, 0.5, 4020.0, 10.0),
        (90, 1.0, 4270.0, 15.0),
    )
    out = []
    for days, sigma, target, tol in anchors:
        v = quanto_inverse_value(1, 30000.0, 25000.0, 25000.0, 0.0, sigma, days / 365)
        err = abs(v - target)
        out.append(CheckResult(f"anchor-{days}d-vol{sigma:g}", 1, int(err > tol), 0, err, tol))
    return out


def run_all(
    paths: int = 1_000_000,
    seed: int = 20220930,
    grid: int = 50,
    workers: int = 1,
    progress: Optional[Callable[[str], None]] = None,
) -> list[CheckResult]:
    steps = (
        ("anchors", check_anchors),
        ("duality", lambda: [check_duality()]),
        ("parity", lambda: [check_parity()]),
        ("greeks", check_greeks),
        ("monte carlo", lambda: check_mc(grid, paths, seed, workers)),
    )
    results = []
    for label, fn in steps:
        if progress:
            progress(label)
        results.extend(fn())
    return results


def write_report(results, stream: TextIO) -> None:
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(REPORT_HEADER)
    for r in results:
        w.writerow([r.name, r.n_cases, r.n_fail, r.allowed_fail, repr(float(r.worst)), repr(r.tolerance), int(r.passed)])
