import pytest

from invquanto.core import MarketState, OptionSide, ProductClass, make_contract
from invquanto.hedge_sim import QUANTILE_LEVELS, HedgeSimConfig, simulate_hedge
from invquanto.mc_oracle import PathConfig

TAU = 30 / 365
MARKET = MarketState(25000.0, 0.75, 0.0, 0.0, TAU)
INVERSE_CALL = make_contract(ProductClass.INVERSE, OptionSide.CALL, 25000.0)


def run(rho, steps, contract=INVERSE_CALL, market=MARKET, n_paths=4000, seed=7, **kw):
    cfg = HedgeSimConfig(
        mu_index=kw.get("mu", 0.0),
        sigma_index=kw.get("sigma", 0.75),
        mu_hedge=kw.get("mu_hedge", kw.get("mu", 0.0)),
        sigma_hedge=kw.get("sigma_hedge", kw.get("sigma", 0.75)),
        rho=rho,
        rebalance_dt=market.tau / steps,
        greek_source=kw.get("greek_source"),
        paths=PathConfig(seed=seed, n_paths=n_paths, workers=kw.get("workers", 1)),
    )
    return simulate_hedge(contract, market, cfg)


def test_config_validation():
    for bad in ({"rho": 1.5}, {"rho": float("nan")}, {"sigma_index": 0.0}, {"rebalance_dt": 0.0}, {"greek_source": "vanilla"}):
        base = dict(mu_index=0, sigma_index=0.5, mu_hedge=0, sigma_hedge=0.5, rho=0.5, rebalance_dt=0.01)
        base.update(bad)
        with pytest.raises(ValueError):
            HedgeSimConfig(**base)


def test_rebalance_longer_than_expiry():
    cfg = HedgeSimConfig(0, 0.5, 0, 0.5, 1.0, 2 * TAU)
    with pytest.raises(ValueError):
        simulate_hedge(INVERSE_CALL, MARKET, cfg)


def test_greek_source_must_match():
    with pytest.raises(ValueError):
        run(1.0, 8, greek_source="quanto-inverse")
    sq = make_contract(ProductClass.STANDARD_QUANTO, OptionSide.CALL, 25000.0, xbar=1.0)
    with pytest.raises(ValueError):
        run(1.0, 8, contract=sq)


def test_report_shape():
    rep = run(0.9, 16)
    assert rep.n_paths == 4000 and rep.n_steps == 16
    assert tuple(rep.quantiles) == QUANTILE_LEVELS
    q = list(rep.quantiles.values())
    assert q == sorted(q)
    assert rep.std_pnl >= 0
    names = [k for k, _ in rep.rows()]
    assert names[:3] == ["mean_pnl", "std_pnl", "mean_se"] and names[-2:] == ["n_paths", "n_steps"]


def test_std_nonincreasing_in_rho():
    stds = [run(rho, 128).std_pnl for rho in (0.5, 0.8, 0.95, 1.0)]
    assert all(a >= b for a, b in zip(stds, stds[1:])), stds


def test_basis_risk_floor():
    assert run(0.8, 512).std_pnl >= 5 * run(1.0, 512).std_pnl


def test_replication_error_shrinks():
    coarse, fine = run(1.0, 32).std_pnl, run(1.0, 512).std_pnl
    # O(sqrt(dt)) predicts a ratio of 1/4
    assert fine < 0.3 * coarse


def test_no_drift_arbitrage_complete_market():
    rep = run(1.0, 128, mu=0.0, n_paths=20000)
    assert abs(rep.mean_pnl) <= 3 * rep.mean_se


def test_zero_vol_is_exact():
    itm = make_contract(ProductClass.INVERSE, OptionSide.CALL, 20000.0)
    # residual basis noise is proportional to vol, so it vanishes in the limit
    small = run(0.3, 8, contract=itm, sigma=1e-9, n_paths=100)
    tiny = run(0.3, 8, contract=itm, sigma=1e-12, n_paths=100)
    assert small.std_pnl <= 25000 * 1e-9
    assert tiny.std_pnl <= 25000 * 1e-12
    assert abs(tiny.mean_pnl) < 1e-9


def test_quanto_inverse_hedge():
    qi = make_contract(ProductClass.QUANTO_INVERSE, OptionSide.PUT, 25000.0, xbar=25000.0)
    coarse, fine = run(1.0, 16, contract=qi).std_pnl, run(1.0, 256, contract=qi).std_pnl
    assert fine < coarse


def test_deterministic_across_workers():
    market = MarketState(25000.0, 0.75, 0.0, 0.0, 90 / 365)
    one = run(0.9, 2048, market=market, n_paths=4096, workers=1)
    four = run(0.9, 2048, market=market, n_paths=4096, workers=4)
    assert one == four
