import pytest
from hypothesis import given
from hypothesis import strategies as st

from invquanto.core import (
    BTC,
    ETH,
    USD,
    DenominationError,
    Money,
    OptionContract,
    OptionSide,
    ProductClass,
    QuantoFix,
    make_contract,
)
from invquanto.payoff import Settlement, payoff, payoff_amount, payoff_table, table1, usd_translation
from oracles import TABLE1_CURRENCY, TABLE1_PRINTED, matches_display

CALL, PUT = OptionSide.CALL, OptionSide.PUT
QI = ProductClass.QUANTO_INVERSE


def pay(cls, side, K, ST, xbar=None, base=BTC, notional=1.0):
    return payoff(make_contract(cls, side, K, base, xbar, notional), Settlement(ST))


def test_inverse_examples():
    assert pay(ProductClass.INVERSE, CALL, 25000, 40000) == Money(0.375, BTC)
    assert pay(ProductClass.INVERSE, PUT, 25000, 10000) == Money(1.5, BTC)


def test_quanto_inverse_examples():
    assert pay(QI, CALL, 25000, 30000, 22500).amount == pytest.approx(3750)
    assert pay(QI, CALL, 25000, 50000, 22500).amount == pytest.approx(11250)
    assert pay(QI, PUT, 25000, 10000, 22500) == Money(33750.0, USD)


def test_standard_quanto_eth():
    # a bitcoin-based trader in ETH-USD: the fix converts dollars to bitcoin
    c = OptionContract(ETH, USD, ProductClass.STANDARD_QUANTO, CALL, 1750.0, quanto=QuantoFix(1 / 22500, USD, BTC))
    v = payoff(c, Settlement(2500.0))
    assert v.denom == BTC
    assert v.amount == pytest.approx(750 / 22500, rel=1e-15)


def test_black_swan_put():
    v = pay(QI, PUT, 9000, 3500, 9000)
    assert v.amount == pytest.approx(14142.857142857143, abs=1e-9)
    assert v.amount > 2 * pay(ProductClass.STANDARD, PUT, 9000, 3500).amount


def test_footnote_levels():
    assert pay(QI, CALL, 25000, 27500, 22500).amount == pytest.approx(2045.4545, abs=1e-3)
    assert pay(QI, CALL, 25000, 50000, 22500).amount == pytest.approx(11250)
    assert pay(QI, CALL, 25000, 250000, 22500).amount == pytest.approx(20250)


@pytest.mark.parametrize("cls", list(ProductClass))
@pytest.mark.parametrize("side", [CALL, PUT])
def test_zero_at_the_money(cls, side):
    xbar = 2.0 if cls.is_quanto else None
    assert pay(cls, side, 25000, 25000, xbar).amount == 0.0


def test_settlement_validation():
    for bad in (0.0, -1.0):
        with pytest.raises(ValueError):
            Settlement(bad)
    with pytest.raises(ValueError):
        Settlement(1.0, spot_at_settlement=0.0)


def test_usd_translation():
    c = make_contract(ProductClass.INVERSE, CALL, 25000)
    coins = payoff(c, Settlement(40000))
    assert usd_translation(coins, Settlement(40000, 40000), c) == Money(15000.0, USD)
    assert usd_translation(coins, Settlement(40000, 41000), c).amount == pytest.approx(15375)
    zero = payoff(c, Settlement(20000))
    assert usd_translation(zero, Settlement(20000, 123.0), c).amount == 0.0
    with pytest.raises(DenominationError):
        usd_translation(Money(1.0, USD), Settlement(40000, 40000), c)
    with pytest.raises(ValueError):
        usd_translation(coins, Settlement(40000), c)


settle = st.floats(1e-3, 1e7)
strike = st.floats(1.0, 1e6)
notional = st.floats(0.01, 100.0)


@given(settle, strike, notional)
def test_translation_recovers_standard(ST, K, N):
    for side in (CALL, PUT):
        c = make_contract(ProductClass.INVERSE, side, K, notional=N)
        usd = usd_translation(payoff(c, Settlement(ST)), Settlement(ST, ST), c).amount
        std = payoff(make_contract(ProductClass.STANDARD, side, K, notional=N), Settlement(ST)).amount
        assert usd == pytest.approx(std, rel=4e-16 * 4, abs=1e-300)


@given(settle, strike, st.floats(0.01, 1e5))
def test_call_bounds(ST, K, xbar):
    assert payoff_amount(ProductClass.INVERSE, 1, K, ST) <= 1.0
    assert payoff_amount(QI, 1, K, ST, xbar) <= xbar


@given(settle, strike, st.floats(0.01, 1e5))
def test_payoff_parity(ST, K, xbar):
    def gap(cls, x=1.0):
        return payoff_amount(cls, 1, K, ST, x) - payoff_amount(cls, -1, K, ST, x)

    scale = max(ST, K)
    assert gap(ProductClass.STANDARD) == pytest.approx(ST - K, abs=1e-12 * scale)
    assert gap(ProductClass.INVERSE) == pytest.approx((ST - K) / ST, abs=1e-12 * scale / ST)
    assert gap(QI, xbar) == pytest.approx(xbar * (ST - K) / ST, abs=1e-12 * xbar * scale / ST)


def test_put_blowup_near_zero():
    K = 25000.0
    for ST in (1.0, 1e-3, 1e-6):
        v = payoff_amount(ProductClass.INVERSE, -1, K, ST)
        assert v == pytest.approx(K / ST - 1, rel=1e-12)
    assert payoff_amount(QI, -1, K, 1e-6, 2.0) > 1e10


def test_payoff_table_shape():
    contracts = [make_contract(ProductClass.STANDARD, CALL, 10.0), make_contract(ProductClass.INVERSE, PUT, 10.0)]
    grid = payoff_table([5.0, 10.0, 20.0], contracts)
    assert len(grid) == 2 and all(len(row) == 3 for row in grid)
    assert payoff_table([5.0], []) == []
    with pytest.raises(ValueError):
        payoff_table([], contracts)


def test_table1_every_cell():
    records = table1()
    assert len(records) == 80
    by_key = {}
    for r in records:
        by_key.setdefault((r["panel"], r["side"], r["product"]), []).append(r)
    for key, printed in TABLE1_PRINTED.items():
        cells = by_key[key]
        assert [c["currency"] for c in cells] == [TABLE1_CURRENCY[(key[0], key[2])]] * 5
        for cell, shown in zip(cells, printed):
            assert matches_display(cell["value"], shown), (key, cell["settle"], cell["value"], shown)
