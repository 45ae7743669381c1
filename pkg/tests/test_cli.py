import csv
import subprocess
import sys

import pytest

from invquanto import cli
from invquanto.verify import CheckResult
from oracles import TABLE1_PRINTED, matches_display

QI_ANCHOR = "price --class quanto-inverse --side call --spot 30000 --strike 25000 --vol 2.0 --rate 0 --tau 10d --quanto-fix 25000"


def run(capsys, argv):
    code = cli.run(argv.split() if isinstance(argv, str) else argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_duration_grammar():
    assert cli.duration("10d") == 10 / 365
    assert cli.duration("36h") == 1.5 / 365
    assert cli.duration("0d") == 0.0
    for bad in ("10", "1.5d", "-1d", "10w", "d"):
        with pytest.raises(Exception):
            cli.duration(bad)


def test_price_anchor(capsys):
    code, out, _ = run(capsys, QI_ANCHOR)
    assert code == 0
    assert abs(float(out) - 4123) <= 5
    assert out.strip() == repr(float(out))


def test_price_at_expiry_is_payoff(capsys):
    code, out, _ = run(capsys, QI_ANCHOR.replace("10d", "0d"))
    assert code == 0 and float(out) == pytest.approx(25000 * 5000 / 30000)
    code, out, _ = run(capsys, "price --class inverse --side put --spot 10000 --strike 25000 --vol 1 --rate 0 --tau 0h --notional 2")
    assert float(out) == 3.0


@pytest.mark.parametrize(
    "argv",
    [
        QI_ANCHOR.replace(" --quanto-fix 25000", ""),
        QI_ANCHOR.replace("--class quanto-inverse", "--class inverse"),
        QI_ANCHOR.replace("10d", "10y"),
        QI_ANCHOR.replace("--vol 2.0", "--vol -2"),
        QI_ANCHOR.replace("--vol 2.0", "--vol nan"),
        QI_ANCHOR + " --unknown 1",
        QI_ANCHOR.replace("--side call", "--side straddle"),
        "price --class quanto-inverse",
        "nonsense",
        "",
        "iv --class standard --side call --spot 100 --strike 100 --rate 0 --tau 30d --price 500",
        "chain price --in /does/not/exist.csv --out /tmp/never.csv",
        "greeks --class standard --side call --spot 100 --strike 100 --vol 0.5 --rate 0 --tau 0d",
        "price --class standard --side call --spot 100 --strike 100 --vol 0.5 --rate 0 --tau 1d --denom base",
    ],
)
def test_validation_exit_code(capsys, argv):
    code, out, err = run(capsys, argv)
    assert code == 2
    assert out == "" and "error" in err


def test_greeks_csv(capsys, tmp_path):
    out_file = tmp_path / "g.csv"
    code, _, _ = run(capsys, QI_ANCHOR.replace("price", "greeks", 1) + f" --out {out_file}")
    assert code == 0
    rows = list(csv.reader(out_file.open()))
    assert rows[0] == ["price", "delta", "gamma", "vega", "volga", "vanna", "theta"]
    assert abs(float(rows[1][0]) - 4123) <= 5


def test_payoff(capsys):
    code, out, _ = run(capsys, "payoff --class quanto-inverse --side put --strike 9000 --settle 3500 --quanto-fix 9000")
    assert code == 0 and abs(float(out) - 14142.86) <= 1
    code, out, _ = run(capsys, "payoff --class inverse --side call --strike 25000 --settle 40000 --spot-at-settle 41000")
    assert float(out) == pytest.approx(15375)
    code, _, _ = run(capsys, "payoff --class standard --side call --strike 25000 --settle 40000 --spot-at-settle 41000")
    assert code == 2


def test_table1(capsys):
    code, out, _ = run(capsys, "table1")
    assert code == 0
    rows = list(csv.DictReader(out.splitlines()))
    assert len(rows) == 80
    for key, printed in TABLE1_PRINTED.items():
        cells = [r for r in rows if (r["panel"], r["side"], r["product"]) == key]
        assert all(matches_display(float(c["value"]), p) for c, p in zip(cells, printed))


def test_surface_and_curves(capsys, tmp_path):
    s = tmp_path / "s.csv"
    code, _, _ = run(capsys, f"surface --class quanto-inverse --quanto-fix 25000 --spot-grid 5000:60000:12 --tau 10d,90d --vol 0.5,2 --out {s}")
    assert code == 0
    rows = list(csv.DictReader(s.open()))
    assert len(rows) == 2 * 2 * 12
    c = tmp_path / "c.csv"
    assert run(capsys, f"curves --strike-grid 5000:60000:56 --out {c}")[0] == 0
    assert len(list(csv.DictReader(c.open()))) == 3 * 2 * 2 * 56
    assert run(capsys, f"surface --class quanto-inverse --spot-grid 1:2:3 --tau 1d --vol 1 --out {s}")[0] == 2
    assert run(capsys, f"surface --class inverse --spot-grid 5:2:3 --tau 1d --vol 1 --out {s}")[0] == 2


def test_iv(capsys):
    code, out, err = run(capsys, "iv --class quanto-inverse --side call --spot 30000 --strike 25000 --rate 0 --tau 90d --quanto-fix 25000 --price 4270")
    assert code == 0 and float(out) == pytest.approx(1.0, abs=0.05)
    assert "2 volatilities" in err


def test_verify_small_run(capsys, tmp_path):
    report = tmp_path / "v.csv"
    code, _, _ = run(capsys, f"verify --paths 20000 --grid 4 --out {report}")
    rows = list(csv.DictReader(report.open()))
    assert code == (0 if all(r["passed"] == "1" for r in rows) else 3)
    assert {r["check"] for r in rows} >= {"duality", "parity", "mc-quanto-inverse"}


def test_verify_failure_exit_code(capsys, monkeypatch):
    monkeypatch.setattr(cli, "run_all", lambda *a, **k: [CheckResult("broken", 1, 1, 0, 1.0, 0.5)])
    code, out, err = run(capsys, "verify")
    assert code == 3 and "FAIL broken" in err


def test_hedge_byte_identical_across_workers(capsys, tmp_path):
    outputs = []
    for workers in (1, 3):
        f = tmp_path / f"h{workers}.csv"
        code, _, _ = run(capsys, f"hedge --rho 0.8 --rebalance 1h --paths 4000 --seed 3 --workers {workers} --out {f}")
        assert code == 0
        outputs.append(f.read_bytes())
    assert outputs[0] == outputs[1]
    assert run(capsys, "hedge --rho 1.2 --rebalance 1d --paths 100")[0] == 2


def test_chain_price(capsys, tmp_path):
    src = tmp_path / "chain.csv"
    src.write_text(
        "instrument,class,spot,vol,rate,quanto_fix,observed_price\n"
        "BTC-30SEP22-25000-C,quanto-inverse,30000,2.0,0,25000,\n"
        "BTC-30SEP22-25000-C,quanto-inverse,30000,2.0,0,,\n"
    )
    out = tmp_path / "priced.csv"
    base = f"chain price --in {src} --out {out} --asof 2022-09-20T00:00:00Z"
    code, _, err = run(capsys, base)
    assert code == 2 and "line 3" in err and "missing quanto fix" in err
    code, _, _ = run(capsys, base + " --lenient")
    assert code == 0
    rows = list(csv.DictReader(out.open()))
    assert len(rows) == 1 and abs(float(rows[0]["price"]) - 4123) <= 5 and rows[0]["implied_vol"] == ""
    assert run(capsys, base + " --asof yesterday")[0] == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "invquanto", *QI_ANCHOR.split()], capture_output=True, text=True)
    assert proc.returncode == 0 and abs(float(proc.stdout) - 4123) <= 5
    proc = subprocess.run([sys.executable, "-m", "invquanto", "price"], capture_output=True, text=True)
    assert proc.returncode == 2
