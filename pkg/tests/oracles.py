"""Reference values computed once with mpmath at 40 digits and frozen here.

Nothing in this file is produced by the package under test.
"""

# standard normal CDF at 1 by quadrature of the density
NORM_CDF_ONE = 0.8413447460685429

# quanto inverse call, S=30000, K=X=25000, r=0; keyed by (days, vol)
QUANTO_INVERSE_CALL = {
    (10, 2.0): 4123.7579442016243,
    (90, 2.0): 4079.6142783053846,
    (180, 2.0): 3489.4385767541451,
    (90, 0.5): 4018.610614300786,
    (90, 1.0): 4276.6722948935592,
}
D2_ANCHOR = 0.3852287604591983
D3_ANCHOR = 0.054186405018251116

# Garman-Kohlhagen call, S=K=25000, r=r_f=0, vol 0.75, 30 days
STANDARD_ATM_CALL = 2140.3735014746294

# coin value of the inverse call, S=30000, K=25000, r=r_f=0, vol 2, 10 days
INVERSE_BASE_CALL = 0.22144966116789463

# payoff comparison panels as printed, (panel, side, product) -> five cells
TABLE1_PRINTED = {
    ("BTC", "call", "standard"): ("0", "0", "5000", "15000", "25000"),
    ("BTC", "call", "inverse"): ("0", "0", "0.17", "0.38", "0.5"),
    ("BTC", "call", "standard-quanto"): ("0", "0", "0.22", "0.67", "1.11"),
    ("BTC", "call", "quanto-inverse"): ("0", "0", "3750", "8438", "11250"),
    ("BTC", "put", "standard"): ("15000", "5000", "0", "0", "0"),
    ("BTC", "put", "inverse"): ("1.5", "0.25", "0", "0", "0"),
    ("BTC", "put", "standard-quanto"): ("0.67", "0.22", "0", "0", "0"),
    ("BTC", "put", "quanto-inverse"): ("33750", "5625", "0", "0", "0"),
    ("ETH", "call", "standard"): ("0", "0", "0", "250", "750"),
    ("ETH", "call", "inverse"): ("0", "0", "0", "0.125", "0.3"),
    ("ETH", "call", "standard-quanto"): ("0", "0", "0", "0.01", "0.03"),
    ("ETH", "call", "quanto-inverse"): ("0", "0", "0", "250", "600"),
    ("ETH", "put", "standard"): ("1250", "750", "250", "0", "0"),
    ("ETH", "put", "inverse"): ("2.5", "0.75", "0.17", "0", "0"),
    ("ETH", "put", "standard-quanto"): ("0.06", "0.03", "0.01", "0", "0"),
    ("ETH", "put", "quanto-inverse"): ("5000", "1500", "333", "0", "0"),
}
TABLE1_CURRENCY = {
    ("BTC", "standard"): "USD", ("BTC", "inverse"): "BTC",
    ("BTC", "standard-quanto"): "BTC", ("BTC", "quanto-inverse"): "USD",
    ("ETH", "standard"): "USD", ("ETH", "inverse"): "ETH",
    ("ETH", "standard-quanto"): "BTC", ("ETH", "quanto-inverse"): "USD",
}


def matches_display(value: float, printed: str) -> bool:
    """True when ``value`` rounds to ``printed`` at the printed precision."""
    decimals = len(printed.split(".")[1]) if "." in printed else 0
    return abs(value - float(printed)) <= 0.5 * 10.0**-decimals + 1e-9
