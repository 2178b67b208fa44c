import csv
import io
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from arqlist.analysis import CSV_HEADER, arq_metrics, p_list, sweep, sweep_csv
from arqlist.codes import hamming_code, reed_muller_code
from arqlist.weights import WeightDistribution, weight_distribution

H74 = WeightDistribution((1, 0, 0, 7, 7, 0, 0, 1))
CODES = [hamming_code(3), hamming_code(4), hamming_code(5), reed_muller_code(1, 4),
         reed_muller_code(2, 4), reed_muller_code(3, 5), reed_muller_code(6, 8)]


def exact_metrics(counts, p):
    """Closed forms in exact rationals."""
    n = len(counts) - 1
    q = 1 - p
    d = next(i for i in range(1, n + 1) if counts[i])
    accept = sum(a * q ** (n - i) * p ** i for i, a in enumerate(counts))
    P_c = q ** n
    P_ue = accept - P_c
    P_list = counts[d] * p ** d * q ** (n - d)
    return {"P_c": P_c, "P_ue": P_ue, "P_list": P_list, "Pe_arq": P_ue / accept,
            "Pe_arq_list": (P_ue - P_list) / accept, "P_b": P_list / P_ue}


def test_hamming74_frozen_values():
    ex = exact_metrics(H74.counts, Fraction(1, 10))
    a = arq_metrics(H74, 0.1)
    # frozen oracle values
    assert a.P_c == pytest.approx(0.4782969, abs=5e-8)
    assert a.P_ue == pytest.approx(0.0051031, abs=5e-8)
    assert a.P_list == pytest.approx(0.0045927, abs=5e-8)
    assert a.Pe_arq == pytest.approx(0.010557, abs=5e-7)
    assert a.P_b == pytest.approx(0.900, abs=5e-4)
    assert a.list_size == 8
    for key, val in ex.items():
        assert getattr(a, key) == pytest.approx(float(val), rel=1e-13)


def test_p_list_examples():
    assert p_list(H74, 0.1) == pytest.approx(7 * 0.001 * 0.9 ** 4, rel=1e-14)
    for code in CODES:
        assert p_list(weight_distribution(code), 0.0) == 0.0


def test_p_zero_and_errors():
    a = arq_metrics(H74, 0.0)
    assert a.P_ue == 0 and a.Pe_arq == 0 and a.P_b is None
    assert a.csv_row()[6] == ""
    with pytest.raises(ValueError):
        arq_metrics(H74, 0.6)
    with pytest.raises(ValueError):
        p_list(WeightDistribution((1, 0, 0)), 0.1)


def test_pe_arq_small_p_limit():
    vals = [arq_metrics(H74, p).Pe_arq for p in (1e-2, 1e-4, 1e-6, 1e-8)]
    assert all(a > b for a, b in zip(vals, vals[1:]))
    assert vals[-1] < 1e-22


def test_hamming_benefit_and_ordering():
    a4 = arq_metrics(weight_distribution(hamming_code(4)), 0.2)
    assert a4.P_b == pytest.approx(0.4, abs=0.1)
    pe = [arq_metrics(weight_distribution(hamming_code(m)), 0.1).Pe_arq for m in (3, 4, 5)]
    assert pe[0] < pe[1] < pe[2]


@settings(max_examples=60)
@given(st.sampled_from(CODES), st.floats(min_value=1e-4, max_value=0.5))
def test_invariants(code, p):
    dist = weight_distribution(code)
    a = arq_metrics(dist, p)
    accept = a.P_c + a.P_ue
    assert 0 <= a.P_list <= a.P_ue <= accept * (1 + 1e-12)
    assert a.Pe_arq_list <= a.Pe_arq
    if a.P_ue > 0:
        assert a.P_b == pytest.approx((a.Pe_arq - a.Pe_arq_list) / a.Pe_arq, rel=1e-10)


@settings(max_examples=25)
@given(st.fractions(min_value=Fraction(1, 1000), max_value=Fraction(1, 2), max_denominator=1000))
def test_matches_exact_rationals(p):
    dist = weight_distribution(reed_muller_code(2, 5))
    ex = exact_metrics(dist.counts, p)
    a = arq_metrics(dist, float(p))
    for key, val in ex.items():
        assert getattr(a, key) == pytest.approx(float(val), rel=1e-10)


def test_sweep_and_csv():
    assert sweep(H74, []) == []
    rows = sweep(weight_distribution(reed_muller_code(2, 4)), np.linspace(0.01, 0.2, 20))
    text = sweep_csv(rows)
    parsed = list(csv.reader(io.StringIO(text)))
    assert tuple(parsed[0]) == CSV_HEADER
    assert len(parsed) == 21
    assert parsed[1][0] == "0.01" and parsed[-1][0] == "0.2"
    assert parsed[1][-1] == "141"


def test_csv_golden():
    text = sweep_csv(sweep(H74, [0.1]))
    ex = exact_metrics(H74.counts, Fraction(1, 10))
    cols = ["P_c", "P_ue", "P_list", "Pe_arq", "Pe_arq_list", "P_b"]
    golden = "0.1," + ",".join("%.10g" % float(ex[c]) for c in cols) + ",8"
    assert text == "p,P_c,P_ue,P_list,Pe_arq,Pe_arq_list,P_b,list_size\n" + golden + "\n"
    assert golden == ("0.1,0.4782969,0.0051031,0.0045927,0.01055668184,"
                      "0.001055854365,0.8999823637,8")
