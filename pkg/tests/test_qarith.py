from __future__ import annotations

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fusionlab.qarith import LaurentPoly, QContext, laurent_eval, log_qnum, qint_exact, qnum

laurent = st.dictionaries(st.integers(-12, 12), st.integers(-50, 50), max_size=6).map(LaurentPoly)
unit_q = st.floats(min_value=0.05, max_value=0.999)


def frac_qint(n: int, q: Fraction) -> Fraction:
    """Independent oracle: (q^-n - q^n) / (q^-1 - q) in exact rationals."""
    return (q**-n - q**n) / (1 / q - q)


def test_qint_exact_small_cases():
    assert qint_exact(1) == LaurentPoly.constant(1)
    assert qint_exact(2) == LaurentPoly.q_power(-1) + LaurentPoly.q_power(1)
    assert qint_exact(3) == LaurentPoly.q_power(-2) + 1 + LaurentPoly.q_power(2)


@pytest.mark.parametrize("n", [0, -3])
def test_qint_exact_rejects_nonpositive(n):
    with pytest.raises(ValueError):
        qint_exact(n)


@pytest.mark.parametrize("n", range(1, 15))
def test_qint_exact_matches_rational_oracle(n):
    for q in (Fraction(1, 2), Fraction(3, 10), Fraction(9, 10)):
        assert qint_exact(n).at_rational(q) == frac_qint(n, q)
    assert qint_exact(n).at_rational(1) == n


def test_qint_by_long_division():
    # [n] (q^-1 - q) = q^-n - q^n
    for n in range(1, 12):
        top = LaurentPoly.q_power(-n) - LaurentPoly.q_power(n)
        assert top.exact_div(LaurentPoly.q_power(-1) - LaurentPoly.q_power(1)) == qint_exact(n)


def test_exact_div_detects_remainder():
    with pytest.raises(ValueError):
        qint_exact(5).exact_div(qint_exact(2))


def test_qnum_examples():
    assert qnum(5, QContext(1.0)) == 5
    assert qnum(2, 0.5) == pytest.approx(2.5, rel=1e-15)
    assert qnum(3, 0.5) == pytest.approx(5.25, rel=1e-15)


@given(st.integers(1, 40), unit_q)
def test_qnum_agrees_with_exact(n, q):
    assert qnum(n, q) == pytest.approx(laurent_eval(qint_exact(n), q), rel=1e-12)


@given(st.floats(0.5, 300), unit_q)
def test_log_qnum(x, q):
    v = qnum(x, q)
    if math.isfinite(v):
        assert log_qnum(x, q) == pytest.approx(math.log(v), rel=1e-12, abs=1e-12)


def test_log_qnum_past_overflow():
    # [x]_q ~ q^(1-x) / (1 - q^2) for large x
    q, x = 0.01, 500.0
    expect = (1 - x) * math.log(q) - math.log1p(-q * q)
    assert log_qnum(x, q) == pytest.approx(expect, rel=1e-12)


def test_laurent_eval_examples():
    assert laurent_eval(LaurentPoly.constant(1), 0.37) == 1
    assert laurent_eval(qint_exact(2), 0.5) == pytest.approx(2.5, rel=1e-15)
    assert laurent_eval(qint_exact(3), 1.0) == 3


@pytest.mark.parametrize("q", [0.0, -0.5])
def test_laurent_eval_domain(q):
    with pytest.raises(ValueError):
        laurent_eval(qint_exact(2), q)


@pytest.mark.parametrize("q", [0.0, 1.5, -1])
def test_qcontext_domain(q):
    with pytest.raises(ValueError):
        QContext(q)


def test_half_integer_powers():
    p = LaurentPoly({1: 1, -1: 1})  # q^(1/2) + q^(-1/2)
    assert laurent_eval(p, 0.25) == pytest.approx(0.5 + 2.0)
    assert p * p == LaurentPoly({2: 1, 0: 2, -2: 1})
    with pytest.raises(ValueError):
        p.at_rational(Fraction(1, 4))


@given(laurent, laurent, laurent)
def test_ring_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == LaurentPoly()


@given(laurent)
def test_no_zero_coefficients(a):
    assert all(c != 0 for c in (a * a - a).terms.values())


@given(laurent, laurent.filter(lambda p: not p.is_zero()))
def test_exact_div_inverts_multiplication(a, b):
    assert (a * b).exact_div(b) == a


@given(st.integers(1, 25), st.integers(1, 25), unit_q)
def test_exact_product_matches_float_product(m, n, q):
    lhs = laurent_eval(qint_exact(m) * qint_exact(n), q)
    assert lhs == pytest.approx(qnum(m, q) * qnum(n, q), rel=1e-10)


@settings(max_examples=200)
@given(st.integers(1, 20), unit_q, unit_q)
def test_ratio_of_consecutive_q_integers_decreases_in_q(m, q1, q2):
    if abs(q1 - q2) < 1e-6:
        return
    q, qq = min(q1, q2), max(q1, q2)
    assert qnum(m + 1, q) / qnum(m, q) > qnum(m + 1, qq) / qnum(m, qq)


@settings(max_examples=200)
@given(st.integers(2, 20), unit_q)
def test_q_integer_over_q_two_exceeds_half(m, q):
    assert qnum(m, q) / qnum(2, q) > m / 2 or m == 2
