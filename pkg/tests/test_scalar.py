import random
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, strategies as st
from mpmath import mp

from tamezeta.scalar import ApproxContext, BigComplex, agree_within, as_mpc, binomial


def test_binomial_examples():
    assert binomial(0, 0) == 1
    assert binomial(4, 2) == 6
    assert binomial(3, 5) == 0


def test_binomial_pascal_oracle():
    # build Pascal's triangle independently
    rows = [[1]]
    for n in range(1, 20):
        prev = rows[-1]
        rows.append([1] + [prev[i - 1] + prev[i] for i in range(1, n)] + [1])
    for n in range(20):
        for k in range(n + 1):
            assert binomial(n, k) == rows[n][k]


def test_agree_within_examples():
    assert agree_within(1.0, 1.0, 1e-30)
    assert agree_within(0, 1e-40, 1e-30)
    assert not agree_within(1, 1 + 1e-10, 1e-12)


def test_agree_within_resolves_fine_tolerances():
    with mp.workprec(200):
        a = mpmath.mpf(1) / 3
        b = a + mpmath.mpf(2) ** -150
    assert agree_within(a, b, 1e-40)
    assert not agree_within(a, b, 1e-50)


@given(
    st.integers(-(2**63), 2**63), st.integers(1, 2**63),
    st.integers(-(2**63), 2**63), st.integers(1, 2**63),
)
def test_rational_arithmetic_exact(a, b, c, d):
    lhs = (Fraction(a, b) + Fraction(c, d)) * (b * d)
    assert lhs == a * d + c * b


def test_bigcomplex_precision_rule():
    x = BigComplex(Fraction(1, 3), 2, prec=160)
    y = BigComplex(7, Fraction(-1, 7), prec=96)
    assert (x * y).prec == 96
    assert (x + y).prec == 96
    assert (x / y).prec == 96
    assert (-x).prec == 160
    assert x.conjugate().imag == -x.imag


def test_bigcomplex_two_precisions_agree():
    rng = random.Random(11)
    P = 128
    for _ in range(40):
        mag_a = 10.0 ** rng.uniform(-3, 3)
        mag_b = 10.0 ** rng.uniform(-3, 3)
        a_re, a_im = rng.uniform(-1, 1) * mag_a, rng.uniform(-1, 1) * mag_a
        b_re, b_im = rng.uniform(-1, 1) * mag_b, rng.uniform(-1, 1) * mag_b
        lo = BigComplex(a_re, a_im, prec=P) * BigComplex(b_re, b_im, prec=P)
        hi = BigComplex(a_re, a_im, prec=2 * P) * BigComplex(b_re, b_im, prec=2 * P)
        with mp.workprec(4 * P):
            err = abs(lo.to_mpc() - hi.to_mpc())
            scale = abs(hi.to_mpc())
        assert err <= mpmath.mpf(2) ** (-P + 4) * max(scale, mpmath.mpf(1e-9))


def test_bigcomplex_immutable():
    x = BigComplex(1, 2, prec=64)
    with pytest.raises(AttributeError):
        x.real = 5


def test_approx_context_validation():
    ApproxContext(precision_bits=128, target_eps=1e-25)
    with pytest.raises(ValueError):
        ApproxContext(precision_bits=32, target_eps=1e-25)
    with pytest.raises(ValueError):
        ApproxContext(precision_bits=128, target_eps=-1.0)
    with pytest.raises(ValueError):
        ApproxContext(precision_bits=128, target_eps=1e-25, max_terms=0)


def test_as_mpc_fraction_exact():
    with mp.workprec(100):
        x = as_mpc(Fraction(1, 3), 100)
        assert abs(x - mpmath.mpf(1) / 3) < mpmath.mpf(2) ** -95
