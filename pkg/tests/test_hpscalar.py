import math
from decimal import Decimal, localcontext
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

import decimal_oracle as orc
from flutelab import HPScalar, hp, hyp_eval
from flutelab.errors import CancellationWarning, DomainError, PrecisionError
from flutelab.hpscalar import KINDS, log_sum_signed

P = 256
ULP = 2.0 ** -P


def test_zero_and_one_invariants():
    z, o = HPScalar.zero(), HPScalar.one()
    assert z.sign == 0 and z.is_zero()
    assert o.sign == 1 and float(o) == 1.0
    with pytest.raises(ValueError):
        HPScalar(0, 0, P)
    with pytest.raises(ValueError):
        HPScalar(2, 0, P)


@pytest.mark.parametrize("bits", [0, 8, 1 << 23, "256"])
def test_bad_precision_rejected(bits):
    with pytest.raises(PrecisionError):
        HPScalar.one(bits)


def test_cosh_zero_is_exactly_one():
    assert hyp_eval("cosh", hp(0)) == HPScalar.one()


def test_arccosh_inverts_cosh():
    x = hp("3.5")
    assert hyp_eval("arccosh", hyp_eval("cosh", x)).relative_error(x) < 2.0 ** -248


def test_cosh_product_against_decimal_taylor():
    got = hyp_eval("cosh", hp(1)) * hyp_eval("cosh", hp(2))
    with localcontext() as ctx:
        ctx.prec = 130
        ref = orc.cosh(1) * orc.cosh(2)
    assert orc.rel(got.to_decimal(), ref) < 4 * ULP


@pytest.mark.parametrize("kind,arg,ref", [
    ("sinh", "0.75", lambda: orc.sinh(Decimal("0.75"))),
    ("tanh", "2", lambda: orc.tanh(2)),
    ("exp", "-3", lambda: orc.exp(-3)),
    ("log", "10", lambda: orc.log(10)),
    ("arcsinh", "5", lambda: orc.arcsinh(5)),
    ("arctan", "0.3", lambda: orc.arctan(Decimal("0.3"))),
])
def test_elementary_functions_against_oracle(kind, arg, ref):
    assert orc.rel(hyp_eval(kind, hp(arg)).to_decimal(), ref()) < 16 * ULP


def test_unknown_kind():
    with pytest.raises(ValueError):
        hyp_eval("sec", hp(1))
    assert "cosh" in KINDS


def test_huge_arguments_stay_finite():
    c = hyp_eval("cosh", hp(5000))
    # log cosh(5000) = 5000 - ln 2 to far below working precision
    assert abs(float(c.logmag) - (5000 - math.log(2))) < 1e-12
    back = hyp_eval("arccosh", c)
    assert back.relative_error(hp(5000)) < 2.0 ** -240
    big = HPScalar.from_log(1, 10 ** 6)
    assert float((big * big).logmag) == 2 * 10 ** 6
    assert float(big) == math.inf


def test_domain_errors():
    with pytest.raises(DomainError):
        hyp_eval("log", hp(-1))
    with pytest.raises(DomainError):
        hyp_eval("arccosh", hp("0.5"))


def test_log_sum_exact_cancellation():
    a = hp("1.25")
    s = log_sum_signed([a, -a])
    assert s.is_zero()
    assert isinstance(s.cancellation, CancellationWarning)


def test_log_sum_dominant_term():
    s = log_sum_signed([HPScalar.from_log(1, 100), HPScalar.one()])
    # log(e^100 + 1) = 100 + log1p(e^-100)
    with localcontext() as ctx:
        ctx.prec = 130
        ref = Decimal(100) + orc.log(1 + orc.exp(-100))
    assert abs(Decimal(str(s.logmag)) - ref) < Decimal(2) ** -240


def test_log_sum_huge_three_terms():
    terms = [HPScalar.from_log(1, 5000), HPScalar.from_log(1, 4999), HPScalar.from_log(-1, 4998)]
    s = log_sum_signed(terms)
    # e^4998 (e^2 + e - 1), so the log is 4998 + log(e^2 + e - 1)
    with localcontext() as ctx:
        ctx.prec = 130
        e = orc.exp(1)
        ref = Decimal(4998) + orc.log(e * e + e - 1)
    assert s.sign == 1
    assert abs(Decimal(str(s.logmag)) - ref) / ref < Decimal(2) ** -250


def test_partial_cancellation_flags_warning():
    a = hp(1)
    b = -(a - HPScalar.from_log(1, -200))
    s = log_sum_signed([a, b])
    assert s.cancellation is not None
    assert abs(float(s.logmag) + 200) < 1e-6


finite = st.fractions(min_value=-10 ** 6, max_value=10 ** 6, max_denominator=10 ** 6)


@settings(max_examples=60, deadline=None)
@given(st.lists(finite, min_size=1, max_size=8), st.randoms(use_true_random=False))
def test_log_sum_is_order_independent(values, rnd):
    terms = [HPScalar.from_value(v) for v in values]
    shuffled = list(terms)
    rnd.shuffle(shuffled)
    a, b = log_sum_signed(terms), log_sum_signed(shuffled)
    assert a.sign == b.sign and (a.sign == 0 or a.logmag == b.logmag)


@settings(max_examples=40, deadline=None)
@given(finite, finite)
def test_arithmetic_matches_fractions(x, y):
    hx, hy = HPScalar.from_value(x), HPScalar.from_value(y)
    exact = x + y
    got = hx + hy
    if exact == 0:
        assert got.is_zero() or abs(float(got)) < 1e-60
    else:
        assert got.relative_error(HPScalar.from_value(exact)) < 2.0 ** -200
    if y != 0:
        assert (hx / hy).relative_error(HPScalar.from_value(x / y)) < 2.0 ** -240 or x == 0


@settings(max_examples=60, deadline=None)
@given(st.integers(-1, 1).filter(bool), st.floats(-1e5, 1e5, allow_nan=False))
def test_decimal_round_trip(sign, logmag):
    x = HPScalar.from_log(sign, logmag)
    y = HPScalar.from_decimal(x.to_decimal())
    assert y.relative_error(x) <= 2 * ULP


def test_decimal_parsing():
    assert HPScalar.from_decimal("1e-400000").logmag < -900000
    assert HPScalar.from_decimal("-0.0").is_zero()
    with pytest.raises(ValueError):
        HPScalar.from_decimal("1/3")
    assert HPScalar.from_value(Fraction(1, 3)).relative_error(hp(1) / hp(3)) < 2 * ULP


def test_ordering_and_hash():
    a, b = hp("2.5"), hp("-7")
    assert b < a and a > 0 and not a < a
    assert hp("2.5") == a and hash(hp("2.5")) == hash(a)
    assert abs(b) == hp(7)
    assert hp(3).sqrt().square().relative_error(hp(3)) < 4 * ULP
    assert hp(3).scale_pow2(2) == hp(12)


def test_precision_change_keeps_value():
    x = hp("1.1", 512)
    assert x.with_precision(128).relative_error(x) < 2.0 ** -127
