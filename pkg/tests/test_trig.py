import math
import random

import pytest
from hypothesis import given, settings, strategies as st

import decimal_oracle as orc
from flutelab import hp, hyp_eval
from flutelab.errors import DomainError
from flutelab.trig import (EXCESS_LOWER, EXCESS_UPPER, IdealPentagon, LambertQuad,
                           identity_suite, ideal_pentagon_b, lambert_a2, lambert_b1,
                           lambert_phi, perp_excess, right_pentagon_d, small_side_asymptotic)

# frozen reference values: decimal-module evaluation of the closed forms
B_1_2 = "1.0442783018171362784870140964929638351882888761927466472201375483736"
B_2_8 = "0.2730123941928041424218868917672271041050121976343045600796327469712"
D_1_1 = "0.8474505812958513730898826984285923744125199418969140920672620943985"
B1_1_1 = "1.3569444900743064925238379513526517842731873986067048136205259407862"
PHI_1_1 = "0.8407358973504445146809784854363534481647542251852331344638828133557"
TOL = 2.0 ** -200


def test_frozen_values_match_live_oracle():
    assert orc.rel(B_1_2, orc.pentagon_b(1, 2)) < 1e-60
    assert orc.rel(D_1_1, orc.arccosh(orc.sinh(1) ** 2)) < 1e-60
    assert orc.rel(B1_1_1, orc.arcsinh(orc.sinh(1) * orc.cosh(1))) < 1e-60
    assert orc.rel(B_2_8, orc.pentagon_b(2, 8)) < 1e-60
    assert orc.rel(PHI_1_1, orc.arctan(1 / (orc.tanh(1) * orc.sinh(1)))) < 1e-60


def test_pentagon_b_reference():
    assert ideal_pentagon_b(1, 2).relative_error(hp(B_1_2)) < TOL
    assert ideal_pentagon_b(2, 8).relative_error(hp(B_2_8)) < TOL


def test_pentagon_b_symmetric_case():
    a = hp("1.7")
    b = ideal_pentagon_b(a, a)
    ca, sa = hyp_eval("cosh", a), hyp_eval("sinh", a)
    assert hyp_eval("cosh", b).relative_error((ca * ca + 1) / (sa * sa)) < TOL


def test_pentagon_b_tiny_side_against_asymptotic():
    b = ideal_pentagon_b(20, 200)
    assert abs(float(b / small_side_asymptotic(20)) - 1) < 1e-8


@pytest.mark.parametrize("a,c", [(0, 1), (1, 0), (-1, 2)])
def test_pentagon_b_domain(a, c):
    with pytest.raises(DomainError):
        ideal_pentagon_b(a, c)


def test_right_pentagon_d_values():
    assert right_pentagon_d(1, 1).relative_error(hp(D_1_1)) < TOL
    d = right_pentagon_d(ideal_pentagon_b(2, 8), 8)
    assert EXCESS_LOWER <= float(d) - 6 <= 2.0


def test_right_pentagon_d_boundary_and_domain():
    c = hp(1)
    b = hyp_eval("arcsinh", hyp_eval("sinh", c).reciprocal())
    assert float(right_pentagon_d(b, c)) < 1e-30
    with pytest.raises(DomainError):
        right_pentagon_d(hp("0.1"), hp("0.1"))


def test_perp_excess_examples():
    assert -1.040 <= float(perp_excess(2, 8)) <= 2.0
    assert abs(float(perp_excess(10, 100) - perp_excess(10, 200))) < 1e-3
    assert math.isfinite(float(perp_excess(30, 60)))
    with pytest.raises(DomainError):
        perp_excess(hp("0.5"), 3)
    with pytest.raises(DomainError):
        perp_excess(5, 5)


def test_excess_constants():
    assert EXCESS_LOWER == pytest.approx(-1.0397, abs=1e-4)
    assert EXCESS_UPPER > float(perp_excess(1, 2))


def test_small_side_examples():
    assert float(small_side_asymptotic(10)) == pytest.approx(9.0800e-5, rel=1e-4)
    gaps = [abs(float(ideal_pentagon_b(a, 10 * a) / small_side_asymptotic(a)) - 1)
            for a in (5, 10, 15, 20)]
    assert all(y < x for x, y in zip(gaps, gaps[1:]))
    with pytest.raises(DomainError):
        small_side_asymptotic(0)


def test_lambert_reference_values():
    assert lambert_b1(1, 1).relative_error(hp(B1_1_1)) < TOL
    assert lambert_phi(1, 1).relative_error(hp(PHI_1_1)) < TOL


def test_lambert_limits():
    x = hp("2.3")
    assert lambert_b1(x, hp("1e-20")).relative_error(x) < 1e-30
    assert float(lambert_phi(40, 40)) < 1e-15
    for bad in [(0, 1), (1, 0)]:
        with pytest.raises(DomainError):
            lambert_b1(*bad)
        with pytest.raises(DomainError):
            lambert_phi(*bad)


def test_lambert_consistency_and_round_trip():
    a1, b2 = hp("0.8"), hp("1.9")
    phi = lambert_phi(a1, b2)
    b1 = lambert_b1(a1, b2)
    sphi = hyp_eval("cos", phi) * hyp_eval("tan", phi)
    assert hyp_eval("cosh", a1).relative_error(hyp_eval("cosh", b1) * sphi) < TOL
    a2 = lambert_a2(a1, phi)
    assert hyp_eval("cosh", a2).relative_error(hyp_eval("cosh", b2) * sphi) < TOL
    assert b1 > a1


@settings(max_examples=40, deadline=None)
@given(st.floats(0.5, 50), st.floats(0.5, 50))
def test_pentagon_invariants(a, c):
    res = IdealPentagon.from_sides(hp(repr(a)), hp(repr(c))).residuals()
    assert all(v < 2.0 ** -120 for v in res.values())


@settings(max_examples=40, deadline=None)
@given(st.floats(0.01, 10), st.floats(0.01, 10))
def test_lambert_invariants(a1, b2):
    res = LambertQuad.from_a1_b2(hp(repr(a1)), hp(repr(b2))).residuals()
    assert len(res) == 5 and all(v < 2.0 ** -120 for v in res.values())


def test_excess_lower_bound_random():
    rng = random.Random(3)
    for _ in range(40):
        a = rng.uniform(1, 60)
        c = a + rng.uniform(0.01, 200)
        assert float(perp_excess(hp(repr(a)), hp(repr(c)))) >= EXCESS_LOWER - 2.0 ** -64


def test_identity_suite_is_seeded():
    r1, r2 = identity_suite(20, seed=5), identity_suite(20, seed=5)
    assert r1.worst == r2.worst and r1.passed(2.0 ** -120)
    doc = r1.to_json(2.0 ** -120)
    assert doc["passed"] and doc["trials"] == 20
