import json
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from flutelab import FluteSpec, HPScalar, build_holonomy, hp, hyp_eval, parse_spec, seam_width
from flutelab import load_spec, rapid_growth_diagnostic
from flutelab.curves import Cuff, geodesic_length, word_trace
from flutelab.errors import PrecisionError, SchemaError, ValidationError
from flutelab.oracles import seam_width_hexagon
from flutelab.surface import HPMatrix
from flutelab.trig import ideal_pentagon_b

DOC = {"label": "tower", "precision_bits": 256, "cuffs": ["4", "16", "256", "65536"],
       "twists": ["0", "0", "0", "0"], "base_point": True}


def test_parse_explicit_list():
    spec = parse_spec(json.dumps(DOC))
    assert spec.depth == 4 and spec.label == "tower" and spec.base_point
    assert spec.l(4) == hp(65536) and spec.t(2).is_zero()


def test_parse_generator_form_matches_exact_integers():
    spec = parse_spec({"cuffs": {"base": "2", "exponent_base": "2", "depth": 6}})
    assert spec.depth == 6
    for n in range(1, 7):
        exact = 2 ** (2 ** n)
        assert spec.l(n).relative_error(HPScalar.from_value(exact)) < 2.0 ** -240
    # the top cuff is 2^64: its log is exactly 64 ln 2
    assert abs(float(spec.l(6).logmag) - 64 * math.log(2)) < 1e-12


def test_parse_non_integer_generator():
    spec = parse_spec({"cuffs": {"base": "1.5", "exponent_base": "3", "depth": 3}})
    ref = Fraction(3, 2) ** 27
    assert spec.l(3).relative_error(HPScalar.from_value(ref)) < 2.0 ** -200


@pytest.mark.parametrize("doc,err", [
    ({"cuffs": ["4", "4"]}, ValidationError),
    ({"cuffs": ["5", "4"]}, ValidationError),
    ({"cuffs": ["-1", "4"]}, ValidationError),
    ({"cuffs": ["1", "2"], "twists": ["0"]}, ValidationError),
    ({"cuffs": ["1", "2"], "twists": ["1.5", "0"], "base_point": True}, ValidationError),
    ({"cuffs": ["1", "2"], "twists": ["-0.1", "0"], "base_point": True}, ValidationError),
    ({"cuffs": [1, 2]}, SchemaError),
    ({"cuffs": ["1", "2"], "colour": "red"}, SchemaError),
    ({"twists": "zero"}, SchemaError),
    ({"cuffs": ["1", "x"]}, SchemaError),
    ({"cuffs": ["1", "2"], "precision_bits": "256"}, SchemaError),
    ({"cuffs": {"base": "2"}}, SchemaError),
    ({"cuffs": ["1", "2"], "twists": "base_point_file:/nonexistent.json"}, SchemaError),
])
def test_parse_rejects(doc, err):
    with pytest.raises(err):
        parse_spec(doc)


def test_parse_invalid_json():
    with pytest.raises(SchemaError):
        parse_spec("{not json")
    with pytest.raises(SchemaError):
        parse_spec("[1, 2]")


def test_twist_file(tmp_path):
    (tmp_path / "tw.json").write_text(json.dumps({"twists": ["0.5", "1"]}))
    (tmp_path / "s.json").write_text(json.dumps({"cuffs": ["1", "2"], "twists": "base_point_file:tw.json"}))
    spec = load_spec(str(tmp_path / "s.json"))
    assert spec.t(1) == hp("0.5") and spec.t(2) == hp(1)


decimals = st.decimals(min_value="0.001", max_value="1e6", places=6, allow_nan=False)


@settings(max_examples=30, deadline=None)
@given(st.lists(decimals, min_size=2, max_size=6, unique=True),
       st.lists(st.decimals(min_value="-1e3", max_value="1e3", places=4), min_size=6, max_size=6))
def test_json_round_trip(cuffs, twists):
    cuffs = sorted(cuffs)
    spec = FluteSpec.from_values([str(c) for c in cuffs], [str(t) for t in twists[:len(cuffs)]],
                                 label="rt")
    again = parse_spec(spec.dumps())
    assert again == spec


def test_rapid_growth_examples():
    rep = rapid_growth_diagnostic(FluteSpec.from_values(["4", "16", "256", "65536"]))
    exact = [Fraction(4, 16), Fraction(20, 256), Fraction(276, 65536)]
    assert rep.verdict == "RAPID"
    for r, e in zip(rep.ratios, exact):
        assert r.relative_error(HPScalar.from_value(e)) < 2.0 ** -240
    assert float(rep.ratios[1]) == 0.078125

    rep = rapid_growth_diagnostic(FluteSpec.from_values(["1", "10", "100", "1000"]))
    assert rep.verdict == "INCONCLUSIVE"
    assert [round(float(r), 3) for r in rep.ratios] == [0.1, 0.11, 0.111]

    rep = rapid_growth_diagnostic(FluteSpec.from_values(["1", "30"]))
    assert len(rep.ratios) == 1 and rep.verdict == "INCONCLUSIVE"
    with pytest.raises(ValidationError):
        rapid_growth_diagnostic(FluteSpec.from_values(["1"]))


def test_presets_are_rapid(rapid10, rapid12):
    assert rapid_growth_diagnostic(rapid10).verdict == "RAPID"
    assert rapid_growth_diagnostic(rapid12).verdict == "RAPID"
    assert 4000 < float(rapid10.l(10)) < 4200


def test_seam_width_examples(rapid10):
    spec = FluteSpec.from_values(["4", "16", "256"])
    assert abs(float(seam_width(spec, 1).b) - 0.273) < 1e-3
    assert seam_width(spec, 1).b == ideal_pentagon_b(2, 8)
    for n in range(1, rapid10.depth):
        if rapid10.l(n) < 10:
            continue
        b = seam_width(rapid10, n).b
        assert b < hyp_eval("exp", -rapid10.l(n).scale_pow2(-1)) * 4
    with pytest.raises(IndexError):
        seam_width(spec, 3)
    with pytest.raises(IndexError):
        seam_width(spec, 0)


@pytest.mark.parametrize("a,c", [("0.5", "0.75"), ("1", "2"), ("2", "8"), ("5", "40"), ("30", "300")])
def test_seam_width_matches_hexagon_oracle(a, c):
    spec = FluteSpec.from_values([HPScalar.from_value(2 * Fraction(x)) for x in (a, c)])
    b = seam_width(spec, 1).b
    ref = seam_width_hexagon(a, c)
    assert b.relative_error(HPScalar.from_value(ref)) < 2.0 ** -200


def _trace_checks(spec):
    h = build_holonomy(spec)
    tol = 2.0 ** -(spec.precision_bits // 2)
    for n in range(1, spec.depth + 1):
        tr = abs(h.cuff_element(n).trace())
        assert tr.relative_error(hyp_eval("cosh", spec.l(n).scale_pow2(-1)).scale_pow2(1)) < tol
    for name in h.cusp_elements():
        # entries can dwarf the trace, so ask for it at a certified accuracy
        tr, _ = word_trace(h, [(name, 1)], spec.precision_bits)
        assert abs(abs(tr) - 2) < tol * 2, name
    for rel, err in h.relation_residuals().items():
        assert err < tol, rel
    for name, err in h.determinant_residuals().items():
        assert err < tol, name


def test_holonomy_invariants_small(small_twisted):
    _trace_checks(small_twisted)


def test_holonomy_invariants_rapid(rapid10):
    _trace_checks(rapid10)


def test_determinant_of_products(small_twisted):
    h = build_holonomy(small_twisted)
    word = [("X3", 1), ("Y2", -1), ("X1", 2), ("Y0a", 1), ("Y4", 1), ("X5", -1), ("Y1", 1), ("X2", 1)]
    m = h.evaluate(word)
    assert m.det().relative_error(HPScalar.one()) < 2.0 ** -96


def test_base_normalisation_does_not_change_lengths(small_twisted):
    h1 = build_holonomy(small_twisted)
    h2 = build_holonomy(small_twisted, base_cuff=2)
    from flutelab.curves import Delta
    for c in (Cuff(3), Delta(1, 2), Delta(2, 4), Delta(1, 5)):
        assert geodesic_length(h1, c).relative_error(geodesic_length(h2, c)) < 2.0 ** -90


def test_holonomy_guards(small_twisted, rapid10):
    with pytest.raises(PrecisionError):
        build_holonomy(rapid10, log_domain=False)
    build_holonomy(small_twisted, log_domain=False)
    with pytest.raises(ValidationError):
        build_holonomy(FluteSpec.from_values(["1"]))
    with pytest.raises(IndexError):
        build_holonomy(small_twisted, base_cuff=small_twisted.depth)


def test_hpmatrix_basics():
    m = HPMatrix.of(((2, 3), (1, 2)), 128)
    assert m.det() == HPScalar.one(128)
    assert (m @ m.inverse()).trace().relative_error(hp(2, 128)) < 2.0 ** -120
    assert m.trace() == hp(4, 128)
    assert float(m.at()) == 1.5


def test_spec_helpers(rapid12):
    assert rapid12.truncated(5).depth == 5
    tw = rapid12.with_twists([hp(1)] * rapid12.depth, "moved")
    assert tw.label == "moved" and tw.same_cuffs(rapid12) and not tw.base_point
    assert not rapid12.same_cuffs(rapid12.truncated(5))
