import itertools
import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from lcsmod.errors import (
    CaseNotApplicable,
    EvenModulus,
    ParseError,
    RecordMismatch,
    RegimeMismatch,
    UnsupportedModulus,
    ZeroCoefficient,
)
from lcsmod.families import (
    PentagramSpec,
    ReducedPentagram,
    ReducedSquare,
    SquareSpec,
    classify,
    classify_pentagram,
    classify_square,
    lemma_solution_pentagram,
    lemma_solution_square,
    parse_spec,
    pentagram_lcs,
    pullback_solution,
    push_forward,
    reduce_spec,
    reduce_square,
    square_lcs,
    witness_for,
    witness_is_valid,
)
from lcsmod.lcs import classically_satisfiable, magic_pentagram, magic_square, verify_classical
from lcsmod.solution_group import presentation_from_lcs, verify_certificate
from lcsmod.zd_linalg import ZdVector, rank_mod_p


def random_spec(rng, family, d):
    n = 9 if family == "square" else 10
    m = 6 if family == "square" else 5
    coeffs = [int(v) for v in rng.integers(1, d, 2 * n)]
    b = [int(v) for v in rng.integers(0, d, m)]
    return (SquareSpec if family == "square" else PentagramSpec)(d, coeffs, b)


# -- specs --------------------------------------------------------------------------------


def test_all_ones_specs_match_the_standard_systems():
    for d in (2, 3, 5):
        sq = square_lcs(SquareSpec(d, [1] * 18, [0, 0, 0, 0, 0, 1]))
        assert sq.M == magic_square(d).M and sq.b == magic_square(d).b
        pent = pentagram_lcs(PentagramSpec(d, [1] * 20, [0, 0, 0, 0, 1]))
        assert pent.M == magic_pentagram(d).M


def test_coefficient_layout():
    coeffs = list(range(1, 19))
    lcs = SquareSpec(19, coeffs, [0] * 6).lcs()
    assert lcs.M.rows[0] == (1, 2, 3, 0, 0, 0, 0, 0, 0)
    assert lcs.M.rows[3] == (10, 0, 0, 13, 0, 0, 16, 0, 0)
    lcs = PentagramSpec(23, list(range(1, 21)), [0] * 5).lcs()
    assert lcs.M.rows[0] == (1, 2, 3, 4, 0, 0, 0, 0, 0, 0)
    assert lcs.M.rows[4] == (0, 0, 0, 14, 0, 0, 17, 0, 19, 20)


def test_zero_coefficient_is_rejected():
    with pytest.raises(ZeroCoefficient):
        SquareSpec(3, [1] * 17 + [3], [0] * 6)
    with pytest.raises(ZeroCoefficient):
        ReducedSquare(5, (1, 1, 0, 1, 1, 1), (0,) * 6)


def test_family_mismatch():
    spec = PentagramSpec(3, [1] * 20, [0] * 5)
    with pytest.raises(RegimeMismatch):
        square_lcs(spec)
    with pytest.raises(RegimeMismatch):
        reduce_square(spec)
    with pytest.raises(RegimeMismatch):
        classify_square(ReducedPentagram(3, (-1,) * 6, (0,) * 5))


def test_spec_round_trip_and_errors():
    spec = SquareSpec(19, list(range(1, 19)), [1, 2, 3, 4, 5, 6])
    assert parse_spec(json.dumps(spec.to_dict())) == spec
    for doc, field in (
        ({"family": "hexagon", "d": 3, "coeffs": [], "b": []}, "family"),
        ({"family": "square", "d": 3, "coeffs": [1] * 17, "b": [0] * 6}, "coeffs"),
        ({"family": "square", "d": 3, "coeffs": [1] * 18, "b": [0] * 6, "x": 1}, "$"),
        ({"family": "square", "d": 3, "coeffs": [1] * 18}, "b"),
    ):
        with pytest.raises(ParseError) as info:
            parse_spec(json.dumps(doc))
        assert info.value.field == field


# -- reduction -------------------------------------------------------------------------------


@pytest.mark.parametrize("family", ["square", "pentagram"])
def test_reduction_round_trip_on_random_specs(family):
    rng = np.random.default_rng(100)
    for _ in range(100):
        d = int(rng.choice([3, 5, 7, 11, 13]))
        spec = random_spec(rng, family, d)
        red = reduce_spec(spec)
        # every solution of the reduced system pulls back, and vice versa
        y = classically_satisfiable(red.lcs())
        x = classically_satisfiable(spec.lcs())
        assert (x is None) == (y is None)
        if y is not None:
            assert verify_classical(spec.lcs(), pullback_solution(y, red.record))
            assert verify_classical(red.lcs(), push_forward(x, red.record))
            assert push_forward(pullback_solution(y, red.record), red.record) == y


def test_reduction_of_all_ones_square_is_uniform():
    red = reduce_spec(SquareSpec(5, [1] * 18, [0, 0, 0, 0, 0, 1]))
    assert red.gammas == (1,) * 6 and red.uniform and red.phase == 1


def test_reduction_refuses_composite_general_coefficients():
    spec = SquareSpec(9, [2] + [1] * 17, [0] * 6)
    with pytest.raises(UnsupportedModulus):
        reduce_spec(spec)
    assert classify(spec).kind == "unsupported"
    assert classify(spec).satisfiable is None


def test_record_mismatch():
    red = reduce_spec(SquareSpec(5, [2] * 18, [0] * 6))
    with pytest.raises(RecordMismatch):
        pullback_solution([0] * 8, red.record)
    with pytest.raises(RecordMismatch):
        pullback_solution(ZdVector((0,) * 9, 7), red.record)
    with pytest.raises(RecordMismatch):
        classify_square(red, d=7)


# -- closed forms ----------------------------------------------------------------------------


def test_closed_form_examples():
    y = lemma_solution_square(ReducedSquare(5, (1, 4, 1, 1, 1, 1), (1, 2, 3, 4, 0, 1)))
    assert verify_classical(ReducedSquare(5, (1, 4, 1, 1, 1, 1), (1, 2, 3, 4, 0, 1)).lcs(), y)
    red = ReducedPentagram(7, (-1, -1, 1, -1, -1, -1), (3, 1, 4, 1, 5))
    assert verify_classical(red.lcs(), lemma_solution_pentagram(red))


def test_closed_form_errors():
    with pytest.raises(EvenModulus):
        lemma_solution_square(ReducedSquare(4, (1, 3, 1, 1, 1, 1), (0,) * 6))
    with pytest.raises(CaseNotApplicable):
        lemma_solution_square(ReducedSquare(5, (2, 1, 1, 1, 1, 1), (0,) * 6))
    with pytest.raises(CaseNotApplicable):
        lemma_solution_square(ReducedSquare(5, (1, 1, 1, 4, 4, 4), (0,) * 6))
    with pytest.raises(CaseNotApplicable):
        lemma_solution_pentagram(ReducedPentagram(5, (-1,) * 6, (0,) * 5))


@given(st.sampled_from([3, 5, 7, 9, 15]), st.data())
def test_square_closed_form_property(d, data):
    gammas = data.draw(st.tuples(*[st.sampled_from([1, d - 1])] * 6))
    b = data.draw(st.tuples(*[st.integers(0, d - 1)] * 6))
    red = ReducedSquare(d, gammas, b)
    if red.uniform:
        with pytest.raises(CaseNotApplicable):
            lemma_solution_square(red)
    else:
        assert verify_classical(red.lcs(), lemma_solution_square(red))


@given(st.sampled_from([3, 5, 7, 9, 15]), st.data())
def test_pentagram_closed_form_property(d, data):
    gammas = data.draw(st.tuples(*[st.sampled_from([1, d - 1])] * 6))
    b = data.draw(st.tuples(*[st.integers(0, d - 1)] * 5))
    red = ReducedPentagram(d, gammas, b)
    if not red.uniform:
        assert verify_classical(red.lcs(), lemma_solution_pentagram(red))


# -- classification -------------------------------------------------------------------------


def test_pentagram_zero_phase_gets_uniform_closed_form():
    red = ReducedPentagram(7, (-1,) * 6, (3, 1, 1, 1, 0))
    assert red.phase == 0
    c = classify_pentagram(red)
    assert c.kind == "classically_satisfiable" and c.method == "uniform closed form"
    assert c.reduced_assignment.tolist() == [1, 1, 1, 0, 0, 0, 0, 0, 0, 0]


def test_square_phase_example():
    red = ReducedSquare(5, (1,) * 6, (0, 0, 0, 0, 0, 1))
    c = classify_square(red)
    assert c.kind == "no_quantum_solution"
    assert c.witness.phase == 1 and c.verdict.j_exponent == 2
    assert witness_is_valid(red, c.witness)
    doc = c.to_dict()
    assert doc["relation"] == "g4 g2 = J^1 g2 g4"
    assert doc["consequence"] == "J^2 = e with 2 != 0 mod 5"


@pytest.mark.parametrize("d", [3, 5, 7])
def test_rank_dichotomy(d):
    for gammas in itertools.product((1, d - 1), repeat=6):
        red = ReducedSquare(d, gammas, (0,) * 6)
        assert rank_mod_p(red.lcs().M) == (5 if red.uniform else 6)
        pent = ReducedPentagram(d, gammas, (0,) * 5)
        assert rank_mod_p(pent.lcs().M) == (4 if pent.uniform else 5)


def test_classification_of_original_specs():
    rng = np.random.default_rng(9)
    kinds = set()
    for _ in range(60):
        family = "square" if rng.random() < 0.5 else "pentagram"
        d = int(rng.choice([3, 5, 7]))
        spec = random_spec(rng, family, d)
        c = classify(spec)
        kinds.add(c.kind)
        truth = classically_satisfiable(spec.lcs())
        assert c.satisfiable == (truth is not None)
        if c.satisfiable:
            assert verify_classical(spec.lcs(), c.assignment)
        else:
            P = presentation_from_lcs(c.reduced.lcs())
            assert verify_certificate(P, c.witness.certificate)
            assert verify_certificate(P, c.verdict.j_certificate)
    assert kinds == {"classically_satisfiable", "no_quantum_solution"}


def test_classify_refuses_even_modulus():
    c = classify(SquareSpec(4, [1] * 18, [0] * 6))
    assert c.kind == "unsupported" and "even" in c.reason
    with pytest.raises(UnsupportedModulus):
        classify_square(ReducedSquare(4, (1,) * 6, (0,) * 6))


def test_composite_pm_one_uses_closed_forms():
    c = classify(SquareSpec(9, [1] * 17 + [8], [1, 2, 3, 4, 5, 6]))
    assert c.kind == "classically_satisfiable" and c.method == "closed form"
    c = classify(SquareSpec(9, [1] * 18, [0, 0, 0, 0, 0, 3]))
    assert c.kind == "no_quantum_solution" and c.verdict.j_exponent == 6


def test_witness_for_requires_uniform_regime():
    with pytest.raises(RegimeMismatch):
        witness_for(ReducedSquare(5, (1, 4, 1, 1, 1, 1), (0,) * 6))
