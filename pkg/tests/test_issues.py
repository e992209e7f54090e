import random
from fractions import Fraction

import pytest

from boolxp.issues import ISSUES, classify_issues, detect, implies_i2, witness_sound
from boolxp.model import BooleanFunction, ExplanationProblem, index_to_point
from boolxp.xplain import Relevancy

from conftest import random_problem, running_problem

IRR, REL, NEC = Relevancy.IRRELEVANT, Relevancy.RELEVANT, Relevancy.NECESSARY


def test_kappa_i1_fires_i1_on_feature_3():
    report = detect(running_problem("I1"))
    assert report.fired() == ["I1"]
    assert 3 in report.candidates["I1"]
    # feature 2 is also irrelevant with a non-zero value, so it is the lowest witness
    assert report.witnesses["I1"] == 2


def test_kappa_i3_fires_i3():
    report = detect(running_problem("I3"))
    assert report.fired() == ["I3"]
    assert report.witnesses["I3"] == 3
    assert report.shapley[2] == 0


def test_kappa_i4_fires_i4_with_pair_3_4():
    report = detect(running_problem("I4"))
    assert report.has("I4")
    assert report.witnesses["I4"] == (3, 4)
    assert report.fired() == ["I1", "I2", "I3", "I4"]


def test_kappa_i5_fires_i5_on_feature_4():
    report = detect(running_problem("I5"))
    assert report.witnesses["I5"] == 4
    assert report.fired() == ["I1", "I2", "I5"]
    assert implies_i2(report)


def test_constant_has_no_issues():
    for m in (1, 2, 3):
        report = detect(ExplanationProblem.at(BooleanFunction.constant(m, 0), (0,) * m))
        assert report.fired() == []


def test_implies_i2_vacuous():
    report = detect(running_problem("I3"))
    assert not report.has("I5")
    assert implies_i2(report)


def test_i5_requires_strict_maximum():
    sv = [Fraction(1, 4), Fraction(-1, 4), Fraction(1, 8)]
    report = classify_issues(sv, [IRR, REL, REL])
    assert not report.has("I5")
    assert report.has("I1")
    report = classify_issues([Fraction(1, 3), Fraction(-1, 4), Fraction(1, 8)], [IRR, REL, NEC])
    assert report.witnesses["I5"] == 1


def test_two_irrelevant_tied_at_top_do_not_fire_i5():
    report = classify_issues([Fraction(1, 2), Fraction(-1, 2), Fraction(0)], [IRR, IRR, REL])
    assert not report.has("I5")
    assert report.witnesses["I2"] == (1, 3)


def test_single_feature_never_fires_i5():
    report = classify_issues([Fraction(0)], [IRR])
    assert report.fired() == []


def test_pair_witness_is_lexicographic():
    sv = [Fraction(1, 8), Fraction(0), Fraction(1, 4), Fraction(0)]
    report = classify_issues(sv, [IRR, REL, IRR, REL])
    assert report.witnesses["I4"] == (1, 2)
    assert report.candidates["I4"] == [(1, 2), (1, 4), (3, 2), (3, 4)]


def test_survey_m4_implications_and_soundness():
    rng = random.Random(5)
    for _ in range(400):
        k = rng.getrandbits(16)
        f = BooleanFunction.from_bits([(k >> i) & 1 for i in range(16)])
        v = rng.randrange(16)
        report = detect(ExplanationProblem.at(f, index_to_point(v, 4)))
        assert implies_i2(report)
        assert witness_sound(report)
        if report.has("I4"):
            assert report.has("I1") and report.has("I3")


def test_exhaustive_m3_implications():
    for k in range(256):
        f = BooleanFunction.from_bits([(k >> i) & 1 for i in range(8)])
        for v in range(8):
            report = detect(ExplanationProblem.at(f, index_to_point(v, 3)))
            assert implies_i2(report)
            assert witness_sound(report)


@pytest.mark.parametrize("seed", range(30))
def test_negated_function_mirrors_report(seed):
    p = random_problem(random.Random(seed), 7, 2)
    neg = ExplanationProblem.at(~p.function, p.instance.point)
    a, b = detect(p), detect(neg)
    assert b.relevancy == a.relevancy
    assert b.shapley == tuple(-s for s in a.shapley)
    assert a.flags == b.flags


def test_flags_cover_all_issues():
    report = detect(running_problem("I4"))
    assert set(report.flags) == set(ISSUES)
