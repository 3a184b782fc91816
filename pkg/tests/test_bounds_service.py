from fractions import Fraction

import pytest

from sqpack.models.packing import Instance
from sqpack.services.bounds_service import (
    CASE_CONSTANTS,
    analysis_case,
    build_groups,
    classify,
    general_bound_rhs,
    kb_stats,
    lb1,
    lb1_of_sizes,
    lb2,
    lower_bounds,
    refined_lb1_rhs,
    size_class,
    small_count,
)
from sqpack.services.exact_service import exact_min_sum
from sqpack.services.instance_service import gen_adversarial

from tests.helpers import random_instance


@pytest.mark.parametrize("size, expected", [
    ("1/3", "small"),
    ("1/4", "small"),
    ("34/100", "medium"),
    ("1/2", "medium"),
    ("51/100", "large"),
    ("1", "large"),
])
def test_size_class_boundaries(size, expected):
    assert size_class(Fraction(size)) == expected


def test_classify(ffds_example):
    small, medium, large = classify(ffds_example)
    assert small == ()
    assert medium == (2, 3, 4, 5, 6, 7, 8)
    assert large == (0, 1)


def test_adversarial_groups(adversarial3):
    gp = build_groups(adversarial3)
    assert gp.q == 2
    assert [len(group) for group in gp.groups] == [10, 2]
    assert gp.r == 0
    assert gp.small_tail == tuple(range(9))
    assert gp.R == 9
    assert small_count(gp) == 9


def test_adversarial_lower_bounds(adversarial3):
    gp = build_groups(adversarial3)
    assert lb1(gp) == 14
    assert lb2(gp, adversarial3) == 15


def test_closed_small_groups_count_toward_r():
    # two groups of seventeen quarter items close before the large item is reached
    inst = Instance.from_sizes(["1/4"] * 34 + ["3/4"])
    gp = build_groups(inst)
    assert gp.r == 2
    assert [len(group) for group in gp.groups] == [17, 17, 1]
    assert gp.small_tail == ()
    assert gp.R == 17 + 2 * 17


def test_last_group_may_stay_open():
    gp = build_groups(Instance.from_sizes(["1/2"] * 3))
    assert gp.groups == ((0, 1, 2),)
    assert gp.r == 0
    assert gp.small_tail == ()


def test_kb_stats(ffds_example, adversarial3):
    assert kb_stats(ffds_example).model_dump() == {"k": 8, "b": 1}
    assert kb_stats(adversarial3).model_dump() == {"k": 0, "b": 3}


def test_case_constants():
    assert CASE_CONSTANTS.model_dump() == {
        "k_limit": 208,
        "b_limit": 102,
        "r_limit": 231,
        "s_limit": 266420,
        "n_limit": 266730,
        "c_limit": 27769,
    }


@pytest.mark.parametrize("r, k, b, s, expected", [
    (0, 208, 0, 0, "large_kb"),
    (0, 0, 102, 0, "large_kb"),
    (0, 207, 101, 266420, "large_s"),
    (0, 0, 3, 9, "bounded_n"),
])
def test_analysis_case(r, k, b, s, expected):
    assert analysis_case(r, k, b, s) == expected


def test_refined_lb1_rhs_can_exceed_lb1():
    inst = Instance.from_sizes(["1/3"] * 5)
    gp = build_groups(inst)
    kb = kb_stats(inst)
    assert lb1(gp) == 5
    assert refined_lb1_rhs(gp.R, gp.r, kb.k, kb.b) == 9


@pytest.mark.parametrize("t", [3, 4, 5])
def test_refined_lb1_holds_on_adversarial_family(t):
    bounds = lower_bounds(gen_adversarial(t))
    assert bounds["refined_lb1_rhs"] <= bounds["lb1"]


def test_general_bound_denominators_differ_only_in_cross_term():
    with_22 = general_bound_rhs(10, 2, 5, 3, 22)
    with_9 = general_bound_rhs(10, 2, 5, 3, 9)
    assert with_9 - with_22 == 13 * 2 * 8 * (Fraction(1, 9) - Fraction(1, 22))


def test_lower_bounds_dict(adversarial3):
    bounds = lower_bounds(adversarial3)
    assert {key: bounds[key] for key in ("n", "q", "lb1", "lb2", "r", "R", "k", "b", "s")} == {
        "n": 12, "q": 2, "lb1": 14, "lb2": 15, "r": 0, "R": 9, "k": 0, "b": 3, "s": 9,
    }
    assert bounds["analysis_case"] == "bounded_n"


def test_lb1_of_sizes_matches_groups(adversarial3):
    assert lb1_of_sizes(adversarial3.sizes) == lb1(build_groups(adversarial3))


@pytest.mark.slow
@pytest.mark.parametrize("seed", range(6))
def test_lb1_below_optimum(seed, oracle_limits):
    inst = random_instance("corner_mix", 6, seed=seed, denominator=20)
    _, opt = exact_min_sum(inst, oracle_limits)
    assert lb1(build_groups(inst)) <= opt
