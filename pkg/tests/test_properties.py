"""Randomized property suites with pinned seeds.

Each test delegates to a counting routine in property_suites and checks
that the advertised number of cases actually ran; the tally test keeps
the whole collection above one thousand sampled cases.
"""

import pytest

import property_suites as ps
from galoispoints.galois import check_three_inner

CASES = {
    "field": 450,
    "linalg": 150,
    "factor": 120,
    "orbit_stab": 120,
    "degree_zero": 120,
    "pullback": 200,
    "mobius": 40,
    "lines": 60,
}


@pytest.fixture(scope="module")
def h9_report(h9):
    return check_three_inner(
        h9.curve, h9.group_list(), h9.point_list(), h9.invariant_list(),
        seed=h9.seed)


def test_field_axioms():
    assert ps.field_axioms(seed=0, cases=CASES["field"]) == CASES["field"]


def test_linear_algebra_certificates():
    ran = ps.linear_algebra_certificates(seed=0, cases=CASES["linalg"])
    assert ran == CASES["linalg"]


def test_polynomial_factor_roundtrip():
    ran = ps.polynomial_factor_roundtrip(seed=0, cases=CASES["factor"])
    assert ran == CASES["factor"]


def test_orbit_stabilizer_counting(h9):
    group = h9.group_list()[0]
    ran = ps.orbit_stabilizer_counting(group, seed=0,
                                       cases=CASES["orbit_stab"])
    assert ran == CASES["orbit_stab"]


def test_degree_zero_law(h9):
    ran = ps.degree_zero_law(h9.curve, seed=0, cases=CASES["degree_zero"])
    assert ran == CASES["degree_zero"]


def test_pullback_action_law(h9):
    group = h9.group_list()[1]
    ran = ps.pullback_action_law(group, seed=0, cases=CASES["pullback"])
    assert ran == CASES["pullback"]


def test_mobius_postcondition(h9):
    invariant = h9.invariant_list()[0]
    ran = ps.mobius_postcondition(invariant, seed=0, cases=CASES["mobius"])
    assert ran == CASES["mobius"]


def test_tangent_lines_and_orbit_avoidance(h9, h9_report):
    ran = ps.fact3_assertions(h9_report, h9.group_list(), h9.point_list())
    assert ran == 6


def test_projection_degrees_frozen(h9):
    assert ps.function_degree_values(h9.curve) == 3


def test_common_divisor_permutation_symmetry(h9):
    ran = ps.condition_c_permutations(h9.group_list(), h9.point_list())
    assert ran == 6


def test_line_section_degrees(h9):
    ran = ps.line_divisor_degrees(h9.curve, seed=0, cases=CASES["lines"])
    assert ran == CASES["lines"]


def test_total_case_count():
    assert sum(CASES.values()) + 6 + 3 + 6 >= 1000
