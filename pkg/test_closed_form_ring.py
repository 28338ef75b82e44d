from fractions import Fraction

import pytest

from seifert_invariants import CaseId, parse
from cellular_complex import build_cell_complex, cellular_cohomology
from closed_form_ring import (cite, expected_groups, expected_ring, table_dims,
                              check_generator_basis, normalize_constants, ring_differences)
from ring_report import corpus_fixtures

THREE_TORUS = "e=0;type=o1;g=1"
POINCARE = "e=-1;type=o1;g=0;fibers=(2,1),(3,1),(5,1)"


@pytest.mark.parametrize("p", [2, 3, 5])
def test_generator_counts_match_table_dims(p):
    for inv in corpus_fixtures():
        assert expected_groups(inv, p).dims == table_dims(inv, p), inv.to_text()


def test_three_torus_generators():
    groups = expected_groups(parse(THREE_TORUS), 2)
    assert groups.case_id is CaseId.CASE1
    assert groups.labels(1) == ["theta_1", "theta_2", "alpha"]
    assert groups.labels(2) == ["phi_1", "phi_2", "beta"]
    assert groups.labels(3) == ["gamma"]
    assert groups.by_label()["alpha"].formula == {"h": Fraction(1)}


def test_alpha_formula_carries_fiber_terms():
    groups = expected_groups(parse("e=0;type=o1;g=1;fibers=(2,1),(2,5)"), 3)
    alpha = groups.by_label()["alpha"]
    assert alpha.formula == {"h": 1, "q_1": Fraction(-1, 2), "q_2": Fraction(-5, 2)}


def test_unknown_variant_rejected():
    with pytest.raises(ValueError):
        expected_groups(parse(THREE_TORUS), 2, "draft")


def test_poincare_sphere_has_no_middle_generators():
    groups = expected_groups(parse(POINCARE), 7)
    assert groups.dims == (1, 0, 0, 1)
    ring = expected_ring(parse(POINCARE), 7)
    assert ring.constants[("1", "gamma")] == {"gamma": 1}


def test_three_torus_products_mod_2():
    ring = expected_ring(parse(THREE_TORUS), 2)
    c = ring.constants
    assert c[("theta_1", "theta_2")] == {"beta": 1}
    assert c[("theta_2", "theta_1")] == {"beta": 1}
    assert c[("theta_1", "alpha")] == {"phi_1": 1}
    assert c[("alpha", "alpha")] == {}
    assert c[("alpha", "beta")] == {"gamma": 1}
    assert c[("theta_1", "phi_2")] == {"gamma": 1}
    assert c[("theta_2", "phi_1")] == {"gamma": 1}
    assert c[("theta_1", "phi_1")] == {}
    assert ring.rules[("theta_1", "theta_2")] == "p2.case1.theta_theta"


@pytest.mark.parametrize("p", [3, 5])
def test_three_torus_products_odd(p):
    ring = expected_ring(parse(THREE_TORUS), p)
    c = ring.constants
    assert c[("theta_1", "theta_2")] == {"beta": 1}
    assert c[("theta_2", "theta_1")] == {"beta": p - 1}
    assert c[("theta_1", "theta_1")] == {}
    assert c[("alpha", "theta_2")] == {"phi_2": p - 1}
    assert c[("beta", "alpha")] == {"gamma": 1}
    assert c[("theta_2", "phi_1")] == {"gamma": p - 1}
    assert ring.rules[("theta_2", "theta_1")].startswith("graded_commutativity:")


def test_every_low_degree_pair_is_covered():
    for text, p in [(THREE_TORUS, 3), ("e=-1;type=n2;g=2;fibers=(3,1),(3,2)", 3),
                    ("e=0;type=o2;g=2;fibers=(2,1),(4,3)", 2)]:
        ring = expected_ring(parse(text), p)
        gens = ring.groups.generators
        for da in range(4):
            for db in range(4 - da):
                for x in gens[da]:
                    for y in gens[db]:
                        assert (x.label, y.label) in ring.constants


def test_products_vanish_when_h3_does():
    ring = expected_ring(parse("e=0;type=o2;g=1"), 3)
    assert ring.groups.dims == (1, 2, 1, 0)
    assert ring.constants[("theta_1", "beta")] == {}
    assert ring.rules[("theta_1", "beta")] == "h3_vanishes"
    assert ring.constants[("theta_1", "theta_2")] == {"beta": 1}


def test_table_variant_o2_case2_pattern():
    inv = parse("e=-1;type=o2;g=1")
    theorem = expected_ring(inv, 3, "theorem")
    table = expected_ring(inv, 3, "table")
    assert theorem.groups.case_id is CaseId.CASE2
    assert theorem.constants[("theta_1", "theta_2")] == {"beta": 1}
    # the literal index pattern pairs theta_1 with theta_3, absent for g = 1
    assert table.constants[("theta_1", "theta_2")] == {}


def test_table_variant_o1_case3_alpha_phi():
    inv = parse("e=0;type=o1;g=1;fibers=(3,1),(3,2)")
    table = expected_ring(inv, 3, "table")
    assert table.constants[("alpha_1", "phi_2")] == {"gamma": 1}
    assert expected_ring(inv, 3).constants[("alpha_1", "phi_2")] == {}


def test_case3_alpha_beta_uses_inverse_of_b():
    ring = expected_ring(parse("e=0;type=o1;g=1;fibers=(3,1),(3,2)"), 3)
    # fiber order puts (3,1) at position 0 and (3,2) at position 1; 1/2 = 2 mod 3
    assert ring.constants[("alpha_1", "beta_1")] == {"gamma": 2}


def test_p2_case3_alpha_squares():
    ring = expected_ring(parse("e=0;type=o1;g=1;fibers=(2,1),(4,3)"), 2)
    # position 0 is the a = 4 fiber, position 1 the a = 2 fiber
    assert ring.constants[("alpha_1", "alpha_1")] == {"beta_1": 1}
    assert ring.constants[("alpha_1", "beta_1")] == {"gamma": 1}


@pytest.mark.parametrize("text, p", [
    (THREE_TORUS, 2),
    (THREE_TORUS, 3),
    (POINCARE, 7),
    ("e=0;type=o2;g=1", 3),
    ("e=-1;type=n1;g=1", 3),
    ("e=0;type=o1;g=1;fibers=(2,1),(4,3)", 2),
    ("e=-1;type=n2;g=2;fibers=(3,1),(3,2)", 3),
])
def test_theorem_basis_is_valid(text, p):
    inv = parse(text)
    cell = build_cell_complex(inv)
    cohomology = cellular_cohomology(cell, p)
    assert check_generator_basis(cell, expected_groups(inv, p), cohomology, p)


def test_n1_table_variant_starts_at_alpha_1():
    inv = parse("e=0;type=n1;g=1;fibers=(3,1),(3,2)")
    assert expected_groups(inv, 3).labels(1) == ["alpha_0", "alpha_1"]
    table = expected_groups(inv, 3, "table")
    assert table.labels(1) == ["alpha_1"]
    assert table.dims != table_dims(inv, 3)


def test_swapped_table_basis_degenerates_for_higher_genus():
    inv = parse("e=-1;type=n2;g=2;fibers=(3,1),(3,2)")
    groups = expected_groups(inv, 3, "table")
    assert groups.by_label()["theta_2"].formula == {}
    cell = build_cell_complex(inv)
    assert not check_generator_basis(cell, groups, cellular_cohomology(cell, 3), 3)


def test_ring_differences():
    expected = {("a", "b"): {"gamma": 4}, ("b", "a"): {}}
    computed = {("a", "b"): {"gamma": 1}, ("b", "a"): {"gamma": 2}}
    assert normalize_constants(expected, 3) == {("a", "b"): {"gamma": 1}, ("b", "a"): {}}
    assert ring_differences(expected, computed, 3) == [("b", "a")]


@pytest.mark.parametrize("rule, text", [
    ("podd.o1.case3.alpha_beta", "p odd, Type o1, Case 3: alpha_k u beta_k"),
    ("p2.case1.theta_alpha", "p = 2, Case 1: theta_j u alpha"),
    ("p2.case3.alpha_alpha", "p = 2, Case 3: alpha_k u alpha_i"),
    ("unit", "1 is the unit"),
    ("graded_commutativity:podd.o2.case2.theta_theta", "graded commutativity of p odd, Type o2, Case 2: theta_i u theta_j"),
])
def test_cite_reads_rule_ids(rule, text):
    assert cite(rule) == text


def test_every_rule_has_a_readable_citation():
    ring = expected_ring(parse("e=0;type=o1;g=1;fibers=(3,1),(3,2)"), 3)
    for rule in ring.rules.values():
        assert "." not in cite(rule).split(": ")[-1]
