import pytest

from seifert_invariants import (InvariantError, SeifertInvariants, SeifertType, CaseId,
                                parse, derive, p_valuation, presentation_pi1)

POINCARE = "e=-1;type=o1;g=0;fibers=(2,1),(3,1),(5,1)"


def test_parse_minimal():
    inv = parse("e=0;type=o1;g=1")
    assert inv.e == 0
    assert inv.eps_type is SeifertType.O1
    assert inv.g == 1
    assert inv.fibers == ((1, 0),)
    assert inv.m == 0


def test_parse_ignores_whitespace_and_case():
    inv = parse(" e = -1 ; TYPE = N2 ; g = 1 ; fibers = (2, 1) , (3, 2) ")
    assert inv.eps_type is SeifertType.N2
    assert inv.fibers == ((1, -1), (2, 1), (3, 2))


def test_negative_multiplicity_is_normalized():
    inv = parse("e=0;type=o1;g=0;fibers=(-2,-1)")
    assert inv.fibers[1] == (2, 1)


@pytest.mark.parametrize("text", [
    "",
    "e=0;type=o1",
    "e=0;type=o3;g=1",
    "e=0;type=o1;g=1;color=red",
    "e=0;type=o1;g=1;fibers=(2,4)",
    "e=0;type=o1;g=1;fibers=(0,1)",
    "e=0;type=o1;g=1;fibers=(3,-1)",
    "e=0;type=o1;g=1;fibers=(2,1)(3,1)",
    "e=x;type=o1;g=1",
    "e=0;type=n3;g=1",
    "e=0;type=o2;g=0",
    "e=0;e=1;type=o1;g=0",
])
def test_parse_rejects(text):
    with pytest.raises(InvariantError):
        parse(text)


@pytest.mark.parametrize("eps_type, g, signs", [
    (SeifertType.O1, 1, (1, 1)),
    (SeifertType.O2, 1, (-1, -1)),
    (SeifertType.N1, 2, (1, 1)),
    (SeifertType.N2, 2, (-1, -1)),
    (SeifertType.N3, 3, (1, -1, -1)),
    (SeifertType.N4, 3, (1, 1, -1)),
])
def test_eps_signs(eps_type, g, signs):
    assert eps_type.eps_signs(g) == signs


def test_star_and_gp():
    orientable = SeifertInvariants.create(0, SeifertType.O1, 2)
    assert (orientable.gp, orientable.star) == (4, 8)
    non_orientable = SeifertInvariants.create(0, SeifertType.N1, 2)
    assert (non_orientable.gp, non_orientable.star) == (2, 4)


def test_text_and_dict_round_trip():
    inv = parse(POINCARE)
    assert parse(inv.to_text()) == inv
    assert SeifertInvariants.from_dict(inv.to_dict()) == inv


def test_p_valuation():
    assert p_valuation(8, 2) == 3
    assert p_valuation(-18, 3) == 2
    assert p_valuation(5, 2) == 0


def test_derive_three_torus():
    d = derive(parse("e=0;type=o1;g=1"), 2)
    assert (d.a, d.c, d.n) == (1, 0, 0)
    assert d.case_id is CaseId.CASE1
    assert d.h3_nonzero


def test_derive_poincare_sphere_case2():
    d = derive(parse(POINCARE), 7)
    assert d.a == 30
    assert d.c == 1
    assert d.case_id is CaseId.CASE2


def test_case3_orders_by_decreasing_valuation():
    d = derive(parse("e=0;type=o1;g=1;fibers=(2,1),(4,3)"), 2)
    assert d.case_id is CaseId.CASE3
    assert d.n == 2
    assert d.fiber_order[:2] == (2, 1)
    assert d.p_divisible_fibers == (2, 1)


def test_case3_ties_keep_original_order():
    d = derive(parse("e=0;type=o1;g=1;fibers=(3,1),(3,2)"), 3)
    assert d.fiber_order == (1, 2, 0)


def test_h3_vanishes_for_odd_primes_outside_o1_n2():
    assert not derive(parse("e=0;type=o2;g=1"), 3).h3_nonzero
    assert derive(parse("e=0;type=n2;g=1"), 3).h3_nonzero
    assert derive(parse("e=0;type=n3;g=2"), 2).h3_nonzero


def test_derive_rejects_composite():
    with pytest.raises(InvariantError):
        derive(parse("e=0;type=o1;g=1"), 4)


def test_presentation_lists_relations():
    text = presentation_pi1(parse("e=1;type=n2;g=1;fibers=(2,1)"))
    assert text.startswith("generators: q_0, q_1, v1, h")
    assert "q_1^2 h^1" in text
    assert "q_0 q_1 v1^2" in text
    assert "v1 h v1^-1 h" in text
    assert "[q_1,h]" in text


def test_p_divisible_b_lead_when_no_a_is_divisible():
    d = derive(parse("e=0;type=o1;g=0;fibers=(2,1),(5,3)"), 3)
    assert (d.n, d.r, d.c) == (0, 2, 11)
    assert d.case_id is CaseId.CASE2
    assert d.fiber_order == (0, 2, 1)
    assert d.p_divisible_b == (0, 2)
    assert derive(parse("e=0;type=o1;g=1;fibers=(3,1),(3,2)"), 3).p_divisible_b == ()
