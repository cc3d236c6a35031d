import itertools

import pytest

from ainfcy import corpus
from ainfcy.category import (
    AInfCategory,
    HomSpace,
    StructureError,
    UnitAssignment,
    audit_degrees,
    check_strict_unit,
    find_homological_units,
    homological_category,
    relation_defect,
    validate_relations,
)
from ainfcy.gf2 import UNGRADED, homology_dims


def oracle_relation_bruteforce(cat, k, objs, idxs):
    """Direct two-loop evaluation of the structure relation, written
    independently of relation_defect (term-by-term accumulation on lists)."""
    total = [0] * cat.hom(objs[0], objs[-1]).dim
    for s in range(1, k + 1):
        for j in range(k - s + 1):
            inner = cat.mu_entry(s, objs[j : j + s + 1], idxs[j : j + s])
            for bit in range(cat.hom(objs[j], objs[j + s]).dim):
                if (inner >> bit) & 1:
                    outer = cat.mu_entry(
                        k - s + 1,
                        objs[: j + 1] + objs[j + s :],
                        idxs[:j] + (bit,) + idxs[j + s :],
                    )
                    for ob in range(len(total)):
                        total[ob] ^= (outer >> ob) & 1
    return any(total)


def test_k_field_passes():
    assert validate_relations(corpus.build("k_field").category).passed


def test_dual_numbers_passes_exhaustively():
    cat = corpus.build("dual_numbers").category
    rep = validate_relations(cat)
    assert rep.passed
    assert max(rep.checked_arities) == 3
    for k in rep.checked_arities:
        for objs, idxs in cat.words(k):
            assert not oracle_relation_bruteforce(cat, k, objs, idxs)


def test_broken_dual_numbers_fails_at_arity_3():
    cat = corpus.build("broken_dual_numbers").category
    rep = validate_relations(cat)
    assert not rep.passed
    assert any(k == 3 for k, _, _ in rep.failures)
    k, objs, idxs = rep.failures[0]
    assert oracle_relation_bruteforce(cat, k, objs, idxs)


def test_a2_quiver_and_exterior_pass():
    assert validate_relations(corpus.build("a2_quiver").category).passed
    cat = corpus.build("exterior_graded").category
    assert validate_relations(cat).passed
    assert audit_degrees(cat) == []


def test_nilpotent_mu3_passes_and_matches_search():
    entry = corpus.build("nilpotent_mu3")
    assert validate_relations(entry.category).passed
    assert entry.category.mu[3] == corpus.NILPOTENT_MU3_TENSOR
    assert corpus.search_nilpotent_mu3() == corpus.NILPOTENT_MU3_TENSOR


def test_mutate_flip_and_flip_back():
    entry = corpus.build("dual_numbers")
    coord = ("mu", 2, ("*", "*", "*"), (0, 1), 0)
    mut = corpus.mutate(entry, coord)
    assert mut.expected["relations"] is False
    back = corpus.mutate(mut, coord)
    assert back.category.mu == entry.category.mu
    assert back.expected["relations"] is True


def test_mutate_zero_block_can_stay_consistent():
    # turning on x*x = 1 gives F2[x]/(x^2+1), still associative: recorded honestly
    entry = corpus.build("dual_numbers")
    mut = corpus.mutate(entry, ("mu", 2, ("*", "*", "*"), (1, 1), 0))
    assert mut.expected["relations"] is True


def test_mutate_bad_coordinate():
    entry = corpus.build("dual_numbers")
    with pytest.raises(KeyError):
        corpus.mutate(entry, ("mu", 2, ("*", "*", "*"), (0, 5), 0))


# -- opposite ----------------------------------------------------------------


def test_opposite_involution_and_validity():
    for name in ("k_field", "dual_numbers", "a2_quiver", "nilpotent_mu3"):
        cat = corpus.build(name).category
        opp = cat.opposite()
        assert validate_relations(opp).passed
        back = opp.opposite()
        assert back.mu == cat.mu and back.homs == cat.homs


def test_opposite_k_field_is_itself():
    cat = corpus.build("k_field").category
    opp = cat.opposite()
    assert opp.mu == cat.mu


def test_opposite_a2_swaps_homs():
    cat = corpus.build("a2_quiver").category
    opp = cat.opposite()
    assert opp.hom("Y", "X").dim == 1
    assert opp.hom("X", "Y").dim == 0
    assert opp.mu_entry(2, ("Y", "Y", "X"), (0, 0)) == 1  # e_Y then a-reversed


# -- suspension ---------------------------------------------------------------


def test_suspend_zero_identity():
    cat = corpus.build("exterior_graded").category
    s = cat.suspend(0)
    assert s.homs == cat.homs and s.degree == cat.degree


def test_suspend_inverse():
    cat = corpus.build("exterior_graded").category
    s = cat.suspend(1).suspend(-1)
    assert s.homs == cat.homs and s.degree == cat.degree


def test_suspend_shifts_degrees():
    cat = corpus.build("exterior_graded").category
    s = cat.suspend(1)
    assert s.degree == cat.degree - 1
    assert s.hom("*", "*").degrees == (0, -1)
    assert validate_relations(s).passed
    assert audit_degrees(s) == []


def test_suspend_requires_graded():
    with pytest.raises(StructureError):
        corpus.build("dual_numbers").category.suspend(1)


# -- units ---------------------------------------------------------------------


def test_strict_unit_k_field():
    cat = corpus.build("k_field").category
    ok, _ = check_strict_unit(cat, UnitAssignment("strict", {"*": 1}))
    assert ok


def test_strict_unit_dual_numbers():
    cat = corpus.build("dual_numbers").category
    ok, _ = check_strict_unit(cat, UnitAssignment("strict", {"*": 0b01}))
    assert ok


def test_x_is_not_a_unit():
    cat = corpus.build("dual_numbers").category
    ok, problems = check_strict_unit(cat, UnitAssignment("strict", {"*": 0b10}))
    assert not ok
    assert problems


def test_unit_outside_hom_rejected():
    cat = corpus.build("dual_numbers").category
    with pytest.raises(StructureError):
        check_strict_unit(cat, UnitAssignment("strict", {"*": 0b100}))


def test_homological_units_dual_numbers():
    cat = corpus.build("dual_numbers").category
    ua = find_homological_units(cat)
    assert ua is not None
    assert ua.elements["*"] == 0b01  # the class of 1


def test_homological_units_none_for_zero_mu2():
    cat = corpus.build("nilpotent_mu3").category
    assert find_homological_units(cat) is None


def test_homological_units_a2():
    cat = corpus.build("a2_quiver").category
    ua = find_homological_units(cat)
    assert ua is not None
    assert ua.elements == {"X": 1, "Y": 1}


# -- homological category -------------------------------------------------------


def test_homological_category_dual_numbers_matches_original():
    cat = corpus.build("dual_numbers").category
    hc = homological_category(cat)
    assert hc.class_dims[("*", "*")] == 2
    # mu_1 = 0: induced product table equals the original product
    t = hc.products[("*", "*", "*")]
    assert t[(0, 0)] == 0b01 and t[(0, 1)] == 0b10 and t[(1, 1)] == 0


def test_homological_category_three_term():
    cat = corpus.unital_three_term()
    assert validate_relations(cat).passed
    hc = homological_category(cat)
    assert hc.class_dims[("*", "*")] == 1


def test_acyclic_two_term_has_no_homology():
    cat = corpus.acyclic_two_term()
    assert validate_relations(cat).passed
    ok, _ = check_strict_unit(cat, UnitAssignment("strict", {"*": 0b01}))
    assert ok
    assert homology_dims(cat.hom_complex("*", "*"))[UNGRADED] == 0


def test_homological_category_a2_equals_linear_category():
    hc = homological_category(corpus.build("a2_quiver").category)
    assert hc.class_dims[("X", "Y")] == 1
    assert hc.products[("X", "X", "Y")][(0, 0)] == 1


def test_opposite_of_valid_stays_valid_after_mutation_roundtrip():
    cat = corpus.build("exterior_graded").category
    assert validate_relations(cat.opposite()).passed
    assert audit_degrees(cat.opposite()) == []
