import random

import pytest

from ainfcy import corpus
from ainfcy.category import StructureError, UnitAssignment, find_homological_units
from ainfcy.functor import (
    AInfFunctor,
    PreNat,
    apply_lf,
    apply_rf,
    audit_functor_degrees,
    check_nat_transformation,
    compose_functors,
    functors_equal,
    fun_mu1,
    identity_functor,
    unit_prenat,
    validate_functor,
)

CATS = ["k_field", "dual_numbers", "a2_quiver", "exterior_graded", "nilpotent_mu3"]


def rand_prenat(f0, f1, rng, bound=4, degree=None):
    src, tgt = f0.source, f0.target
    t0 = {}
    for x in src.objects:
        h = tgt.hom(f0.obj_map[x], f1.obj_map[x])
        t0[x] = rng.getrandbits(h.dim) if h.dim else 0
    comps = {}
    for k in range(1, bound):
        tensor = {}
        for objs, idxs in src.words(k):
            h = tgt.hom(f0.obj_map[objs[0]], f1.obj_map[objs[-1]])
            v = rng.getrandbits(h.dim) if h.dim else 0
            if v:
                tensor[(objs, idxs)] = v
        if tensor:
            comps[k] = tensor
    return PreNat(f0, f1, t0, comps, degree, bound)


@pytest.mark.parametrize("name", CATS)
def test_identity_functor_validates(name):
    cat = corpus.build(name).category
    f = identity_functor(cat)
    assert validate_functor(f).passed
    assert audit_functor_degrees(f) == []


def test_inclusion_toy_validates():
    entry = corpus.build("interval_relative_toy")
    incl = entry.extras["inclusion"]
    assert validate_functor(incl).passed


def test_mutated_identity_fails_at_arity_2():
    cat = corpus.build("dual_numbers").category
    f = identity_functor(cat)
    comps = {1: dict(f.comps[1])}
    comps[1][(("*", "*"), (1,))] = 0b11  # F_1(x) = x + 1: not multiplicative
    bad = AInfFunctor(cat, cat, f.obj_map, comps, 1)
    rep = validate_functor(bad)
    assert not rep.passed
    assert any(k == 2 for k, _, _ in rep.failures)


def test_kill_x_endomorphism_is_valid():
    cat = corpus.build("dual_numbers").category
    comps = {1: {(("*", "*"), (0,)): 0b01}}  # 1 -> 1, x -> 0
    f = AInfFunctor(cat, cat, {"*": "*"}, comps, 1)
    assert validate_functor(f).passed


def test_compose_with_identity():
    for name in ("dual_numbers", "a2_quiver"):
        cat = corpus.build(name).category
        i = identity_functor(cat)
        entryf = corpus.build("interval_relative_toy")
        f = i
        assert functors_equal(compose_functors(i, f), f)
        assert functors_equal(compose_functors(f, i), f)


def test_compose_inclusion_then_identity():
    entry = corpus.build("interval_relative_toy")
    incl = entry.extras["inclusion"]
    ia = identity_functor(incl.target)
    ib = identity_functor(incl.source)
    assert functors_equal(compose_functors(ia, incl), incl)
    assert functors_equal(compose_functors(incl, ib), incl)


def test_linear_functors_compose_as_matrix_product():
    cat = corpus.build("dual_numbers").category
    kill = AInfFunctor(cat, cat, {"*": "*"}, {1: {(("*", "*"), (0,)): 0b01}}, 1)
    comp = compose_functors(kill, kill)
    # (kill . kill)_1 = kill_1 * kill_1 as F2 matrices; higher comps vanish
    assert comp.comps == kill.comps
    assert validate_functor(comp).passed


def test_composition_associative():
    entry = corpus.build("interval_relative_toy")
    incl = entry.extras["inclusion"]
    cat = incl.target
    kill = identity_functor(cat)
    lhs = compose_functors(compose_functors(kill, kill), incl)
    rhs = compose_functors(kill, compose_functors(kill, incl))
    assert functors_equal(lhs, rhs)


# -- pre-natural transformations ------------------------------------------------


def test_unit_prenat_is_closed():
    for name in ("k_field", "dual_numbers", "a2_quiver", "exterior_graded"):
        cat = corpus.build(name).category
        units = find_homological_units(cat)
        t = unit_prenat(identity_functor(cat), units)
        assert check_nat_transformation(t)


def test_zero_prenat_is_closed():
    cat = corpus.build("dual_numbers").category
    f = identity_functor(cat)
    t = PreNat(f, f, {}, {}, None, 4)
    assert check_nat_transformation(t)


def test_fun_mu1_squares_to_zero_on_random():
    rng = random.Random(2024)
    for name in ("dual_numbers", "a2_quiver", "nilpotent_mu3"):
        cat = corpus.build(name).category
        f = identity_functor(cat)
        for _ in range(25):
            t = rand_prenat(f, f, rng, bound=4)
            assert fun_mu1(fun_mu1(t)).is_zero()


def test_generic_prenat_usually_not_closed():
    rng = random.Random(3)
    cat = corpus.build("dual_numbers").category
    f = identity_functor(cat)
    hits = sum(not check_nat_transformation(rand_prenat(f, f, rng, 4)) for _ in range(20))
    assert hits > 10


def test_apply_rf_identity_fixes_prenat():
    rng = random.Random(11)
    cat = corpus.build("dual_numbers").category
    f = identity_functor(cat)
    t = rand_prenat(f, f, rng, 4)
    rt = apply_rf(f, t)
    assert rt.t0 == t.t0 and rt.comps == t.comps


def test_apply_lf_identity_fixes_prenat():
    rng = random.Random(12)
    cat = corpus.build("dual_numbers").category
    f = identity_functor(cat)
    t = rand_prenat(f, f, rng, 4)
    lt = apply_lf(f, t)
    assert lt.t0 == t.t0 and lt.comps == t.comps


def test_apply_rf_zero_is_zero():
    entry = corpus.build("interval_relative_toy")
    incl = entry.extras["inclusion"]
    ia = identity_functor(incl.target)
    z = PreNat(ia, ia, {}, {}, None, 4)
    assert apply_rf(incl, z).is_zero()


def test_fun_mu1_on_inclusion_prenats_squares_to_zero():
    rng = random.Random(13)
    entry = corpus.build("interval_relative_toy")
    incl = entry.extras["inclusion"]
    for _ in range(10):
        t = rand_prenat(incl, incl, rng, 4)
        assert fun_mu1(fun_mu1(t)).is_zero()
