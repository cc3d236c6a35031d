"""Module-valued functors: the bridge between the functor picture and the
bimodule picture.

A ``ModuleFunctor`` with ``side == "left"`` sends objects of its source to
left modules over the ambient category and components of arity m to module
pre-morphisms F(Z_0) -> F(Z_m); with ``side == "right_opp"`` it lands in the
opposite of right modules, so component values run F(Z_m) -> F(Z_0).  The
correspondences phi_l / phi_r repackage these functors as bimodules and are
bijective on the stored data, which makes them the definition of the
functor-category differential and composition here: both are transported
through phi and computed in the bimodule dg-category.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Callable, Mapping

from .bimodule import (
    AInfBimodule,
    BimodulePreMorphism,
    bimod_mu1,
    bimod_mu2,
    component_chain_map,
    diagonal_bimodule,
    dualize,
    dualize_morphism,
    left_module,
    pullback,
    pullback_morphism,
    premorphism_is_quasi_iso,
    suspend_bimodule,
    suspend_morphism,
    unit_morphism,
)
from .category import AInfCategory, StructureError
from .functor import AInfFunctor, _compositions, identity_functor
from .gf2 import vec_support


class ModuleFunctor:
    def __init__(
        self,
        source: AInfCategory,
        ambient: AInfCategory,
        unit_cat: AInfCategory,
        side: str,
        obj_map: Mapping[str, AInfBimodule],
        comps: Mapping[int, Mapping[tuple, BimodulePreMorphism]],
        bound: int = 8,
        name: str = "",
    ):
        if side not in ("left", "right_opp"):
            raise StructureError(f"unknown side {side!r}")
        self.source = source
        self.ambient = ambient
        self.unit_cat = unit_cat
        self.side = side
        self.obj_map = dict(obj_map)
        self.comps = {
            m: {key: nu for key, nu in t.items() if not nu.is_zero()}
            for m, t in comps.items()
            if t and m >= 1
        }
        self.comps = {m: t for m, t in self.comps.items() if t}
        self.bound = bound
        self.name = name

    def comp(self, m: int, objs: tuple, idxs: tuple) -> BimodulePreMorphism | None:
        return self.comps.get(m, {}).get((objs, idxs))

    def value(self, obj: str) -> AInfBimodule:
        return self.obj_map[obj]


class ModulePreNat:
    """Pre-natural transformation between module-valued functors."""

    def __init__(
        self,
        f0: ModuleFunctor,
        f1: ModuleFunctor,
        t0: Mapping[str, BimodulePreMorphism],
        comps: Mapping[int, Mapping[tuple, BimodulePreMorphism]],
        degree: int | None = None,
        bound: int = 8,
        name: str = "",
    ):
        if f0.side != f1.side:
            raise StructureError("pre-natural transformation across different sides")
        self.f0 = f0
        self.f1 = f1
        self.t0 = dict(t0)
        self.comps = {m: dict(t) for m, t in comps.items() if t}
        self.degree = degree
        self.bound = bound
        self.name = name

    @property
    def side(self) -> str:
        return self.f0.side


# -- phi: functors <-> bimodules -------------------------------------------------


def _unit_obj(fun: ModuleFunctor) -> str:
    return fun.unit_cat.objects[0]


def phi_l(fun: ModuleFunctor) -> AInfBimodule:
    """Bimodule of a left-module-valued functor: value (X, Y) = F(Y)(X)."""
    if fun.side != "left":
        raise StructureError("phi_l needs a left-module-valued functor")
    u = _unit_obj(fun)
    spaces = {}
    ops: dict = {}
    for y, mod in fun.obj_map.items():
        for x in fun.ambient.objects:
            h = mod.value(x, u)
            if h.dim:
                spaces[(x, y)] = h
        for (k, _z), tensor in mod.ops.items():
            t = ops.setdefault((k, 0), {})
            for (aobjs, _bo, aidx, mid, _bi), out in tensor.items():
                key = (aobjs, (y,), aidx, mid, ())
                t[key] = t.get(key, 0) ^ out
    for m, tensor in fun.comps.items():
        for (bobjs, bidx), nu in tensor.items():
            for (k, _z), comps in nu.comps.items():
                t = ops.setdefault((k, m), {})
                for (aobjs, _bo, aidx, mid, _bi), out in comps.items():
                    key = (aobjs, bobjs, aidx, mid, bidx)
                    t[key] = t.get(key, 0) ^ out
    return AInfBimodule(fun.ambient, fun.source, spaces, ops, name=f"phi_l({fun.name})")


def phi_l_inverse(
    bi: AInfBimodule, unit_cat: AInfCategory, bound: int = 8, name: str = ""
) -> ModuleFunctor:
    """The left-module-valued functor whose phi_l image is the bimodule."""
    u = unit_cat.objects[0]
    amb, src = bi.left, bi.right
    obj_map = {}
    for y in src.objects:
        values = {x: bi.value(x, y) for x in amb.objects if bi.value(x, y).dim}
        mops: dict = {}
        for (k, m), tensor in bi.ops.items():
            if m:
                continue
            for (aobjs, bobjs, aidx, mid, _bi), out in tensor.items():
                if bobjs == (y,):
                    mops.setdefault(k, {})[(aobjs, aidx, mid)] = out
        obj_map[y] = left_module(amb, unit_cat, values, mops, name=f"{name}({y})")
    comps: dict = {}
    for (k, m), tensor in bi.ops.items():
        if not m:
            continue
        for (aobjs, bobjs, aidx, mid, bidx), out in tensor.items():
            word = (bobjs, bidx)
            comps.setdefault(m, {}).setdefault(word, {}).setdefault((k, 0), {})[
                (aobjs, (u,), aidx, mid, ())
            ] = out
    built: dict = {}
    for m, words in comps.items():
        built[m] = {}
        for (bobjs, bidx), raw in words.items():
            deg = None
            if bi.graded:
                deg = -1 + m * (1 - src.degree) + src.word_degree(bobjs, bidx)
            built[m][(bobjs, bidx)] = BimodulePreMorphism(
                obj_map[bobjs[0]], obj_map[bobjs[-1]], raw, deg, bound
            )
    return ModuleFunctor(src, amb, unit_cat, "left", obj_map, built, bound, name=name)


def phi_l_morphism(t: ModulePreNat) -> BimodulePreMorphism:
    """Flatten a pre-natural transformation to a bimodule pre-morphism."""
    if t.side != "left":
        raise StructureError("phi_l_morphism needs the left side")
    comps: dict = {}
    for y, nu in t.t0.items():
        for (k, _z), tensor in nu.comps.items():
            tt = comps.setdefault((k, 0), {})
            for (aobjs, _bo, aidx, mid, _bi), out in tensor.items():
                key = (aobjs, (y,), aidx, mid, ())
                tt[key] = tt.get(key, 0) ^ out
    for m, tensor in t.comps.items():
        for (bobjs, bidx), nu in tensor.items():
            for (k, _z), cc in nu.comps.items():
                tt = comps.setdefault((k, m), {})
                for (aobjs, _bo, aidx, mid, _bi), out in cc.items():
                    key = (aobjs, bobjs, aidx, mid, bidx)
                    tt[key] = tt.get(key, 0) ^ out
    return BimodulePreMorphism(
        phi_l(t.f0), phi_l(t.f1), comps, t.degree, t.bound, name=f"phi_l({t.name})"
    )


def phi_l_inverse_morphism(
    nu: BimodulePreMorphism, f0: ModuleFunctor, f1: ModuleFunctor
) -> ModulePreNat:
    u = _unit_obj(f0)
    src = f0.source
    t0_raw: dict = {}
    comps_raw: dict = {}
    for (k, m), tensor in nu.comps.items():
        for (aobjs, bobjs, aidx, mid, bidx), out in tensor.items():
            if m == 0:
                y = bobjs[0]
                t0_raw.setdefault(y, {}).setdefault((k, 0), {})[(aobjs, (u,), aidx, mid, ())] = out
            else:
                word = (bobjs, bidx)
                comps_raw.setdefault(m, {}).setdefault(word, {}).setdefault((k, 0), {})[
                    (aobjs, (u,), aidx, mid, ())
                ] = out
    t0 = {}
    for y in src.objects:
        t0[y] = BimodulePreMorphism(
            f0.obj_map[y], f1.obj_map[y], t0_raw.get(y, {}), nu.degree, nu.bound
        )
    comps: dict = {}
    for m, words in comps_raw.items():
        comps[m] = {}
        for (bobjs, bidx), raw in words.items():
            deg = None
            if src.graded:
                deg = nu.degree + m * (1 - src.degree) + src.word_degree(bobjs, bidx)
            comps[m][(bobjs, bidx)] = BimodulePreMorphism(
                f0.obj_map[bobjs[0]], f1.obj_map[bobjs[-1]], raw, deg, nu.bound
            )
    return ModulePreNat(f0, f1, t0, comps, nu.degree, nu.bound)


def phi_r(fun: ModuleFunctor) -> AInfBimodule:
    """Bimodule of a functor into opposite right modules: value (Y, X) = F(Y)(X)."""
    if fun.side != "right_opp":
        raise StructureError("phi_r needs a right_opp functor")
    spaces = {}
    ops: dict = {}
    for y, mod in fun.obj_map.items():
        for x in fun.ambient.objects:
            h = mod.value(_unit_obj(fun), x)
            if h.dim:
                spaces[(y, x)] = h
        for (_z, m), tensor in mod.ops.items():
            t = ops.setdefault((0, m), {})
            for (_ao, bobjs, _ai, mid, bidx), out in tensor.items():
                key = ((y,), bobjs, (), mid, bidx)
                t[key] = t.get(key, 0) ^ out
    for k, tensor in fun.comps.items():
        for (yobjs, yidx), nu in tensor.items():
            # nu: F(yobjs[-1]) -> F(yobjs[0])
            for (_z, m), cc in nu.comps.items():
                t = ops.setdefault((k, m), {})
                for (_ao, bobjs, _ai, mid, bidx), out in cc.items():
                    key = (yobjs, bobjs, yidx, mid, bidx)
                    t[key] = t.get(key, 0) ^ out
    return AInfBimodule(fun.source, fun.ambient, spaces, ops, name=f"phi_r({fun.name})")


def phi_r_inverse(
    bi: AInfBimodule, unit_cat: AInfCategory, bound: int = 8, name: str = ""
) -> ModuleFunctor:
    """The right_opp functor whose phi_r image is the bimodule over (B, A)."""
    from .bimodule import right_module

    u = unit_cat.objects[0]
    src, amb = bi.left, bi.right
    obj_map = {}
    for y in src.objects:
        values = {x: bi.value(y, x) for x in amb.objects if bi.value(y, x).dim}
        mops: dict = {}
        for (k, m), tensor in bi.ops.items():
            if k:
                continue
            for (aobjs, bobjs, _ai, mid, bidx), out in tensor.items():
                if aobjs == (y,):
                    mops.setdefault(m, {})[(mid, bobjs, bidx)] = out
        obj_map[y] = right_module(amb, unit_cat, values, mops, name=f"{name}({y})")
    comps: dict = {}
    for (k, m), tensor in bi.ops.items():
        if not k:
            continue
        for (aobjs, bobjs, aidx, mid, bidx), out in tensor.items():
            word = (aobjs, aidx)
            comps.setdefault(k, {}).setdefault(word, {}).setdefault((0, m), {})[
                ((u,), bobjs, (), mid, bidx)
            ] = out
    built: dict = {}
    for k, words in comps.items():
        built[k] = {}
        for (aobjs, aidx), raw in words.items():
            deg = None
            if bi.graded:
                deg = -1 + k * (1 - src.degree) + src.word_degree(aobjs, aidx)
            built[k][(aobjs, aidx)] = BimodulePreMorphism(
                obj_map[aobjs[-1]], obj_map[aobjs[0]], raw, deg, bound
            )
    return ModuleFunctor(src, amb, unit_cat, "right_opp", obj_map, built, bound, name=name)


def phi_r_morphism(t: ModulePreNat) -> BimodulePreMorphism:
    """phi_r on pre-natural transformations reverses: the image runs from
    phi_r(F1) to phi_r(F0)."""
    if t.side != "right_opp":
        raise StructureError("phi_r_morphism needs the right_opp side")
    comps: dict = {}
    for y, nu in t.t0.items():
        for (_z, m), tensor in nu.comps.items():
            tt = comps.setdefault((0, m), {})
            for (_ao, bobjs, _ai, mid, bidx), out in tensor.items():
                key = ((y,), bobjs, (), mid, bidx)
                tt[key] = tt.get(key, 0) ^ out
    for k, tensor in t.comps.items():
        for (yobjs, yidx), nu in tensor.items():
            for (_z, m), cc in nu.comps.items():
                tt = comps.setdefault((k, m), {})
                for (_ao, bobjs, _ai, mid, bidx), out in cc.items():
                    key = (yobjs, bobjs, yidx, mid, bidx)
                    tt[key] = tt.get(key, 0) ^ out
    return BimodulePreMorphism(
        phi_r(t.f1), phi_r(t.f0), comps, t.degree, t.bound, name=f"phi_r({t.name})"
    )


def phi_r_inverse_morphism(
    nu: BimodulePreMorphism, f0: ModuleFunctor, f1: ModuleFunctor
) -> ModulePreNat:
    """Inverse of phi_r_morphism: nu must run phi_r(f1) -> phi_r(f0)."""
    u = _unit_obj(f0)
    src = f0.source
    t0_raw: dict = {}
    comps_raw: dict = {}
    for (k, m), tensor in nu.comps.items():
        for (aobjs, bobjs, aidx, mid, bidx), out in tensor.items():
            if k == 0:
                y = aobjs[0]
                t0_raw.setdefault(y, {}).setdefault((0, m), {})[((u,), bobjs, (), mid, bidx)] = out
            else:
                comps_raw.setdefault(k, {}).setdefault((aobjs, aidx), {}).setdefault((0, m), {})[
                    ((u,), bobjs, (), mid, bidx)
                ] = out
    t0 = {}
    for y in src.objects:
        t0[y] = BimodulePreMorphism(
            f1.obj_map[y], f0.obj_map[y], t0_raw.get(y, {}), nu.degree, nu.bound
        )
    comps: dict = {}
    for k, words in comps_raw.items():
        comps[k] = {}
        for (aobjs, aidx), raw in words.items():
            deg = None
            if src.graded:
                deg = nu.degree + k * (1 - src.degree) + src.word_degree(aobjs, aidx)
            comps[k][(aobjs, aidx)] = BimodulePreMorphism(
                f1.obj_map[aobjs[-1]], f0.obj_map[aobjs[0]], raw, deg, nu.bound
            )
    return ModulePreNat(f0, f1, t0, comps, nu.degree, nu.bound)


# -- the functor-category dg structure, by transport ------------------------------


def fun_mu1_mod(t: ModulePreNat) -> ModulePreNat:
    """Differential of the functor category with module-valued target,
    defined by transport through phi (a dg-isomorphism)."""
    if t.side == "left":
        return phi_l_inverse_morphism(bimod_mu1(phi_l_morphism(t)), t.f0, t.f1)
    return phi_r_inverse_morphism(bimod_mu1(phi_r_morphism(t)), t.f0, t.f1)


def fun_mu2_mod(t: ModulePreNat, s: ModulePreNat) -> ModulePreNat:
    """Composition (t then s) for left-module-valued targets, by transport."""
    if t.side != "left" or s.side != "left":
        raise StructureError("fun_mu2_mod handles the left side")
    return phi_l_inverse_morphism(
        bimod_mu2(phi_l_morphism(t), phi_l_morphism(s)), t.f0, s.f1
    )


def check_nat_transformation_mod(t: ModulePreNat) -> bool:
    if t.side == "left":
        return bimod_mu1(phi_l_morphism(t)).is_zero()
    return bimod_mu1(phi_r_morphism(t)).is_zero()


def check_nat_quasi_iso(t: ModulePreNat) -> bool:
    """A natural transformation with homologically unital module targets is a
    quasi-isomorphism iff every object component is one, which reduces to the
    value-complex chain maps of those components."""
    if not check_nat_transformation_mod(t):
        raise StructureError("not a natural transformation")
    for x in sorted(t.f0.source.objects):
        if not premorphism_is_quasi_iso(t.t0[x]):
            return False
    return True


# -- composition functors ------------------------------------------------------------


def precompose(fun: ModuleFunctor, f: AInfFunctor, name: str = "") -> ModuleFunctor:
    """fun after f on the source side (blockwise partition sum)."""
    if f.target.objects != fun.source.objects:
        raise StructureError("precompose mismatch")
    obj_map = {x: fun.obj_map[f.obj_map[x]] for x in f.source.objects}
    comps: dict = {}
    for m in range(1, fun.bound):
        tensor: dict = {}
        for objs, idxs in f.source.words(m):
            acc: dict = {}
            for s in range(1, m + 1):
                for sizes in _compositions(m, s):
                    cuts = [0]
                    for p in sizes:
                        cuts.append(cuts[-1] + p)
                    vecs = [
                        f.comp_entry(sizes[t], objs[cuts[t] : cuts[t + 1] + 1], idxs[cuts[t] : cuts[t + 1]])
                        for t in range(s)
                    ]
                    mid_objs = tuple(f.obj_map[objs[c]] for c in cuts)
                    for bits in product(*(vec_support(v) for v in vecs)):
                        nu = fun.comp(s, mid_objs, tuple(bits))
                        if nu is not None:
                            _xor_into(acc, nu)
            if acc:
                tensor[(objs, idxs)] = _wrap(acc, fun, obj_map, objs, idxs, f.source, m)
        if tensor:
            comps[m] = tensor
    return ModuleFunctor(
        f.source, fun.ambient, fun.unit_cat, fun.side, obj_map, comps, fun.bound,
        name or f"{fun.name}*{f.name}",
    )


def _xor_into(acc: dict, nu: BimodulePreMorphism):
    for km, tensor in nu.comps.items():
        t = acc.setdefault(km, {})
        for key, out in tensor.items():
            t[key] = t.get(key, 0) ^ out
            if not t[key]:
                del t[key]


def _wrap(acc: dict, fun: ModuleFunctor, obj_map, objs, idxs, src: AInfCategory, m: int):
    deg = None
    if src.graded:
        deg = -1 + m * (1 - src.degree) + src.word_degree(objs, idxs)
    if fun.side == "left":
        source_mod, target_mod = obj_map[objs[0]], obj_map[objs[-1]]
    else:
        source_mod, target_mod = obj_map[objs[-1]], obj_map[objs[0]]
    return BimodulePreMorphism(source_mod, target_mod, acc, deg, fun.bound)


def postcompose(
    fun: ModuleFunctor,
    obj_op: Callable[[AInfBimodule], AInfBimodule],
    mor_op: Callable[[BimodulePreMorphism], BimodulePreMorphism],
    side: str | None = None,
    name: str = "",
    ambient: AInfCategory | None = None,
) -> ModuleFunctor:
    """Apply a dg-functor of module categories objectwise and morphismwise.

    Pass ``ambient`` when the dg-functor changes the acting category (as a
    pullback does)."""
    obj_map = {x: obj_op(mod) for x, mod in fun.obj_map.items()}
    comps = {
        m: {word: mor_op(nu) for word, nu in tensor.items()}
        for m, tensor in fun.comps.items()
    }
    return ModuleFunctor(
        fun.source, ambient or fun.ambient, fun.unit_cat, side or fun.side, obj_map, comps,
        fun.bound, name or fun.name,
    )


def prenat_precompose(t: ModulePreNat, f: AInfFunctor) -> ModulePreNat:
    """Right composition functor applied to a pre-natural transformation."""
    g0 = precompose(t.f0, f)
    g1 = precompose(t.f1, f)
    t0 = {x: t.t0[f.obj_map[x]] for x in f.source.objects}
    comps: dict = {}
    for m in range(1, t.bound):
        tensor: dict = {}
        for objs, idxs in f.source.words(m):
            acc: dict = {}
            for s in range(1, m + 1):
                for sizes in _compositions(m, s):
                    cuts = [0]
                    for p in sizes:
                        cuts.append(cuts[-1] + p)
                    vecs = [
                        f.comp_entry(sizes[tt], objs[cuts[tt] : cuts[tt + 1] + 1], idxs[cuts[tt] : cuts[tt + 1]])
                        for tt in range(s)
                    ]
                    mid_objs = tuple(f.obj_map[objs[c]] for c in cuts)
                    for bits in product(*(vec_support(v) for v in vecs)):
                        nu = t.comps.get(s, {}).get((mid_objs, tuple(bits)))
                        if nu is not None:
                            _xor_into(acc, nu)
            if acc:
                if t.side == "left":
                    sm, tm = g0.obj_map[objs[0]], g1.obj_map[objs[-1]]
                else:
                    sm, tm = g1.obj_map[objs[-1]], g0.obj_map[objs[0]]
                deg = None
                if f.source.graded:
                    deg = t.degree + m * (1 - f.source.degree) + f.source.word_degree(objs, idxs)
                tensor[(objs, idxs)] = BimodulePreMorphism(sm, tm, acc, deg, t.bound)
        if tensor:
            comps[m] = tensor
    return ModulePreNat(g0, g1, t0, comps, t.degree, t.bound, name=f"R({t.name})")


def prenat_postcompose(
    t: ModulePreNat,
    obj_op: Callable[[AInfBimodule], AInfBimodule],
    mor_op: Callable[[BimodulePreMorphism], BimodulePreMorphism],
    side: str | None = None,
    ambient: AInfCategory | None = None,
) -> ModulePreNat:
    """Left composition functor for a dg-functor of module categories.

    If the dg-functor is contravariant-flavoured (dualization from the
    right_opp side), the pre-morphism directions flip along with the side and
    the result is an honest left-side transformation from f0' to f1'.
    """
    g0 = postcompose(t.f0, obj_op, mor_op, side, ambient=ambient)
    g1 = postcompose(t.f1, obj_op, mor_op, side, ambient=ambient)
    t0 = {x: mor_op(nu) for x, nu in t.t0.items()}
    comps = {
        m: {word: mor_op(nu) for word, nu in tensor.items()}
        for m, tensor in t.comps.items()
    }
    return ModulePreNat(g0, g1, t0, comps, t.degree, t.bound, name=f"L({t.name})")


# -- Yoneda and abstract Serre functors ---------------------------------------------


def _wrap_raw(raw, src_mod, tgt_mod, deg, bound):
    return BimodulePreMorphism(src_mod, tgt_mod, raw, deg, bound)


def yoneda_left(cat: AInfCategory, unit_cat: AInfCategory, bound: int = 8) -> ModuleFunctor:
    """Objects go to the modules the category carves out of its own homs by
    feeding the module input last; components reslice the same tensors."""
    u = unit_cat.objects[0]
    obj_map = {}
    mod_ops: dict = {x: {} for x in cat.objects}
    comp_raw: dict = {}
    for n, tensor in cat.mu.items():
        for (objs, idxs), out in tensor.items():
            for m in range(n):
                k = n - 1 - m
                if m == 0:
                    x = objs[-1]
                    mod_ops[x].setdefault(k, {})[(objs[: k + 1], idxs[:k], idxs[k])] = out
                else:
                    word = (objs[n - m :], idxs[n - m :])
                    comp_raw.setdefault(m, {}).setdefault(word, {}).setdefault((k, 0), {})[
                        (objs[: k + 1], (u,), idxs[:k], idxs[k], ())
                    ] = out
    for x in cat.objects:
        values = {y: cat.hom(y, x) for y in cat.objects if cat.hom(y, x).dim}
        obj_map[x] = left_module(cat, unit_cat, values, mod_ops[x], name=f"yl_{x}")
    comps: dict = {}
    for m, words in comp_raw.items():
        comps[m] = {}
        for (wobjs, widx), raw in words.items():
            deg = None
            if cat.graded:
                deg = -1 + m * (1 - cat.degree) + cat.word_degree(wobjs, widx)
            comps[m][(wobjs, widx)] = _wrap_raw(
                raw, obj_map[wobjs[0]], obj_map[wobjs[-1]], deg, bound
            )
    return ModuleFunctor(cat, cat, unit_cat, "left", obj_map, comps, bound, name=f"Yl_{cat.name}")


def yoneda_right(cat: AInfCategory, unit_cat: AInfCategory, bound: int = 8) -> ModuleFunctor:
    """Mirror of the left Yoneda functor, into opposite right modules."""
    from .bimodule import right_module

    u = unit_cat.objects[0]
    mod_ops: dict = {x: {} for x in cat.objects}
    comp_raw: dict = {}
    for n, tensor in cat.mu.items():
        for (objs, idxs), out in tensor.items():
            for k in range(n):
                m = n - 1 - k
                if k == 0:
                    x = objs[0]
                    mod_ops[x].setdefault(m, {})[(idxs[0], objs[1:], idxs[1:])] = out
                else:
                    word = (objs[: k + 1], idxs[:k])
                    comp_raw.setdefault(k, {}).setdefault(word, {}).setdefault((0, m), {})[
                        ((u,), objs[k + 1 :], (), idxs[k], idxs[k + 1 :])
                    ] = out
    obj_map = {}
    for x in cat.objects:
        values = {y: cat.hom(x, y) for y in cat.objects if cat.hom(x, y).dim}
        obj_map[x] = right_module(cat, unit_cat, values, mod_ops[x], name=f"yr_{x}")
    comps: dict = {}
    for k, words in comp_raw.items():
        comps[k] = {}
        for (wobjs, widx), raw in words.items():
            deg = None
            if cat.graded:
                deg = -1 + k * (1 - cat.degree) + cat.word_degree(wobjs, widx)
            comps[k][(wobjs, widx)] = _wrap_raw(
                raw, obj_map[wobjs[-1]], obj_map[wobjs[0]], deg, bound
            )
    return ModuleFunctor(cat, cat, unit_cat, "right_opp", obj_map, comps, bound, name=f"Yr_{cat.name}")


def serre_left_via_dual(cat: AInfCategory, unit_cat: AInfCategory, bound: int = 8) -> ModuleFunctor:
    """Dualization applied objectwise and morphismwise to the right Yoneda
    functor; must coincide with the direct construction, tensor by tensor."""
    yr = yoneda_right(cat, unit_cat, bound)
    return postcompose(yr, dualize, dualize_morphism, side="left", name=f"Sl_{cat.name}")


def serre_left_direct(cat: AInfCategory, unit_cat: AInfCategory, bound: int = 8) -> ModuleFunctor:
    """Dual-valued modules built directly from the structure tensors."""
    from .bimodule import dual_space

    u = unit_cat.objects[0]
    mod_ops: dict = {x: {} for x in cat.objects}
    comp_raw: dict = {}
    for n, tensor in cat.mu.items():
        for (objs, idxs), out in tensor.items():
            for m in range(n):
                k = n - 1 - m
                # letters: first m feed the functor word, then the paired
                # slot, then k module-side letters
                if m == 0:
                    x = objs[0]
                    for r in vec_support(out):
                        t = mod_ops[x].setdefault(k, {})
                        key = (objs[1:], idxs[1:], r)
                        t[key] = t.get(key, 0) ^ (1 << idxs[0])
                else:
                    word = (objs[: m + 1], idxs[:m])
                    for r in vec_support(out):
                        t = comp_raw.setdefault(m, {}).setdefault(word, {}).setdefault((k, 0), {})
                        key = (objs[m + 1 :], (u,), idxs[m + 1 :], r, ())
                        t[key] = t.get(key, 0) ^ (1 << idxs[m])
    obj_map = {}
    for x in cat.objects:
        values = {y: dual_space(cat.hom(x, y)) for y in cat.objects if cat.hom(x, y).dim}
        obj_map[x] = left_module(cat, unit_cat, values, mod_ops[x], name=f"sl_{x}")
    comps: dict = {}
    for m, words in comp_raw.items():
        comps[m] = {}
        for (wobjs, widx), raw in words.items():
            deg = None
            if cat.graded:
                deg = -1 + m * (1 - cat.degree) + cat.word_degree(wobjs, widx)
            comps[m][(wobjs, widx)] = _wrap_raw(
                raw, obj_map[wobjs[0]], obj_map[wobjs[-1]], deg, bound
            )
    return ModuleFunctor(cat, cat, unit_cat, "left", obj_map, comps, bound, name=f"Sd_{cat.name}")


def module_functors_equal(f: ModuleFunctor, g: ModuleFunctor) -> bool:
    """Complete comparison: phi is injective on the stored data."""
    if f.side != g.side:
        return False
    if f.side == "left":
        return phi_l(f).data_equal(phi_l(g))
    return phi_r(f).data_equal(phi_r(g))


def zero_module_functor(
    src: AInfCategory, amb: AInfCategory, unit_cat: AInfCategory, side: str = "left"
) -> ModuleFunctor:
    zero = AInfBimodule(
        *( (amb, unit_cat) if side == "left" else (unit_cat, amb) ), {}, {}
    )
    return ModuleFunctor(src, amb, unit_cat, side, {x: zero for x in src.objects}, {}, 8, "zero")


# -- composition functors G ---------------------------------------------------------


def g_left(f0: AInfFunctor, f1: AInfFunctor, h: ModuleFunctor, name: str = "") -> ModuleFunctor:
    """Right-compose with f1, then pull each value back along f0."""
    if h.side != "left":
        raise StructureError("g_left needs a left-module-valued functor")
    iu = identity_functor(h.unit_cat)
    rh = precompose(h, f1)
    return postcompose(
        rh,
        lambda mod: pullback(f0, iu, mod),
        lambda nu: pullback_morphism(f0, iu, nu),
        name=name or f"Gl({h.name})",
        ambient=f0.source,
    )


def g_left_prenat(f0: AInfFunctor, f1: AInfFunctor, t: ModulePreNat) -> ModulePreNat:
    iu = identity_functor(t.f0.unit_cat)
    rt = prenat_precompose(t, f1)
    return prenat_postcompose(
        rt, lambda mod: pullback(f0, iu, mod), lambda nu: pullback_morphism(f0, iu, nu),
        ambient=f0.source,
    )


def g_right(f0: AInfFunctor, f1: AInfFunctor, h: ModuleFunctor, name: str = "") -> ModuleFunctor:
    """Mirror composition functor on the opposite right-module side."""
    if h.side != "right_opp":
        raise StructureError("g_right needs a right_opp functor")
    iu = identity_functor(h.unit_cat)
    rh = precompose(h, f0)
    return postcompose(
        rh,
        lambda mod: pullback(iu, f1, mod),
        lambda nu: pullback_morphism(iu, f1, nu),
        name=name or f"Gr({h.name})",
        ambient=f1.source,
    )


def g_right_prenat(f0: AInfFunctor, f1: AInfFunctor, t: ModulePreNat) -> ModulePreNat:
    iu = identity_functor(t.f0.unit_cat)
    rt = prenat_precompose(t, f0)
    return prenat_postcompose(
        rt, lambda mod: pullback(iu, f1, mod), lambda nu: pullback_morphism(iu, f1, nu),
        ambient=f1.source,
    )


# -- the transformation induced by a functor on Yoneda images ------------------------


def s_i_transformation(
    incl: AInfFunctor,
    yl_src: ModuleFunctor,
    g_yl_tgt: ModuleFunctor,
    bound: int = 8,
) -> ModulePreNat:
    """Reslice the components of a functor into a natural transformation from
    the source's Yoneda functor to the pulled-back Yoneda functor of the
    target."""
    u = _unit_obj(yl_src)
    src = incl.source
    t0_raw: dict = {}
    comp_raw: dict = {}
    for n, tensor in incl.comps.items():
        for (objs, idxs), out in tensor.items():
            for k in range(n):
                m = n - 1 - k
                inner_key = (objs[: m + 1], (u,), idxs[:m], idxs[m], ())
                if k == 0:
                    y = objs[-1]
                    t = t0_raw.setdefault(y, {}).setdefault((m, 0), {})
                    t[inner_key] = t.get(inner_key, 0) ^ out
                else:
                    word = (objs[n - k :], idxs[n - k :])
                    t = comp_raw.setdefault(k, {}).setdefault(word, {}).setdefault((m, 0), {})
                    t[inner_key] = t.get(inner_key, 0) ^ out
    deg0 = 0 if src.graded else None
    t0 = {}
    for y in src.objects:
        t0[y] = BimodulePreMorphism(
            yl_src.obj_map[y], g_yl_tgt.obj_map[y], t0_raw.get(y, {}), deg0, bound
        )
    comps: dict = {}
    for k, words in comp_raw.items():
        comps[k] = {}
        for (wobjs, widx), raw in words.items():
            deg = None
            if src.graded:
                deg = k * (1 - src.degree) + src.word_degree(wobjs, widx)
            comps[k][(wobjs, widx)] = BimodulePreMorphism(
                yl_src.obj_map[wobjs[0]], g_yl_tgt.obj_map[wobjs[-1]], raw, deg, bound
            )
    return ModulePreNat(yl_src, g_yl_tgt, t0, comps, deg0, bound, name=f"S_{incl.name}")


# -- the four compatibility diagrams -------------------------------------------------


def diagram_dualization_phi(fun_r: ModuleFunctor, t: ModulePreNat | None = None) -> bool:
    """Dualizing the phi_r image equals taking phi_l of the dualized functor."""
    lhs = dualize(phi_r(fun_r))
    rhs = phi_l(postcompose(fun_r, dualize, dualize_morphism, side="left"))
    ok = lhs.data_equal(rhs)
    if t is not None:
        lhs_m = dualize_morphism(phi_r_morphism(t))
        rhs_m = phi_l_morphism(prenat_postcompose(t, dualize, dualize_morphism, side="left"))
        ok = ok and lhs_m.comps == rhs_m.comps
    return ok


def diagram_pullback_dualization(
    f0: AInfFunctor, f1: AInfFunctor, bi: AInfBimodule, nu: BimodulePreMorphism | None = None
) -> bool:
    lhs = dualize(pullback(f0, f1, bi))
    rhs = pullback(f1, f0, dualize(bi))
    ok = lhs.data_equal(rhs)
    if nu is not None:
        lhs_m = dualize_morphism(pullback_morphism(f0, f1, nu))
        rhs_m = pullback_morphism(f1, f0, dualize_morphism(nu))
        ok = ok and lhs_m.comps == rhs_m.comps
    return ok


def diagram_g_pullback(
    f0: AInfFunctor,
    f1: AInfFunctor,
    h: ModuleFunctor,
    t: ModulePreNat | None = None,
) -> bool:
    """Composition functors correspond to the pullback under phi, on either side."""
    if h.side == "left":
        lhs = phi_l(g_left(f0, f1, h))
        rhs = pullback(f0, f1, phi_l(h))
        ok = lhs.data_equal(rhs)
        if t is not None:
            lhs_m = phi_l_morphism(g_left_prenat(f0, f1, t))
            rhs_m = pullback_morphism(f0, f1, phi_l_morphism(t))
            ok = ok and lhs_m.comps == rhs_m.comps
        return ok
    lhs = phi_r(g_right(f0, f1, h))
    rhs = pullback(f0, f1, phi_r(h))
    ok = lhs.data_equal(rhs)
    if t is not None:
        lhs_m = phi_r_morphism(g_right_prenat(f0, f1, t))
        rhs_m = pullback_morphism(f0, f1, phi_r_morphism(t))
        ok = ok and lhs_m.comps == rhs_m.comps
    return ok


def diagram_g_dualization(
    f0: AInfFunctor,
    f1: AInfFunctor,
    h: ModuleFunctor,
    t: ModulePreNat | None = None,
) -> bool:
    """Dualize-then-G-left equals G-right-then-dualize (note the swapped
    functor pair on the dualized route)."""
    if h.side != "right_opp":
        raise StructureError("diagram_g_dualization starts on the right_opp side")
    lhs_f = postcompose(g_right(f0, f1, h), dualize, dualize_morphism, side="left")
    rhs_f = g_left(f1, f0, postcompose(h, dualize, dualize_morphism, side="left"))
    ok = module_functors_equal(lhs_f, rhs_f)
    if t is not None:
        lhs_m = phi_l_morphism(
            prenat_postcompose(g_right_prenat(f0, f1, t), dualize, dualize_morphism, side="left")
        )
        rhs_m = phi_l_morphism(
            g_left_prenat(f1, f0, prenat_postcompose(t, dualize, dualize_morphism, side="left"))
        )
        ok = ok and lhs_m.comps == rhs_m.comps
    return ok


DIAGRAMS = {
    "dualization-phi": diagram_dualization_phi,
    "pullback-dualization": diagram_pullback_dualization,
    "g-pullback": diagram_g_pullback,
    "g-dualization": diagram_g_dualization,
}


def verify_diagram(which: str, *args, **kwargs) -> bool:
    try:
        fn = DIAGRAMS[which]
    except KeyError:
        raise StructureError(f"unknown diagram {which!r}") from None
    return fn(*args, **kwargs)
