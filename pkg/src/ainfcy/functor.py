"""Functors between A-infinity categories and their pre-natural
transformations, with the functor-category differential for plain targets.

Components are sparse like structure tensors: ``comps[k]`` maps a source
word (objs, idxs) to a bitmask over hom(F(objs[0]), F(objs[-1])) in the
target.  Pre-natural transformations carry an explicit arity bound; the
differential drops components at or above it (quotient semantics), which is
legitimate because the arity filtration only grows under the differential.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterator, Mapping

from .category import AInfCategory, StructureError, UnitAssignment
from .gf2 import vec_support


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """All tuples of ``parts`` positive integers summing to ``total``."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    if parts == 1:
        if total >= 1:
            yield (total,)
        return
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


class AInfFunctor:
    def __init__(
        self,
        source: AInfCategory,
        target: AInfCategory,
        obj_map: Mapping[str, str],
        comps: Mapping[int, Mapping[tuple, int]],
        arity_bound: int = 1,
        name: str = "",
    ):
        self.source = source
        self.target = target
        self.obj_map = dict(obj_map)
        self.comps = {k: dict(t) for k, t in comps.items() if t}
        self.arity_bound = max(int(arity_bound), *(self.comps or {1: 1}))
        self.name = name
        for x in source.objects:
            if self.obj_map.get(x) not in target.objects:
                raise StructureError(f"object map misses {x} or lands outside the target")
        for k, tensor in self.comps.items():
            if k < 1:
                raise StructureError("functor components start at arity 1")
            for (objs, idxs), out in tensor.items():
                if len(objs) != k + 1 or len(idxs) != k:
                    raise StructureError(f"component {k} key has wrong shape")
                for t, i in enumerate(idxs):
                    if not 0 <= i < source.hom(objs[t], objs[t + 1]).dim:
                        raise StructureError(f"component {k} input out of range: {objs}{idxs}")
                h = target.hom(self.obj_map[objs[0]], self.obj_map[objs[-1]])
                if out >> h.dim:
                    raise StructureError(f"component {k} output out of range: {objs}{idxs}")

    def comp_entry(self, k: int, objs: tuple, idxs: tuple) -> int:
        return self.comps.get(k, {}).get((objs, idxs), 0)

    def comp_vec(self, objs: tuple, vecs: list[int]) -> int:
        k = len(vecs)
        out = 0
        for idxs in product(*(vec_support(v) for v in vecs)):
            out ^= self.comp_entry(k, objs, tuple(idxs))
        return out

    def image_tuple(self, objs: tuple) -> tuple:
        return tuple(self.obj_map[o] for o in objs)


def identity_functor(cat: AInfCategory) -> AInfFunctor:
    comps = {1: {}}
    for x in cat.objects:
        for y in cat.objects:
            for i in range(cat.hom(x, y).dim):
                comps[1][((x, y), (i,))] = 1 << i
    return AInfFunctor(cat, cat, {x: x for x in cat.objects}, comps, 1, name=f"id_{cat.name}")


@dataclass(frozen=True)
class FunctorReport:
    passed: bool
    failures: tuple[tuple[int, tuple, tuple], ...]

    def __bool__(self):
        return self.passed


def functor_relation_defect(f: AInfFunctor, objs: tuple, idxs: tuple) -> int:
    """Difference of the two sides of the functor relation on one word."""
    k = len(idxs)
    acc = 0
    # target compositions of blockwise images
    for s in range(1, min(k, f.target.arity_bound) + 1):
        for sizes in _compositions(k, s):
            cuts = [0]
            for p in sizes:
                cuts.append(cuts[-1] + p)
            tobjs = tuple(f.obj_map[objs[c]] for c in cuts)
            vecs = []
            for t in range(s):
                seg = f.comp_entry(sizes[t], objs[cuts[t] : cuts[t + 1] + 1], idxs[cuts[t] : cuts[t + 1]])
                vecs.append(seg)
            acc ^= f.target.mu_vec(tobjs, vecs)
    # source compositions inside the word
    for q in range(1, min(k, f.source.arity_bound) + 1):
        for j in range(k - q + 1):
            inner = f.source.mu_entry(q, objs[j : j + q + 1], idxs[j : j + q])
            for bit in vec_support(inner):
                acc ^= f.comp_entry(
                    k - q + 1, objs[: j + 1] + objs[j + q :], idxs[:j] + (bit,) + idxs[j + q :]
                )
    return acc


def validate_functor(f: AInfFunctor, max_failures: int = 16) -> FunctorReport:
    """Exhaustive check up to the arity where every term vanishes: blocks are
    capped by the component bound P, so the composition side dies above
    K_tgt * P and the other side above P + K_src - 1."""
    p = max(self_k for self_k in (list(f.comps) + [f.arity_bound]))
    top = max(f.target.arity_bound * p, p + f.source.arity_bound - 1, 1)
    failures = []
    for k in range(1, top + 1):
        for objs, idxs in f.source.words(k):
            if functor_relation_defect(f, objs, idxs):
                failures.append((k, objs, idxs))
                if len(failures) >= max_failures:
                    return FunctorReport(False, tuple(failures))
    return FunctorReport(not failures, tuple(failures))


def audit_functor_degrees(f: AInfFunctor) -> list[str]:
    if not f.source.graded:
        return []
    bad = []
    for k, tensor in f.comps.items():
        want = -1 + k * (1 - f.source.degree) + f.target.degree
        for (objs, idxs), out in tensor.items():
            din = f.source.word_degree(objs, idxs)
            tx, ty = f.obj_map[objs[0]], f.obj_map[objs[-1]]
            for bit in vec_support(out):
                dd = f.target.basis_degree(tx, ty, bit) - din
                if dd != want:
                    bad.append(f"F_{k}{objs}{idxs} bit {bit}: degree {dd} != {want}")
    return bad


def compose_functors(g: AInfFunctor, f: AInfFunctor) -> AInfFunctor:
    """g after f, by summing g over blockwise f-images."""
    if f.target is not g.source and f.target.objects != g.source.objects:
        raise StructureError("functors are not composable")
    obj_map = {x: g.obj_map[f.obj_map[x]] for x in f.source.objects}
    bound = g.arity_bound * f.arity_bound
    comps: dict = {}
    for k in range(1, bound + 1):
        tensor: dict = {}
        for objs, idxs in f.source.words(k):
            acc = 0
            for s in range(1, k + 1):
                for sizes in _compositions(k, s):
                    cuts = [0]
                    for p in sizes:
                        cuts.append(cuts[-1] + p)
                    vecs = [
                        f.comp_entry(sizes[t], objs[cuts[t] : cuts[t + 1] + 1], idxs[cuts[t] : cuts[t + 1]])
                        for t in range(s)
                    ]
                    mid_objs = tuple(f.obj_map[objs[c]] for c in cuts)
                    acc ^= g.comp_vec(mid_objs, vecs)
            if acc:
                tensor[(objs, idxs)] = acc
        if tensor:
            comps[k] = tensor
    return AInfFunctor(
        f.source, g.target, obj_map, comps, bound, name=f"{g.name}*{f.name}"
    )


def functors_equal(a: AInfFunctor, b: AInfFunctor) -> bool:
    return a.obj_map == b.obj_map and a.comps == b.comps


# -- pre-natural transformations (plain targets) --------------------------------


class PreNat:
    """Pre-natural transformation between functors with a common plain target."""

    def __init__(
        self,
        f0: AInfFunctor,
        f1: AInfFunctor,
        t0: Mapping[str, int],
        comps: Mapping[int, Mapping[tuple, int]],
        degree: int | None = None,
        bound: int = 8,
        name: str = "",
    ):
        if f0.source is not f1.source or f0.target is not f1.target:
            raise StructureError("pre-natural transformation endpoints disagree")
        self.f0 = f0
        self.f1 = f1
        self.degree = degree
        self.bound = int(bound)
        self.name = name
        self.t0 = {x: t0.get(x, 0) for x in f0.source.objects}
        self.comps = {
            k: {key: v for key, v in t.items() if v}
            for k, t in comps.items()
            if t and 1 <= k < self.bound
        }
        self.comps = {k: t for k, t in self.comps.items() if t}
        if f0.source.graded and degree is None:
            raise StructureError("graded pre-natural transformation needs a degree")
        for x, v in self.t0.items():
            h = f0.target.hom(f0.obj_map[x], f1.obj_map[x])
            if v >> h.dim:
                raise StructureError(f"component at {x} is out of range")

    def comp_entry(self, k: int, objs: tuple, idxs: tuple) -> int:
        return self.comps.get(k, {}).get((objs, idxs), 0)

    def is_zero(self) -> bool:
        return not any(self.t0.values()) and not self.comps

    def data_equal(self, other: "PreNat") -> bool:
        return self.t0 == other.t0 and self.comps == other.comps


def _slot_sizes(k: int, s: int, slot: int) -> Iterator[tuple[int, ...]]:
    """Sizes p_1..p_s >= 1 except p_slot >= 0, summing to k."""
    rest = s - 1
    for p_slot in range(0, k + 1):
        for others in _compositions(k - p_slot, rest):
            yield others[:slot] + (p_slot,) + others[slot:]


def fun_mu1(t: PreNat) -> PreNat:
    """Functor-category differential for plain targets.

    One sum feeds blockwise images of the two functors and a single
    transformation slot into the target's compositions; the other inserts
    source compositions under the transformation.
    """
    f0, f1 = t.f0, t.f1
    src, tgt = f0.source, f0.target
    new_t0 = {x: tgt.mu_vec((f0.obj_map[x], f1.obj_map[x]), [t.t0[x]]) for x in src.objects}
    comps: dict = {}
    for k in range(1, t.bound):
        tensor: dict = {}
        for objs, idxs in src.words(k):
            acc = 0
            for s in range(1, min(tgt.arity_bound, k + 1) + 1):
                for slot in range(s):
                    for sizes in _slot_sizes(k, s, slot):
                        cuts = [0]
                        for p in sizes:
                            cuts.append(cuts[-1] + p)
                        vecs = []
                        tobjs = []
                        for blk in range(s):
                            seg_objs = objs[cuts[blk] : cuts[blk + 1] + 1]
                            seg_idxs = idxs[cuts[blk] : cuts[blk + 1]]
                            if blk < slot:
                                vecs.append(f0.comp_entry(sizes[blk], seg_objs, seg_idxs))
                                tobjs.append(f0.obj_map[seg_objs[0]])
                            elif blk == slot:
                                if sizes[blk] == 0:
                                    vecs.append(t.t0[seg_objs[0]])
                                else:
                                    vecs.append(t.comp_entry(sizes[blk], seg_objs, seg_idxs))
                                tobjs.append(f0.obj_map[seg_objs[0]])
                            else:
                                vecs.append(f1.comp_entry(sizes[blk], seg_objs, seg_idxs))
                                tobjs.append(f1.obj_map[seg_objs[0]])
                        tobjs.append(f1.obj_map[objs[-1]])
                        acc ^= tgt.mu_vec(tuple(tobjs), vecs)
            for q in range(1, min(src.arity_bound, k) + 1):
                for j in range(k - q + 1):
                    inner = src.mu_entry(q, objs[j : j + q + 1], idxs[j : j + q])
                    for bit in vec_support(inner):
                        acc ^= t.comp_entry(
                            k - q + 1,
                            objs[: j + 1] + objs[j + q :],
                            idxs[:j] + (bit,) + idxs[j + q :],
                        )
            if acc:
                tensor[(objs, idxs)] = acc
        if tensor:
            comps[k] = tensor
    deg = None if t.degree is None else t.degree - 1
    return PreNat(t.f0, t.f1, new_t0, comps, deg, t.bound, f"d({t.name})")


def check_nat_transformation(t: PreNat) -> bool:
    return fun_mu1(t).is_zero()


def unit_prenat(f: AInfFunctor, units: UnitAssignment) -> PreNat:
    """Identity-shaped transformation of f built from the given units."""
    t0 = {x: units.element(f.obj_map[x]) for x in f.source.objects}
    deg = f.target.degree if f.source.graded else None
    return PreNat(f, f, t0, {}, deg, 8, name=f"1_{f.name}")


def apply_rf(f: AInfFunctor, s: PreNat) -> PreNat:
    """Right composition with f: reindex a transformation along blockwise
    images of f.  Higher components of the induced functor map vanish."""
    h0, h1 = s.f0, s.f1
    if f.target is not h0.source and f.target.objects != h0.source.objects:
        raise StructureError("composition mismatch")
    g0 = compose_functors(h0, f)
    g1 = compose_functors(h1, f)
    t0 = {x: s.t0[f.obj_map[x]] for x in f.source.objects}
    comps: dict = {}
    for k in range(1, s.bound):
        tensor: dict = {}
        for objs, idxs in f.source.words(k):
            acc = 0
            for snum in range(1, k + 1):
                for sizes in _compositions(k, snum):
                    cuts = [0]
                    for p in sizes:
                        cuts.append(cuts[-1] + p)
                    vecs = [
                        f.comp_entry(sizes[t_], objs[cuts[t_] : cuts[t_ + 1] + 1], idxs[cuts[t_] : cuts[t_ + 1]])
                        for t_ in range(snum)
                    ]
                    mid_objs = tuple(f.obj_map[objs[c]] for c in cuts)
                    for bits in product(*(vec_support(v) for v in vecs)):
                        acc ^= s.comp_entry(snum, mid_objs, tuple(bits))
            if acc:
                tensor[(objs, idxs)] = acc
        if tensor:
            comps[k] = tensor
    return PreNat(g0, g1, t0, comps, s.degree, s.bound, f"R({s.name})")


def apply_lf(f: AInfFunctor, t: PreNat) -> PreNat:
    """Left composition with f: feed blockwise images of the two functors
    and one transformation slot into the components of f."""
    g0, g1 = t.f0, t.f1
    if g0.target is not f.source and g0.target.objects != f.source.objects:
        raise StructureError("composition mismatch")
    h0 = compose_functors(f, g0)
    h1 = compose_functors(f, g1)
    t0 = {x: f.comp_vec((g0.obj_map[x], g1.obj_map[x]), [t.t0[x]]) for x in g0.source.objects}
    comps: dict = {}
    src = g0.source
    for k in range(1, t.bound):
        tensor: dict = {}
        for objs, idxs in src.words(k):
            acc = 0
            for s in range(1, k + 2):
                for slot in range(s):
                    for sizes in _slot_sizes(k, s, slot):
                        cuts = [0]
                        for p in sizes:
                            cuts.append(cuts[-1] + p)
                        vecs = []
                        mid_objs = []
                        for blk in range(s):
                            seg_objs = objs[cuts[blk] : cuts[blk + 1] + 1]
                            seg_idxs = idxs[cuts[blk] : cuts[blk + 1]]
                            if blk < slot:
                                vecs.append(g0.comp_entry(sizes[blk], seg_objs, seg_idxs))
                                mid_objs.append(g0.obj_map[seg_objs[0]])
                            elif blk == slot:
                                if sizes[blk] == 0:
                                    vecs.append(t.t0[seg_objs[0]])
                                else:
                                    vecs.append(t.comp_entry(sizes[blk], seg_objs, seg_idxs))
                                mid_objs.append(g0.obj_map[seg_objs[0]])
                            else:
                                vecs.append(g1.comp_entry(sizes[blk], seg_objs, seg_idxs))
                                mid_objs.append(g1.obj_map[seg_objs[0]])
                        mid_objs.append(g1.obj_map[objs[-1]])
                        acc ^= f.comp_vec(tuple(mid_objs), vecs)
            if acc:
                tensor[(objs, idxs)] = acc
        if tensor:
            comps[k] = tensor
    return PreNat(h0, h1, t0, comps, t.degree, t.bound, f"L({t.name})")
