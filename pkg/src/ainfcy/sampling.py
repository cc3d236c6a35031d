"""Deterministic enumeration and seeded sampling of valid structures.

Diagram checks quantify over functors and pre-morphisms; valid functors are
rare among raw tensors, so they are enumerated exhaustively (small corpus
categories make this cheap) and then sampled by seed.
"""

from __future__ import annotations

import random
from itertools import product

from .bimodule import AInfBimodule, BimodulePreMorphism, MorphismComplex
from .category import AInfCategory
from .functor import AInfFunctor, audit_functor_degrees, validate_functor


def _object_maps(src: AInfCategory, tgt: AInfCategory):
    for images in product(tgt.objects, repeat=len(src.objects)):
        yield dict(zip(src.objects, images))


def _tensor_candidates(src: AInfCategory, tgt: AInfCategory, obj_map, k: int):
    """All sparse arity-k component tensors; graded mode keeps only entries
    matching the functor degree formula."""
    slots = []
    for objs, idxs in src.words(k):
        h = tgt.hom(obj_map[objs[0]], obj_map[objs[-1]])
        if not h.dim:
            slots.append(((objs, idxs), [0]))
            continue
        if src.graded:
            want = src.word_degree(objs, idxs) - 1 + k * (1 - src.degree) + tgt.degree
            allowed_bits = [i for i, d in enumerate(h.degrees or ()) if d == want]
        else:
            allowed_bits = list(range(h.dim))
        masks = [0]
        for combo in range(1, 1 << len(allowed_bits)):
            m = 0
            for pos, bit in enumerate(allowed_bits):
                if (combo >> pos) & 1:
                    m |= 1 << bit
            masks.append(m)
        slots.append(((objs, idxs), masks))
    keys = [s[0] for s in slots]
    for choice in product(*(s[1] for s in slots)):
        tensor = {key: mask for key, mask in zip(keys, choice) if mask}
        yield tensor


def enumerate_valid_functors(
    src: AInfCategory,
    tgt: AInfCategory,
    max_arity: int = 2,
    cap: int = 20000,
) -> list[AInfFunctor]:
    """All functors with components up to ``max_arity`` that pass the relation
    check (and the degree audit in graded mode), in enumeration order."""
    out = []
    seen = 0
    for obj_map in _object_maps(src, tgt):
        for f1 in _tensor_candidates(src, tgt, obj_map, 1):
            arity2 = (
                _tensor_candidates(src, tgt, obj_map, 2) if max_arity >= 2 else [dict()]
            )
            for f2 in arity2:
                seen += 1
                if seen > cap:
                    return out
                comps = {}
                if f1:
                    comps[1] = f1
                if f2:
                    comps[2] = f2
                try:
                    fun = AInfFunctor(src, tgt, obj_map, comps, max_arity)
                except Exception:
                    continue
                if not validate_functor(fun).passed:
                    continue
                if src.graded and audit_functor_degrees(fun):
                    continue
                out.append(fun)
    return out


def functor_samples(cat: AInfCategory, seed: int, count: int, max_arity: int = 2):
    """Seeded choice of ``count`` valid endofunctors (with replacement)."""
    pool = enumerate_valid_functors(cat, cat, max_arity)
    rng = random.Random(seed)
    return [pool[rng.randrange(len(pool))] for _ in range(count)]


def random_premorphism(
    mc: MorphismComplex, rng: random.Random, degree: int | None = None
) -> BimodulePreMorphism:
    v = rng.getrandbits(len(mc)) if len(mc) else 0
    return mc.from_vector(v, degree)
