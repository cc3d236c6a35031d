"""Deterministic builders for the exactly-verifiable example instances.

Every entry is rebuilt from scratch on each call (byte-identical across
runs) and revalidated by the engine in the test suite; entries whose name
starts with ``broken_`` must fail the named validator.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Mapping

from .category import AInfCategory, HomSpace, validate_relations
from .gf2 import F2Matrix, ungraded_complex

NAMES = (
    "k_field",
    "dual_numbers",
    "exterior_graded",
    "a2_quiver",
    "nilpotent_mu3",
    "interval_relative_toy",
    "surgery_cone_toy",
    "broken_dual_numbers",
    "degenerate_trace",
)


@dataclass
class CorpusEntry:
    name: str
    kind: str  # "category" | "chain_data" | "relative" | "pairing"
    category: AInfCategory | None = None
    extras: dict[str, Any] = field(default_factory=dict)
    expected: dict[str, Any] = field(default_factory=dict)


def unit_category(graded: bool = False) -> AInfCategory:
    """One object, one-dimensional self-hom, plain multiplication.

    Used both as a corpus entry (ungraded) and as the silent partner that
    realizes one-sided modules as bimodules.
    """
    hom = HomSpace(("1",), (0,) if graded else None)
    mu2 = {(("@", "@", "@"), (0, 0)): 1}
    return AInfCategory(
        ("@",),
        {("@", "@"): hom},
        {2: mu2},
        arity_bound=2,
        graded=graded,
        degree=0 if graded else None,
        name="unit",
    )


def _k_field() -> AInfCategory:
    hom = HomSpace(("1",))
    mu2 = {(("*", "*", "*"), (0, 0)): 1}
    return AInfCategory(("*",), {("*", "*"): hom}, {2: mu2}, 2, name="k_field")


def _dual_numbers() -> AInfCategory:
    # F2[x]/x^2: basis (1, x)
    o = "*"
    hom = HomSpace(("1", "x"))
    t = (o, o, o)
    mu2 = {
        (t, (0, 0)): 0b01,
        (t, (0, 1)): 0b10,
        (t, (1, 0)): 0b10,
    }
    return AInfCategory((o,), {(o, o): hom}, {2: mu2}, 2, name="dual_numbers")


def _broken_dual_numbers() -> AInfCategory:
    cat = _dual_numbers()
    return mutate_category(cat, ("mu", 2, ("*", "*", "*"), (0, 1), 0), name="broken_dual_numbers")


def _exterior_graded() -> AInfCategory:
    # unit u in degree 1 (= the category degree), generator x in degree 0
    o = "*"
    hom = HomSpace(("u", "x"), (1, 0))
    t = (o, o, o)
    mu2 = {
        (t, (0, 0)): 0b01,
        (t, (0, 1)): 0b10,
        (t, (1, 0)): 0b10,
    }
    return AInfCategory(
        (o,), {(o, o): hom}, {2: mu2}, 2, graded=True, degree=1, name="exterior_graded"
    )


def _a2_quiver() -> AInfCategory:
    objects = ("X", "Y")
    homs = {
        ("X", "X"): HomSpace(("e_X",)),
        ("Y", "Y"): HomSpace(("e_Y",)),
        ("X", "Y"): HomSpace(("a",)),
    }
    mu2 = {
        (("X", "X", "X"), (0, 0)): 1,
        (("Y", "Y", "Y"), (0, 0)): 1,
        (("X", "X", "Y"), (0, 0)): 1,
        (("X", "Y", "Y"), (0, 0)): 1,
    }
    return AInfCategory(objects, homs, {2: mu2}, 2, name="a2_quiver")


# frozen output of search_nilpotent_mu3(); the search is re-run in the tests
NILPOTENT_MU3_TENSOR = {(("*", "*", "*", "*"), (0, 0, 0)): 0b10}


def _nilpotent_mu3() -> AInfCategory:
    hom = HomSpace(("a", "b"))
    return AInfCategory(
        ("*",), {("*", "*"): hom}, {3: dict(NILPOTENT_MU3_TENSOR)}, 3, name="nilpotent_mu3"
    )


def search_nilpotent_mu3() -> dict:
    """Exhaustive search for the minimal mu_3-only structure on two letters.

    Candidate tensors are scanned in increasing integer encoding (two output
    bits per input triple, triples in lexicographic order); the first nonzero
    candidate satisfying the relations is returned.  The result is frozen in
    ``NILPOTENT_MU3_TENSOR``.
    """
    o = "*"
    hom = HomSpace(("a", "b"))
    triples = [(i, j, k) for i in range(2) for j in range(2) for k in range(2)]
    for code in range(1, 1 << (2 * len(triples))):
        tensor = {}
        for p, tri in enumerate(triples):
            out = (code >> (2 * p)) & 0b11
            if out:
                tensor[((o, o, o, o), tri)] = out
        cat = AInfCategory((o,), {(o, o): hom}, {3: tensor}, 3)
        if validate_relations(cat).passed:
            return tensor
    raise RuntimeError("search space exhausted")


def acyclic_two_term() -> AInfCategory:
    """One object, hom = span(e, a) with d(a) = e; acyclic and strictly unital."""
    o = "*"
    hom = HomSpace(("e", "a"))
    t2 = (o, o, o)
    mu1 = {((o, o), (1,)): 0b01}
    mu2 = {
        (t2, (0, 0)): 0b01,
        (t2, (0, 1)): 0b10,
        (t2, (1, 0)): 0b10,
    }
    return AInfCategory((o,), {(o, o): hom}, {1: mu1, 2: mu2}, 2, name="acyclic_two_term")


def unital_three_term() -> AInfCategory:
    """One object, hom = span(e, a, b) with d(a) = b; H(self-hom) has dim 1."""
    o = "*"
    hom = HomSpace(("e", "a", "b"))
    t2 = (o, o, o)
    mu1 = {((o, o), (1,)): 0b100}
    mu2 = {}
    for i in range(3):
        mu2[(t2, (0, i))] = 1 << i
        if i:
            mu2[(t2, (i, 0))] = 1 << i
    return AInfCategory((o,), {(o, o): hom}, {1: mu1, 2: mu2}, 2, name="unital_three_term")


def _surgery_cone_data() -> dict:
    """Three two-term complexes and connecting maps with the block-triangular
    total differential; rho31 is constrained so the total squares to zero."""
    d = F2Matrix.from_entries([[0, 0], [1, 0]])  # d(e1) = e2
    c1 = ungraded_complex(("c1_0", "c1_1"), d)
    c2 = ungraded_complex(("c2_0", "c2_1"), d)
    c3 = ungraded_complex(("c3_0", "c3_1"), d)
    rho21 = F2Matrix.identity(2)  # chain map C2 -> C1
    rho32 = F2Matrix.identity(2)  # chain map C3 -> C2
    # d1*rho31 + rho31*d3 = rho21*rho32; rho31 = [[0,1],[0,0]] works
    rho31 = F2Matrix.from_entries([[0, 1], [0, 0]])
    blocks = [c3, c2, c1]
    n = 2
    total = []
    rows = [
        [d, None, None],
        [rho32, d, None],
        [rho31, rho21, d],
    ]
    labels = tuple(l for c in blocks for l in c.labels(0))
    data = []
    for bi in range(3):
        for r in range(n):
            row = 0
            for bj in range(3):
                blk = rows[bi][bj]
                if blk is not None:
                    row |= blk.data[r] << (bj * n)
            data.append(row)
    total_matrix = F2Matrix(3 * n, 3 * n, data)
    return {
        "c1": c1,
        "c2": c2,
        "c3": c3,
        "rho21": rho21,
        "rho32": rho32,
        "rho31": rho31,
        "total": ungraded_complex(labels, total_matrix),
        "block_size": n,
    }


def build(name: str) -> CorpusEntry:
    """Build a corpus entry by name; unknown names raise KeyError."""
    if name == "k_field":
        return CorpusEntry(
            name, "category", _k_field(),
            extras={"trace_words": [((("*",), (), 0), 1)]},
            expected={"relations": True, "wcy": True},
        )
    if name == "dual_numbers":
        return CorpusEntry(
            name, "category", _dual_numbers(),
            # trace: 1 -> 0, x -> 1 (nondegenerate)
            extras={"trace_words": [((("*",), (), 1), 1)]},
            expected={"relations": True, "wcy": True},
        )
    if name == "degenerate_trace":
        return CorpusEntry(
            name, "pairing", _dual_numbers(),
            # trace: 1 -> 1, x -> 0 (pairing matrix singular)
            extras={"trace_words": [((("*",), (), 0), 1)]},
            expected={"relations": True, "wcy": False},
        )
    if name == "exterior_graded":
        return CorpusEntry(
            name, "category", _exterior_graded(),
            extras={"trace_words": [((("*",), (), 1), 1)]},
            expected={"relations": True, "wcy": True},
        )
    if name == "a2_quiver":
        return CorpusEntry(
            name, "category", _a2_quiver(),
            expected={"relations": True},
        )
    if name == "nilpotent_mu3":
        return CorpusEntry(
            name, "category", _nilpotent_mu3(),
            expected={"relations": True, "homological_units": None},
        )
    if name == "broken_dual_numbers":
        return CorpusEntry(
            name, "category", _broken_dual_numbers(),
            expected={"relations": False},
        )
    if name == "surgery_cone_toy":
        return CorpusEntry(
            name, "chain_data", None,
            extras=_surgery_cone_data(),
            expected={"square_zero": True},
        )
    if name == "interval_relative_toy":
        return _interval_relative_toy()
    raise KeyError(f"unknown corpus name {name!r}")


def _interval_relative_toy() -> CorpusEntry:
    """One-object ambient category with a relabeled regular bimodule as the
    relative diagonal, included from the one-object base by the unit map."""
    from .bimodule import AInfBimodule
    from .functor import AInfFunctor

    a = AInfCategory(
        ("W",),
        {("W", "W"): HomSpace(("e",))},
        {2: {(("W", "W", "W"), (0, 0)): 1}},
        2,
        name="interval_ambient",
    )
    b = _k_field()
    incl = AInfFunctor(b, a, {"*": "W"}, {1: {(("*", "*"), (0,)): 1}}, arity_bound=1)
    w = ("W", "W")
    arel = AInfBimodule(
        a, a,
        {("W", "W"): HomSpace(("r",))},
        {
            (1, 0): {(w, ("W",), (0,), 0, ()): 1},
            (0, 1): {(("W",), w, (), 0, (0,)): 1},
        },
        name="interval_rel_diag",
    )
    return CorpusEntry(
        "interval_relative_toy",
        "relative",
        a,
        extras={
            "base": b,
            "inclusion": incl,
            "a_rel": arel,
            # sigma_a: functional on cc words of (a, a_rel): length-0 word r -> 1
            "sigma_a_words": [((("W",), (), 0), 1)],
            # sigma_b: functional on cc words of (b, diag): length-0 word 1 -> 1
            "sigma_b_words": [((("*",), (), 0), 1)],
        },
        expected={"relative_pairing": True, "compatible": True},
    )


def mutate_category(cat: AInfCategory, coordinate, name: str = "") -> AInfCategory:
    """Flip one output bit of one structure tensor entry.

    ``coordinate`` is ("mu", k, objs, idxs, bit).  Flipping twice restores
    the original tensor.
    """
    kind, k, objs, idxs, bit = coordinate
    if kind != "mu":
        raise KeyError(f"bad coordinate kind {kind!r}")
    objs, idxs = tuple(objs), tuple(idxs)
    if len(objs) != k + 1 or len(idxs) != k:
        raise KeyError("coordinate shape does not match arity")
    for t, i in enumerate(idxs):
        if not 0 <= i < cat.hom(objs[t], objs[t + 1]).dim:
            raise KeyError("coordinate input index out of range")
    if not 0 <= bit < cat.hom(objs[0], objs[-1]).dim:
        raise KeyError("coordinate output bit out of range")
    mu = {kk: dict(t) for kk, t in cat.mu.items()}
    tensor = mu.setdefault(k, {})
    tensor[(objs, idxs)] = tensor.get((objs, idxs), 0) ^ (1 << bit)
    if not tensor[(objs, idxs)]:
        del tensor[(objs, idxs)]
    return AInfCategory(
        cat.objects, cat.homs, mu, max(cat.arity_bound, k),
        graded=cat.graded, degree=cat.degree,
        name=name or (cat.name + "~mut"),
    )


def mutate(entry: CorpusEntry, coordinate) -> CorpusEntry:
    if entry.category is None:
        raise KeyError("entry has no category to mutate")
    cat = mutate_category(entry.category, coordinate)
    out = CorpusEntry(entry.name + "~mut", entry.kind, cat, dict(entry.extras), {})
    out.expected["relations"] = validate_relations(cat).passed
    return out
