"""Finite A-infinity categories over F2.

Conventions.  A based hom space hom(X, Y) holds arrows from X to Y.  A word
over the object tuple (X_0, ..., X_k) is a tuple of basis indices with the
t-th letter in hom(X_{t-1}, X_t); every operation below consumes words in
this arrival order.  mu_k eats such a word and lands in hom(X_0, X_k).
Structure tensors are sparse: only nonzero entries are stored, each output
a bitmask over the target hom basis.

In graded mode a category carries an integer ``degree`` N and every nonzero
mu_k entry must have map degree -2 + k(1 - N) + N; relations are decidable
because mu_k = 0 above the declared arity bound.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Iterator, Mapping

from .gf2 import (
    UNGRADED,
    F2Matrix,
    graded_complex,
    homology,
    ungraded_complex,
    vec_support,
)


class StructureError(ValueError):
    """Raised for ill-typed tensors, bad units, or mode misuse."""


@dataclass(frozen=True)
class HomSpace:
    basis: tuple[str, ...]
    degrees: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.degrees is not None and len(self.degrees) != len(self.basis):
            raise StructureError("degree list does not match basis")
        if len(set(self.basis)) != len(self.basis):
            raise StructureError("duplicate basis labels")

    @property
    def dim(self) -> int:
        return len(self.basis)

    def index(self, label: str) -> int:
        try:
            return self.basis.index(label)
        except ValueError:
            raise StructureError(f"no basis element {label!r}") from None


EMPTY_HOM = HomSpace(())
EMPTY_HOM_GRADED = HomSpace((), ())

MuKey = tuple[tuple[str, ...], tuple[int, ...]]


class AInfCategory:
    """Finite object set, based homs, sparse structure tensors mu_k."""

    def __init__(
        self,
        objects: Iterable[str],
        homs: Mapping[tuple[str, str], HomSpace],
        mu: Mapping[int, Mapping[MuKey, int]],
        arity_bound: int,
        graded: bool = False,
        degree: int | None = None,
        name: str = "",
    ):
        self.objects = tuple(objects)
        if len(set(self.objects)) != len(self.objects):
            raise StructureError("duplicate object labels")
        self.homs = dict(homs)
        self.arity_bound = int(arity_bound)
        if self.arity_bound < 1:
            raise StructureError("arity bound must be at least 1")
        self.graded = graded
        self.degree = degree
        self.name = name
        if graded and degree is None:
            raise StructureError("graded category needs a degree")
        if not graded and degree is not None:
            raise StructureError("ungraded category must not carry a degree")
        for (x, y), h in self.homs.items():
            if x not in self.objects or y not in self.objects:
                raise StructureError(f"hom ({x},{y}) references unknown object")
            if graded and h.degrees is None and h.dim:
                raise StructureError(f"hom ({x},{y}) lacks degrees in graded mode")
        self.mu = {k: dict(t) for k, t in mu.items() if t}
        self._typecheck()

    # -- basic queries

    def hom(self, x: str, y: str) -> HomSpace:
        h = self.homs.get((x, y))
        if h is None:
            return EMPTY_HOM_GRADED if self.graded else EMPTY_HOM
        return h

    def basis_degree(self, x: str, y: str, idx: int) -> int:
        degs = self.hom(x, y).degrees
        if degs is None:
            raise StructureError("degree query on ungraded category")
        return degs[idx]

    def mu_entry(self, k: int, objs: tuple[str, ...], idxs: tuple[int, ...]) -> int:
        return self.mu.get(k, {}).get((objs, idxs), 0)

    def word_tuples(self, k: int) -> Iterator[tuple[str, ...]]:
        """Object tuples (X_0..X_k) whose hom chain is nowhere zero."""

        def extend(prefix: tuple[str, ...]):
            if len(prefix) == k + 1:
                yield prefix
                return
            for o in self.objects:
                if self.hom(prefix[-1], o).dim:
                    yield from extend(prefix + (o,))

        for o in self.objects:
            if k == 0:
                yield (o,)
            else:
                yield from extend((o,))

    def words(self, k: int) -> Iterator[tuple[tuple[str, ...], tuple[int, ...]]]:
        for objs in self.word_tuples(k):
            dims = [self.hom(objs[t], objs[t + 1]).dim for t in range(k)]
            for idxs in product(*(range(d) for d in dims)):
                yield objs, idxs

    def word_degree(self, objs: tuple[str, ...], idxs: tuple[int, ...]) -> int:
        return sum(self.basis_degree(objs[t], objs[t + 1], i) for t, i in enumerate(idxs))

    def mu_degree(self, k: int) -> int:
        if not self.graded:
            raise StructureError("mu_degree in ungraded mode")
        return -2 + k * (1 - self.degree) + self.degree

    # -- evaluation

    def mu_vec(self, objs: tuple[str, ...], vecs: list[int]) -> int:
        """mu_k on a word whose letters are vectors (bitmasks); multilinear."""
        k = len(vecs)
        out = 0
        for idxs in product(*(vec_support(v) for v in vecs)):
            out ^= self.mu_entry(k, objs, tuple(idxs))
        return out

    def _typecheck(self):
        for k, tensor in self.mu.items():
            if k < 1:
                raise StructureError("mu arity must be >= 1")
            if k > self.arity_bound:
                raise StructureError(f"mu_{k} exceeds arity bound {self.arity_bound}")
            for (objs, idxs), out in tensor.items():
                if len(objs) != k + 1 or len(idxs) != k:
                    raise StructureError(f"mu_{k} key has wrong shape: {objs}, {idxs}")
                for t, i in enumerate(idxs):
                    h = self.hom(objs[t], objs[t + 1])
                    if not 0 <= i < h.dim:
                        raise StructureError(f"mu_{k} input {i} out of range for {objs}")
                tgt = self.hom(objs[0], objs[-1])
                if out >> tgt.dim:
                    raise StructureError(f"mu_{k} output exceeds hom({objs[0]},{objs[-1]})")

    # -- derived categories

    def opposite(self) -> "AInfCategory":
        homs = {(y, x): h for (x, y), h in self.homs.items()}
        mu: dict[int, dict[MuKey, int]] = {}
        for k, tensor in self.mu.items():
            moved = {}
            for (objs, idxs), out in tensor.items():
                moved[(tuple(reversed(objs)), tuple(reversed(idxs)))] = out
            mu[k] = moved
        return AInfCategory(
            self.objects, homs, mu, self.arity_bound,
            graded=self.graded, degree=self.degree,
            name=f"{self.name}^opp" if self.name else "",
        )

    def suspend(self, j: int) -> "AInfCategory":
        """Shift hom degrees down by j; the category degree drops by j."""
        if not self.graded:
            raise StructureError("suspension requires graded mode")
        homs = {
            key: HomSpace(h.basis, tuple(d - j for d in h.degrees or ()))
            for key, h in self.homs.items()
        }
        return AInfCategory(
            self.objects, homs, self.mu, self.arity_bound,
            graded=True, degree=self.degree - j,
            name=f"{self.name}[{j}]" if self.name else "",
        )

    def hom_complex(self, x: str, y: str):
        """hom(x, y) as a chain complex with differential mu_1."""
        h = self.hom(x, y)
        if not self.graded:
            cols = [self.mu_entry(1, (x, y), (i,)) for i in range(h.dim)]
            return ungraded_complex(h.basis, F2Matrix.from_columns(cols, h.dim))
        by_deg: dict[int, list[int]] = {}
        for i, d in enumerate(h.degrees or ()):
            by_deg.setdefault(d, []).append(i)
        spaces = {d: tuple(h.basis[i] for i in ids) for d, ids in by_deg.items()}
        diffs = {}
        for d, ids in by_deg.items():
            tgt = by_deg.get(d - 1, [])
            pos = {g: r for r, g in enumerate(tgt)}
            cols = []
            for i in ids:
                full = self.mu_entry(1, (x, y), (i,))
                v = 0
                for g in vec_support(full):
                    v |= 1 << pos[g]
                cols.append(v)
            m = F2Matrix.from_columns(cols, len(tgt))
            if m.rows and m.cols:
                diffs[d] = m
        return graded_complex(spaces, diffs)


# -- relation checking --------------------------------------------------------


@dataclass(frozen=True)
class RelationReport:
    passed: bool
    failures: tuple[tuple[int, tuple[str, ...], tuple[int, ...]], ...]
    checked_arities: tuple[int, ...]

    def __bool__(self):
        return self.passed


def relation_defect(cat: AInfCategory, objs: tuple[str, ...], idxs: tuple[int, ...]) -> int:
    """Left side of the structure relation on one basis word; zero iff it holds."""
    k = len(idxs)
    acc = 0
    for s in range(1, k + 1):
        for j in range(0, k - s + 1):
            inner = cat.mu_entry(s, objs[j : j + s + 1], idxs[j : j + s])
            if not inner:
                continue
            outer_objs = objs[: j + 1] + objs[j + s :]
            for bit in vec_support(inner):
                acc ^= cat.mu_entry(
                    k - s + 1, outer_objs, idxs[:j] + (bit,) + idxs[j + s :]
                )
    return acc


def validate_relations(cat: AInfCategory, max_failures: int = 16) -> RelationReport:
    """Exhaustive relation check up to arity 2*K_max - 1.

    Beyond that arity every summand contains some mu_s with s > K_max and
    vanishes identically, so the infinite family is decided finitely.
    """
    top = 2 * cat.arity_bound - 1
    failures = []
    for k in range(1, top + 1):
        for objs, idxs in cat.words(k):
            if relation_defect(cat, objs, idxs):
                failures.append((k, objs, idxs))
                if len(failures) >= max_failures:
                    return RelationReport(False, tuple(failures), tuple(range(1, k + 1)))
    return RelationReport(not failures, tuple(failures), tuple(range(1, top + 1)))


def audit_degrees(cat: AInfCategory) -> list[str]:
    """Graded mode: report every tensor entry violating the degree formula."""
    if not cat.graded:
        return []
    bad = []
    for k, tensor in cat.mu.items():
        want = cat.mu_degree(k)
        for (objs, idxs), out in tensor.items():
            din = cat.word_degree(objs, idxs)
            for bit in vec_support(out):
                dout = cat.basis_degree(objs[0], objs[-1], bit)
                if dout - din != want:
                    bad.append(f"mu_{k}{objs}{idxs} bit {bit}: degree {dout - din} != {want}")
    return bad


# -- units ---------------------------------------------------------------------


@dataclass(frozen=True)
class UnitAssignment:
    """Distinguished element per object: strict units are chain-level,
    homological units are cycle representatives of identity classes."""

    kind: str  # "strict" | "homological"
    elements: Mapping[str, int]

    def element(self, obj: str) -> int:
        return self.elements[obj]


def check_strict_unit(cat: AInfCategory, units: UnitAssignment) -> tuple[bool, list[str]]:
    problems: list[str] = []
    for x in cat.objects:
        if x not in units.elements:
            raise StructureError(f"no unit supplied for object {x}")
        e = units.elements[x]
        if e >> cat.hom(x, x).dim:
            raise StructureError(f"unit for {x} not in hom({x},{x})")
    for x in cat.objects:
        e = units.elements[x]
        if cat.mu_vec((x, x), [e]):
            problems.append(f"mu_1(e_{x}) != 0")
        if cat.graded:
            for bit in vec_support(e):
                if cat.basis_degree(x, x, bit) != cat.degree:
                    problems.append(f"e_{x} has a component outside degree {cat.degree}")
                    break
    for objs, idxs in _all_words_up_to(cat, 1):
        x0, x1 = objs[0], objs[-1]
        v = 1 << idxs[0]
        left = cat.mu_vec((x0, x0, x1), [units.elements[x0], v])
        right = cat.mu_vec((x0, x1, x1), [v, units.elements[x1]])
        if left != v:
            problems.append(f"e_{x0} fails as left identity on {objs}{idxs}")
        if right != v:
            problems.append(f"e_{x1} fails as right identity on {objs}{idxs}")
    for k in range(3, cat.arity_bound + 1):
        for objs, idxs in cat.words(k - 1):
            for pos in range(k):
                xi = objs[pos]
                vecs = [1 << i for i in idxs]
                vecs = vecs[:pos] + [units.elements[xi]] + vecs[pos:]
                spliced = objs[: pos + 1] + objs[pos:]  # xi duplicated at pos
                if cat.mu_vec(spliced, vecs):
                    problems.append(f"mu_{k} with unit inserted at {pos} on {objs}{idxs}")
    return (not problems, problems)


def _all_words_up_to(cat: AInfCategory, k: int):
    for kk in range(1, k + 1):
        yield from cat.words(kk)


@dataclass(frozen=True)
class HomologicalCategory:
    """Ordinary category on homology: per-pair class bases and product tables."""

    objects: tuple[str, ...]
    class_dims: Mapping[tuple[str, str], int]
    representatives: Mapping[tuple[str, str], tuple[int, ...]]
    # (x, y, z) -> {(i, j): bitmask over H(x,z) classes}
    products: Mapping[tuple[str, str, str], Mapping[tuple[int, int], int]]


def _hom_homology(cat: AInfCategory, x: str, y: str):
    cx = cat.hom_complex(x, y)
    hs = homology(cx)
    if not cat.graded:
        h = hs[UNGRADED]
        return [(UNGRADED, r) for r in h.representatives], hs
    reps = []
    for p in sorted(hs):
        for r in hs[p].representatives:
            reps.append((p, r))
    return reps, hs


def _lift_to_full(cat: AInfCategory, x: str, y: str, p: int, v: int) -> int:
    """Rewrite a vector over the degree-p sub-basis in full hom coordinates."""
    if not cat.graded:
        return v
    h = cat.hom(x, y)
    ids = [i for i, d in enumerate(h.degrees or ()) if d == p]
    out = 0
    for loc, i in enumerate(ids):
        if (v >> loc) & 1:
            out |= 1 << i
    return out


def _project_full(cat: AInfCategory, x: str, y: str, p: int, v: int) -> int:
    if not cat.graded:
        return v
    h = cat.hom(x, y)
    ids = [i for i, d in enumerate(h.degrees or ()) if d == p]
    out = 0
    for loc, i in enumerate(ids):
        if (v >> i) & 1:
            out |= 1 << loc
    return out


def homological_category(cat: AInfCategory) -> HomologicalCategory:
    """Homology hom spaces with the induced product; associativity asserted."""
    reps: dict[tuple[str, str], tuple[int, ...]] = {}
    holders = {}
    for x in cat.objects:
        for y in cat.objects:
            rs, hs = _hom_homology(cat, x, y)
            reps[(x, y)] = tuple(_lift_to_full(cat, x, y, p, r) for p, r in rs)
            holders[(x, y)] = (rs, hs)
    products: dict[tuple[str, str, str], dict[tuple[int, int], int]] = {}
    for x in cat.objects:
        for y in cat.objects:
            for z in cat.objects:
                table: dict[tuple[int, int], int] = {}
                for i, a in enumerate(reps[(x, y)]):
                    for j, b in enumerate(reps[(y, z)]):
                        prod = cat.mu_vec((x, y, z), [a, b])
                        table[(i, j)] = _project_class(cat, holders, x, z, prod)
                products[(x, y, z)] = table
    hc = HomologicalCategory(
        cat.objects,
        {k: len(v) for k, v in reps.items()},
        reps,
        products,
    )
    _assert_associative(hc)
    return hc


def _project_class(cat, holders, x, z, vec) -> int:
    rs, hs = holders[(x, z)]
    if vec == 0:
        return 0
    out = 0
    if not cat.graded:
        coords = hs[UNGRADED].project(vec)
        return coords
    # split by degree, project each piece, then place into the global order
    offset = 0
    for p in sorted(hs):
        piece = _project_full(cat, x, z, p, vec)
        if piece:
            coords = hs[p].project(piece)
            out |= coords << offset
        offset += hs[p].dim
    return out


def _assert_associative(hc: HomologicalCategory):
    for x in hc.objects:
        for y in hc.objects:
            for z in hc.objects:
                for w in hc.objects:
                    t1 = hc.products[(x, y, z)]
                    for i in range(hc.class_dims[(x, y)]):
                        for j in range(hc.class_dims[(y, z)]):
                            ab = t1[(i, j)]
                            for k in range(hc.class_dims[(z, w)]):
                                left = 0
                                for bit in vec_support(ab):
                                    left ^= hc.products[(x, z, w)][(bit, k)]
                                bc = hc.products[(y, z, w)][(j, k)]
                                right = 0
                                for bit in vec_support(bc):
                                    right ^= hc.products[(x, y, w)][(i, bit)]
                                if left != right:
                                    raise StructureError(
                                        f"H(mu_2) not associative at {(x, y, z, w)}"
                                    )


def find_homological_units(cat: AInfCategory) -> UnitAssignment | None:
    """Search each H(hom(X,X)) for a two-sided identity class.

    Classes are scanned in lexicographic order of their coordinate tuples in
    the representative basis, so the result is deterministic.
    """
    hc = homological_category(cat)
    chosen: dict[str, int] = {}
    for x in cat.objects:
        n = hc.class_dims[(x, x)]
        found = None
        for coords_bits in _lex_nonzero(n):
            if _is_identity_class(hc, x, coords_bits):
                found = coords_bits
                break
        if found is None:
            return None
        vec = 0
        for bit in vec_support(found):
            vec ^= hc.representatives[(x, x)][bit]
        chosen[x] = vec
    return UnitAssignment("homological", chosen)


def _lex_nonzero(n: int):
    # coordinate tuples (c_1..c_n) in lexicographic order, skipping zero
    for mask_tuple in product((0, 1), repeat=n):
        if not any(mask_tuple):
            continue
        v = 0
        for i, b in enumerate(mask_tuple):
            if b:
                v |= 1 << i
        yield v


def _is_identity_class(hc: HomologicalCategory, x: str, coords: int) -> bool:
    for y in hc.objects:
        for j in range(hc.class_dims[(x, y)]):
            out = 0
            for bit in vec_support(coords):
                out ^= hc.products[(x, x, y)][(bit, j)]
            if out != (1 << j):
                return False
        for j in range(hc.class_dims[(y, x)]):
            out = 0
            for bit in vec_support(coords):
                out ^= hc.products[(y, x, x)][(j, bit)]
            if out != (1 << j):
                return False
    return True
