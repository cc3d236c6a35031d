"""Exact linear algebra over the two-element field.

Matrices are stored row-major with each row bit-packed into a Python int,
so row operations are single XORs regardless of width.  Everything here is
immutable after construction; all queries are pure.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

UNGRADED = 0  # degree key used for the single space of an ungraded complex


class GF2Error(ValueError):
    pass


def vec_from_bits(bits: Iterable[int]) -> int:
    v = 0
    for i, b in enumerate(bits):
        if b & 1:
            v |= 1 << i
    return v


def vec_to_bits(v: int, n: int) -> list[int]:
    return [(v >> i) & 1 for i in range(n)]


def vec_support(v: int) -> list[int]:
    out = []
    i = 0
    while v:
        if v & 1:
            out.append(i)
        v >>= 1
        i += 1
    return out


class F2Matrix:
    """Dense matrix over F2; ``data[i]`` is row i as a bitmask."""

    __slots__ = ("rows", "cols", "data")

    def __init__(self, rows: int, cols: int, data: Sequence[int]):
        if len(data) != rows:
            raise GF2Error(f"expected {rows} rows, got {len(data)}")
        mask = (1 << cols) - 1
        self.rows = rows
        self.cols = cols
        self.data = tuple(r & mask for r in data)

    @classmethod
    def from_entries(cls, entries: Sequence[Sequence[int]]) -> "F2Matrix":
        rows = len(entries)
        cols = len(entries[0]) if rows else 0
        return cls(rows, cols, [vec_from_bits(r) for r in entries])

    @classmethod
    def zero(cls, rows: int, cols: int) -> "F2Matrix":
        return cls(rows, cols, [0] * rows)

    @classmethod
    def identity(cls, n: int) -> "F2Matrix":
        return cls(n, n, [1 << i for i in range(n)])

    @classmethod
    def from_columns(cls, cols: Sequence[int], rows: int) -> "F2Matrix":
        data = [0] * rows
        for j, c in enumerate(cols):
            for i in vec_support(c):
                if i >= rows:
                    raise GF2Error("column vector exceeds row count")
                data[i] |= 1 << j
        return cls(rows, len(cols), data)

    def entry(self, i: int, j: int) -> int:
        return (self.data[i] >> j) & 1

    def to_lists(self) -> list[list[int]]:
        return [vec_to_bits(r, self.cols) for r in self.data]

    def column(self, j: int) -> int:
        v = 0
        for i in range(self.rows):
            if (self.data[i] >> j) & 1:
                v |= 1 << i
        return v

    def columns(self) -> list[int]:
        return [self.column(j) for j in range(self.cols)]

    def transpose(self) -> "F2Matrix":
        return F2Matrix(self.cols, self.rows, self.columns())

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, F2Matrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and self.data == other.data
        )

    def __hash__(self):
        return hash((self.rows, self.cols, self.data))

    def __repr__(self):
        return f"F2Matrix({self.rows}x{self.cols})"

    def is_zero(self) -> bool:
        return all(r == 0 for r in self.data)

    def add(self, other: "F2Matrix") -> "F2Matrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise GF2Error("shape mismatch in add")
        return F2Matrix(self.rows, self.cols, [a ^ b for a, b in zip(self.data, other.data)])

    def apply(self, v: int) -> int:
        """Matrix times column vector (vector = bitmask over columns)."""
        out = 0
        for i in range(self.rows):
            if bin(self.data[i] & v).count("1") & 1:
                out |= 1 << i
        return out

    def mul(self, other: "F2Matrix") -> "F2Matrix":
        """self @ other, composing maps: (self ∘ other)(v) = self(other(v))."""
        if self.cols != other.rows:
            raise GF2Error("shape mismatch in mul")
        cols = [self.apply(other.column(j)) for j in range(other.cols)]
        return F2Matrix.from_columns(cols, self.rows)


def _eliminate(rows: list[int], ncols: int) -> tuple[list[int], list[int]]:
    """Row-reduce in place; returns (reduced rows, pivot column list)."""
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = -1
        for i in range(r, len(rows)):
            if (rows[i] >> c) & 1:
                piv = i
                break
        if piv < 0:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        for i in range(len(rows)):
            if i != r and ((rows[i] >> c) & 1):
                rows[i] ^= rows[r]
        pivots.append(c)
        r += 1
    return rows, pivots


def rank(m: F2Matrix) -> int:
    _, pivots = _eliminate(list(m.data), m.cols)
    return len(pivots)


def kernel_basis(m: F2Matrix) -> list[int]:
    """Basis of the null space as column bitmasks; size = cols - rank."""
    rows, pivots = _eliminate(list(m.data), m.cols)
    pivot_set = set(pivots)
    basis = []
    for free in range(m.cols):
        if free in pivot_set:
            continue
        v = 1 << free
        for ridx, pc in enumerate(pivots):
            if (rows[ridx] >> free) & 1:
                v |= 1 << pc
        basis.append(v)
    return basis


def row_space_basis(vectors: Iterable[int], ncols: int) -> list[int]:
    rows, pivots = _eliminate([v for v in vectors if v], ncols)
    return rows[: len(pivots)]


def in_span(vectors: Sequence[int], ncols: int, target: int) -> bool:
    base = row_space_basis(vectors, ncols)
    return len(row_space_basis(list(base) + [target], ncols)) == len(base)


def solve(m: F2Matrix, b: int) -> int | None:
    """One solution x of m x = b (column bitmasks), or None."""
    aug = [m.data[i] | (((b >> i) & 1) << m.cols) for i in range(m.rows)]
    rows, pivots = _eliminate(aug, m.cols)
    x = 0
    for ridx, pc in enumerate(pivots):
        if (rows[ridx] >> m.cols) & 1:
            x |= 1 << pc
    # Rows with zero coefficient part but nonzero rhs mean inconsistency.
    for ridx in range(len(pivots), len(rows)):
        if rows[ridx] >> m.cols:
            return None
    return x if m.apply(x) == b else None


@dataclass(frozen=True)
class F2ChainComplex:
    """Finite complex over F2.

    Graded: ``spaces[p]`` is the basis-label tuple in degree p and
    ``diffs[p]`` maps degree p to degree p-1 (columns indexed by degree-p
    basis).  Ungraded: a single space at the key ``UNGRADED`` and one
    square-zero endomorphism.
    """

    graded: bool
    spaces: Mapping[int, tuple[str, ...]]
    diffs: Mapping[int, F2Matrix]

    def __post_init__(self):
        for p, d in self.diffs.items():
            if d.cols != self.dim(p):
                raise GF2Error(f"differential at {p} has {d.cols} cols, dim is {self.dim(p)}")
            tgt = p if not self.graded else p - 1
            if d.rows != self.dim(tgt):
                raise GF2Error(f"differential at {p} has {d.rows} rows, target dim {self.dim(tgt)}")
        if not self.is_square_zero():
            raise GF2Error("differential does not square to zero")

    def degrees(self) -> list[int]:
        return sorted(self.spaces)

    def dim(self, p: int) -> int:
        return len(self.spaces.get(p, ()))

    def total_dim(self) -> int:
        return sum(len(v) for v in self.spaces.values())

    def labels(self, p: int) -> tuple[str, ...]:
        return self.spaces.get(p, ())

    def d(self, p: int) -> F2Matrix:
        if p in self.diffs:
            return self.diffs[p]
        tgt = p if not self.graded else p - 1
        return F2Matrix.zero(self.dim(tgt), self.dim(p))

    def is_square_zero(self) -> bool:
        if not self.graded:
            d = self.d(UNGRADED)
            return d.mul(d).is_zero()
        return all(self.d(p - 1).mul(self.d(p)).is_zero() for p in self.degrees())


def ungraded_complex(labels: Sequence[str], d: F2Matrix) -> F2ChainComplex:
    return F2ChainComplex(False, {UNGRADED: tuple(labels)}, {UNGRADED: d})


def graded_complex(
    spaces: Mapping[int, Sequence[str]], diffs: Mapping[int, F2Matrix]
) -> F2ChainComplex:
    sp = {p: tuple(v) for p, v in spaces.items() if v}
    dd = {p: m for p, m in diffs.items() if m.rows and m.cols}
    return F2ChainComplex(True, sp, dd)


@dataclass(frozen=True)
class HomologySpace:
    """Homology of one degree: chosen cycle representatives and a projector
    expressing any cycle in those representatives modulo boundaries."""

    dim: int
    representatives: tuple[int, ...]
    boundary_basis: tuple[int, ...]
    ambient_dim: int

    def project(self, cycle: int) -> int:
        """Coordinates of a cycle's class in the representative basis."""
        cols = list(self.boundary_basis) + list(self.representatives)
        m = F2Matrix.from_columns(cols, self.ambient_dim)
        x = solve(m, cycle)
        if x is None:
            raise GF2Error("vector is not a cycle modulo boundaries")
        nb = len(self.boundary_basis)
        return x >> nb


def homology(c: F2ChainComplex) -> dict[int, HomologySpace]:
    """Per-degree homology with representative cycle bases."""
    out: dict[int, HomologySpace] = {}
    for p in c.degrees():
        d_out = c.d(p)
        if c.graded:
            d_in = c.d(p + 1)
        else:
            d_in = d_out
        cycles = kernel_basis(d_out)
        boundary = row_space_basis((d_in.apply(v) for v in kernel_cols_all(d_in)), c.dim(p))
        reps = []
        span = list(boundary)
        r0 = len(row_space_basis(span, c.dim(p)))
        for z in cycles:
            if len(row_space_basis(span + [z], c.dim(p))) > r0:
                reps.append(z)
                span.append(z)
                r0 += 1
        out[p] = HomologySpace(
            dim=len(reps),
            representatives=tuple(reps),
            boundary_basis=tuple(row_space_basis(boundary, c.dim(p))),
            ambient_dim=c.dim(p),
        )
    return out


def kernel_cols_all(m: F2Matrix) -> list[int]:
    # all standard basis vectors; convenience for images
    return [1 << j for j in range(m.cols)]


def homology_dims(c: F2ChainComplex) -> dict[int, int]:
    return {p: h.dim for p, h in homology(c).items()}


@dataclass(frozen=True)
class ChainMap:
    """Map of complexes. ``blocks[p]`` sends degree p to degree p+shift.

    Ungraded maps have a single block at ``UNGRADED`` and shift 0.
    """

    source: F2ChainComplex
    target: F2ChainComplex
    blocks: Mapping[int, F2Matrix]
    shift: int = 0

    def block(self, p: int) -> F2Matrix:
        if p in self.blocks:
            return self.blocks[p]
        return F2Matrix.zero(self.target.dim(p + self.shift), self.source.dim(p))

    def is_chain_map(self) -> bool:
        if not self.source.graded:
            f = self.block(UNGRADED)
            return f.mul(self.source.d(UNGRADED)) == self.target.d(UNGRADED).mul(f)
        for p in self.source.degrees():
            lhs = self.block(p - 1).mul(self.source.d(p))
            rhs = self.target.d(p + self.shift).mul(self.block(p))
            if lhs != rhs:
                raise_shape = lhs.rows != rhs.rows or lhs.cols != rhs.cols
                if raise_shape:
                    raise GF2Error("chain map blocks have inconsistent shapes")
                return False
        return True


def mapping_cone(f: ChainMap) -> F2ChainComplex:
    """Cone of a chain map; acyclic iff the map is a quasi-isomorphism.

    Graded: cone_p = source_{p-1} (+) target_p after reindexing the target
    by the shift.  Differential is block triangular with f in the corner.
    """
    src, tgt = f.source, f.target
    if not src.graded:
        ls = tuple("S:" + x for x in src.labels(UNGRADED)) + tuple(
            "T:" + x for x in tgt.labels(UNGRADED)
        )
        ns, nt = src.dim(UNGRADED), tgt.dim(UNGRADED)
        ds, dt, fm = src.d(UNGRADED), tgt.d(UNGRADED), f.block(UNGRADED)
        data = []
        for i in range(ns):
            data.append(ds.data[i])
        for i in range(nt):
            data.append((fm.data[i]) | (dt.data[i] << ns))
        return ungraded_complex(ls, F2Matrix(ns + nt, ns + nt, data))
    # reindex target by shift so the compared complexes live on one axis
    degs = set()
    for p in src.degrees():
        degs.add(p + 1)
    for p in tgt.degrees():
        degs.add(p - f.shift)
    spaces: dict[int, tuple[str, ...]] = {}
    for p in sorted(degs):
        ls = tuple("S:" + x for x in src.labels(p - 1)) + tuple(
            "T:" + x for x in tgt.labels(p + f.shift)
        )
        if ls:
            spaces[p] = ls
    diffs: dict[int, F2Matrix] = {}
    for p in sorted(spaces):
        ns, nt = src.dim(p - 1), tgt.dim(p + f.shift)
        rs, rt = src.dim(p - 2), tgt.dim(p - 1 + f.shift)
        ds = src.d(p - 1)
        dt = tgt.d(p + f.shift)
        fm = f.block(p - 1)
        data = []
        for i in range(rs):
            data.append(ds.data[i] if ns else 0)
        for i in range(rt):
            row = fm.data[i] if ns else 0
            row |= (dt.data[i] if nt else 0) << ns
            data.append(row)
        m = F2Matrix(rs + rt, ns + nt, data)
        if m.rows and m.cols:
            diffs[p] = m
    return graded_complex(spaces, diffs)


def is_acyclic(c: F2ChainComplex) -> bool:
    return all(h.dim == 0 for h in homology(c).values())


@dataclass(frozen=True)
class QuasiIsoReport:
    is_quasi_iso: bool
    cone_acyclic: bool
    induced_iso: bool
    induced_ranks: Mapping[int, tuple[int, int, int]]  # degree -> (dim H src, dim H tgt, rank)


def induced_homology_map(f: ChainMap) -> dict[int, F2Matrix]:
    """Matrix of H(f) per source degree, in the chosen representative bases."""
    hs = homology(f.source)
    ht = homology(f.target)
    out = {}
    for p, h in hs.items():
        q = p + f.shift if f.source.graded else UNGRADED
        hq = ht.get(q)
        tdim = hq.dim if hq else 0
        cols = []
        for z in h.representatives:
            img = f.block(p).apply(z)
            cols.append(hq.project(img) if hq else 0)
        out[p] = F2Matrix.from_columns(cols, tdim)
    return out


def is_quasi_iso(f: ChainMap) -> QuasiIsoReport:
    """Decide quasi-isomorphism two ways (cone acyclicity, induced ranks).

    The two routes must agree; disagreement indicates a bug and raises.
    """
    if not f.is_chain_map():
        raise GF2Error("not a chain map")
    cone_ok = is_acyclic(mapping_cone(f))
    hs = homology(f.source)
    ht = homology(f.target)
    induced = induced_homology_map(f)
    ranks = {}
    ok = True
    degrees = set(hs) | set(
        (q - f.shift) for q in ht if f.source.graded
    )
    if not f.source.graded:
        degrees = {UNGRADED}
    for p in sorted(degrees):
        sdim = hs[p].dim if p in hs else 0
        q = p + f.shift if f.source.graded else UNGRADED
        tdim = ht[q].dim if q in ht else 0
        r = rank(induced[p]) if p in induced else 0
        ranks[p] = (sdim, tdim, r)
        if not (sdim == tdim == r):
            ok = False
    if cone_ok != ok:
        raise GF2Error(f"quasi-iso criteria disagree: cone={cone_ok} ranks={ranks}")
    return QuasiIsoReport(ok, cone_ok, ok, ranks)
