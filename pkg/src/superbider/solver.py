"""Exact sparse linear algebra over the rationals.

Rows are sparse ``{column: coefficient}`` dicts.  Everything reduces to one
primitive: an incremental row reducer that maintains a pivot row per column.
The fully reduced echelon form of a row space is unique, so nullspace bases
are canonical no matter in which order rows arrive; on top of that each basis
vector is rescaled so that its first nonzero entry is 1, which makes reports
and golden tests byte-stable.

Pivoting strategy: rows are reduced against existing pivots in increasing
column order, which on the degree-blocked systems produced by the engine
keeps fill-in local to a block.  Coefficient growth, not flop count, is the
dominant cost in exact elimination, and the small windows used here keep the
rationals tiny.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence

from .scalars import Q, ZERO

Row = Dict[int, "Q"]


class RowReducer:
    """Incremental Gauss-Jordan elimination over sparse rational rows."""

    __slots__ = ("pivots", "_rref_done")

    def __init__(self):
        self.pivots: Dict[int, Row] = {}
        self._rref_done = True

    def copy(self) -> "RowReducer":
        dup = RowReducer()
        dup.pivots = {c: dict(r) for c, r in self.pivots.items()}
        dup._rref_done = self._rref_done
        return dup

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def add(self, row: Row) -> bool:
        """Insert a row (consumed); returns True if it added a new pivot."""
        pivots = self.pivots
        while row:
            c = min(row)
            pr = pivots.get(c)
            if pr is None:
                f = row.pop(c)
                if not f:
                    continue
                if f != 1:
                    inv = 1 / f
                    row = {cc: v * inv for cc, v in row.items()}
                row[c] = Q(1)
                pivots[c] = row
                self._rref_done = False
                return True
            f = row.pop(c)
            for cc, v in pr.items():
                if cc == c:
                    continue
                s = row.get(cc, ZERO) - f * v
                if s:
                    row[cc] = s
                else:
                    row.pop(cc, None)
        return False

    def reduce(self, row: Row) -> Row:
        """Remainder of a row against the current pivots (row is consumed)."""
        pivots = self.pivots
        out: Row = {}
        while row:
            c = min(row)
            f = row.pop(c)
            if not f:
                continue
            pr = pivots.get(c)
            if pr is None:
                out[c] = f
                continue
            for cc, v in pr.items():
                if cc == c:
                    continue
                s = row.get(cc, ZERO) - f * v
                if s:
                    row[cc] = s
                else:
                    row.pop(cc, None)
        return out

    def _back_substitute(self) -> None:
        if self._rref_done:
            return
        pivots = self.pivots
        for c in sorted(pivots, reverse=True):
            row = pivots[c]
            for c2 in [cc for cc in row if cc != c and cc in pivots]:
                f = row.pop(c2)
                for cc, v in pivots[c2].items():
                    if cc == c2:
                        continue
                    s = row.get(cc, ZERO) - f * v
                    if s:
                        row[cc] = s
                    else:
                        row.pop(cc, None)
        self._rref_done = True

    def nullspace_basis(self, columns: Iterable[int]) -> List[Row]:
        """Canonical nullspace basis over the given column universe.

        ``columns`` must cover every column that appears in the inserted
        rows; columns never touched by a row are free.
        """
        self._back_substitute()
        pivots = self.pivots
        free = [c for c in columns if c not in pivots]
        vectors = []
        for fc in free:
            v: Row = {fc: Q(1)}
            for pc, prow in pivots.items():
                coef = prow.get(fc)
                if coef:
                    v[pc] = -coef
            vectors.append(_normalize(v))
        return vectors


def _normalize(v: Row) -> Row:
    """Scale so the first (lowest-column) nonzero entry equals 1."""
    if not v:
        return v
    lead = v[min(v)]
    if lead == 1:
        return v
    inv = 1 / lead
    return {c: val * inv for c, val in v.items()}


@dataclass
class SparseMatrix:
    """Sparse rational matrix as a list of row dicts."""

    rows: List[Row]
    ncols: int

    def __post_init__(self):
        for i, r in enumerate(self.rows):
            for c, v in r.items():
                if not (0 <= c < self.ncols):
                    raise ValueError(f"column {c} outside [0, {self.ncols})")
            if any(not v for v in r.values()):
                self.rows[i] = {c: v for c, v in r.items() if v}

    @property
    def nrows(self) -> int:
        return len(self.rows)

    def apply(self, v: Row) -> List["Q"]:
        out = []
        for r in self.rows:
            acc = ZERO
            if len(r) < len(v):
                for c, a in r.items():
                    x = v.get(c)
                    if x is not None:
                        acc += a * x
            else:
                for c, x in v.items():
                    a = r.get(c)
                    if a is not None:
                        acc += a * x
            out.append(acc)
        return out


@dataclass
class SolutionSpace:
    """Span of a finite set of sparse vectors, held in normalized form."""

    ncols: int
    basis: List[Row]
    _reduced: Optional[RowReducer] = field(default=None, repr=False, compare=False)

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def _reducer(self) -> RowReducer:
        if self._reduced is None:
            red = RowReducer()
            for v in self.basis:
                red.add(dict(v))
            self._reduced = red
        return self._reduced

    def contains(self, v: Row) -> bool:
        """Exact membership of ``v`` in the span."""
        for c in v:
            if not (0 <= c < self.ncols):
                raise ValueError(f"column {c} outside [0, {self.ncols})")
        return not self._reducer().reduce(dict(v))

    def contains_space(self, other: "SolutionSpace") -> bool:
        return all(self.contains(v) for v in other.basis)

    def equals_span(self, other: "SolutionSpace") -> bool:
        return self.contains_space(other) and other.contains_space(self)


def reduce_rows(rows: Iterable[Row]) -> RowReducer:
    """Reduce a batch of rows into echelon form.

    Rows are first deduplicated up to scalar multiples (canonical leading
    coefficient 1) and then inserted shortest first: short rows become
    pivots with little or no tail, which keeps the reduction chains of the
    long rows from filling in.  The reduced echelon form of the row space is
    unique, so this ordering affects speed only, never the result.
    """
    seen = set()
    for row in rows:
        if not row:
            continue
        if any(not v for v in row.values()):
            row = {c: v for c, v in row.items() if v}
            if not row:
                continue
        lead = row[min(row)]
        if lead != 1:
            inv = 1 / lead
            key = tuple(sorted((c, v * inv) for c, v in row.items()))
        else:
            key = tuple(sorted(row.items()))
        seen.add(key)
    red = RowReducer()
    for key in sorted(seen, key=len):
        red.add(dict(key))
    return red


def rank(matrix: SparseMatrix) -> int:
    return reduce_rows(matrix.rows).rank


def nullspace(matrix: SparseMatrix) -> SolutionSpace:
    """Canonical basis of the right nullspace {v : A v = 0}."""
    red = reduce_rows(matrix.rows)
    basis = red.nullspace_basis(range(matrix.ncols))
    return SolutionSpace(matrix.ncols, basis)


def space_from_vectors(ncols: int, vectors: Iterable[Row]) -> SolutionSpace:
    """Span of arbitrary vectors, rebased to a canonical independent basis."""
    red = RowReducer()
    for v in vectors:
        red.add(dict(v))
    red._back_substitute()
    basis = [
        _normalize(dict(red.pivots[c])) for c in sorted(red.pivots)
    ]
    return SolutionSpace(ncols, basis)


def project(space: SolutionSpace, columns: Sequence[int]) -> SolutionSpace:
    """Restrict every basis vector to ``columns`` and rebase to independence.

    Column ids are preserved; coordinates outside the subset are dropped.
    """
    keep = set(columns)
    restricted = []
    for v in space.basis:
        w = {c: val for c, val in v.items() if c in keep}
        if w:
            restricted.append(w)
    return space_from_vectors(space.ncols, restricted)


def contains(space: SolutionSpace, v: Row) -> bool:
    return space.contains(v)
