"""Windowed constraint systems for centroids, super-biderivations and
commutative post-Lie products.

A bilinear map phi is represented by one unknown per *cell*
(famA, a, famB, b, famOut, t): the coefficient of the output generator
famOut_t in phi(A_a, B_b).  Cells exist for |a|, |b| <= N and degree shift
k = t - a - b with |k| <= K (central output families pin t = 0).  A linear
map gamma uses the arity-1 analogue (famA, a, famOut, t).

Every constraint row produced from a generator triple references cells of a
single degree shift k and a single parity class, so the systems decompose
into independent (parity, k) blocks.  A row is emitted only when every cell
it references exists, which reduces to a bound on the bracketed index sum;
partial rows can never arise because all cells of an in-window input pair
share the same existence condition.

For homogeneous phi of parity p the two derivation identities are

  phi([x,y],z) = (-1)^{p|x|} x.phi(y,z) - (-1)^{|y|(p+|x|)} y.phi(x,z)
  phi(x,[y,z]) = (-1)^{(p+|x|)|y|} y.phi(x,z) - (-1)^{|z|(p+|x|+|y|)} z.phi(x,y)

and the skew/symmetric conditions read phi(x,y) = -/+ (-1)^{|x||y|} phi(y,x).
Under either symmetry condition the second identity is an exact linear
consequence of the first (substitute the symmetry into the first identity
for the reversed arguments and compare signs), so the symmetric/skew solver
instantiates only the first identity over folded unknowns; the full
public system builder emits both identity families plus the symmetry rows,
and the test suite substitutes every computed basis vector back into that
full system.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

from .catalog import CatalogKey, get_algebra, get_module
from .core import (
    EVEN,
    ODD,
    AlgebraSpec,
    GenId,
    ModuleSpec,
    Window,
    adjoint_module,
    index_str,
)
from .scalars import Q, ZERO
from .solver import (
    Row,
    SolutionSpace,
    SparseMatrix,
    nullspace,
    project,
    reduce_rows,
    space_from_vectors,
)

PARITY_CHOICES = ("even", "odd", "both")
SYMMETRY_CHOICES = ("symmetric", "skew", "none")

_PARITY_OF = {"even": (EVEN,), "odd": (ODD,), "both": (EVEN, ODD)}


def _sgn(e: int) -> int:
    return -1 if (e & 1) else 1


@dataclass
class _Segment:
    """One (input families, output family) group of cells."""

    fams: Tuple[str, ...]  # (famA, famB, famOut) or (famA, famOut)
    base: int
    idx: Tuple[Tuple[int, ...], ...]  # per input slot, doubled indices
    pos: Tuple[Dict[int, int], ...]
    k2list: Tuple[int, ...]  # empty for central output
    central_out: bool
    central_cells: Dict[Tuple[int, ...], int]  # input indices -> column
    p_phi: int  # parity class of the map component
    size: int


class MapUnknowns:
    """Dense column numbering for the cells of a windowed map space."""

    def __init__(self, alg: AlgebraSpec, mod: ModuleSpec, window: Window, arity: int):
        if arity not in (1, 2):
            raise ValueError("arity must be 1 or 2")
        self.alg = alg
        self.mod = mod
        self.window = window
        self.arity = arity
        self.segments: List[_Segment] = []
        self._seg_of: Dict[Tuple[str, ...], _Segment] = {}
        self._fold_cache: Dict[Tuple[int, int], "_Folding"] = {}

        afams = sorted(alg.families)
        mfams = sorted(mod.families)
        in_groups = (
            itertools.product(afams, afams) if arity == 2 else ((f,) for f in afams)
        )
        base = 0
        for ins in in_groups:
            idx = tuple(tuple(alg.indices(f, window.n2)) for f in ins)
            p_in = sum(alg.families[f].parity for f in ins)
            lat_in = sum(alg.families[f].lattice for f in ins)
            for fo in mfams:
                fout = mod.families[fo]
                p_phi = (p_in + fout.parity) % 2
                if fout.central:
                    cells: Dict[Tuple[int, ...], int] = {}
                    off = 0
                    for combo in itertools.product(*idx):
                        if abs(sum(combo)) <= window.k2:
                            cells[combo] = base + off
                            off += 1
                    seg = _Segment(ins + (fo,), base, idx, tuple({v: i for i, v in enumerate(ix)} for ix in idx),
                                   (), True, cells, p_phi, off)
                else:
                    kpar = (fout.lattice - lat_in) % 2
                    k2list = tuple(
                        k2 for k2 in range(-window.k2, window.k2 + 1)
                        if k2 % 2 == kpar
                    )
                    size = len(k2list)
                    for ix in idx:
                        size *= len(ix)
                    seg = _Segment(ins + (fo,), base, idx, tuple({v: i for i, v in enumerate(ix)} for ix in idx),
                                   k2list, False, {}, p_phi, size)
                if seg.size:
                    self.segments.append(seg)
                    self._seg_of[seg.fams] = seg
                    base += seg.size
        self.ncols = base
        if self.ncols == 0:
            raise ValueError("empty window: no unknowns")

        # cells_by_parity[p][input fams][input indices] -> ((col, famOut, t2), ...)
        self.cells_by_parity: Tuple[Dict, Dict] = ({}, {})
        for seg in self.segments:
            table = self.cells_by_parity[seg.p_phi].setdefault(seg.fams[:-1], {})
            fo = seg.fams[-1]
            if seg.central_out:
                for combo, col in seg.central_cells.items():
                    table.setdefault(combo, []).append((col, fo, 0))
            else:
                nk = len(seg.k2list)
                if self.arity == 2:
                    la, lb = len(seg.idx[0]), len(seg.idx[1])
                    for ia, a2 in enumerate(seg.idx[0]):
                        for ib, b2 in enumerate(seg.idx[1]):
                            off = seg.base + (ia * lb + ib) * nk
                            lst = table.setdefault((a2, b2), [])
                            for ik, k2 in enumerate(seg.k2list):
                                lst.append((off + ik, fo, a2 + b2 + k2))
                else:
                    for ia, a2 in enumerate(seg.idx[0]):
                        off = seg.base + ia * nk
                        lst = table.setdefault((a2,), [])
                        for ik, k2 in enumerate(seg.k2list):
                            lst.append((off + ik, fo, a2 + k2))

        self._bases = [seg.base for seg in self.segments]

    # -- column <-> cell key ------------------------------------------------

    def segment_of_col(self, col: int) -> _Segment:
        import bisect

        i = bisect.bisect_right(self._bases, col) - 1
        return self.segments[i]

    def key_of(self, col: int) -> Tuple:
        """(famA, a2, [famB, b2,] famOut, t2) for a column."""
        seg = self.segment_of_col(col)
        off = col - seg.base
        if seg.central_out:
            for combo, c in seg.central_cells.items():
                if c == col:
                    if self.arity == 2:
                        return (seg.fams[0], combo[0], seg.fams[1], combo[1], seg.fams[2], 0)
                    return (seg.fams[0], combo[0], seg.fams[1], 0)
            raise ValueError(f"column {col} not found")
        nk = len(seg.k2list)
        ik = off % nk
        off //= nk
        if self.arity == 2:
            lb = len(seg.idx[1])
            ib = off % lb
            ia = off // lb
            a2, b2 = seg.idx[0][ia], seg.idx[1][ib]
            return (seg.fams[0], a2, seg.fams[1], b2, seg.fams[2], a2 + b2 + seg.k2list[ik])
        a2 = seg.idx[0][off]
        return (seg.fams[0], a2, seg.fams[1], a2 + seg.k2list[ik])

    def col_of(self, key: Tuple) -> Optional[int]:
        """Column of a cell key, or None if outside the window."""
        if self.arity == 2:
            fa, a2, fb, b2, fo, t2 = key
            seg = self._seg_of.get((fa, fb, fo))
            if seg is None:
                return None
            if seg.central_out:
                return seg.central_cells.get((a2, b2))
            ia = seg.pos[0].get(a2)
            ib = seg.pos[1].get(b2)
            if ia is None or ib is None:
                return None
            k2 = t2 - a2 - b2
            try:
                ik = seg.k2list.index(k2)
            except ValueError:
                return None
            return seg.base + (ia * len(seg.idx[1]) + ib) * len(seg.k2list) + ik
        fa, a2, fo, t2 = key
        seg = self._seg_of.get((fa, fo))
        if seg is None:
            return None
        if seg.central_out:
            return seg.central_cells.get((a2,))
        ia = seg.pos[0].get(a2)
        if ia is None:
            return None
        try:
            ik = seg.k2list.index(t2 - a2)
        except ValueError:
            return None
        return seg.base + ia * len(seg.k2list) + ik

    def shift_of_col(self, col: int) -> int:
        key = self.key_of(col)
        if self.arity == 2:
            return key[5] - key[1] - key[3]
        return key[3] - key[1]

    def parity_of_col(self, col: int) -> int:
        return self.segment_of_col(col).p_phi

    def parity_columns(self, p: int) -> List[int]:
        out: List[int] = []
        for seg in self.segments:
            if seg.p_phi == p:
                out.extend(range(seg.base, seg.base + seg.size))
        return out

    def interior_columns(self, nint2: Optional[int] = None) -> List[int]:
        """Columns whose input indices all lie in the interior slice."""
        nint2 = self.window.nint2 if nint2 is None else nint2
        out: List[int] = []
        for seg in self.segments:
            if seg.central_out:
                for combo, col in seg.central_cells.items():
                    if all(abs(i2) <= nint2 for i2 in combo):
                        out.append(col)
                continue
            nk = len(seg.k2list)
            if self.arity == 2:
                lb = len(seg.idx[1])
                for ia, a2 in enumerate(seg.idx[0]):
                    if abs(a2) > nint2:
                        continue
                    for ib, b2 in enumerate(seg.idx[1]):
                        if abs(b2) > nint2:
                            continue
                        off = seg.base + (ia * lb + ib) * nk
                        out.extend(range(off, off + nk))
            else:
                for ia, a2 in enumerate(seg.idx[0]):
                    if abs(a2) <= nint2:
                        off = seg.base + ia * nk
                        out.extend(range(off, off + nk))
        return sorted(out)

    def describe_col(self, col: int) -> str:
        key = self.key_of(col)
        if self.arity == 2:
            fa, a2, fb, b2, fo, t2 = key
            return (f"phi({fa}[{index_str(a2)}],{fb}[{index_str(b2)}])"
                    f"->{fo}[{index_str(t2)}]")
        fa, a2, fo, t2 = key
        return f"gamma({fa}[{index_str(a2)}])->{fo}[{index_str(t2)}]"

    def fold(self, p: int, eps: int) -> "_Folding":
        """Folding of paired cells under phi(x,y) = eps (-1)^{|x||y|} phi(y,x)."""
        if self.arity != 2:
            raise ValueError("folding applies to bilinear unknowns only")
        hit = self._fold_cache.get((p, eps))
        if hit is None:
            hit = _Folding(self, p, eps)
            self._fold_cache[(p, eps)] = hit
        return hit


class _Folding:
    """Quotient of the bilinear cell space by a symmetry condition."""

    def __init__(self, unk: MapUnknowns, p: int, eps: int):
        self.unk = unk
        target: Dict[int, int] = {}
        sign: Dict[int, int] = {}
        columns: List[int] = []
        alg = unk.alg
        for seg in unk.segments:
            if seg.p_phi != p:
                continue
            fa, fb = seg.fams[0], seg.fams[1]
            pa = alg.families[fa].parity
            pb = alg.families[fb].parity
            sig = eps * _sgn(pa & pb)
            for col in range(seg.base, seg.base + seg.size):
                key = unk.key_of(col)
                partner = unk.col_of((key[2], key[3], key[0], key[1], key[4], key[5]))
                if partner == col:
                    if sig == 1:
                        target[col], sign[col] = col, 1
                        columns.append(col)
                    # sig == -1: the diagonal cell is forced to zero
                elif partner is not None:
                    if col < partner:
                        target[col], sign[col] = col, 1
                        columns.append(col)
                    else:
                        target[col], sign[col] = partner, sig
        self.target = target
        self.sign = sign
        self.columns = columns

    def fold_row(self, row: Row) -> Row:
        out: Row = {}
        target = self.target
        sign = self.sign
        for col, v in row.items():
            t = target.get(col)
            if t is None:
                continue
            if sign[col] < 0:
                v = -v
            s = out.get(t, ZERO) + v
            if s:
                out[t] = s
            else:
                del out[t]
        return out

    def expand(self, folded: Row) -> Row:
        out: Row = {}
        for col, t in self.target.items():
            v = folded.get(t)
            if v:
                out[col] = -v if self.sign[col] < 0 else v
        return out


# -- queries ----------------------------------------------------------------


@dataclass(frozen=True)
class BiderQuery:
    """A super-biderivation problem: algebra, target module, parity, symmetry."""

    algebra: CatalogKey
    module: Optional[CatalogKey]  # None selects the adjoint module
    parity: str
    symmetry: str
    window: Window

    def __post_init__(self):
        if self.parity not in PARITY_CHOICES:
            raise ValueError(f"parity must be one of {PARITY_CHOICES}")
        if self.symmetry not in SYMMETRY_CHOICES:
            raise ValueError(f"symmetry must be one of {SYMMETRY_CHOICES}")

    def resolve(self) -> Tuple[AlgebraSpec, ModuleSpec]:
        alg = get_algebra(self.algebra)
        if self.module is None:
            return alg, adjoint_module(alg)
        return alg, get_module(self.module, self.algebra)

    def label(self) -> str:
        mod = self.module.label() if self.module else "adjoint"
        return (f"bider({self.algebra.label()}, {mod}, parity={self.parity}, "
                f"symmetry={self.symmetry}, N={self.window.n_str}, "
                f"K={self.window.k_str})")


# -- generator tables -------------------------------------------------------


class _GenTables:
    """Cached bracket and action structure constants over plain tuples."""

    def __init__(self, alg: AlgebraSpec, mod: ModuleSpec, n2: int):
        self.alg = alg
        self.mod = mod
        self.gens: List[Tuple[str, int, int, bool]] = []
        for g in alg.gens_within(n2):
            fam = alg.families[g.family]
            self.gens.append((g.family, g.index, fam.parity, fam.central))
        self._brk: Dict[Tuple[str, int, str, int], Tuple] = {}
        self._act: Dict[Tuple[str, int, str, int], Tuple] = {}

    def bracket(self, fa: str, a2: int, fb: str, b2: int) -> Tuple:
        key = (fa, a2, fb, b2)
        hit = self._brk.get(key)
        if hit is None:
            hit = tuple(
                (g.family, g.index, c)
                for g, c in self.alg.bracket_pairs(GenId(fa, a2), GenId(fb, b2))
            )
            self._brk[key] = hit
        return hit

    def act(self, fx: str, x2: int, fv: str, v2: int) -> Tuple:
        key = (fx, x2, fv, v2)
        hit = self._act.get(key)
        if hit is None:
            hit = tuple(
                (g.family, g.index, c)
                for g, c in self.mod.act_pairs(GenId(fx, x2), GenId(fv, v2))
            )
            self._act[key] = hit
        return hit


def _acc(rows: Dict, out_key: Tuple[str, int], col: int, v) -> None:
    r = rows.get(out_key)
    if r is None:
        rows[out_key] = {col: v}
        return
    s = r.get(col, ZERO) + v
    if s:
        r[col] = s
    else:
        del r[col]


def _iter_first_identity(
    tables: _GenTables, cells: Dict, p: int, n2: int
) -> Iterator[Tuple[int, Row]]:
    """Rows of phi([x,y],z) - s1 x.phi(y,z) + s2 y.phi(x,z) = 0.

    Enumerates unordered {x, y} (the swapped triple gives a scalar multiple
    of the same row) against every z.  Yields (k2, row).
    """
    gens = tables.gens
    bracket = tables.bracket
    act = tables.act
    empty: Dict = {}
    for i, (fa, a2, pa, ca) in enumerate(gens):
        for j in range(i, len(gens)):
            fb, b2, pb, cb = gens[j]
            if ca and cb:
                continue
            if abs(a2 + b2) > n2:
                continue
            if i == j and pa == 0:
                continue
            bxy = bracket(fa, a2, fb, b2)
            m1 = -_sgn(p & pa)  # -(-1)^{p|x|}
            m2 = _sgn(pb & (p ^ pa))  # +(-1)^{|y|(p+|x|)}
            for fc, c2, pc, cc in gens:
                rows: Dict = {}
                for fw, w2, cw in bxy:
                    lst = cells.get((fw, fc), empty).get((w2, c2))
                    if lst:
                        for col, fo, t2 in lst:
                            _acc(rows, (fo, t2), col, cw)
                if not ca:
                    lst = cells.get((fb, fc), empty).get((b2, c2))
                    if lst:
                        for col, fo, t2 in lst:
                            for fo2, t22, cv in act(fa, a2, fo, t2):
                                _acc(rows, (fo2, t22), col, m1 * cv)
                if not cb:
                    lst = cells.get((fa, fc), empty).get((a2, c2))
                    if lst:
                        for col, fo, t2 in lst:
                            for fo2, t22, cv in act(fb, b2, fo, t2):
                                _acc(rows, (fo2, t22), col, m2 * cv)
                s = a2 + b2 + c2
                for (fo, t2), row in rows.items():
                    if row:
                        yield (t2 - s, row)


def _iter_second_identity(
    tables: _GenTables, cells: Dict, p: int, n2: int
) -> Iterator[Tuple[int, Row]]:
    """Rows of phi(x,[y,z]) - s3 y.phi(x,z) + s4 z.phi(x,y) = 0.

    Enumerates every x against unordered {y, z}.  Yields (k2, row).
    """
    gens = tables.gens
    bracket = tables.bracket
    act = tables.act
    empty: Dict = {}
    for j, (fb, b2, pb, cb) in enumerate(gens):
        for jj in range(j, len(gens)):
            fc, c2, pc, cc = gens[jj]
            if cb and cc:
                continue
            if abs(b2 + c2) > n2:
                continue
            if j == jj and pb == 0:
                continue
            byz = bracket(fb, b2, fc, c2)
            for fa, a2, pa, ca in gens:
                m3 = -_sgn(pb & (p ^ pa))  # -(-1)^{(p+|x|)|y|}
                m4 = _sgn(pc & (p ^ pa ^ pb))  # +(-1)^{|z|(p+|x|+|y|)}
                rows: Dict = {}
                for fw, w2, cw in byz:
                    lst = cells.get((fa, fw), empty).get((a2, w2))
                    if lst:
                        for col, fo, t2 in lst:
                            _acc(rows, (fo, t2), col, cw)
                if not cb:
                    lst = cells.get((fa, fc), empty).get((a2, c2))
                    if lst:
                        for col, fo, t2 in lst:
                            for fo2, t22, cv in act(fb, b2, fo, t2):
                                _acc(rows, (fo2, t22), col, m3 * cv)
                if not cc:
                    lst = cells.get((fa, fb), empty).get((a2, b2))
                    if lst:
                        for col, fo, t2 in lst:
                            for fo2, t22, cv in act(fc, c2, fo, t2):
                                _acc(rows, (fo2, t22), col, m4 * cv)
                s = a2 + b2 + c2
                for (fo, t2), row in rows.items():
                    if row:
                        yield (t2 - s, row)


def _iter_symmetry_rows(unk: MapUnknowns, p: int, eps: int) -> Iterator[Tuple[int, Row]]:
    """Rows phi(x,y) - eps (-1)^{|x||y|} phi(y,x) = 0 over in-window cells."""
    alg = unk.alg
    for seg in unk.segments:
        if seg.p_phi != p:
            continue
        fa, fb = seg.fams[0], seg.fams[1]
        if fa > fb:
            continue  # handled from the partner segment
        pa = alg.families[fa].parity
        pb = alg.families[fb].parity
        sig = eps * _sgn(pa & pb)
        for col in range(seg.base, seg.base + seg.size):
            key = unk.key_of(col)
            if fa == fb and key[1] > key[3]:
                continue
            partner = unk.col_of((key[2], key[3], key[0], key[1], key[4], key[5]))
            k2 = key[5] - key[1] - key[3]
            if partner == col:
                if sig == -1:
                    yield (k2, {col: Q(2)})
                continue
            if partner is None:
                continue
            yield (k2, {col: Q(1), partner: Q(-sig)})


def _iter_centroid_rows(tables: _GenTables, cells: Dict, n2: int) -> Iterator[Tuple[int, Row]]:
    """Rows of gamma([x,y]) - x.gamma(y) = 0 over ordered in-window pairs."""
    gens = tables.gens
    bracket = tables.bracket
    act = tables.act
    empty: Dict = {}
    for fa, a2, pa, ca in gens:
        if ca:
            continue  # [C,y] = 0 and C acts as zero: empty row
        for fb, b2, pb, cb in gens:
            if abs(a2 + b2) > n2:
                continue
            rows: Dict = {}
            for fw, w2, cw in bracket(fa, a2, fb, b2):
                lst = cells.get((fw,), empty).get((w2,))
                if lst:
                    for col, fo, t2 in lst:
                        _acc(rows, (fo, t2), col, cw)
            lst = cells.get((fb,), empty).get((b2,))
            if lst:
                for col, fo, t2 in lst:
                    for fo2, t22, cv in act(fa, a2, fo, t2):
                        _acc(rows, (fo2, t22), col, -cv)
            s = a2 + b2
            for (fo, t2), row in rows.items():
                if row:
                    yield (t2 - s, row)


def _merged_cells(unk: MapUnknowns) -> Dict:
    """Cells of both parity classes in one table (centroid has no parity split)."""
    merged: Dict = {}
    for p in (EVEN, ODD):
        for fams, table in unk.cells_by_parity[p].items():
            dst = merged.setdefault(fams, {})
            for combo, lst in table.items():
                dst.setdefault(combo, []).extend(lst)
    return merged


# -- public system builders -------------------------------------------------


def build_centroid_system(
    alg: AlgebraSpec, mod: ModuleSpec, window: Window
) -> Tuple[MapUnknowns, Dict[int, SparseMatrix]]:
    """Constraint blocks (by doubled degree shift) for the centroid equation."""
    unk = MapUnknowns(alg, mod, window, arity=1)
    tables = _GenTables(alg, mod, window.n2)
    blocks: Dict[int, List[Row]] = {}
    for k2, row in _iter_centroid_rows(tables, _merged_cells(unk), window.n2):
        blocks.setdefault(k2, []).append(row)
    return unk, {k2: SparseMatrix(rows, unk.ncols) for k2, rows in sorted(blocks.items())}


@dataclass
class BiderSystem:
    """Per-parity constraint blocks of a super-biderivation problem."""

    parity: int
    unknowns: MapUnknowns
    blocks: Dict[int, SparseMatrix]

    @property
    def matrix(self) -> SparseMatrix:
        rows: List[Row] = []
        for k2 in sorted(self.blocks):
            rows.extend(self.blocks[k2].rows)
        return SparseMatrix(rows, self.unknowns.ncols)


def build_bider_system(query: BiderQuery) -> List[BiderSystem]:
    """Full windowed systems (both identities plus symmetry rows).

    Returns one system per homogeneous parity of the map; ``parity="both"``
    yields two.
    """
    alg, mod = query.resolve()
    unk = MapUnknowns(alg, mod, query.window, arity=2)
    tables = _GenTables(alg, mod, query.window.n2)
    out = []
    for p in _PARITY_OF[query.parity]:
        blocks: Dict[int, List[Row]] = {}
        cells = unk.cells_by_parity[p]
        for k2, row in _iter_first_identity(tables, cells, p, query.window.n2):
            blocks.setdefault(k2, []).append(row)
        for k2, row in _iter_second_identity(tables, cells, p, query.window.n2):
            blocks.setdefault(k2, []).append(row)
        if query.symmetry != "none":
            eps = 1 if query.symmetry == "symmetric" else -1
            for k2, row in _iter_symmetry_rows(unk, p, eps):
                blocks.setdefault(k2, []).append(row)
        out.append(BiderSystem(
            p, unk,
            {k2: SparseMatrix(rows, unk.ncols) for k2, rows in sorted(blocks.items())},
        ))
    return out


# -- solved spaces ----------------------------------------------------------


def _vector_block(unk: MapUnknowns, v: Row) -> Tuple[int, int]:
    """(parity, k2) of a solution vector; asserts single-block support."""
    keys = {(unk.parity_of_col(c), unk.shift_of_col(c)) for c in v}
    if len(keys) != 1:
        raise AssertionError("solution vector spans several degree-shift blocks")
    return keys.pop()


def _sorted_basis(unk: MapUnknowns, vectors: Iterable[Row]) -> List[Row]:
    return sorted(vectors, key=lambda v: (_vector_block(unk, v)[1],
                                          _vector_block(unk, v)[0], min(v)))


@dataclass
class MapSpace:
    """A solved space of maps over a cell namespace."""

    unknowns: MapUnknowns
    solution: SolutionSpace

    @property
    def dimension(self) -> int:
        return self.solution.dimension

    def interior(self, nint2: Optional[int] = None) -> SolutionSpace:
        return project(self.solution, self.unknowns.interior_columns(nint2))

    @property
    def interior_dimension(self) -> int:
        return self.interior().dimension

    def block_dimensions(self) -> Dict[Tuple[int, int], int]:
        out: Dict[Tuple[int, int], int] = {}
        for v in self.solution.basis:
            key = _vector_block(self.unknowns, v)
            out[key] = out.get(key, 0) + 1
        return out


@dataclass
class CentroidSpace(MapSpace):
    algebra_key: Optional[CatalogKey] = None
    module_key: Optional[CatalogKey] = None


@dataclass
class BiderSpace(MapSpace):
    query: Optional[BiderQuery] = None


def solve_centroid(
    alg: AlgebraSpec,
    mod: ModuleSpec,
    window: Window,
    algebra_key: Optional[CatalogKey] = None,
    module_key: Optional[CatalogKey] = None,
) -> CentroidSpace:
    """Basis of windowed solutions of gamma([x,y]) = x.gamma(y)."""
    unk = MapUnknowns(alg, mod, window, arity=1)
    tables = _GenTables(alg, mod, window.n2)
    red = reduce_rows(
        row for _, row in _iter_centroid_rows(tables, _merged_cells(unk), window.n2)
    )
    basis = red.nullspace_basis(range(unk.ncols))
    space = SolutionSpace(unk.ncols, _sorted_basis(unk, basis))
    return CentroidSpace(unk, space, algebra_key, module_key)


_BIDER_MEMO: Dict[Tuple, BiderSpace] = {}


def solve_bider(query: BiderQuery, blockwise: bool = False) -> BiderSpace:
    """Solve a super-biderivation problem on its window.

    The basis is deterministic: blocks by ascending degree shift, vectors
    normalized to leading coefficient 1.  Results are memoized per query.
    """
    memo_key = (query, blockwise)
    hit = _BIDER_MEMO.get(memo_key)
    if hit is not None:
        return hit
    alg, mod = query.resolve()
    unk = MapUnknowns(alg, mod, query.window, arity=2)
    tables = _GenTables(alg, mod, query.window.n2)
    n2 = query.window.n2
    vectors: List[Row] = []
    for p in _PARITY_OF[query.parity]:
        cells = unk.cells_by_parity[p]
        if not cells:
            continue
        if query.symmetry in ("symmetric", "skew"):
            eps = 1 if query.symmetry == "symmetric" else -1
            fold = unk.fold(p, eps)
            row_iter = _iter_first_identity(tables, cells, p, n2)
            if blockwise:
                folded = _solve_blockwise(
                    ((k2, fold.fold_row(r)) for k2, r in row_iter),
                    fold.columns,
                    lambda col: unk.shift_of_col(col),
                )
            else:
                red = reduce_rows(fold.fold_row(row) for _, row in row_iter)
                folded = red.nullspace_basis(fold.columns)
            vectors.extend(_normalize_row(fold.expand(v)) for v in folded)
        else:
            row_iter = itertools.chain(
                _iter_first_identity(tables, cells, p, n2),
                _iter_second_identity(tables, cells, p, n2),
            )
            universe = unk.parity_columns(p)
            if blockwise:
                vectors.extend(
                    _solve_blockwise(row_iter, universe, lambda col: unk.shift_of_col(col))
                )
            else:
                red = reduce_rows(row for _, row in row_iter)
                vectors.extend(red.nullspace_basis(universe))
    space = SolutionSpace(unk.ncols, _sorted_basis(unk, vectors))
    result = BiderSpace(unk, space, query)
    _BIDER_MEMO[memo_key] = result
    return result


def _normalize_row(v: Row) -> Row:
    if not v:
        return v
    lead = v[min(v)]
    if lead == 1:
        return v
    inv = 1 / lead
    return {c: val * inv for c, val in v.items()}


def _solve_blockwise(rows: Iterable[Tuple[int, Row]], universe: Sequence[int],
                     shift_of) -> List[Row]:
    """Independent per-shift solves; used to validate block independence."""
    by_block: Dict[int, List[Row]] = {}
    for k2, row in rows:
        if row:
            by_block.setdefault(k2, []).append(row)
    cols_by_block: Dict[int, List[int]] = {}
    for col in universe:
        cols_by_block.setdefault(shift_of(col), []).append(col)
    out: List[Row] = []
    for k2 in sorted(cols_by_block):
        red = reduce_rows(by_block.get(k2, ()))
        out.extend(red.nullspace_basis(cols_by_block[k2]))
    return out


def check_solutions(query: BiderQuery, vectors: Sequence[Row]) -> Optional[str]:
    """Substitute vectors into the full row set; returns a witness or None.

    This re-derives every instantiated row (both identities and the symmetry
    rows) and checks exact vanishing, independently of how the vectors were
    computed.
    """
    alg, mod = query.resolve()
    unk = MapUnknowns(alg, mod, query.window, arity=2)
    tables = _GenTables(alg, mod, query.window.n2)
    for p in _PARITY_OF[query.parity]:
        cells = unk.cells_by_parity[p]
        pcols = set(unk.parity_columns(p))
        iters: List[Iterator[Tuple[int, Row]]] = [
            _iter_first_identity(tables, cells, p, query.window.n2),
            _iter_second_identity(tables, cells, p, query.window.n2),
        ]
        if query.symmetry != "none":
            eps = 1 if query.symmetry == "symmetric" else -1
            iters.append(_iter_symmetry_rows(unk, p, eps))
        for it in iters:
            for _, row in it:
                for i, v in enumerate(vectors):
                    acc = ZERO
                    for c, a in row.items():
                        x = v.get(c)
                        if x is not None and c in pcols:
                            acc += a * x
                    if acc:
                        return (f"vector {i} violates a parity-{p} row: "
                                f"{ {unk.describe_col(c): str(a) for c, a in row.items()} }")
    return None


def decompose(full: BiderSpace) -> Tuple[BiderSpace, BiderSpace]:
    """Split a symmetry-unconstrained space into symmetric and skew parts.

    phi_{+/-}(x,y) = (phi(x,y) +/- (-1)^{|x||y|} phi(y,x)) / 2.  Both parts
    are verified to satisfy the derivation identities; the parts intersect
    trivially and sum back to the full space.
    """
    if full.query is None or full.query.symmetry != "none":
        raise ValueError("decompose expects a space solved with symmetry='none'")
    unk = full.unknowns
    alg = unk.alg
    half = Q(1, 2)
    sym_vecs: List[Row] = []
    skew_vecs: List[Row] = []
    for v in full.solution.basis:
        plus: Row = {}
        minus: Row = {}
        for col, val in v.items():
            key = unk.key_of(col)
            pa = alg.families[key[0]].parity
            pb = alg.families[key[2]].parity
            partner = unk.col_of((key[2], key[3], key[0], key[1], key[4], key[5]))
            flipped = _sgn(pa & pb) * v.get(partner, ZERO) if partner is not None else ZERO
            s = (val + flipped) * half
            d = (val - flipped) * half
            if s:
                plus[col] = s
            if d:
                minus[col] = d
        if plus:
            sym_vecs.append(plus)
        if minus:
            skew_vecs.append(minus)
    sym = space_from_vectors(unk.ncols, sym_vecs)
    skew = space_from_vectors(unk.ncols, skew_vecs)
    sym_q = BiderQuery(full.query.algebra, full.query.module, full.query.parity,
                       "symmetric", full.query.window)
    skew_q = BiderQuery(full.query.algebra, full.query.module, full.query.parity,
                        "skew", full.query.window)
    for q, s in ((sym_q, sym), (skew_q, skew)):
        witness = check_solutions(q, s.basis)
        if witness:
            raise AssertionError(f"decomposed part fails the identities: {witness}")
    # trivial intersection and full span
    joint = space_from_vectors(unk.ncols, list(sym.basis) + list(skew.basis))
    if joint.dimension != sym.dimension + skew.dimension:
        raise AssertionError("symmetric and skew parts intersect nontrivially")
    for v in full.solution.basis:
        if not joint.contains(v):
            raise AssertionError("parts do not span the full space")
    return (
        BiderSpace(unk, SolutionSpace(unk.ncols, _sorted_basis(unk, sym.basis)), sym_q),
        BiderSpace(unk, SolutionSpace(unk.ncols, _sorted_basis(unk, skew.basis)), skew_q),
    )


# -- commutative post-Lie products -------------------------------------------


@dataclass
class ObstructionEquation:
    """One scalar equation from [x,y] o z = x o (y o z) - (-1)^{|x||y|} y o (x o z)."""

    triple: Tuple[str, str, str]
    out: Tuple[str, int]
    linear: Dict[int, "Q"]
    quadratic: Dict[Tuple[int, int], "Q"]


@dataclass
class PostLieObstruction:
    """Instantiated compatibility equations for a parameterized product."""

    parameters: List[str]
    equations: List[ObstructionEquation]
    quadratic_zero: bool
    triples_used: int
    triples_skipped: int


@dataclass
class PostLieResult:
    """Outcome of the commutative post-Lie solve for one algebra."""

    algebra_key: CatalogKey
    window: Window
    status: str  # "linear" | "nonlinear"
    bider: BiderSpace
    obstruction: PostLieObstruction
    parameter_space: Optional[SolutionSpace]
    interior_dimension: Optional[int]


def _param_names(space: BiderSpace) -> List[str]:
    unk = space.unknowns
    names: List[str] = []
    seen: Dict[str, int] = {}
    for v in space.solution.basis:
        key = unk.key_of(min(v))
        k2 = key[5] - key[1] - key[3]
        base = f"mu[({key[0]},{key[2]})->{key[4]};k={index_str(k2)}]"
        n = seen.get(base, 0)
        seen[base] = n + 1
        names.append(base if n == 0 else f"{base}#{n + 1}")
    return names


def postlie_obstruction(space: BiderSpace, window: Window) -> PostLieObstruction:
    """Equations of the second post-Lie axiom for x o y = sum_i t_i phi_i(x,y).

    Commutativity and the third axiom hold for any parameters because each
    phi_i is a symmetric super-biderivation; only the second axiom
    constrains the parameters.  Quadratic coefficients are expanded exactly;
    the obstruction is declared linear only if every one of them is the
    scalar zero.
    """
    q = space.query
    if q is None or q.symmetry != "symmetric" or q.module is not None:
        raise ValueError("post-Lie obstruction needs a symmetric adjoint space")
    alg, mod = q.resolve()
    unk = space.unknowns
    basis = space.solution.basis
    nb = len(basis)
    names = _param_names(space)
    if nb == 0:
        return PostLieObstruction([], [], True, 0, 0)

    tables = _GenTables(alg, mod, window.n2)
    gens = tables.gens
    n2 = window.n2
    cells = _merged_cells(unk)
    empty: Dict = {}

    # evaluation of basis vector i at a generator pair, as ((fam, t2, Q), ...)
    eval_cache: Dict[Tuple[int, str, int, str, int], Tuple] = {}

    def ev(i: int, fu: str, u2: int, fv: str, v2: int) -> Optional[Tuple]:
        ck = (i, fu, u2, fv, v2)
        hit = eval_cache.get(ck)
        if hit is None:
            if abs(u2) > n2 or abs(v2) > n2:
                return None
            vec = basis[i]
            comp = []
            lst = cells.get((fu, fv), empty).get((u2, v2))
            if lst:
                for col, fo, t2 in lst:
                    cv = vec.get(col)
                    if cv:
                        comp.append((fo, t2, cv))
            hit = tuple(comp)
            eval_cache[ck] = hit
        return hit

    equations: List[ObstructionEquation] = []
    quadratic_zero = True
    used = 0
    skipped = 0
    for i1, (fa, a2, pa, ca) in enumerate(gens):
        for j1 in range(i1, len(gens)):
            fb, b2, pb, cb = gens[j1]
            if i1 == j1 and pa == 0:
                continue
            if abs(a2 + b2) > n2:
                skipped += 1
                continue
            sxy = _sgn(pa & pb)
            bxy = tables.bracket(fa, a2, fb, b2)
            for fc, c2, pc, cc in gens:
                e_yz = [ev(j, fb, b2, fc, c2) for j in range(nb)]
                e_xz = [ev(j, fa, a2, fc, c2) for j in range(nb)]
                feasible = True
                for comp in itertools.chain(e_yz, e_xz):
                    if comp:
                        if any(abs(t2) > n2 for _, t2, _ in comp):
                            feasible = False
                            break
                if not feasible:
                    skipped += 1
                    continue
                used += 1
                lin: Dict[Tuple[str, int], Dict[int, Q]] = {}
                quad: Dict[Tuple[str, int], Dict[Tuple[int, int], Q]] = {}
                for fw, w2, cw in bxy:
                    for i in range(nb):
                        comp = ev(i, fw, w2, fc, c2)
                        if comp:
                            for fo, t2, cv in comp:
                                d = lin.setdefault((fo, t2), {})
                                s = d.get(i, ZERO) + cw * cv
                                if s:
                                    d[i] = s
                                else:
                                    del d[i]
                # - x o (y o z)
                for j in range(nb):
                    comp_j = e_yz[j]
                    if not comp_j:
                        continue
                    for fg, g2, cg in comp_j:
                        for i in range(nb):
                            comp_i = ev(i, fa, a2, fg, g2)
                            if comp_i:
                                pkey = (i, j) if i <= j else (j, i)
                                for fo, t2, cv in comp_i:
                                    d = quad.setdefault((fo, t2), {})
                                    s = d.get(pkey, ZERO) - cg * cv
                                    if s:
                                        d[pkey] = s
                                    else:
                                        del d[pkey]
                # + (-1)^{|x||y|} y o (x o z)
                for j in range(nb):
                    comp_j = e_xz[j]
                    if not comp_j:
                        continue
                    for fg, g2, cg in comp_j:
                        for i in range(nb):
                            comp_i = ev(i, fb, b2, fg, g2)
                            if comp_i:
                                pkey = (i, j) if i <= j else (j, i)
                                for fo, t2, cv in comp_i:
                                    d = quad.setdefault((fo, t2), {})
                                    s = d.get(pkey, ZERO) + sxy * cg * cv
                                    if s:
                                        d[pkey] = s
                                    else:
                                        del d[pkey]
                outs = set(lin) | set(quad)
                for out_key in outs:
                    l = lin.get(out_key, {})
                    qd = quad.get(out_key, {})
                    if not l and not qd:
                        continue
                    if qd:
                        quadratic_zero = False
                    triple = (
                        f"{fa}[{index_str(a2)}]",
                        f"{fb}[{index_str(b2)}]",
                        f"{fc}[{index_str(c2)}]",
                    )
                    equations.append(ObstructionEquation(triple, out_key, l, qd))
    return PostLieObstruction(names, equations, quadratic_zero, used, skipped)


def solve_postlie(algebra_key: CatalogKey, window: Window) -> PostLieResult:
    """Commutative post-Lie products on a catalog algebra, via its symmetric
    super-biderivations and the instantiated compatibility equations."""
    query = BiderQuery(algebra_key, None, "both", "symmetric", window)
    space = solve_bider(query)
    obstruction = postlie_obstruction(space, window)
    if not obstruction.quadratic_zero:
        return PostLieResult(algebra_key, window, "nonlinear", space, obstruction,
                             None, None)
    nb = space.dimension
    rows = [dict(eq.linear) for eq in obstruction.equations if eq.linear]
    tspace = nullspace(SparseMatrix(rows, nb)) if nb else SolutionSpace(0, [])
    induced: List[Row] = []
    for t in tspace.basis:
        w: Row = {}
        for i, coef in t.items():
            for col, val in space.solution.basis[i].items():
                s = w.get(col, ZERO) + coef * val
                if s:
                    w[col] = s
                else:
                    del w[col]
        if w:
            induced.append(w)
    interior_cols = space.unknowns.interior_columns(window.nint2)
    interior_dim = project(
        space_from_vectors(space.unknowns.ncols, induced), interior_cols
    ).dimension
    return PostLieResult(algebra_key, window, "linear", space, obstruction,
                         tspace, interior_dim)
