"""Contingency-matrix cell labels, their dominance order, and stabilization.

Cells of the double-filtration stack are labeled by matrices of classes
with prescribed row and column sums.  The closure order compares corner
sums; Hasse diagrams are the transitive reduction of that order on a
finite windowed label set.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from functools import lru_cache

from .kclass import (
    HALF,
    Heart,
    KClass,
    Window,
    d_vec,
    d_vec_inv,
    euler_form,
    heart_positive,
)

__all__ = [
    "Seq",
    "CMatrix",
    "CornerTable",
    "WindowedCells",
    "HasseDiagram",
    "StabilizationResult",
    "seq_enumerate",
    "w_enumerate",
    "w_enumerate_windowed",
    "order_leq",
    "order_relation",
    "positive_or_zero",
    "stratum_dim",
    "stratum_rank",
    "hasse",
    "approx_n0",
]


@dataclass(frozen=True)
class Seq:
    """Ordered composition of a class into nonzero heart-positive parts."""

    parts: tuple[KClass, ...]
    heart: Heart = HALF

    def __post_init__(self):
        if not self.parts:
            raise ValueError("sequence needs at least one part")
        for p in self.parts:
            if not heart_positive(p, self.heart):
                raise ValueError(f"part {p} is not positive for {self.heart}")

    @property
    def total(self) -> KClass:
        t = KClass(0, 0)
        for p in self.parts:
            t = t + p
        return t

    def __len__(self) -> int:
        return len(self.parts)

    def is_klr(self) -> bool:
        return all(p == KClass(0, 1) or p.r == 1 for p in self.parts)

    def to_json(self) -> list[list[int]]:
        return [p.to_json() for p in self.parts]


@dataclass(frozen=True, order=True)
class CMatrix:
    """s x l grid of classes; zero entries are allowed."""

    entries: tuple[tuple[KClass, ...], ...]

    def __post_init__(self):
        if not self.entries or not self.entries[0]:
            raise ValueError("matrix must be nonempty")
        width = len(self.entries[0])
        if any(len(row) != width for row in self.entries):
            raise ValueError("ragged matrix")

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self.entries), len(self.entries[0]))

    def row_sums(self) -> tuple[KClass, ...]:
        out = []
        for row in self.entries:
            t = KClass(0, 0)
            for e in row:
                t = t + e
            out.append(t)
        return tuple(out)

    def col_sums(self) -> tuple[KClass, ...]:
        s, l = self.shape
        out = []
        for j in range(l):
            t = KClass(0, 0)
            for i in range(s):
                t = t + self.entries[i][j]
            out.append(t)
        return tuple(out)

    @property
    def total(self) -> KClass:
        t = KClass(0, 0)
        for row in self.entries:
            for e in row:
                t = t + e
        return t

    def transpose(self) -> "CMatrix":
        s, l = self.shape
        return CMatrix(tuple(tuple(self.entries[i][j] for i in range(s)) for j in range(l)))

    def corner(self, i: int, j: int) -> KClass:
        """Sum of the upper-left i x j block (1-indexed; 0 gives zero)."""
        t = KClass(0, 0)
        for i2 in range(i):
            for j2 in range(j):
                t = t + self.entries[i2][j2]
        return t

    def stable_hash(self) -> str:
        blob = json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha1(blob.encode()).hexdigest()[:10]

    def to_json(self) -> dict:
        s, l = self.shape
        return {
            "rows": s,
            "cols": l,
            "entries": [[e.to_json() for e in row] for row in self.entries],
        }

    @staticmethod
    def from_json(data) -> "CMatrix":
        entries = tuple(
            tuple(KClass.from_json(e) for e in row) for row in data["entries"]
        )
        m = CMatrix(entries)
        if "rows" in data and (int(data["rows"]), int(data["cols"])) != m.shape:
            raise ValueError("declared shape does not match entries")
        return m

    @staticmethod
    def from_rows(rows) -> "CMatrix":
        return CMatrix(tuple(tuple(KClass(*e) for e in row) for row in rows))


class CornerTable:
    """Partial sums c[i][j] of the upper-left i x j blocks, 0 <= i,j <= shape."""

    def __init__(self, matrix: CMatrix):
        s, l = matrix.shape
        c = [[KClass(0, 0)] * (l + 1) for _ in range(s + 1)]
        for i in range(1, s + 1):
            for j in range(1, l + 1):
                c[i][j] = (
                    c[i - 1][j] + c[i][j - 1] - c[i - 1][j - 1] + matrix.entries[i - 1][j - 1]
                )
        self.shape = (s, l)
        self.c = tuple(tuple(row) for row in c)

    def __getitem__(self, ij: tuple[int, int]) -> KClass:
        i, j = ij
        return self.c[i][j]

    def entries(self) -> CMatrix:
        s, l = self.shape
        c = self.c
        return CMatrix(
            tuple(
                tuple(
                    c[i][j] - c[i - 1][j] - c[i][j - 1] + c[i - 1][j - 1]
                    for j in range(1, l + 1)
                )
                for i in range(1, s + 1)
            )
        )


def positive_or_zero(a: KClass, h: Heart) -> bool:
    """Membership in the positive cone together with 0 (order-difference test)."""
    if h.is_half:
        return a.r > 0 or (a.r == 0 and a.d >= 0)
    x, y = d_vec(h.nu, a)
    return x >= 0 and y >= 0


def seq_enumerate(
    a: KClass,
    h: Heart,
    max_len: int,
    klr_only: bool = False,
    degree_window: tuple[int, int] | None = None,
) -> list[Seq]:
    """Compositions of ``a`` into nonzero positive parts of the heart ``h``.

    Quiver hearts are finite as they stand.  The half heart is not, so a
    degree window (lo, hi) restricting every part's degree is mandatory
    there; with ``klr_only`` the parts are further restricted to ranks <= 1
    with torsion fixed at the point class.  In a quiver heart ``klr_only``
    keeps the discrete compositions (parts of total dimension one).
    """
    if max_len < 1:
        raise ValueError("max_len must be >= 1")
    found: list[tuple[KClass, ...]] = []

    if not h.is_half:
        target = d_vec(h.nu, a)

        def rec_q(rem: tuple[int, int], left: int, acc: list[KClass]):
            if rem == (0, 0):
                if acc:
                    found.append(tuple(acc))
                return
            if left == 0:
                return
            for x in range(rem[0] + 1):
                for y in range(rem[1] + 1):
                    if (x, y) == (0, 0):
                        continue
                    if klr_only and x + y != 1:
                        continue
                    acc.append(d_vec_inv(h.nu, (x, y)))
                    rec_q((rem[0] - x, rem[1] - y), left - 1, acc)
                    acc.pop()

        if target[0] >= 0 and target[1] >= 0:
            rec_q(target, max_len, [])
        seqs = [Seq(parts, h) for parts in found]
        seqs.sort(key=lambda s: (len(s.parts), s.parts))
        return seqs

    if degree_window is None:
        raise ValueError("half-heart enumeration needs a degree window")
    lo, hi = degree_window
    if klr_only:
        alphabet = [KClass(0, 1)] + [KClass(1, l) for l in range(lo, hi + 1)]
    else:
        alphabet = []
        for r in range(0, max(a.r, 0) + 1):
            for d in range(lo, hi + 1):
                p = KClass(r, d)
                if heart_positive(p, HALF):
                    alphabet.append(p)
    alphabet.sort()

    def rec_h(rem: KClass, left: int, acc: list[KClass]):
        if rem.is_zero():
            if acc:
                found.append(tuple(acc))
            return
        if left == 0 or rem.r < 0:
            return
        for p in alphabet:
            if p.r > rem.r:
                continue
            acc.append(p)
            rec_h(rem - p, left - 1, acc)
            acc.pop()

    rec_h(a, max_len, [])
    seqs = [Seq(parts, h) for parts in set(found)]
    seqs.sort(key=lambda s: (len(s.parts), s.parts))
    return seqs


def _int_tables(row_sums: list[int], col_sums: list[int]):
    """All nonnegative integer matrices with the given margins, lex order."""
    return _int_tables_cached(tuple(row_sums), tuple(col_sums))


@lru_cache(maxsize=65536)
def _int_tables_cached(row_sums: tuple[int, ...], col_sums: tuple[int, ...]):
    s, l = len(row_sums), len(col_sums)
    if sum(row_sums) != sum(col_sums) or min(row_sums + col_sums, default=0) < 0:
        return ()
    grid = [[0] * l for _ in range(s)]
    cols = list(col_sums)
    out = []

    def rec(i: int, j: int, row_left: int):
        if i == s:
            out.append(tuple(tuple(r) for r in grid))
            return
        if j == l - 1:
            if row_left <= cols[j]:
                grid[i][j] = row_left
                cols[j] -= row_left
                rec(i + 1, 0, row_sums[i + 1] if i + 1 < s else 0)
                cols[j] += row_left
            return
        rest_cap = sum(cols[j + 1 :])
        for v in range(max(0, row_left - rest_cap), min(row_left, cols[j]) + 1):
            grid[i][j] = v
            cols[j] -= v
            rec(i, j + 1, row_left - v)
            cols[j] += v
        grid[i][j] = 0

    rec(0, 0, row_sums[0] if s else 0)
    return tuple(out)


def w_enumerate(ra: Seq, ca: Seq, h: Heart) -> list[CMatrix]:
    """All contingency matrices over a quiver heart with the given margins.

    Entries are classes that are positive-or-zero for ``h``; the two
    dimension-vector coordinates decouple into independent integer tables.
    """
    if h.is_half:
        raise ValueError("half-heart enumeration needs a window: use w_enumerate_windowed")
    if ra.total != ca.total:
        raise ValueError(f"margin totals differ: {ra.total} vs {ca.total}")
    n = h.nu
    rows = [d_vec(n, p) for p in ra.parts]
    cols = [d_vec(n, p) for p in ca.parts]
    xs = _int_tables([v[0] for v in rows], [v[0] for v in cols])
    ys = _int_tables([v[1] for v in rows], [v[1] for v in cols])
    ncols = range(len(cols))
    row_cache: dict = {}
    out = []
    for xt in xs:
        for yt in ys:
            grid = []
            for xr, yr in zip(xt, yt):
                key = (xr, yr)
                row = row_cache.get(key)
                if row is None:
                    row = tuple(d_vec_inv(n, (xr[j], yr[j])) for j in ncols)
                    row_cache[key] = row
                grid.append(row)
            out.append(CMatrix(tuple(grid)))
    out.sort()
    return out


@dataclass(frozen=True)
class WindowedCells:
    """Windowed enumeration result, flagged with the window it used."""

    matrices: tuple[CMatrix, ...]
    window: Window
    slope_bound: int

    def __iter__(self):
        return iter(self.matrices)

    def __len__(self) -> int:
        return len(self.matrices)

    def to_json(self) -> dict:
        return {
            "window": self.window.to_json(),
            "slope_bound": self.slope_bound,
            "matrices": [m.to_json() for m in self.matrices],
        }


def w_enumerate_windowed(
    ra: Seq, ca: Seq, w: Window, slope_bound: int
) -> WindowedCells:
    """Half-heart contingency matrices, truncated by an entry degree bound.

    Every positive-rank entry must have degree >= -slope_bound (for rank-one
    entries this is exactly a slope bound); torsion entries are always kept.
    The result is a finite superset of the label set of the geometric
    window-``w`` truncation once the bound is large enough, and carries its
    window parameters so callers can enlarge them monotonically.
    """
    if ra.total != ca.total:
        raise ValueError(f"margin totals differ: {ra.total} vs {ca.total}")
    if slope_bound < 0:
        raise ValueError("slope bound must be >= 0")
    row_r = [p.r for p in ra.parts]
    col_r = [p.r for p in ca.parts]
    row_d = [p.d for p in ra.parts]
    col_d = [p.d for p in ca.parts]
    s, l = len(row_r), len(col_r)
    out = []
    for rank_t in _int_tables(row_r, col_r):
        lb = [[0 if rank_t[i][j] == 0 else -slope_bound for j in range(l)] for i in range(s)]
        adj_rows = [row_d[i] - sum(lb[i]) for i in range(s)]
        adj_cols = [col_d[j] - sum(lb[i][j] for i in range(s)) for j in range(l)]
        if min(adj_rows + adj_cols) < 0:
            continue
        for deg_t in _int_tables(adj_rows, adj_cols):
            out.append(
                CMatrix(
                    tuple(
                        tuple(
                            KClass(rank_t[i][j], deg_t[i][j] + lb[i][j])
                            for j in range(l)
                        )
                        for i in range(s)
                    )
                )
            )
    out.sort()
    return WindowedCells(tuple(out), w, slope_bound)


def _check_comparable(wa: CMatrix, wb: CMatrix):
    if wa.shape != wb.shape:
        raise ValueError(f"shape mismatch: {wa.shape} vs {wb.shape}")
    if wa.row_sums() != wb.row_sums() or wa.col_sums() != wb.col_sums():
        raise ValueError("matrices have different row or column sums")


def _corner_sig(w: CMatrix) -> tuple[tuple[int, int], ...]:
    """(r, d) of every proper corner sum, row-major."""
    s, l = w.shape
    sig = []
    prev_r = [0] * l
    prev_d = [0] * l
    for i in range(s):
        acc_r = acc_d = 0
        row = w.entries[i]
        for j in range(l):
            acc_r += row[j].r
            acc_d += row[j].d
            cr = prev_r[j] + acc_r
            cd = prev_d[j] + acc_d
            prev_r[j] = cr
            prev_d[j] = cd
            sig.append((cr, cd))
    return tuple(sig)


def _sig_leq(sa, sb, h: Heart) -> bool:
    # positive-or-zero of each corner difference; for the half heart this is
    # exactly lexicographic >= on (r, d), for quiver hearts it is
    # componentwise >= on the two dimension-vector coordinates.
    if h.is_half:
        return all(a >= b for a, b in zip(sa, sb))
    n = h.nu
    for (ra, da), (rb, db) in zip(sa, sb):
        if n * ra + da < n * rb + db or (n - 1) * ra + da < (n - 1) * rb + db:
            return False
    return True


def order_leq(wa: CMatrix, wb: CMatrix, h: Heart) -> bool:
    """Closure order: wa <= wb iff every corner of wa dominates that of wb."""
    _check_comparable(wa, wb)
    return _sig_leq(_corner_sig(wa), _corner_sig(wb), h)


def _corner_coords(w: CMatrix) -> list[int]:
    """Flat [r, d, r, d, ...] of the proper corner sums, row-major."""
    s, l = w.shape
    out = []
    prev_r = [0] * l
    prev_d = [0] * l
    for i in range(s):
        acc_r = acc_d = 0
        for j, k in enumerate(w.entries[i]):
            acc_r += k.r
            acc_d += k.d
            cr = prev_r[j] + acc_r
            cd = prev_d[j] + acc_d
            prev_r[j] = cr
            prev_d[j] = cd
            out.append(cr)
            out.append(cd)
    return out


def _corner_dvec_coords(w: CMatrix, nu: int) -> list[int]:
    """Flat [x, y, ...] dimension-vector coordinates of the corner sums."""
    l = len(w.entries[0])
    out = []
    push = out.append
    prev_x = [0] * l
    prev_y = [0] * l
    for row in w.entries:
        acc_x = acc_y = 0
        j = 0
        for k in row:
            xv = nu * k.r + k.d
            acc_x += xv
            acc_y += xv - k.r
            cx = prev_x[j] + acc_x
            cy = prev_y[j] + acc_y
            prev_x[j] = cx
            prev_y[j] = cy
            push(cx)
            push(cy)
            j += 1
    return out


def _boundary_positions(s: int, l: int) -> list[int]:
    # last-column corners fix the row sums, last-row corners the column sums
    cells = {i * l + (l - 1) for i in range(s)}
    cells |= {(s - 1) * l + j for j in range(l)}
    return sorted(p for t in cells for p in (2 * t, 2 * t + 1))


def order_relation(ws, h: Heart) -> list[int]:
    """Full closure-order relation on ``ws`` as row bitmasks.

    Bit j of row i is set iff ws[i] <= ws[j]; semantics are identical to
    calling :func:`order_leq` on every ordered pair.  Quiver-heart corner
    dominance is evaluated on packed integers (one wide subtraction per
    pair), which keeps exhaustive poset batteries affordable.
    """
    ws = list(ws)
    if not ws:
        return []
    s, l = ws[0].shape
    for m in ws[1:]:
        if m.shape != (s, l):
            raise ValueError(f"shape mismatch: {(s, l)} vs {m.shape}")
    n_mats = len(ws)
    boundary = _boundary_positions(s, l)
    if h.is_half:
        coords = [_corner_coords(m) for m in ws]
        ref = coords[0]
        for cs in coords[1:]:
            if any(cs[t] != ref[t] for t in boundary):
                raise ValueError("matrices have different row or column sums")
        sigs = [
            tuple((cs[2 * t], cs[2 * t + 1]) for t in range(s * l)) for cs in coords
        ]
        return [
            sum(1 << j for j in range(n_mats) if _sig_leq(sigs[i], sigs[j], h))
            for i in range(n_mats)
        ]
    dvecs = [_corner_dvec_coords(m, h.nu) for m in ws]
    lo = min(min(vs) for vs in dvecs)
    hi = max(max(vs) for vs in dvecs)
    k = 2 * s * l
    if hi - lo <= 127:
        # byte-aligned fields: packing and the guard mask are C-level
        if lo == 0:
            packed = [int.from_bytes(bytes(vs), "little") for vs in dvecs]
        else:
            packed = [
                int.from_bytes(bytes(c - lo for c in vs), "little") for vs in dvecs
            ]
        highs = int.from_bytes(b"\x80" * k, "little")
        bmask = int.from_bytes(
            bytes(255 if t in boundary else 0 for t in range(k)), "little"
        )
    else:
        width = (hi - lo).bit_length() + 2
        high_bit = 1 << (width - 1)
        highs = bmask = 0
        # packing puts coordinate 0 in the highest field; build masks likewise
        for t in range(k):
            highs = (highs << width) | high_bit
            bmask = (bmask << width) | ((1 << width) - 1 if t in boundary else 0)
        packed = []
        for vs in dvecs:
            acc = 0
            for c in vs:
                acc = (acc << width) | (c - lo)
            packed.append(acc)
    ref = packed[0] & bmask
    for p in packed[1:]:
        if p & bmask != ref:
            raise ValueError("matrices have different row or column sums")
    shifted = [p + highs for p in packed]
    rows = []
    for i in range(n_mats):
        si = shifted[i]
        mask = 0
        bit = 1
        for pj in packed:
            if (si - pj) & highs == highs:
                mask |= bit
            bit <<= 1
        rows.append(mask)
    return rows


def stratum_dim(w: CMatrix) -> int:
    """Cell dimension: -sum over (i,j) <= (i',j') of <w[i'][j'], w[i][j]>."""
    s, l = w.shape
    e = w.entries
    total = 0
    for i in range(s):
        for j in range(l):
            for i2 in range(i, s):
                for j2 in range(j, l):
                    total += euler_form(e[i2][j2], e[i][j])
    return -total


def stratum_rank(w: CMatrix) -> int:
    """Bundle rank of the cell over its factor stacks: strict pairs only."""
    s, l = w.shape
    e = w.entries
    total = 0
    for i in range(s):
        for j in range(l):
            for i2 in range(i, s):
                for j2 in range(l):
                    if j2 < j or (i2 == i and j2 == j):
                        continue
                    total += euler_form(e[i2][j2], e[i][j])
    return -total


@dataclass(frozen=True)
class HasseDiagram:
    """Covering relations of the closure order on a finite set of cells."""

    nodes: tuple[CMatrix, ...]
    edges: tuple[tuple[int, int], ...]  # (lower index, upper index)

    def to_json(self) -> dict:
        return {
            "nodes": [
                {"dim": stratum_dim(m), "hash": m.stable_hash(), "matrix": m.to_json()}
                for m in self.nodes
            ],
            "edges": [list(e) for e in self.edges],
        }

    def to_dot(self) -> str:
        lines = ["digraph hasse {", "  rankdir=BT;"]
        for k, m in enumerate(self.nodes):
            lines.append(
                f'  n{k} [label="dim={stratum_dim(m)}\\n{m.stable_hash()}"];'
            )
        for a, b in self.edges:
            lines.append(f"  n{a} -> n{b};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def hasse(ws, h: Heart) -> HasseDiagram:
    """Transitive reduction of the closure order restricted to ``ws``."""
    nodes = sorted(set(ws), key=lambda m: (stratum_dim(m), m.entries))
    n = len(nodes)
    rel = order_relation(nodes, h)
    leq = lambda i, j: rel[i] >> j & 1
    for i in range(n):
        for j in range(n):
            if i != j and leq(i, j) and leq(j, i):
                raise ValueError("order is not antisymmetric on these matrices")
    edges = []
    for i in range(n):
        for j in range(n):
            if i == j or not leq(i, j):
                continue
            if any(k not in (i, j) and leq(i, k) and leq(k, j) for k in range(n)):
                continue
            edges.append((i, j))
    return HasseDiagram(tuple(nodes), tuple(sorted(edges)))


@dataclass(frozen=True)
class StabilizationResult:
    """Smallest quiver-heart index past which the windowed label set freezes."""

    n0: int
    matrices: tuple[CMatrix, ...]
    window: Window
    slope_bound: int
    probe: int

    def to_json(self) -> dict:
        return {
            "n0": self.n0,
            "window": self.window.to_json(),
            "slope_bound": self.slope_bound,
            "probe": self.probe,
            "matrices": [m.to_json() for m in self.matrices],
        }


def approx_n0(
    ra: Seq,
    ca: Seq,
    w: Window,
    slope_bound: int,
    probe: int = 3,
    n_max: int = 64,
) -> StabilizationResult:
    """Find the first heart index from which the windowed set is stable.

    The windowed half-heart label set is filtered by positivity in the
    quiver heart of index n; the filtered sets grow with n and must agree
    for n, n+1, ..., n+probe to count as stable.
    """
    if probe < 0:
        raise ValueError("probe must be >= 0")
    cells = w_enumerate_windowed(ra, ca, w, slope_bound)

    def admitted(n: int) -> frozenset:
        h = Heart.quiver(n)
        return frozenset(
            m
            for m in cells.matrices
            if all(
                e.is_zero() or heart_positive(e, h)
                for row in m.entries
                for e in row
            )
        )

    sets = {n: admitted(n) for n in range(1, probe + 2)}
    for n in range(1, n_max + 1):
        if n + probe not in sets:
            sets[n + probe] = admitted(n + probe)
        if all(sets[n] == sets[n + k] for k in range(1, probe + 1)):
            stable = tuple(sorted(sets[n]))
            return StabilizationResult(n, stable, w, slope_bound, probe)
        sets.pop(n, None)
    raise RuntimeError(
        f"no stabilization up to n={n_max} (window m={w.m}, bound {slope_bound}); "
        "raise n_max or shrink the window"
    )
