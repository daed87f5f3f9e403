"""Split/cross/merge sequences, wiring diagrams, and region combinatorics.

A cell matrix unfolds into a canonical sequence of elementary matrices: one
full split, one merge-then-split per wiring crossing, and one final merge.
The wiring diagram realizes the shuffle taking row-major to column-major
order; its regions are indexed by partitions in the s x l box.
"""

from __future__ import annotations

from dataclasses import dataclass

from .kclass import KClass
from .wposet import CMatrix, stratum_dim

__all__ = [
    "ShufflePermutation",
    "PBWStep",
    "PBWSequence",
    "CrossingDiagram",
    "crossing_count",
    "shuffle_permutation",
    "pbw_sequence",
    "region_map",
    "pbw_degree",
    "partitions_in_box",
]

ZERO = KClass(0, 0)


def crossing_count(s: int, l: int) -> int:
    """Number of wiring crossings: l*s*(l-1)*(s-1)/4."""
    if s < 1 or l < 1:
        raise ValueError("shape indices must be >= 1")
    return l * s * (l - 1) * (s - 1) // 4


@dataclass(frozen=True)
class ShufflePermutation:
    """Row-major to column-major shuffle on s*l strands, with a reduced word.

    Positions are 0-based; ``mapping[p]`` is the bottom position of the
    strand entering at top position p.  ``word`` lists adjacent
    transpositions (letter k swaps positions k, k+1), applied top to bottom;
    it is the lexicographically smallest reduced word under that sweep
    convention.
    """

    s: int
    l: int
    mapping: tuple[int, ...]
    word: tuple[int, ...]

    def inversions(self) -> int:
        n = len(self.mapping)
        return sum(
            1
            for p in range(n)
            for q in range(p + 1, n)
            if self.mapping[p] > self.mapping[q]
        )

    def replay(self) -> tuple[int, ...]:
        """Apply the word to the identity arrangement; bottom order of strands."""
        cur = list(range(len(self.mapping)))
        for k in self.word:
            cur[k], cur[k + 1] = cur[k + 1], cur[k]
        return tuple(cur)

    def to_json(self) -> dict:
        return {
            "s": self.s,
            "l": self.l,
            "mapping": list(self.mapping),
            "word": list(self.word),
        }


def shuffle_permutation(s: int, l: int) -> ShufflePermutation:
    """The shuffle sending top position i*l + j to bottom position j*s + i."""
    if s < 1 or l < 1:
        raise ValueError("shape indices must be >= 1")
    n = s * l
    mapping = [0] * n
    for i in range(s):
        for j in range(l):
            mapping[i * l + j] = j * s + i
    cur = list(range(n))
    word = []
    while True:
        k = next(
            (k for k in range(n - 1) if mapping[cur[k]] > mapping[cur[k + 1]]), None
        )
        if k is None:
            break
        word.append(k)
        cur[k], cur[k + 1] = cur[k + 1], cur[k]
    assert len(word) == crossing_count(s, l)
    return ShufflePermutation(s, l, tuple(mapping), tuple(word))


@dataclass(frozen=True)
class PBWStep:
    matrix: CMatrix
    kind: str  # "split" | "merge"
    beta_before: tuple[KClass, ...]
    beta_after: tuple[KClass, ...]

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "matrix": self.matrix.to_json(),
            "beta_before": [p.to_json() for p in self.beta_before],
            "beta_after": [p.to_json() for p in self.beta_after],
        }


@dataclass(frozen=True)
class PBWSequence:
    """The canonical elementary factorization attached to a cell matrix."""

    source: CMatrix
    steps: tuple[PBWStep, ...]

    @property
    def t(self) -> int:
        return len(self.steps)

    def to_json(self) -> dict:
        return {
            "matrix": self.source.to_json(),
            "t": self.t,
            "steps": [st.to_json() for st in self.steps],
        }


def _merge_step(cur: list[KClass], k: int) -> CMatrix:
    # rows = cur, cols = cur with slots k, k+1 fused
    n = len(cur)
    rows = []
    for p in range(n):
        col = p if p <= k else p - 1
        row = [ZERO] * (n - 1)
        row[col] = cur[p]
        rows.append(tuple(row))
    return CMatrix(tuple(rows))


def _split_step(merged: list[KClass], k: int, swapped: list[KClass]) -> CMatrix:
    # rows = merged, cols = swapped arrangement; slot k reopens in swapped order
    n = len(swapped)
    rows = []
    for p in range(n - 1):
        row = [ZERO] * n
        if p < k:
            row[p] = merged[p]
        elif p == k:
            row[k] = swapped[k]
            row[k + 1] = swapped[k + 1]
        else:
            row[p + 1] = merged[p]
        rows.append(tuple(row))
    return CMatrix(tuple(rows))


def pbw_sequence(w: CMatrix) -> PBWSequence:
    """Unfold ``w`` into its split, crossings (merge+split pairs), and merge.

    The step count is always 2 + l*s*(l-1)*(s-1)/2; degenerate shapes keep
    identity-shaped first and last steps.  Zero entries of ``w`` travel
    through the chain as zero parts.
    """
    s, l = w.shape
    e = w.entries
    ra = list(w.row_sums())
    ca = list(w.col_sums())
    sp = shuffle_permutation(s, l)

    # strand p = i*l + j carries class e[i][j]
    classes = [e[p // l][p % l] for p in range(s * l)]
    steps: list[PBWStep] = []

    beta0 = tuple(ra)
    beta1 = tuple(classes)
    first_rows = []
    for i in range(s):
        row = [ZERO] * (s * l)
        for j in range(l):
            row[i * l + j] = e[i][j]
        first_rows.append(tuple(row))
    steps.append(PBWStep(CMatrix(tuple(first_rows)), "split", beta0, beta1))

    cur_ids = list(range(s * l))
    cur = list(classes)
    for k in sp.word:
        merged = cur[:k] + [cur[k] + cur[k + 1]] + cur[k + 2 :]
        steps.append(
            PBWStep(_merge_step(cur, k), "merge", tuple(cur), tuple(merged))
        )
        swapped = list(cur)
        swapped[k], swapped[k + 1] = swapped[k + 1], swapped[k]
        steps.append(
            PBWStep(_split_step(merged, k, swapped), "split", tuple(merged), tuple(swapped))
        )
        cur = swapped
        cur_ids[k], cur_ids[k + 1] = cur_ids[k + 1], cur_ids[k]

    # bottom arrangement is column-major; fuse each run of s strands
    assert [sp.mapping.index(q) for q in range(s * l)] == cur_ids
    last_rows = []
    for q in range(s * l):
        row = [ZERO] * l
        row[q // s] = cur[q]
        last_rows.append(tuple(row))
    steps.append(PBWStep(CMatrix(tuple(last_rows)), "merge", tuple(cur), tuple(ca)))

    seq = PBWSequence(w, tuple(steps))
    assert seq.t == 2 + l * s * (l - 1) * (s - 1) // 2
    return seq


def partitions_in_box(s: int, l: int) -> list[tuple[int, ...]]:
    """All partitions with at most s parts, each at most l (trailing zeros dropped)."""
    out: list[tuple[int, ...]] = []

    def rec(row: int, hi: int, acc: list[int]):
        if row == s:
            out.append(tuple(x for x in acc if x > 0))
            return
        for v in range(hi, -1, -1):
            acc.append(v)
            rec(row + 1, v, acc)
            acc.pop()

    rec(0, l, [])
    out.sort(key=lambda lam: (sum(lam), lam))
    return out


@dataclass(frozen=True)
class CrossingDiagram:
    """Wiring diagram of a cell matrix together with its region data.

    Regions are indexed by all partitions in the s x l box (the sets of
    strand weights a sweep line can have on its left, over all reduced
    words); each carries the sum of the matrix entries in its boxes.
    """

    source: CMatrix
    strands: tuple[tuple[KClass, int, int], ...]  # (weight, top_pos, bot_pos)
    crossings: tuple[int, ...]
    regions: tuple[tuple[tuple[int, ...], KClass], ...]

    @property
    def shape(self) -> tuple[int, int]:
        return self.source.shape

    def region_class(self, lam: tuple[int, ...]) -> KClass:
        for mu, cls in self.regions:
            if mu == lam:
                return cls
        raise KeyError(f"no region for partition {lam}")

    def trace_faces(self) -> list[tuple[tuple[int, ...], KClass]]:
        """Faces cut out by this diagram's own reduced word, via a sweep line.

        Every face is the left-set of some (slice, gap) pair; its strand
        weights always form a partition, and the face classes agree with the
        box sums in ``regions``.  One fixed word realizes only
        len(crossings) + s*l + 1 of the C(s+l, s) partitions.
        """
        s, l = self.shape
        n = s * l
        arrangements = [list(range(n))]
        cur = list(range(n))
        for k in self.crossings:
            cur[k], cur[k + 1] = cur[k + 1], cur[k]
            arrangements.append(list(cur))
        seen: dict[tuple[int, ...], KClass] = {}
        for arr in arrangements:
            for g in range(n + 1):
                ids = arr[:g]
                rows = [0] * s
                total = ZERO
                for p in ids:
                    rows[p // l] += 1
                    total = total + self.strands[p][0]
                if any(rows[i] < rows[i + 1] for i in range(s - 1)):
                    raise AssertionError("sweep left-set is not a partition")
                lam = tuple(x for x in rows if x > 0)
                if lam in seen and seen[lam] != total:
                    raise AssertionError("inconsistent face class")
                seen[lam] = total
        return sorted(seen.items(), key=lambda kv: (sum(kv[0]), kv[0]))

    def wiring_text(self) -> str:
        """Plain-text rendering: one line per slice, crossings marked."""
        s, l = self.shape
        n = s * l
        name = lambda p: f"w{p // l + 1}{p % l + 1}"
        lines = []
        cur = list(range(n))
        lines.append("  ".join(name(p) for p in cur))
        for k in self.crossings:
            marker = ["    "] * n
            marker[k] = ">--<"
            lines.append("  ".join(m.strip() or "|" for m in marker))
            cur[k], cur[k + 1] = cur[k + 1], cur[k]
            lines.append("  ".join(name(p) for p in cur))
        return "\n".join(lines) + "\n"

    def region_dot(self) -> str:
        """DOT graph of regions; edges add one box to the partition."""
        names = {lam: f"r{idx}" for idx, (lam, _) in enumerate(self.regions)}
        lines = ["digraph regions {", "  rankdir=BT;"]
        for lam, cls in self.regions:
            label = "(" + ",".join(map(str, lam)) + ")" if lam else "empty"
            lines.append(
                f'  {names[lam]} [label="{label}\\n[{cls.r},{cls.d}]"];'
            )
        region_set = set(names)
        for lam, _ in self.regions:
            padded = list(lam) + [0] * (self.shape[0] - len(lam))
            for i in range(len(padded)):
                grown = padded.copy()
                grown[i] += 1
                mu = tuple(x for x in grown if x > 0)
                if mu in region_set and sorted(grown, reverse=True) == grown:
                    lines.append(f"  {names[lam]} -> {names[mu]};")
        lines.append("}")
        return "\n".join(lines) + "\n"

    def to_json(self) -> dict:
        return {
            "matrix": self.source.to_json(),
            "strands": [
                {"weight": wgt.to_json(), "top": top, "bottom": bot}
                for wgt, top, bot in self.strands
            ],
            "crossings": list(self.crossings),
            "regions": [
                {"partition": list(lam), "class": cls.to_json()}
                for lam, cls in self.regions
            ],
        }


def region_map(w: CMatrix) -> CrossingDiagram:
    """Wiring diagram of ``w`` with all regions and their classes."""
    s, l = w.shape
    sp = shuffle_permutation(s, l)
    strands = tuple(
        (w.entries[p // l][p % l], p, sp.mapping[p]) for p in range(s * l)
    )
    regions = []
    for lam in partitions_in_box(s, l):
        cls = ZERO
        for i, li in enumerate(lam):
            for j in range(li):
                cls = cls + w.entries[i][j]
        regions.append((lam, cls))
    return CrossingDiagram(w, strands, sp.word, tuple(regions))


def pbw_degree(w: CMatrix, c_degree: int) -> int:
    """Homological degree 2*dim - c_degree of a cell basis element."""
    if c_degree < 0 or c_degree % 2 != 0:
        raise ValueError(f"cohomology degree must be even and >= 0, got {c_degree}")
    return 2 * stratum_dim(w) - c_degree
