"""Graded dimensions of cells and algebras, and generator-level ring maps.

Homological gradings are anchored at the top degree 2*dim of the ambient
smooth cell and recorded downward in steps of two (dims are negative, the
grading is unbounded below, so depth is always explicit).  Ring maps are
stored symbolically on generator families; all coefficients are exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .hnstrata import coh_series
from .kclass import KClass
from .series import Series
from .wposet import CMatrix, Seq, stratum_dim

__all__ = [
    "TopSeries",
    "GenMap",
    "stratum_top_series",
    "schur_series",
    "SchurSeriesResult",
    "polyrep_series",
    "PolyrepResult",
    "psi_alpha",
    "psi_alpha_n",
    "phi_transition",
    "compose_genmaps",
    "identity_genmap",
    "genmap_det",
    "ring_hilbert",
    "COH_ALPHABET",
    "rep_alphabet",
]


@dataclass(frozen=True)
class TopSeries:
    """Graded dimensions at degrees top, top-2, ..., top-2*(depth-1)."""

    top: int
    coeffs: tuple[int, ...]

    def __post_init__(self):
        if self.top % 2 != 0:
            raise ValueError("top degree must be even")
        if not self.coeffs:
            raise ValueError("depth must be >= 1")
        if any(c < 0 for c in self.coeffs):
            raise ValueError("graded dimensions must be >= 0")

    @property
    def depth(self) -> int:
        return len(self.coeffs)

    @property
    def floor(self) -> int:
        return self.top - 2 * (self.depth - 1)

    def coeff_at_degree(self, degree: int) -> int:
        if degree > self.top:
            return 0
        if degree < self.floor or (self.top - degree) % 2 != 0:
            raise ValueError(f"degree {degree} below recorded depth")
        return self.coeffs[(self.top - degree) // 2]

    @staticmethod
    def sum(terms: list["TopSeries"], depth: int) -> "TopSeries":
        if not terms:
            raise ValueError("nothing to sum")
        top = max(t.top for t in terms)
        floor = top - 2 * (depth - 1)
        if any(t.floor > floor for t in terms):
            raise ValueError("a summand is too shallow for the requested depth")
        coeffs = tuple(
            sum(t.coeff_at_degree(top - 2 * k) for t in terms)
            for k in range(depth)
        )
        return TopSeries(top, coeffs)

    def to_json(self) -> dict:
        return {"top": self.top, "coeffs": list(self.coeffs)}


def stratum_top_series(w: CMatrix, depth: int) -> TopSeries:
    """Graded dimensions of a cell: top = 2*dim, coefficients from the
    product of the moduli series of the nonzero entries."""
    if depth < 1:
        raise ValueError("depth must be >= 1")
    prod = Series.one(depth - 1)
    for row in w.entries:
        for entry in row:
            if not entry.is_zero():
                prod = prod * coh_series(entry, depth - 1)
    return TopSeries(2 * stratum_dim(w), prod.int_coeffs())


# --- independent monomial-counting route -------------------------------------

def _free_generator_counts(depth: int) -> list[int]:
    # polynomial algebra with two generators in every half-degree >= 1
    counts = [1] + [0] * depth
    for wgt in range(1, depth + 1):
        for _ in range(2):
            for n in range(wgt, depth + 1):
                counts[n] += counts[n - wgt]
    return counts


def _torsion_monomial_counts(d: int, depth: int) -> list[int]:
    # multisets of size exactly d over weights {0 once, each w >= 1 twice}
    table = [[0] * (depth + 1) for _ in range(d + 1)]
    table[0][0] = 1
    for wgt in range(0, depth + 1):
        for _ in range(1 if wgt == 0 else 2):
            for c in range(1, d + 1):
                for n in range(wgt, depth + 1):
                    table[c][n] += table[c - 1][n - wgt]
    return table[d]


def _cell_monomial_counts(w: CMatrix, depth: int) -> list[int]:
    counts = [1] + [0] * (depth - 1)
    for row in w.entries:
        for entry in row:
            if entry.is_zero():
                continue
            factor = (
                _free_generator_counts(depth - 1)
                if entry.r > 0
                else _torsion_monomial_counts(entry.d, depth - 1)
            )
            counts = [
                sum(counts[k] * factor[n - k] for k in range(n + 1))
                for n in range(depth)
            ]
    return counts


@dataclass(frozen=True)
class SchurSeriesResult:
    per_pair: tuple[tuple[tuple[KClass, ...], tuple[KClass, ...], TopSeries], ...]
    aggregate: TopSeries

    def to_json(self) -> dict:
        return {
            "pairs": [
                {
                    "rows": [p.to_json() for p in ra],
                    "cols": [p.to_json() for p in ca],
                    "series": ts.to_json(),
                }
                for ra, ca, ts in self.per_pair
            ],
            "aggregate": self.aggregate.to_json(),
        }


def schur_series(
    ra_list: list[Seq], ca_list: list[Seq], ws, depth: int
) -> SchurSeriesResult:
    """Graded dimensions of the span of cell basis elements over ``ws``.

    Matrices are grouped by their (row sums, column sums) pair among the
    given sequences.  Two routes are run for every matrix: the product of
    entry series placed at the top degree, and a plain-integer count of
    basis monomials placed by the basis-element degree rule.  Any mismatch
    raises.
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    pairs = []
    for ra in ra_list:
        for ca in ca_list:
            key = (ra.parts, ca.parts)
            if ra.total == ca.total and key not in pairs:
                pairs.append(key)
    matrices = list(ws)
    buckets: dict[tuple, list[CMatrix]] = {p: [] for p in pairs}
    for m in matrices:
        key = (m.row_sums(), m.col_sums())
        if key not in buckets:
            raise ValueError(f"matrix margins {key} not among the given sequences")
        buckets[key].append(m)

    tops = {m: 2 * stratum_dim(m) for m in matrices}
    agg_top = max(tops.values()) if matrices else 0

    def series_for(ms: list[CMatrix], top: int) -> TopSeries:
        if not ms:
            return TopSeries(top, (0,) * depth)
        terms = []
        for m in ms:
            extra = (top - tops[m]) // 2
            direct = stratum_top_series(m, depth + extra)
            counted = _cell_monomial_counts(m, depth + extra)
            if list(direct.coeffs) != counted:
                raise RuntimeError(
                    f"graded-dimension routes disagree on {m.to_json()}"
                )
            terms.append(direct)
        return TopSeries.sum(terms, depth)

    per_pair = tuple(
        (ra, ca, series_for(buckets[(ra, ca)], max((tops[m] for m in buckets[(ra, ca)]), default=agg_top)))
        for ra, ca in pairs
    )
    aggregate = series_for(matrices, agg_top) if matrices else TopSeries(0, (0,) * depth)
    return SchurSeriesResult(per_pair, aggregate)


@dataclass(frozen=True)
class PolyrepResult:
    per_seq: tuple[tuple[tuple[KClass, ...], TopSeries], ...]
    aggregate: TopSeries

    def to_json(self) -> dict:
        return {
            "sequences": [
                {"parts": [p.to_json() for p in parts], "series": ts.to_json()}
                for parts, ts in self.per_seq
            ],
            "aggregate": self.aggregate.to_json(),
        }


def polyrep_series(a: KClass, seqs: list[Seq], depth: int) -> PolyrepResult:
    """Graded dimensions of the flag-stack summands indexed by ``seqs``.

    Each sequence contributes the cell series of the single-row matrix with
    its parts as entries (the flag stack over the product of factor stacks).
    """
    rows = []
    for seq in seqs:
        if seq.total != a:
            raise ValueError(f"sequence total {seq.total} differs from {a}")
        rows.append(CMatrix((seq.parts,)))
    tops = [2 * stratum_dim(m) for m in rows]
    top = max(tops)
    per_seq = []
    terms = []
    for seq, m, t in zip(seqs, rows, tops):
        ts = stratum_top_series(m, depth + (top - t) // 2)
        per_seq.append((seq.parts, TopSeries(ts.top, ts.coeffs[:depth])))
        terms.append(ts)
    return PolyrepResult(tuple(per_seq), TopSeries.sum(terms, depth))


# --- generator-level ring maps ------------------------------------------------

COH_ALPHABET = ("coh",)


def rep_alphabet(n: int) -> tuple:
    return ("rep", n)


# degree of ch_i(family) is 2*i + offset
_DEGREE_OFFSET = {"1": -2, "omega": 0, "V1": 0, "V2": 0}
_MIN_INDEX = {"1": 1, "omega": 0, "V1": 0, "V2": 0}


def _families(alphabet: tuple) -> tuple[str, ...]:
    if alphabet == COH_ALPHABET:
        return ("1", "omega")
    if alphabet[0] == "rep":
        return ("V1", "V2")
    raise ValueError(f"unknown alphabet {alphabet}")


@dataclass(frozen=True)
class GenMap:
    """Degree-preserving linear map given symbolically on generator families.

    ``images[f]`` is a tuple of (coefficient, target family, index shift):
    ch_i(f) maps to the sum of coeff * ch_{i+shift}(target).  The same rule
    applies for every index i; degree preservation is checked symbolically.
    """

    domain: tuple
    codomain: tuple
    images: tuple[tuple[str, tuple[tuple[Fraction, str, int], ...]], ...]

    def __post_init__(self):
        img = dict(self.images)
        if set(img) != set(_families(self.domain)):
            raise ValueError("images must cover exactly the domain families")
        for fam, terms in self.images:
            for coeff, tgt, shift in terms:
                if tgt not in _families(self.codomain):
                    raise ValueError(f"target family {tgt} not in codomain")
                if 2 * shift + _DEGREE_OFFSET[tgt] != _DEGREE_OFFSET[fam]:
                    raise ValueError(f"image of {fam} is not degree-preserving")

    def image(self, fam: str) -> tuple[tuple[Fraction, str, int], ...]:
        return dict(self.images)[fam]

    def apply(self, fam: str, i: int) -> list[tuple[Fraction, str, int]]:
        """Image of ch_i(fam) as concrete terms (coeff, family, index)."""
        if i < _MIN_INDEX[fam]:
            raise ValueError(f"ch_{i}({fam}) is not a generator")
        return [(c, tgt, i + sh) for c, tgt, sh in self.image(fam)]

    def to_json(self) -> list:
        def gen_name(fam: str, shift: int) -> str:
            idx = "i" if shift == 0 else f"i{shift:+d}"
            return f"ch[{idx}]({fam})"

        out = []
        for fam, terms in self.images:
            out.append(
                {
                    "gen": gen_name(fam, 0),
                    "image": [[str(c), gen_name(t, sh)] for c, t, sh in terms],
                }
            )
        return out


def _make_images(raw: dict) -> tuple:
    images = []
    for fam in sorted(raw):
        combined: dict[tuple[str, int], Fraction] = {}
        for coeff, tgt, shift in raw[fam]:
            key = (tgt, shift)
            combined[key] = combined.get(key, Fraction(0)) + Fraction(coeff)
        terms = tuple(
            (c, tgt, shift)
            for (tgt, shift), c in sorted(combined.items())
            if c != 0
        )
        images.append((fam, terms))
    return tuple(images)


def psi_alpha() -> GenMap:
    """Tautological-class map from the sheaf side to the first quiver heart."""
    return psi_alpha_n(1)


def psi_alpha_n(n: int) -> GenMap:
    """Sheaf-side classes to the n-th quiver heart:
    ch_i(1) -> (1-n) ch_{i-1}(V1) + n ch_{i-1}(V2), ch_i(omega) -> ch_i(V1) - ch_i(V2)."""
    if n < 1:
        raise ValueError("heart index must be >= 1")
    raw = {
        "1": [(1 - n, "V1", -1), (n, "V2", -1)],
        "omega": [(1, "V1", 0), (-1, "V2", 0)],
    }
    return GenMap(COH_ALPHABET, rep_alphabet(n), _make_images(raw))


def phi_transition(n: int) -> GenMap:
    """Transition from heart n to heart n-1:
    ch_i(V2) -> ch_i(V1'), ch_i(V1) -> 2 ch_i(V1') - ch_i(V2')."""
    if n < 2:
        raise ValueError("transition needs n >= 2")
    raw = {
        "V1": [(2, "V1", 0), (-1, "V2", 0)],
        "V2": [(1, "V1", 0)],
    }
    return GenMap(rep_alphabet(n), rep_alphabet(n - 1), _make_images(raw))


def identity_genmap(alphabet: tuple) -> GenMap:
    raw = {fam: [(1, fam, 0)] for fam in _families(alphabet)}
    return GenMap(alphabet, alphabet, _make_images(raw))


def compose_genmaps(f: GenMap, g: GenMap) -> GenMap:
    """Composite f after g (g maps first)."""
    if f.domain != g.codomain:
        raise ValueError(
            f"alphabet mismatch: f expects {f.domain}, g produces {g.codomain}"
        )
    raw: dict[str, list] = {}
    for fam, terms in g.images:
        acc = []
        for c1, mid, s1 in terms:
            for c2, tgt, s2 in f.image(mid):
                acc.append((c1 * c2, tgt, s1 + s2))
        raw[fam] = acc
    return GenMap(g.domain, f.codomain, _make_images(raw))


def genmap_det(m: GenMap) -> Fraction:
    """Determinant of the per-degree 2x2 matrix of a quiver-to-quiver map."""
    if m.domain[0] != "rep" or m.codomain[0] != "rep":
        raise ValueError("determinant needs a quiver-to-quiver map")
    cols = []
    for fam in ("V1", "V2"):
        col = {"V1": Fraction(0), "V2": Fraction(0)}
        for c, tgt, shift in m.image(fam):
            if shift != 0:
                raise ValueError("determinant needs shift-free images")
            col[tgt] += c
        cols.append(col)
    return cols[0]["V1"] * cols[1]["V2"] - cols[0]["V2"] * cols[1]["V1"]


def ring_hilbert(bounds: tuple[int, int] | None, cutoff: int) -> Series:
    """Hilbert series of the tautological generator ring.

    Bounded ranks (d1, d2) give prod_j prod_{k=1}^{dj} (1-x^k)^{-1}; the
    unbounded sheaf-side alphabet gives prod_{k>=1} (1-x^k)^{-2}.
    """
    if cutoff < 0:
        raise ValueError("cutoff must be >= 0")
    if bounds is None:
        exps = [k for k in range(1, cutoff + 1) for _ in range(2)]
    else:
        d1, d2 = bounds
        if d1 < 0 or d2 < 0:
            raise ValueError("rank bounds must be >= 0")
        exps = list(range(1, d1 + 1)) + list(range(1, d2 + 1))
    return Series.inv_prod_one_minus(exps, cutoff)
