"""Harder-Narasimhan types, truncation windows, and moduli Poincare series.

A semistable piece of positive rank on the line is a direct sum of copies of
a single line-bundle twist, so its class is (r, m*r); torsion is (0, t).
Everything downstream (strata enumeration, codimensions, truncated series)
reduces to exact bookkeeping over these parts.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .kclass import (
    HALF,
    KClass,
    Window,
    euler_form,
    heart_positive,
    slope,
    window_member,
)
from .series import Series

__all__ = [
    "HNType",
    "BundleType",
    "hn_codim",
    "hn_dim",
    "hn_enumerate",
    "coh_series",
    "torsion_series_newton",
    "ss_series",
    "trunc_series",
    "bundle_types",
    "quot_fixed_points",
]


def _is_hn_part(p: KClass) -> bool:
    if p.r >= 1:
        return p.d % p.r == 0
    return p.r == 0 and p.d >= 1


@dataclass(frozen=True)
class HNType:
    """Strictly-slope-increasing list of semistable classes."""

    parts: tuple[KClass, ...]

    def __post_init__(self):
        if not self.parts:
            raise ValueError("HN type needs at least one part")
        for p in self.parts:
            if not _is_hn_part(p):
                raise ValueError(f"not a semistable class: {p}")
        for a, b in zip(self.parts, self.parts[1:]):
            if a.r == 0:
                raise ValueError("torsion part must come last")
            if b.r > 0 and a.d * b.r >= b.d * a.r:
                raise ValueError(f"slopes must strictly increase: {a} then {b}")

    @property
    def total(self) -> KClass:
        t = KClass(0, 0)
        for p in self.parts:
            t = t + p
        return t

    def min_slope(self) -> tuple[int, int]:
        return slope(self.parts[0])

    def to_json(self) -> list[list[int]]:
        return [p.to_json() for p in self.parts]


@dataclass(frozen=True)
class BundleType:
    """Splitting type of a bundle-plus-torsion point: degrees d1 >= ... >= dr."""

    degrees: tuple[int, ...]
    torsion_deg: int

    def __post_init__(self):
        if any(a < b for a, b in zip(self.degrees, self.degrees[1:])):
            raise ValueError("degrees must be weakly decreasing")
        if self.torsion_deg < 0:
            raise ValueError("torsion degree must be >= 0")

    @property
    def total(self) -> KClass:
        return KClass(len(self.degrees), sum(self.degrees) + self.torsion_deg)


def hn_codim(t: HNType) -> int:
    """Codimension of the stratum: -sum over i > j of <part_i, part_j>."""
    ps = t.parts
    return -sum(
        euler_form(ps[i], ps[j]) for i in range(len(ps)) for j in range(i)
    )


def hn_dim(t: HNType) -> int:
    """Dimension of the stratum: -sum over i <= j of <part_i, part_j>."""
    ps = t.parts
    return -sum(
        euler_form(ps[i], ps[j])
        for i in range(len(ps))
        for j in range(i, len(ps))
    )


def hn_enumerate(a: KClass, w: Window) -> list[HNType]:
    """All HN types of total class ``a`` whose minimal slope is >= 1 - m.

    Torsion-only classes give the single semistable type.  Output is sorted
    by (codimension, parts).
    """
    if not heart_positive(a, HALF):
        raise ValueError(f"not the class of a nonzero sheaf: {a}")
    if a.r == 0:
        return [HNType((a,))]

    lo = 1 - w.m
    found: list[HNType] = []

    def rec(rem_r: int, rem_d: int, min_e: int, acc: list[KClass]):
        if rem_r == 0:
            if rem_d == 0:
                found.append(HNType(tuple(acc)))
            elif rem_d >= 1:
                found.append(HNType(tuple(acc) + (KClass(0, rem_d),)))
            return
        for rho in range(1, rem_r + 1):
            e = min_e
            while True:
                # remaining rank must fit at slopes >= e + 1, torsion >= 0
                future = (e + 1) * (rem_r - rho)
                if e * rho + future > rem_d:
                    break
                acc.append(KClass(rho, e * rho))
                rec(rem_r - rho, rem_d - e * rho, e + 1, acc)
                acc.pop()
                e += 1

    rec(a.r, a.d, lo, [])
    found.sort(key=lambda t: (hn_codim(t), t.parts))
    for t in found:
        assert window_member(t.min_slope(), w)
    return found


def _torsion_basis_series(cutoff: int) -> Series:
    # Hilbert series (1 + x) / (1 - x) of the weight space underlying a
    # length-one torsion stack: weight 0 once, every weight >= 1 twice.
    return Series.from_coeffs([1] + [2] * cutoff, cutoff)


@lru_cache(maxsize=None)
def _torsion_series_extraction(d: int, cutoff: int) -> Series:
    # coefficient of t^d in prod over basis weights w of 1/(1 - t x^w)
    poly = [Series.one(cutoff)] + [Series.zero(cutoff)] * d
    for wgt in range(cutoff + 1):
        for _ in range(1 if wgt == 0 else 2):
            for j in range(1, d + 1):
                poly[j] = poly[j] + poly[j - 1].shift(wgt)
    return poly[d]


@lru_cache(maxsize=None)
def _free_series(cutoff: int) -> Series:
    exps = [k for k in range(1, cutoff + 1) for _ in range(2)]
    return Series.inv_prod_one_minus(exps, cutoff)


@lru_cache(maxsize=None)
def _gl_series(r: int, cutoff: int) -> Series:
    return Series.inv_prod_one_minus(range(1, r + 1), cutoff)


def torsion_series_newton(d: int, cutoff: int) -> Series:
    """Series of the length-d torsion stack via the power-sum recursion.

    Independent route kept deliberately separate from the t-extraction in
    :func:`coh_series`; the two must agree coefficientwise.
    """
    if d < 1:
        raise ValueError("torsion length must be >= 1")
    h = _torsion_basis_series(cutoff)
    power_sums = [None] + [h.substitute_power(k) for k in range(1, d + 1)]
    sym = [Series.one(cutoff)]
    for n in range(1, d + 1):
        acc = Series.zero(cutoff)
        for k in range(1, n + 1):
            acc = acc + power_sums[k] * sym[n - k]
        sym.append(acc * Fraction(1, n))
    return sym[d]


def coh_series(a: KClass, cutoff: int) -> Series:
    """Poincare series of the sheaf moduli stack of class ``a`` in x = q^2.

    Positive rank gives the rank-independent free series
    prod_{k>=1} (1 - x^k)^{-2}; torsion (0, d) gives the degree-d symmetric
    power of the two-dimensional weight space, extracted exactly.
    """
    if cutoff < 0:
        raise ValueError("cutoff must be >= 0")
    if not heart_positive(a, HALF):
        raise ValueError(f"not the class of a nonzero sheaf: {a}")
    if a.r > 0:
        return _free_series(cutoff)
    return _torsion_series_extraction(a.d, cutoff)


def ss_series(part: KClass, cutoff: int) -> Series:
    """Poincare series of the semistable stack of a single HN part."""
    if not _is_hn_part(part):
        raise ValueError(f"not a semistable class: {part}")
    if part.r == 0:
        return coh_series(part, cutoff)
    return _gl_series(part.r, cutoff)


def trunc_series(a: KClass, w: Window, cutoff: int) -> Series:
    """Poincare series of the window-m truncation of the moduli stack.

    Sum over in-window HN strata of x^codim times the product of the
    semistable series of the parts.
    """
    if not heart_positive(a, HALF):
        raise ValueError(f"not the class of a nonzero sheaf: {a}")
    if a.r == 0:
        return coh_series(a, cutoff)
    total = Series.zero(cutoff)
    # a stratum only reaches degree at least its codimension; group the rest
    # by rank profile and torsion length, which determine the series
    grouped: dict[tuple, int] = {}
    for t in hn_enumerate(a, w):
        c = hn_codim(t)
        if c > cutoff:
            continue
        ranks = tuple(sorted(p.r for p in t.parts if p.r > 0))
        tor = sum(p.d for p in t.parts if p.r == 0)
        key = (ranks, tor, c)
        grouped[key] = grouped.get(key, 0) + 1
    for (ranks, tor, c), count in grouped.items():
        term = Series.one(cutoff)
        for r in ranks:
            term = term * _gl_series(r, cutoff)
        if tor:
            term = term * _torsion_series_extraction(tor, cutoff)
        total = total + term.shift(c) * count
    return total


def bundle_types(a: KClass, w: Window) -> list[BundleType]:
    """All splitting types (d1 >= ... >= dr, t) of class ``a`` with di >= 1-m."""
    if not heart_positive(a, HALF):
        raise ValueError(f"not the class of a nonzero sheaf: {a}")
    r, d, lo = a.r, a.d, 1 - w.m
    out: list[BundleType] = []

    def rec(k: int, hi: int, left: int, acc: list[int]):
        if k == r:
            out.append(BundleType(tuple(acc), left))
            return
        top = min(hi, left - (r - k - 1) * lo)
        for di in range(top, lo - 1, -1):
            acc.append(di)
            rec(k + 1, di, left - di, acc)
            acc.pop()

    rec(0, d - (r - 1) * lo if r else 0, d, [])
    out.sort(key=lambda b: b.degrees, reverse=True)
    return out


def quot_fixed_points(
    gamma_seq: list[KClass], degrees: list[int]
) -> list[tuple[tuple[KClass, ...], ...]]:
    """Fixed-point labels for filtrations of the split bundle with ``degrees``.

    ``gamma_seq`` lists the subquotient classes from the top of the
    filtration down (last entry is the bottom subobject).  Each label is a
    grid beta[k][i], aligned with (gamma_seq row, degrees column), with row
    sums ``gamma_seq`` and column i summing to (1, degrees[i]).  Down each
    column the partial sums from the bottom must be classes of subsheaves of
    a line bundle of the given degree: zero, then (1, e) with weakly
    increasing e <= degrees[i].  That nonemptiness condition is what keeps
    the label set finite.
    """
    r = len(degrees)
    total = KClass(0, 0)
    for g in gamma_seq:
        total = total + g
    if total != KClass(r, sum(degrees)):
        raise ValueError(
            f"inconsistent sums: quotients total {total}, bundle is {KClass(r, sum(degrees))}"
        )

    gammas = list(reversed(gamma_seq))  # bottom-first
    s = len(gammas)
    partial = []
    acc = KClass(0, 0)
    for g in gammas:
        acc = acc + g
        partial.append(acc)
    max_later = [sum(degrees[j + 1 :]) for j in range(r)]

    def prev_on_later(prev, i):
        return sum(1 for j in range(i + 1, r) if prev[j] is not None)

    # A column state is None (zero subsheaf) or the degree e of a (1, e);
    # states can only switch on and degrees only grow as the level rises.
    def level_states(target: KClass, prev: tuple):
        states: list = [None] * r

        def fill(i: int, need_r: int, need_d: int):
            if i == r:
                if need_r == 0 and need_d == 0:
                    yield tuple(states)
                return
            must_on_later = prev_on_later(prev, i)
            if prev[i] is None and must_on_later <= need_r <= r - i - 1:
                states[i] = None
                yield from fill(i + 1, need_r, need_d)
                states[i] = None
            if need_r >= 1 and need_r - 1 >= must_on_later:
                lo = need_d - max_later[i]
                if prev[i] is not None:
                    lo = max(lo, prev[i])
                for e in range(lo, degrees[i] + 1):
                    states[i] = e
                    yield from fill(i + 1, need_r - 1, need_d - e)
                states[i] = None

        yield from fill(0, target.r, target.d)

    results: list[tuple[tuple[KClass, ...], ...]] = []
    rows_bottom_first: list[tuple[KClass, ...]] = []

    def increment(prev_i, state_i) -> KClass:
        if state_i is None:
            return KClass(0, 0)
        if prev_i is None:
            return KClass(1, state_i)
        return KClass(0, state_i - prev_i)

    def walk(j: int, prev: tuple):
        if j == s:
            results.append(tuple(reversed(rows_bottom_first)))
            return
        for state in level_states(partial[j], prev):
            rows_bottom_first.append(
                tuple(increment(prev[i], state[i]) for i in range(r))
            )
            walk(j + 1, state)
            rows_bottom_first.pop()

    walk(0, tuple([None] * r))
    results.sort()
    return results
