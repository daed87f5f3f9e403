import pytest

from steinberg import (
    BundleType,
    HALF,
    HNType,
    KClass,
    Window,
    bundle_types,
    coh_series,
    hn_codim,
    hn_dim,
    hn_enumerate,
    quot_fixed_points,
    ss_series,
    torsion_series_newton,
    trunc_series,
)
from steinberg.kclass import heart_positive


def T(*parts):
    return HNType(tuple(KClass(*p) for p in parts))


def test_hntype_validation():
    with pytest.raises(ValueError):
        HNType(())
    with pytest.raises(ValueError):
        T((1, 0), (1, 0))  # equal slopes
    with pytest.raises(ValueError):
        T((0, 1), (1, 5))  # torsion not last
    with pytest.raises(ValueError):
        T((2, 1))  # not semistable
    T((1, -1), (2, 2), (0, 3))


def test_codim_examples():
    assert hn_codim(T((1, 0))) == 0
    assert hn_codim(T((1, -1), (0, 1))) == 1
    # value fixed by hand evaluation of -<(1,1),(1,-1)> = -(1 - 1 - 1) = 1
    # (cross-checked against dim Ext^1 of the two line bundles)
    assert hn_codim(T((1, -1), (1, 1))) == 1


def test_dim_examples():
    assert hn_dim(T((1, 0))) == -1
    assert hn_dim(T((0, 5))) == 0
    assert hn_dim(T((1, -1), (0, 1))) == -2


def test_enumerate_examples():
    assert [t.parts for t in hn_enumerate(KClass(0, 2), Window(5))] == [
        (KClass(0, 2),)
    ]
    got = [t.parts for t in hn_enumerate(KClass(1, 0), Window(2))]
    assert got == [
        (KClass(1, 0),),
        (KClass(1, -1), KClass(0, 1)),
    ]
    assert [t.parts for t in hn_enumerate(KClass(2, 0), Window(1))] == [
        (KClass(2, 0),)
    ]


def test_enumerate_invariants():
    for cls in (KClass(2, 1), KClass(3, -1), KClass(2, -3), KClass(1, 4)):
        for m in (1, 2, 4):
            if not heart_positive(cls, HALF):
                continue
            for t in hn_enumerate(cls, Window(m)):
                assert t.total == cls
                assert hn_dim(t) + hn_codim(t) == -cls.r * cls.r
                from fractions import Fraction

                slopes = [
                    Fraction(p.d, p.r) if p.r else Fraction(10**9) for p in t.parts
                ]
                assert slopes == sorted(slopes)
                assert len(set(slopes)) == len(slopes)


def test_enumerate_count_matches_bundle_types():
    # splitting types and strata are in bijection window by window
    for cls in (KClass(1, 0), KClass(2, 0), KClass(3, 2), KClass(2, -1)):
        for m in (1, 2, 3, 5):
            assert len(hn_enumerate(cls, Window(m))) == len(
                bundle_types(cls, Window(m))
            )


def test_coh_series_examples():
    assert coh_series(KClass(2, 3), 4).int_coeffs() == (1, 2, 5, 10, 20)
    assert coh_series(KClass(0, 1), 3).int_coeffs() == (1, 2, 2, 2)
    with pytest.raises(ValueError):
        coh_series(KClass(0, 0), 3)


def test_ss_series_examples():
    assert ss_series(KClass(1, 5), 3).int_coeffs() == (1, 1, 1, 1)
    assert ss_series(KClass(2, 0), 3).int_coeffs() == (1, 1, 2, 2)
    assert ss_series(KClass(0, 2), 2).int_coeffs() == (1, 2, 5)
    with pytest.raises(ValueError):
        ss_series(KClass(2, 1), 3)


def test_torsion_series_two_routes():
    for d in range(1, 7):
        assert (
            coh_series(KClass(0, d), 12).coeffs
            == torsion_series_newton(d, 12).coeffs
        )


def test_trunc_series_examples():
    assert trunc_series(KClass(1, 0), Window(1), 3).int_coeffs() == (1, 1, 1, 1)
    assert trunc_series(KClass(1, 0), Window(3), 2).int_coeffs() == (1, 2, 5)
    for m in (1, 2, 4):
        assert (
            trunc_series(KClass(0, 3), Window(m), 6).coeffs
            == coh_series(KClass(0, 3), 6).coeffs
        )


def test_trunc_series_monotone_and_stable():
    full = coh_series(KClass(1, 0), 10)
    for cls in (KClass(1, 0), KClass(2, 0), KClass(2, 1), KClass(3, -1)):
        prev = None
        for m in range(1, 13):
            ts = trunc_series(cls, Window(m), 10)
            if prev is not None:
                assert all(ts[k] >= prev[k] for k in range(11))
            prev = ts
            for k in range(11):
                if m >= k + 2:
                    assert ts[k] == full[k]


def test_bundle_types_examples():
    assert bundle_types(KClass(1, 0), Window(1)) == [BundleType((0,), 0)]
    assert bundle_types(KClass(0, 3), Window(1)) == [BundleType((), 3)]
    assert bundle_types(KClass(2, 1), Window(1)) == [
        BundleType((1, 0), 0),
        BundleType((0, 0), 1),
    ]


def test_bundle_types_brute_force():
    import itertools

    for cls in (KClass(2, 2), KClass(3, 0), KClass(2, -1)):
        for m in (1, 2, 3):
            lo = 1 - m
            expected = set()
            r, d = cls.r, cls.d
            span = range(lo, d - r * lo + 1 + abs(lo))
            for degs in itertools.product(span, repeat=r):
                if list(degs) != sorted(degs, reverse=True):
                    continue
                t = d - sum(degs)
                if t >= 0:
                    expected.add((tuple(degs), t))
            got = {(b.degrees, b.torsion_deg) for b in bundle_types(cls, Window(m))}
            assert got == expected


def test_quot_fixed_points_examples():
    d = 5
    assert quot_fixed_points([KClass(1, d)], [d]) == [((KClass(1, d),),)]
    got = quot_fixed_points([KClass(0, 1), KClass(1, d - 1)], [d])
    assert got == [((KClass(0, 1),), (KClass(1, d - 1),))]
    assert quot_fixed_points([KClass(2, 7)], [3, 4]) == [
        ((KClass(1, 3), KClass(1, 4)),)
    ]


def test_quot_fixed_points_sums_and_validity():
    labels = quot_fixed_points(
        [KClass(1, 1), KClass(1, 1)], [2, 0]
    )
    assert labels
    for grid in labels:
        for row, want in zip(grid, [KClass(1, 1), KClass(1, 1)]):
            total = KClass(0, 0)
            for c in row:
                total = total + c
            assert total == want
        for i, deg in enumerate([2, 0]):
            col = KClass(0, 0)
            for row in grid:
                col = col + row[i]
            assert col == KClass(1, deg)
    with pytest.raises(ValueError):
        quot_fixed_points([KClass(1, 1)], [2])


def test_quot_fixed_points_finite_on_balanced_margins():
    # equal-degree columns used to admit unboundedly negative weights under
    # plain table enumeration; the subsheaf-chain rule keeps this finite
    got = quot_fixed_points([KClass(1, 0), KClass(1, 0)], [0, 0])
    assert len(got) == 2


def brute_force_hn(cls, m):
    """Dumb oracle: every multiset of semistable classes in the window."""
    import itertools

    lo = 1 - m
    r, d = cls.r, cls.d
    out = set()
    # bound slopes crudely: a part of slope e and rank >= 1 forces the rest
    # to carry degree d - e, so |e| <= |d| + r * (|lo| + 1) is safe here
    hi = abs(d) + r * (abs(lo) + 1) + 1
    slopes = range(lo, hi)
    for k in range(1, r + 1):
        for es in itertools.combinations(slopes, k):
            for ranks in itertools.product(range(1, r + 1), repeat=k):
                if sum(ranks) != r:
                    continue
                deg = sum(e * rho for e, rho in zip(es, ranks))
                t = d - deg
                if t < 0:
                    continue
                parts = tuple(KClass(rho, e * rho) for e, rho in zip(es, ranks))
                if t > 0:
                    parts = parts + (KClass(0, t),)
                out.add(parts)
    return out


def test_hn_enumerate_matches_brute_force():
    for cls in (KClass(1, 0), KClass(2, 1), KClass(3, -2)):
        for m in (1, 2, 3):
            got = {t.parts for t in hn_enumerate(cls, Window(m))}
            assert got == brute_force_hn(cls, m), (cls, m)
