import itertools
import random

import pytest
from hypothesis import given, strategies as st

from steinberg import (
    CMatrix,
    CornerTable,
    HALF,
    Heart,
    KClass,
    Seq,
    Window,
    approx_n0,
    d_vec,
    d_vec_inv,
    hasse,
    order_leq,
    seq_enumerate,
    stratum_dim,
    stratum_rank,
    w_enumerate,
    w_enumerate_windowed,
)
from steinberg.wposet import order_relation, positive_or_zero

Q1 = Heart.quiver(1)


def M(rows):
    return CMatrix.from_rows(rows)


def q(x, y, n=1):
    return d_vec_inv(n, (x, y))


# --- sequences -----------------------------------------------------------------

def test_seq_validation():
    with pytest.raises(ValueError):
        Seq((), HALF)
    with pytest.raises(ValueError):
        Seq((KClass(0, 0),), HALF)
    with pytest.raises(ValueError):
        Seq((KClass(-1, 1),), HALF)
    Seq((KClass(-1, 1),), Q1)


def test_seq_enumerate_quiver_example():
    seqs = seq_enumerate(KClass(0, 1), Q1, 2)
    parts = {s.parts for s in seqs}
    assert parts == {
        (KClass(0, 1),),
        (KClass(1, 0), KClass(-1, 1)),
        (KClass(-1, 1), KClass(1, 0)),
    }


def test_seq_enumerate_klr_examples():
    assert [s.parts for s in seq_enumerate(KClass(0, 1), HALF, 1, klr_only=True, degree_window=(-2, 2))] == [
        (KClass(0, 1),)
    ]
    seqs = seq_enumerate(KClass(2, 0), HALF, 2, klr_only=True, degree_window=(-1, 1))
    parts = {s.parts for s in seqs}
    assert (KClass(1, 1), KClass(1, -1)) in parts
    assert (KClass(1, 0), KClass(1, 0)) in parts
    assert all(s.is_klr() for s in seqs)


def test_seq_enumerate_needs_window_for_half():
    with pytest.raises(ValueError):
        seq_enumerate(KClass(1, 0), HALF, 2)


def test_seq_enumerate_totals():
    for s in seq_enumerate(KClass(1, 1), Q1, 3):
        assert s.total == KClass(1, 1)


# --- contingency matrices -------------------------------------------------------

def brute_force_quiver_tables(row_vecs, col_vecs):
    """Dumb oracle: every grid of pairs bounded by the margins."""
    s, l = len(row_vecs), len(col_vecs)
    cells = []
    for i in range(s):
        for j in range(l):
            xs = range(min(row_vecs[i][0], col_vecs[j][0]) + 1)
            ys = range(min(row_vecs[i][1], col_vecs[j][1]) + 1)
            cells.append([(x, y) for x in xs for y in ys])
    found = set()
    for combo in itertools.product(*cells):
        grid = [combo[i * l : (i + 1) * l] for i in range(s)]
        ok = all(
            tuple(map(sum, zip(*grid[i]))) == row_vecs[i] for i in range(s)
        ) and all(
            tuple(map(sum, zip(*[grid[i][j] for i in range(s)]))) == col_vecs[j]
            for j in range(l)
        )
        if ok:
            found.add(tuple(grid))
    return found


@pytest.mark.parametrize(
    "rows,cols",
    [
        ([(1, 1), (1, 1)], [(1, 1), (1, 1)]),
        ([(2, 1)], [(1, 0), (1, 1)]),
        ([(1, 0), (0, 2)], [(0, 1), (1, 1)]),
        ([(2, 2)], [(2, 2)]),
        ([(1, 1), (1, 0), (0, 1)], [(2, 2)]),
    ],
)
def test_w_enumerate_matches_brute_force(rows, cols):
    ra = Seq(tuple(q(*v) for v in rows), Q1)
    ca = Seq(tuple(q(*v) for v in cols), Q1)
    ws = w_enumerate(ra, ca, Q1)
    got = {
        tuple(tuple(d_vec(1, e) for e in row) for row in m.entries) for m in ws
    }
    assert len(got) == len(ws)  # no duplicates
    assert got == brute_force_quiver_tables(
        [tuple(v) for v in rows], [tuple(v) for v in cols]
    )


def test_w_enumerate_examples():
    ra = Seq((KClass(0, 1), KClass(0, 1)), Q1)
    ws = w_enumerate(ra, ra, Q1)
    assert len(ws) == 4
    corners = {m.entries[0][0] for m in ws}
    assert corners == {KClass(0, 0), KClass(0, 1), KClass(1, 0), KClass(-1, 1)}
    for m in ws:
        assert m.entries[1][1] == m.entries[0][0]

    one = Seq((KClass(2, 3),), Q1)
    assert w_enumerate(one, one, Q1) == [M([[(2, 3)]])]

    row = Seq((KClass(0, 1),), Q1)
    col = Seq((KClass(1, 0), KClass(-1, 1)), Q1)
    assert w_enumerate(row, col, Q1) == [M([[(1, 0), (-1, 1)]])]


def test_w_enumerate_rejects():
    ra = Seq((KClass(0, 1),), Q1)
    rb = Seq((KClass(0, 2),), Q1)
    with pytest.raises(ValueError):
        w_enumerate(ra, rb, Q1)
    with pytest.raises(ValueError):
        w_enumerate(Seq((KClass(1, 0),), HALF), Seq((KClass(1, 0),), HALF), HALF)


def test_w_enumerate_margins_reconstructed():
    ra = Seq((q(2, 1), q(1, 2)), Q1)
    ca = Seq((q(1, 1), q(2, 2)), Q1)
    for m in w_enumerate(ra, ca, Q1):
        assert m.row_sums() == ra.parts
        assert m.col_sums() == ca.parts


# --- windowed enumeration -------------------------------------------------------

def example_window():
    ra = Seq((KClass(2, 0), KClass(2, 0)), HALF)
    return w_enumerate_windowed(ra, ra, Window(2), 2)


def family(m):
    e = m.entries[0][0]
    return ("u", -e.d) if e.r == 2 else ("w", e.d) if e.r == 1 else ("v", e.d)


def test_windowed_cell_example():
    cells = example_window()
    assert cells.window == Window(2) and cells.slope_bound == 2
    fams = sorted(family(m) for m in cells)
    assert fams == sorted(
        [("u", n) for n in (0, 1, 2)]
        + [("w", m) for m in range(-2, 3)]
        + [("v", d) for d in (0, 1, 2)]
    )


def test_windowed_monotone_in_bound():
    ra = Seq((KClass(2, 0), KClass(2, 0)), HALF)
    small = set(w_enumerate_windowed(ra, ra, Window(2), 1).matrices)
    big = set(w_enumerate_windowed(ra, ra, Window(2), 2).matrices)
    assert small < big


def test_windowed_trivial():
    one = Seq((KClass(3, -1),), HALF)
    cells = w_enumerate_windowed(one, one, Window(1), 1)
    assert list(cells) == [M([[(3, -1)]])]


# --- order, dims, hasse ---------------------------------------------------------

def test_order_examples():
    u0 = M([[(2, 0), (0, 0)], [(0, 0), (2, 0)]])
    u1 = M([[(2, -1), (0, 1)], [(0, 1), (2, -1)]])
    u5 = M([[(2, -5), (0, 5)], [(0, 5), (2, -5)]])
    v0 = M([[(0, 0), (2, 0)], [(2, 0), (0, 0)]])
    assert order_leq(u0, u1, HALF) and not order_leq(u1, u0, HALF)
    assert order_leq(u5, v0, HALF)
    for w in (u0, u1, v0):
        assert order_leq(w, w, HALF)
    with pytest.raises(ValueError):
        order_leq(u0, M([[(2, 0)]]), HALF)
    with pytest.raises(ValueError):
        order_leq(u0, M([[(2, 1), (0, -1)], [(0, 1), (2, -1)]]), HALF)


def test_positive_or_zero():
    assert positive_or_zero(KClass(0, 0), HALF)
    assert positive_or_zero(KClass(0, 0), Q1)
    assert positive_or_zero(KClass(1, -9), HALF)
    assert not positive_or_zero(KClass(0, -1), HALF)
    assert not positive_or_zero(KClass(1, -2), Q1)


def test_stratum_dim_examples():
    for n in range(4):
        assert stratum_dim(M([[(2, -n), (0, n)], [(0, n), (2, -n)]])) == -12
    for m in range(-3, 4):
        assert stratum_dim(M([[(1, m), (1, -m)], [(1, -m), (1, m)]])) == -9
    for d in range(4):
        assert stratum_dim(M([[(0, d), (2, -d)], [(2, -d), (0, d)]])) == -8


def test_stratum_rank_examples():
    assert stratum_rank(M([[(7, 3)]])) == 0
    assert stratum_rank(M([[(2, 0), (0, 0)], [(0, 0), (2, 0)]])) == -4
    assert stratum_rank(M([[(1, 0), (1, 0)], [(1, 0), (1, 0)]])) == -5


@given(st.integers(1, 3), st.integers(1, 3), st.data())
def test_dim_rank_identity(s, l, data):
    rows = tuple(
        tuple(
            KClass(
                data.draw(st.integers(0, 2)), data.draw(st.integers(-3, 3))
            )
            for _ in range(l)
        )
        for _ in range(s)
    )
    m = CMatrix(rows)
    from steinberg import euler_form

    diag = sum(euler_form(e, e) for row in m.entries for e in row)
    assert stratum_dim(m) == stratum_rank(m) - diag


def test_corner_roundtrip():
    rng = random.Random(5)
    for _ in range(200)  :
        s, l = rng.randint(1, 4), rng.randint(1, 4)
        m = CMatrix(
            tuple(
                tuple(KClass(rng.randint(0, 3), rng.randint(-4, 4)) for _ in range(l))
                for _ in range(s)
            )
        )
        ct = CornerTable(m)
        assert ct.entries() == m
        assert ct[m.shape[0], m.shape[1]] == m.total


def test_hasse_chain_and_singleton():
    cells = example_window()
    diag = hasse(list(cells), HALF)
    assert len(diag.nodes) == 11
    assert len(diag.edges) == 10
    # single chain: every node except the top has out-degree one
    outs = {}
    for a, b in diag.edges:
        outs[a] = outs.get(a, 0) + 1
    assert all(v == 1 for v in outs.values())
    single = hasse([M([[(1, 0)]])], HALF)
    assert len(single.nodes) == 1 and single.edges == ()
    dot = diag.to_dot()
    assert dot.startswith("digraph") and "dim=-12" in dot


def test_hasse_quiver_brute_force():
    ra = Seq((KClass(0, 1), KClass(0, 1)), Q1)
    ws = w_enumerate(ra, ra, Q1)
    assert len(ws) == 4
    diag = hasse(ws, Q1)
    # oracle: covering relations recomputed from pairwise order_leq
    n = len(diag.nodes)
    leq = [[order_leq(diag.nodes[i], diag.nodes[j], Q1) for j in range(n)] for i in range(n)]
    covers = set()
    for i in range(n):
        for j in range(n):
            if i != j and leq[i][j]:
                if not any(k not in (i, j) and leq[i][k] and leq[k][j] for k in range(n)):
                    covers.add((i, j))
    assert set(diag.edges) == covers


def test_order_relation_matches_order_leq():
    ra = Seq((q(1, 1), q(1, 1)), Q1)
    ws = w_enumerate(ra, ra, Q1)
    rel = order_relation(ws, Q1)
    for i, a in enumerate(ws):
        for j, b in enumerate(ws):
            assert bool(rel[i] >> j & 1) == order_leq(a, b, Q1)


# --- stabilization ---------------------------------------------------------------

def test_approx_n0_examples():
    one = Seq((KClass(1, 0),), HALF)
    res = approx_n0(one, one, Window(1), 1, probe=3)
    assert res.n0 == 1 and len(res.matrices) == 1

    tor = Seq((KClass(0, 1), KClass(0, 1)), HALF)
    res = approx_n0(tor, tor, Window(1), 1, probe=3)
    assert res.n0 == 1 and len(res.matrices) == 2

    ra = Seq((KClass(2, 0), KClass(2, 0)), HALF)
    res = approx_n0(ra, ra, Window(2), 2, probe=3)
    # golden value from the enumerator: all eleven matrices admitted from
    # heart three on (largest torsion twist needs n - 1 >= 2)
    assert res.n0 == 3
    assert len(res.matrices) == 11
    assert frozenset(res.matrices) == frozenset(example_window().matrices)


def test_approx_n0_guard():
    one = Seq((KClass(1, 0),), HALF)
    with pytest.raises(ValueError):
        approx_n0(one, one, Window(1), 1, probe=-1)


def test_cmatrix_json_roundtrip():
    m = M([[(1, 2), (0, 3)], [(2, -1), (0, 0)]])
    data = m.to_json()
    assert data["rows"] == 2 and data["cols"] == 2
    assert CMatrix.from_json(data) == m


def test_seq_enumerate_quiver_discrete():
    seqs = seq_enumerate(KClass(0, 1), Q1, 3, klr_only=True)
    # discrete compositions of (1,1): the two orderings of the simples
    assert {s.parts for s in seqs} == {
        (KClass(1, 0), KClass(-1, 1)),
        (KClass(-1, 1), KClass(1, 0)),
    }


def brute_force_windowed(rows, cols, bound):
    """Dumb oracle for the windowed half-heart label sets: every grid of
    classes with bounded entries, filtered by margins and positivity."""
    s, l = len(rows), len(cols)
    max_r = max(p.r for p in rows)
    lo_d = -bound * max_r - 1
    hi_d = max(abs(p.d) for p in rows + cols) + bound * max_r + 1
    cells = [
        [
            KClass(r, d)
            for r in range(max_r + 1)
            for d in range(lo_d, hi_d + 1)
            if (r == 0 and d >= 0) or (r > 0 and d >= -bound)
        ]
    ] * (s * l)
    found = set()
    for combo in itertools.product(*cells):
        grid = tuple(combo[i * l : (i + 1) * l] for i in range(s))
        m_rows = []
        ok = True
        for i in range(s):
            tot = KClass(0, 0)
            for e in grid[i]:
                tot = tot + e
            if tot != rows[i]:
                ok = False
                break
        if not ok:
            continue
        for j in range(l):
            tot = KClass(0, 0)
            for i in range(s):
                tot = tot + grid[i][j]
            if tot != cols[j]:
                ok = False
                break
        if ok:
            found.add(grid)
    return found


def test_windowed_matches_brute_force_klr():
    parts = (KClass(1, 0), KClass(1, 0))
    ra = Seq(parts, HALF)
    cells = w_enumerate_windowed(ra, ra, Window(1), 1)
    got = {m.entries for m in cells}
    assert got == brute_force_windowed(list(parts), list(parts), 1)
