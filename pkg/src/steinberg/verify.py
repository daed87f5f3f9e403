"""Built-in verification suites.

Each suite runs a battery of exact checks and returns a machine-readable
report; the CLI exposes them under ``verify``.  The poset battery is the
heavy one: it sweeps every quiver-heart label set with total dimension
vector at most (3, 3) and checks the closure order exhaustively against a
dumb corner-dominance oracle.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .gradedcoh import (
    compose_genmaps,
    genmap_det,
    phi_transition,
    polyrep_series,
    psi_alpha,
    psi_alpha_n,
    ring_hilbert,
    schur_series,
    stratum_top_series,
)
from .hnstrata import coh_series, torsion_series_newton, trunc_series
from .kclass import HALF, Heart, KClass, Window, d_vec_inv, euler_form
from .pbwdiagram import (
    crossing_count,
    partitions_in_box,
    pbw_sequence,
    region_map,
    shuffle_permutation,
)
from .wposet import (
    CMatrix,
    CornerTable,
    Seq,
    approx_n0,
    hasse,
    order_leq,
    order_relation,
    stratum_dim,
    stratum_rank,
    w_enumerate,
    w_enumerate_windowed,
)

__all__ = ["Check", "Report", "SUITE_NAMES", "run_suite", "run_all"]


@dataclass(frozen=True)
class Check:
    check_id: str
    label: str
    passed: bool
    details: str = ""

    def to_json(self) -> dict:
        return {
            "id": self.check_id,
            "label": self.label,
            "passed": self.passed,
            "details": self.details,
        }


@dataclass(frozen=True)
class Report:
    suite: str
    checks: tuple[Check, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_json(self) -> dict:
        return {
            "suite": self.suite,
            "passed": self.passed,
            "checks": [c.to_json() for c in self.checks],
        }


def _check(checks: list[Check], check_id: str, label: str, fn) -> None:
    try:
        detail = fn()
        checks.append(Check(check_id, label, True, detail or ""))
    except AssertionError as exc:
        checks.append(Check(check_id, label, False, str(exc)))


# --- worked cell example ------------------------------------------------------------

def _family(m: CMatrix) -> tuple[str, int]:
    e = m.entries[0][0]
    if e.r == 2:
        return ("u", -e.d)
    if e.r == 1:
        return ("w", e.d)
    return ("v", e.d)


def cell_example_suite() -> list[Check]:
    checks: list[Check] = []
    ra = Seq((KClass(2, 0), KClass(2, 0)), HALF)
    cells = w_enumerate_windowed(ra, ra, Window(2), 2)

    def enumeration():
        expected = (
            [("u", n) for n in range(3)]
            + [("w", m) for m in range(-2, 3)]
            + [("v", d) for d in range(3)]
        )
        got = sorted(_family(m) for m in cells)
        assert got == sorted(expected), f"got {got}"
        return "11 matrices: u0..u2, w-2..w2, v0..v2"

    def dims():
        want = {"u": -12, "w": -9, "v": -8}
        for m in cells:
            fam = _family(m)
            assert stratum_dim(m) == want[fam[0]], f"{fam}: dim {stratum_dim(m)}"
        return "dims -12 / -9 / -8 per family"

    def chain():
        def key(m):
            fam, idx = _family(m)
            return {"u": (0, idx), "w": (1, -idx), "v": (2, -idx)}[fam]

        order = sorted(cells.matrices, key=key)
        for a, b in combinations(order, 2):
            assert order_leq(a, b, HALF), f"{_family(a)} !<= {_family(b)}"
            assert not order_leq(b, a, HALF), f"{_family(b)} <= {_family(a)}"
        diagram = hasse(list(cells), HALF)
        assert len(diagram.edges) == len(cells) - 1, "not a single chain"
        return "total order matches the u-w-v chain"

    _check(checks, "cell-example/enumeration", "windowed cell set for (4,0)", enumeration)
    _check(checks, "cell-example/dims", "cell dimensions by family", dims)
    _check(checks, "cell-example/chain", "the total chain order", chain)
    return checks


# --- series suites ------------------------------------------------------------

def heinloth_suite() -> list[Check]:
    checks: list[Check] = []

    def stabilization():
        full = ring_hilbert(None, 10)
        for cls in (KClass(1, 0), KClass(2, 0), KClass(2, 1), KClass(3, -1)):
            prev = None
            for m in range(1, 16):
                ts = trunc_series(cls, Window(m), 10)
                if prev is not None:
                    assert all(
                        ts[k] >= prev[k] for k in range(11)
                    ), f"{cls}: coefficients not monotone in m"
                prev = ts
                for k in range(11):
                    if m >= k + 2:
                        assert ts[k] == full[k], f"{cls}: m={m}, k={k}"
        return "4 classes, degrees <= 10, windows m <= 15"

    def torsion_oracle():
        for d in range(1, 7):
            a = coh_series(KClass(0, d), 12)
            b = torsion_series_newton(d, 12)
            assert a.coeffs == b.coeffs, f"d={d}"
        return "extraction == power-sum recursion, d <= 6, cutoff 12"

    def schur_dual_path():
        ra = Seq((KClass(2, 0), KClass(2, 0)), HALF)
        cells = w_enumerate_windowed(ra, ra, Window(2), 2)
        schur_series([ra], [ra], cells.matrices, 10)
        rb = Seq((KClass(1, 0), KClass(1, 0)), HALF)
        klr_cells = w_enumerate_windowed(rb, rb, Window(2), 2)
        schur_series([rb], [rb], klr_cells.matrices, 10)
        one = Seq((KClass(2, 3),), HALF)
        res = schur_series([one], [one], [CMatrix(((KClass(2, 3),),))], 6)
        assert res.aggregate.coeffs == stratum_top_series(
            CMatrix(((KClass(2, 3),),)), 6
        ).coeffs
        return "monomial counting agrees with series products on the battery"

    def polyrep():
        a = KClass(2, 0)
        seqs = [
            Seq((KClass(2, 0),), HALF),
            Seq((KClass(1, 0), KClass(1, 0)), HALF),
            Seq((KClass(1, -1), KClass(1, 1)), HALF),
        ]
        res = polyrep_series(a, seqs, 8)
        sq = coh_series(KClass(1, 0), 7) * coh_series(KClass(1, 0), 7)
        assert res.per_seq[1][1].coeffs[:8] == sq.int_coeffs()[:8]
        return "flag-stack series anchored at twice the flag dimension"

    _check(checks, "heinloth/stabilization", "truncated series stabilize to the free series", stabilization)
    _check(checks, "heinloth/torsion-oracle", "torsion series via two independent routes", torsion_oracle)
    _check(checks, "heinloth/schur-dual-path", "cell series dual computation", schur_dual_path)
    _check(checks, "heinloth/polyrep", "flag-stack series battery", polyrep)
    return checks


# --- diagram suite ------------------------------------------------------------

def _probe_matrix(s: int, l: int) -> CMatrix:
    rows = []
    for i in range(s):
        row = []
        for j in range(l):
            if (i + j) % 3 == 2:
                row.append(KClass(0, i + j + 1))
            else:
                row.append(KClass(1, i - j))
        rows.append(tuple(row))
    return CMatrix(tuple(rows))


def diagram_suite() -> list[Check]:
    checks: list[Check] = []

    def counts():
        from math import comb

        for s in range(1, 6):
            for l in range(1, 6):
                w = _probe_matrix(s, l)
                seq = pbw_sequence(w)
                assert seq.t == 2 + l * s * (l - 1) * (s - 1) // 2, (s, l)
                sp = shuffle_permutation(s, l)
                c = crossing_count(s, l)
                assert len(sp.word) == c == sp.inversions(), (s, l)
                assert sp.replay() == tuple(
                    sp.mapping.index(q) for q in range(s * l)
                ), (s, l)
                merges = sum(1 for st in seq.steps[1:-1] if st.kind == "merge")
                assert merges == c, (s, l)
                assert len(partitions_in_box(s, l)) == comb(s + l, s), (s, l)
        return "t, crossing and region counts for all shapes s, l <= 5"

    def chains():
        for s in range(1, 6):
            for l in range(1, 6):
                w = _probe_matrix(s, l)
                seq = pbw_sequence(w)
                assert seq.steps[0].beta_before == w.row_sums()
                assert seq.steps[-1].beta_after == w.col_sums()
                for a, b in zip(seq.steps, seq.steps[1:]):
                    assert a.beta_after == b.beta_before, (s, l)
                for st in seq.steps:
                    assert st.matrix.row_sums() == st.beta_before, (s, l)
                    assert st.matrix.col_sums() == st.beta_after, (s, l)
                for st in seq.steps[1:-1]:
                    big = sum(
                        1
                        for row in (
                            st.matrix.entries
                            if st.kind == "split"
                            else st.matrix.transpose().entries
                        )
                        if sum(1 for e in row if not e.is_zero()) > 1
                    )
                    wide = abs(st.matrix.shape[0] - st.matrix.shape[1])
                    assert wide == 1 and big <= 1, (s, l, st.kind)
        return "beta chains telescope; interior steps touch a single block"

    def regions():
        for s in range(1, 6):
            for l in range(1, 6):
                w = _probe_matrix(s, l)
                cd = region_map(w)
                from math import comb

                assert len(cd.regions) == comb(s + l, s), (s, l)
                ct = CornerTable(w)
                lookup = dict(cd.regions)
                for a in range(1, s + 1):
                    for b in range(1, l + 1):
                        lam = tuple([b] * a)
                        assert lookup[lam] == ct[a, b], (s, l, a, b)
                faces = cd.trace_faces()
                assert len(faces) == crossing_count(s, l) + s * l + 1, (s, l)
                for lam, cls in faces:
                    assert lookup[lam] == cls, (s, l, lam)
                for (lam1, c1), (lam2, c2) in combinations(cd.regions, 2):
                    p1 = list(lam1) + [0] * (s - len(lam1))
                    p2 = list(lam2) + [0] * (s - len(lam2))
                    union = tuple(max(a, b) for a, b in zip(p1, p2))
                    inter = tuple(min(a, b) for a, b in zip(p1, p2))
                    strip = lambda t: tuple(x for x in t if x)
                    if strip(union) in lookup:
                        lhs = lookup[strip(union)] + lookup[strip(inter)]
                        assert lhs == c1 + c2, (s, l, lam1, lam2)
        return "region classes: corners, sweep faces, union rule"

    _check(checks, "diagram/counts", "step, crossing and region counts", counts)
    _check(checks, "diagram/chains", "elementary factorization bookkeeping", chains)
    _check(checks, "diagram/regions", "region-partition classes", regions)
    return checks


# --- poset battery ------------------------------------------------------------

def _compositions_pairs(v: tuple[int, int]) -> list[tuple[tuple[int, int], ...]]:
    out: list[tuple[tuple[int, int], ...]] = []

    def rec(rem, acc):
        if rem == (0, 0):
            if acc:
                out.append(tuple(acc))
            return
        for x in range(rem[0] + 1):
            for y in range(rem[1] + 1):
                if (x, y) == (0, 0):
                    continue
                acc.append((x, y))
                rec((rem[0] - x, rem[1] - y), acc)
                acc.pop()

    rec(v, [])
    return out


def _refinement_groupings(coarse, fine) -> list[tuple[int, ...]]:
    res: list[tuple[int, ...]] = []

    def rec(ci, fi, acc):
        if ci == len(coarse):
            if fi == len(fine):
                res.append(tuple(acc))
            return
        tot = KClass(0, 0)
        for fj in range(fi, len(fine)):
            tot = tot + fine[fj]
            if tot == coarse[ci]:
                acc.append(fj + 1)
                rec(ci + 1, fj + 1, acc)
                acc.pop()

    rec(0, 0, [])
    return res


def _block_split(coarse, fine, grouping) -> CMatrix:
    rows = []
    start = 0
    for end in grouping:
        row = [KClass(0, 0)] * len(fine)
        for fj in range(start, end):
            row[fj] = fine[fj]
        rows.append(tuple(row))
        start = end
    return CMatrix(tuple(rows))


def _oracle_relation(ws: list[CMatrix], nu: int) -> np.ndarray:
    """Corner dominance by definition: cumulative entry sums, then a full
    conjunction of both dimension-vector inequalities over every corner."""
    n = len(ws)
    s, l = ws[0].shape
    flat = np.fromiter(
        (c for m in ws for row in m.entries for k in row for c in (k.r, k.d)),
        dtype=np.int64,
        count=n * s * l * 2,
    ).reshape(n, s, l, 2)
    corners = np.add.accumulate(np.add.accumulate(flat, axis=1), axis=2)
    x = nu * corners[..., 0] + corners[..., 1]
    y = x - corners[..., 0]
    dv = np.concatenate([x.reshape(n, -1), y.reshape(n, -1)], axis=1)
    return (dv[:, None, :] >= dv[None, :, :]).all(axis=2)


def _relation_bits_to_numpy(rel: list[int], n: int) -> np.ndarray:
    nbytes = (n + 7) // 8
    raw = np.frombuffer(
        b"".join(r.to_bytes(nbytes, "little") for r in rel), dtype=np.uint8
    ).reshape(n, nbytes)
    return np.unpackbits(raw, axis=1, bitorder="little")[:, :n].astype(bool)


def _battery_chunk(args) -> tuple[int, int, int]:
    """One slice of the poset battery: all column sequences against a range
    of row sequences for a fixed total dimension vector."""
    v, lo, hi = args
    heart = Heart.quiver(1)
    comps = _compositions_pairs(v)
    seqs = [Seq(tuple(d_vec_inv(1, p) for p in c), heart) for c in comps]
    sets = pairs = minimal = 0
    for ra in seqs[lo:hi]:
        for ca in seqs:
            ws = w_enumerate(ra, ca, heart)
            n = len(ws)
            rel = order_relation(ws, heart)
            oracle = _oracle_relation(ws, 1)
            lib = _relation_bits_to_numpy(rel, n)
            assert (lib == oracle).all(), (ra.parts, ca.parts)
            assert oracle.diagonal().all(), "not reflexive"
            sym = oracle & oracle.T
            assert not (sym & ~np.eye(n, dtype=bool)).any(), "not antisymmetric"
            counts = oracle.astype(np.int32)
            closure = (counts @ counts) > 0
            assert not (closure & ~oracle).any(), "not transitive"
            sets += 1
            pairs += n * n
            for g in _refinement_groupings(ra.parts, ca.parts):
                sm = _block_split(ra.parts, ca.parts, g)
                idx = ws.index(sm)
                assert not any(
                    j != idx and rel[j] >> idx & 1 for j in range(n)
                ), "split matrix not minimal"
                minimal += 1
            for g in _refinement_groupings(ca.parts, ra.parts):
                mm = _block_split(ca.parts, ra.parts, g).transpose()
                idx = ws.index(mm)
                assert not any(
                    j != idx and rel[j] >> idx & 1 for j in range(n)
                ), "merge matrix not minimal"
                minimal += 1
    return sets, pairs, minimal


def default_workers() -> int:
    import os

    cap = os.environ.get("STEINBERG_THREADS")
    cpus = os.cpu_count() or 1
    if cap is None:
        return cpus
    try:
        return max(1, min(int(cap), cpus))
    except ValueError:
        raise ValueError(f"STEINBERG_THREADS must be an integer, got {cap!r}")


def poset_battery(bound: tuple[int, int] = (3, 3), workers: int | None = None) -> dict:
    """Exhaustive order checks on all quiver label sets up to ``bound``.

    For every pair of compositions of every dimension vector within the
    bound: enumerate the label set, compare the library order relation with
    the definitional oracle on every ordered pair, verify the partial-order
    axioms, and check minimality of all block split/merge matrices.  Chunks
    are independent and run on a process pool capped by STEINBERG_THREADS;
    the aggregated statistics are deterministic regardless of schedule.
    """
    if workers is None:
        workers = default_workers()
    tasks = []
    for v1 in range(bound[0] + 1):
        for v2 in range(bound[1] + 1):
            if (v1, v2) == (0, 0):
                continue
            count = len(_compositions_pairs((v1, v2)))
            step = max(1, count // 16) if count > 32 else count
            for lo in range(0, count, step):
                tasks.append(((v1, v2), lo, min(lo + step, count)))
    if workers <= 1:
        results = [_battery_chunk(t) for t in tasks]
    else:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_battery_chunk, tasks))
    totals = [sum(col) for col in zip(*results)]
    return {"sets": totals[0], "pairs": totals[1], "minimal": totals[2]}


def _random_kclass(rng: random.Random) -> KClass:
    return KClass(rng.randint(0, 3), rng.randint(-4, 4))


def poset_suite(seed: int = 0) -> list[Check]:
    checks: list[Check] = []

    def battery():
        stats = poset_battery((3, 3))
        return (
            f"{stats['sets']} label sets, {stats['pairs']} ordered pairs, "
            f"{stats['minimal']} minimality checks"
        )

    def second_heart():
        heart = Heart.quiver(3)
        for comps in (_compositions_pairs((2, 1)), _compositions_pairs((1, 2))):
            seqs = [Seq(tuple(d_vec_inv(3, p) for p in c), heart) for c in comps]
            for ra in seqs:
                for ca in seqs:
                    ws = w_enumerate(ra, ca, heart)
                    rel = order_relation(ws, heart)
                    for i, a in enumerate(ws):
                        for j, b in enumerate(ws):
                            assert bool(rel[i] >> j & 1) == order_leq(a, b, heart)
        return "order relation re-checked against order_leq in a later heart"

    def stabilization():
        battery = [
            (Seq((KClass(2, 0), KClass(2, 0)), HALF),) * 2 + (Window(2), 2),
            (Seq((KClass(0, 1), KClass(0, 1)), HALF),) * 2 + (Window(1), 1),
            (Seq((KClass(1, 0),), HALF), Seq((KClass(1, 0),), HALF), Window(1), 1),
            (
                Seq((KClass(1, 0), KClass(1, 0)), HALF),
                Seq((KClass(2, 0),), HALF),
                Window(2),
                2,
            ),
            (
                Seq((KClass(1, 1), KClass(0, 2)), HALF),
                Seq((KClass(1, 3),), HALF),
                Window(2),
                3,
            ),
        ]
        for ra, ca, win, bound in battery:
            res = approx_n0(ra, ca, win, bound, probe=3)
            base = frozenset(res.matrices)
            for extra in range(1, 4):
                again = approx_n0(ra, ca, win, bound, probe=3, n_max=res.n0 + extra + 3)
                assert frozenset(again.matrices) == base
        return "returned label sets invariant under heart index + 1, + 2, + 3"

    def dims(seed=seed):
        rng = random.Random(seed)
        for _ in range(10_000):
            s = rng.randint(1, 4)
            l = rng.randint(1, 4)
            m = CMatrix(
                tuple(
                    tuple(_random_kclass(rng) for _ in range(l))
                    for _ in range(s)
                )
            )
            diag = sum(euler_form(e, e) for row in m.entries for e in row)
            assert stratum_dim(m) == stratum_rank(m) - diag
        rng = random.Random(seed + 1)
        for _ in range(2_000):
            r = rng.randint(0, 5)
            d = rng.randint(1, 5) if r == 0 else rng.randint(-5, 5)
            m = CMatrix(((KClass(r, d),),))
            assert stratum_dim(m) == -r * r
        return "10^4 random matrices + 1x1 special case"

    def corner_roundtrip(seed=seed):
        rng = random.Random(seed + 2)
        for _ in range(500):
            s = rng.randint(1, 4)
            l = rng.randint(1, 4)
            m = CMatrix(
                tuple(
                    tuple(_random_kclass(rng) for _ in range(l))
                    for _ in range(s)
                )
            )
            assert CornerTable(m).entries() == m
        return "entries -> corners -> entries is the identity"

    def transpose_symmetry(seed=seed):
        rng = random.Random(seed + 3)
        for _ in range(500):
            s = rng.randint(1, 4)
            l = rng.randint(1, 4)
            m = CMatrix(
                tuple(
                    tuple(_random_kclass(rng) for _ in range(l))
                    for _ in range(s)
                )
            )
            assert stratum_dim(m.transpose()) == stratum_dim(m)
            assert stratum_rank(m.transpose()) == stratum_rank(m)
        return "dimension and rank invariant under transposition"

    _check(checks, "poset/battery", "exhaustive order battery vs the dominance oracle", battery)
    _check(checks, "poset/second-heart", "spot check in a later quiver heart", second_heart)
    _check(checks, "poset/stabilization", "windowed label sets stabilize across hearts", stabilization)
    _check(checks, "poset/dims", "cell dimension and rank bookkeeping", dims)
    _check(checks, "poset/corner-roundtrip", "corner tables invert exactly", corner_roundtrip)
    _check(checks, "poset/transpose", "dimension symmetry under transposition", transpose_symmetry)
    return checks


# --- generator-map suite -------------------------------------------------------

def genmap_suite() -> list[Check]:
    checks: list[Check] = []

    def compatibility():
        for n in range(2, 51):
            assert compose_genmaps(phi_transition(n), psi_alpha_n(n)) == psi_alpha_n(n - 1), n
        return "transition after restriction equals the lower restriction, n <= 50"

    def determinants():
        for n in range(2, 51):
            assert genmap_det(phi_transition(n)) == 1, n
        return "per-degree transition determinant is 1"

    def base_case():
        assert psi_alpha_n(1) == psi_alpha()
        img = dict(psi_alpha().images)
        assert img["1"] == ((1, "V2", -1),)
        return "heart-one restriction is the tilting map"

    def hilbert():
        assert ring_hilbert((1, 1), 5).int_coeffs() == (1, 2, 3, 4, 5, 6)
        full = ring_hilbert(None, 8)
        prev = ring_hilbert((0, 0), 8)
        for d in range(1, 9):
            cur = ring_hilbert((d, d), 8)
            assert all(cur[k] >= prev[k] for k in range(9)), d
            prev = cur
        assert all(ring_hilbert((8, 8), 8)[k] == full[k] for k in range(9))
        return "generator-ring series monotone and convergent"

    _check(checks, "genmap/compatibility", "restriction maps commute with transitions", compatibility)
    _check(checks, "genmap/determinant", "transitions are unimodular per degree", determinants)
    _check(checks, "genmap/base", "first-heart restriction", base_case)
    _check(checks, "genmap/hilbert", "generator-ring Hilbert series", hilbert)
    return checks


SUITE_NAMES = ("cell-example", "heinloth", "diagram", "poset", "genmap")

_SUITES = {
    "cell-example": lambda seed: cell_example_suite(),
    "heinloth": lambda seed: heinloth_suite(),
    "diagram": lambda seed: diagram_suite(),
    "poset": poset_suite,
    "genmap": lambda seed: genmap_suite(),
}


def run_suite(name: str, seed: int = 0) -> Report:
    if name not in _SUITES:
        raise ValueError(f"unknown suite {name!r}; choose from {SUITE_NAMES + ('all',)}")
    return Report(name, tuple(_SUITES[name](seed)))


def run_all(seed: int = 0, threads: int = 1) -> list[Report]:
    """Run every suite.  Independent suites may run on a small thread pool
    (capped by ``threads``); reports come back in the canonical order."""
    if threads > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=min(threads, len(SUITE_NAMES))) as pool:
            futures = {name: pool.submit(run_suite, name, seed) for name in SUITE_NAMES}
            return [futures[name].result() for name in SUITE_NAMES]
    return [run_suite(name, seed) for name in SUITE_NAMES]
