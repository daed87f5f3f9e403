"""Command-line front end.

Classes are written ``r,d``; sequences are semicolon-separated classes;
matrices come inline (``--entries "r,d r,d; r,d r,d"``) or, for anything
larger than 2x2, from a JSON file.  Identical invocations (including the
seed) produce byte-identical output.  Exit codes: 0 success, 1 domain
error, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys

from .gradedcoh import (
    phi_transition,
    polyrep_series,
    psi_alpha,
    psi_alpha_n,
    schur_series,
    stratum_top_series,
)
from .hnstrata import bundle_types, coh_series, hn_codim, hn_dim, hn_enumerate, trunc_series
from .kclass import (
    HALF,
    Heart,
    KClass,
    Window,
    d_vec,
    heart_positive,
    slope,
    stack_dim,
    tilt_class,
    tilt_class_inv,
    twist_class,
)
from .pbwdiagram import pbw_sequence, region_map
from .verify import SUITE_NAMES, default_workers, run_all, run_suite
from .wposet import (
    Seq,
    CMatrix,
    hasse,
    stratum_dim,
    stratum_rank,
    w_enumerate,
    w_enumerate_windowed,
)


class UsageError(Exception):
    pass


def parse_class(text: str) -> KClass:
    try:
        r, d = text.split(",")
        return KClass(int(r), int(d))
    except (ValueError, TypeError):
        raise UsageError(f"bad class {text!r}: expected 'r,d'")


def parse_classes(text: str) -> tuple[KClass, ...]:
    return tuple(parse_class(p) for p in text.split(";") if p.strip())


def parse_heart(text: str) -> Heart:
    if text == "half":
        return HALF
    if text.startswith("nu:"):
        try:
            return Heart.quiver(int(text[3:]))
        except ValueError as exc:
            raise UsageError(f"bad heart {text!r}: {exc}")
    raise UsageError(f"bad heart {text!r}: expected 'half' or 'nu:N'")


def parse_matrix(args) -> CMatrix:
    if getattr(args, "matrix", None):
        with open(args.matrix) as fh:
            return CMatrix.from_json(json.load(fh))
    if getattr(args, "entries", None):
        rows = []
        for row_text in args.entries.split(";"):
            cells = [parse_class(c) for c in row_text.split()]
            rows.append(tuple(cells))
        if not rows or len(rows[0]) > 2 or len(rows) > 2:
            raise UsageError("inline --entries is limited to 2x2; use --matrix FILE")
        return CMatrix(tuple(rows))
    raise UsageError("need --matrix FILE or --entries")


def emit(text: str, path: str | None):
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def emit_json(data, path: str | None):
    emit(json.dumps(data, sort_keys=True, indent=2) + "\n", path)


def emit_csv(rows, header, path: str | None):
    import csv
    import io

    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    emit(buf.getvalue(), path)


def series_csv_rows(data: dict):
    if "top" in data:
        return [(data["top"] - 2 * k, c) for k, c in enumerate(data["coeffs"])]
    return list(enumerate(data["coeffs"]))


def emit_series(data: dict, args):
    if args.format == "csv":
        emit_csv(series_csv_rows(data), ("degree", "coefficient"), args.output)
    else:
        emit_json(data, args.output)


# --- subcommands ---------------------------------------------------------------

def cmd_kclass(args) -> int:
    a = parse_class(args.cls)
    heart = parse_heart(args.heart)
    info = {
        "class": a.to_json(),
        "heart": heart.to_json(),
        "positive": heart_positive(a, heart),
        "tilt": tilt_class(a).to_json(),
        "tilt_inverse": tilt_class_inv(a).to_json(),
    }
    if not a.is_zero():
        num, den = slope(a)
        info["slope"] = "inf" if den == 0 else f"{num}/{den}"
    if heart_positive(a, HALF):
        info["stack_dim"] = stack_dim(a)
    if not heart.is_half:
        info["d_vec"] = list(d_vec(heart.nu, a))
    if args.twist is not None:
        info["twisted"] = twist_class(a, args.twist).to_json()
    emit_json(info, args.output)
    return 0


def cmd_hn(args) -> int:
    a = parse_class(args.cls)
    win = Window(args.window)
    if args.bundle_types:
        data = {
            "class": a.to_json(),
            "window": win.to_json(),
            "bundle_types": [
                {"degrees": list(b.degrees), "torsion": b.torsion_deg}
                for b in bundle_types(a, win)
            ],
        }
        emit_json(data, args.output)
        return 0
    strata = [
        {"parts": t.to_json(), "dim": hn_dim(t), "codim": hn_codim(t)}
        for t in hn_enumerate(a, win)
    ]
    if args.format == "csv":
        rows = [
            (s["codim"], s["dim"], ";".join(f"{r},{d}" for r, d in s["parts"]))
            for s in strata
        ]
        emit_csv(rows, ("codim", "dim", "parts"), args.output)
    else:
        emit_json(
            {"class": a.to_json(), "window": win.to_json(), "strata": strata},
            args.output,
        )
    return 0


def _parse_margins(args, heart: Heart) -> tuple[Seq, Seq]:
    rows = parse_classes(args.rows)
    cols = parse_classes(args.cols)
    ra, ca = Seq(rows, heart), Seq(cols, heart)
    if args.alpha:
        total = parse_class(args.alpha)
        if ra.total != total or ca.total != total:
            raise ValueError(
                f"margins total {ra.total}/{ca.total}, expected {total}"
            )
    if args.klr and not (ra.is_klr() and ca.is_klr()):
        raise ValueError("--klr requires rank <= 1 parts with point-class torsion")
    return ra, ca


def cmd_wposet(args) -> int:
    heart = parse_heart(args.heart)
    ra, ca = _parse_margins(args, heart)
    if heart.is_half:
        if args.slope_bound is None:
            raise UsageError("half heart enumeration needs --slope-bound")
        # the recorded window defaults to the index matching the degree bound
        m = args.window if args.window is not None else max(1, args.slope_bound)
        cells = w_enumerate_windowed(ra, ca, Window(m), args.slope_bound)
        matrices = list(cells.matrices)
        meta = {"window": cells.window.to_json(), "slope_bound": cells.slope_bound}
    else:
        matrices = w_enumerate(ra, ca, heart)
        meta = {}
    diagram = hasse(matrices, heart)
    if args.format == "dot":
        emit(diagram.to_dot(), args.output)
        return 0
    data = {
        "heart": heart.to_json(),
        **meta,
        "matrices": [
            {
                "matrix": m.to_json(),
                "dim": stratum_dim(m),
                "rank": stratum_rank(m),
                "hash": m.stable_hash(),
            }
            for m in matrices
        ],
        "hasse": diagram.to_json(),
    }
    emit_json(data, args.output)
    return 0


def cmd_pbw_seq(args) -> int:
    w = parse_matrix(args)
    seq = pbw_sequence(w)
    diagram = region_map(w)
    if args.format == "dot":
        emit(diagram.region_dot(), args.output)
        return 0
    if args.wiring:
        emit(diagram.wiring_text(), args.output)
        return 0
    emit_json(
        {"sequence": seq.to_json(), "diagram": diagram.to_json()}, args.output
    )
    return 0


def cmd_series(args) -> int:
    if args.kind == "coh":
        emit_series(coh_series(parse_class(args.cls), args.cutoff).to_json(), args)
    elif args.kind == "trunc":
        if args.window is None:
            raise UsageError("series trunc needs --window")
        emit_series(
            trunc_series(parse_class(args.cls), Window(args.window), args.cutoff).to_json(),
            args,
        )
    elif args.kind == "stratum":
        w = parse_matrix(args)
        emit_series(stratum_top_series(w, args.depth).to_json(), args)
    elif args.kind == "schur":
        heart = HALF
        ra, ca = _parse_margins(args, heart)
        if args.window is None or args.slope_bound is None:
            raise UsageError("series schur needs --window and --slope-bound")
        cells = w_enumerate_windowed(ra, ca, Window(args.window), args.slope_bound)
        res = schur_series([ra], [ca], cells.matrices, args.depth)
        if args.format == "csv":
            emit_csv(
                series_csv_rows(res.aggregate.to_json()),
                ("degree", "coefficient"),
                args.output,
            )
        else:
            emit_json(res.to_json(), args.output)
    elif args.kind == "polyrep":
        a = parse_class(args.cls)
        if not args.seq:
            raise UsageError("series polyrep needs at least one --seq")
        seqs = [Seq(parse_classes(s), HALF) for s in args.seq]
        res = polyrep_series(a, seqs, args.depth)
        if args.format == "csv":
            emit_csv(
                series_csv_rows(res.aggregate.to_json()),
                ("degree", "coefficient"),
                args.output,
            )
        else:
            emit_json(res.to_json(), args.output)
    return 0


def cmd_genmap(args) -> int:
    if args.kind == "psi":
        emit_json(psi_alpha().to_json(), args.output)
    elif args.kind == "psin":
        emit_json(psi_alpha_n(args.n).to_json(), args.output)
    elif args.kind == "phi":
        emit_json(phi_transition(args.n).to_json(), args.output)
    elif args.kind == "check-compat":
        from .gradedcoh import compose_genmaps, genmap_det

        results = []
        for n in range(2, args.n_max + 1):
            ok = compose_genmaps(phi_transition(n), psi_alpha_n(n)) == psi_alpha_n(n - 1)
            ok = ok and genmap_det(phi_transition(n)) == 1
            results.append({"n": n, "passed": ok})
        all_ok = all(r["passed"] for r in results)
        emit_json({"passed": all_ok, "checks": results}, args.output)
        return 0 if all_ok else 1
    return 0


def cmd_verify(args) -> int:
    if args.threads is not None:
        # suites read the cap from the environment, like library callers do
        import os

        os.environ["STEINBERG_THREADS"] = str(args.threads)
    threads = args.threads if args.threads is not None else default_workers()
    if args.suite == "all":
        reports = run_all(seed=args.seed, threads=threads)
    else:
        reports = [run_suite(args.suite, seed=args.seed)]
    payload = {"passed": all(r.passed for r in reports), "suites": [r.to_json() for r in reports]}
    if args.format == "csv":
        rows = [
            (r.suite, c.check_id, "pass" if c.passed else "fail")
            for r in reports
            for c in r.checks
        ]
        emit_csv(rows, ("suite", "check", "result"), args.output)
    else:
        emit_json(payload, args.output)
    for r in reports:
        for c in r.checks:
            status = "ok" if c.passed else "FAIL"
            print(f"[{status}] {r.suite}/{c.check_id.split('/')[-1]}: {c.label}", file=sys.stderr)
    return 0 if payload["passed"] else 1


# --- parser --------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="steinberg",
        description="exact cell combinatorics and graded-dimension series "
        "for sheaf-side Schur/KLR algebras of the projective line",
    )
    sub = top.add_subparsers(dest="command", required=True)

    def common(p, fmt=("json", "csv")):
        p.add_argument("--format", choices=fmt, default="json")
        p.add_argument("--output", help="write to this path instead of stdout")

    p = sub.add_parser("kclass", help="inspect a single class")
    p.add_argument("--class", dest="cls", required=True)
    p.add_argument("--heart", default="half")
    p.add_argument("--twist", type=int)
    common(p, fmt=("json",))
    p.set_defaults(fn=cmd_kclass)

    p = sub.add_parser("hn", help="Harder-Narasimhan strata in a window")
    p.add_argument("--class", dest="cls", required=True)
    p.add_argument("--window", type=int, required=True)
    p.add_argument("--bundle-types", action="store_true")
    common(p)
    p.set_defaults(fn=cmd_hn)

    p = sub.add_parser("wposet", help="cell label sets and their closure order")
    p.add_argument("--alpha")
    p.add_argument("--rows", required=True)
    p.add_argument("--cols", required=True)
    p.add_argument("--heart", default="half")
    p.add_argument("--window", type=int)
    p.add_argument("--slope-bound", type=int, dest="slope_bound")
    p.add_argument("--klr", action="store_true")
    common(p, fmt=("json", "dot"))
    p.set_defaults(fn=cmd_wposet)

    p = sub.add_parser("pbw-seq", help="split/cross/merge sequence of a cell matrix")
    p.add_argument("--matrix", help="JSON file with the matrix")
    p.add_argument("--entries", help="inline matrix, rows ';'-separated")
    p.add_argument("--wiring", action="store_true", help="emit the textual wiring diagram")
    common(p, fmt=("json", "dot"))
    p.set_defaults(fn=cmd_pbw_seq)

    p = sub.add_parser("series", help="graded-dimension series")
    p.add_argument("kind", choices=("coh", "trunc", "stratum", "schur", "polyrep"))
    p.add_argument("--class", dest="cls")
    p.add_argument("--cutoff", type=int, default=10)
    p.add_argument("--depth", type=int, default=10)
    p.add_argument("--window", type=int)
    p.add_argument("--slope-bound", type=int, dest="slope_bound")
    p.add_argument("--rows")
    p.add_argument("--cols")
    p.add_argument("--alpha")
    p.add_argument("--klr", action="store_true")
    p.add_argument("--matrix")
    p.add_argument("--entries")
    p.add_argument("--seq", action="append", help="sequence (repeatable)")
    common(p)
    p.set_defaults(fn=cmd_series)

    p = sub.add_parser("genmap", help="generator-level ring maps")
    p.add_argument("kind", choices=("psi", "psin", "phi", "check-compat"))
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--n-max", type=int, default=50, dest="n_max")
    common(p, fmt=("json",))
    p.set_defaults(fn=cmd_genmap)

    p = sub.add_parser("verify", help="run a built-in verification suite")
    p.add_argument("suite", choices=SUITE_NAMES + ("all",))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, help="parallelism cap (default: STEINBERG_THREADS)")
    common(p)
    p.set_defaults(fn=cmd_verify)

    return top


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.fn(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, RuntimeError, OSError) as exc:
        print(str(exc), file=sys.stderr)
        return 1


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
