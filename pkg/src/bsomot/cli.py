"""Command-line entry point: ``python -m bsomot <verb> ...``.

Exit status is 0 on success, 1 when a verification fails and 2 on usage or
parse errors. Progress goes to stderr, results to stdout.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Callable, Optional, Sequence

from . import __version__
from .grammar import ClassSyntaxError, format_m, format_poly, parse
from .milnor import InternalError, apply_Q_so, check_algebra_laws
from .motivic import (
    compute_Y,
    dimension_table,
    group_model,
    ses_odd,
    table_to_csv,
    table_to_json,
    verify_main_theorem,
    verify_weight_comparison,
)
from .polyring import engine
from .rings import VerificationFailure, parse_group, verify_iota_kappa_square, verify_localization_sequence
from .weightfilt import (
    verify_iota_strictness,
    verify_strictness,
    verify_wilson_decomposition,
    weight,
    weight_bo,
    weight_bso,
    wilson_basis,
)

GOLDEN_ENV = "BSOMOT_GOLDEN_DIR"
DEFAULT_SEED = 20240611


def _progress(enabled: bool) -> Callable[[str], None]:
    def emit(msg: str) -> None:
        if enabled:
            print(msg, file=sys.stderr, flush=True)
    return emit


def _positive(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("expected a nonnegative integer")
    return v


def _map(fn, items: list, jobs: int) -> list:
    """Order-preserving map, optionally over a process pool."""
    if jobs <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


# -- verbs -----------------------------------------------------------------


def cmd_dims(args) -> int:
    ring = parse_group(args.group)
    model = group_model(ring, args.max_degree, progress=_progress(not args.quiet))
    if args.twist is not None:
        entries = [{"degree": d, "twist": args.twist, "dim": model.dim(d, args.twist),
                    "torsion_dim": model.torsion_dim(d, args.twist)}
                   for d in range(args.max_degree + 1)]
    else:
        entries = dimension_table(model, args.max_degree, "all" if args.bigraded else "topological")
    _emit_table(ring.name, entries, args.format)
    return 0


def _emit_table(group: str, entries: list[dict], fmt: str) -> None:
    if fmt == "json":
        print(table_to_json(group, entries))
    elif fmt == "csv":
        sys.stdout.write(table_to_csv(group, entries))
    else:
        print(f"{group}")
        print(f"{'degree':>6} {'twist':>6} {'dim':>6} {'torsion':>8}")
        for e in entries:
            print(f"{e['degree']:>6} {e['twist']:>6} {e['dim']:>6} {e['torsion_dim']:>8}")


def cmd_weight(args) -> int:
    ring = parse_group(args.group)
    expr = parse(args.cls)
    P = expr.to_w(ring.n)
    if ring.kind == "BSO" and any(m[0] for m in P.monomials):
        raise ValueError("w1 does not exist in BSO_n")
    if ring.kind == "BO" and ring.quotient is None:
        w = weight_bo(ring.n, P)
    elif ring.kind == "BSO" and ring.quotient == ring.n and ring.n >= 3:
        w = weight_bso(ring.n, P)
    else:
        w = weight(ring, P)
    if args.format == "json":
        print(json.dumps({"group": ring.name, "class": format_poly(P), "weight": w}))
    else:
        print(w)
    return 0


def cmd_qop(args) -> int:
    ks = [int(x) for x in str(args.k).split(",") if x != ""]
    if any(a >= b for a, b in zip(ks, ks[1:])) or any(k < 0 for k in ks):
        raise ValueError("Milnor indices must be nonnegative and strictly increasing")
    expr = parse(args.cls)
    if args.so:
        P = expr.to_w(args.n)
        if any(m[0] for m in P.monomials):
            raise ValueError("w1 does not exist in BSO_n")
        for k in reversed(ks):
            P = apply_Q_so(k, P, args.n)
        out = format_poly(P)
    else:
        eng = engine(args.n)
        f = expr.to_m(args.n)
        for k in reversed(ks):
            f = eng.apply_Q(k, f)
        out = format_poly(eng.to_w(f)) if args.output == "w" else format_m(f)
    if args.format == "json":
        print(json.dumps({"k": ks, "n": args.n, "result": out}))
    else:
        print(out)
    return 0


def cmd_wilson(args) -> int:
    elems = wilson_basis(args.n, args.degree)
    report = verify_wilson_decomposition(args.n, args.degree)
    if args.format == "json":
        print(json.dumps({
            "n": args.n, "degree": args.degree,
            "elements": [{"element": e.label(), "weight": e.weight, "odd_parts": e.k}
                         for e in elems],
            "report": report,
        }, indent=2))
    else:
        for e in elems:
            print(f"{e.label():<24} weight {e.weight}")
        print(f"count {report['count']} rank {report['rank']} dim {report['dim']}"
              f" {'ok' if report['passed'] else 'MISMATCH'}")
    return 0 if report["passed"] else 1


def cmd_kernel(args) -> int:
    comp = compute_Y(args.m, args.max_degree, progress=_progress(not args.quiet))
    group = f"BSO_{2 * args.m}"
    entries = [{"degree": d, "twist": j, "dim": v, "torsion_dim": v}
               for (d, j), v in sorted(comp.table.items())]
    _emit_table(group, entries, args.format)
    return 0


def _wilson_job(nd):
    return verify_wilson_decomposition(*nd)


def _strict_job(nd):
    return verify_strictness(*nd)


def _exact_job(nd):
    return verify_localization_sequence(*nd)


def cmd_verify(args) -> int:
    say = _progress(not args.quiet)
    what = args.what
    sections: dict[str, dict] = {}
    names = ["milnor", "wilson", "weights", "strictness", "exactness", "comparison", "theorem"]
    todo = names if what == "all" else [what]
    for name in todo:
        say(f"verify {name}")
        sections[name] = _VERIFIERS[name](args, say)
    passed = all(s["passed"] for s in sections.values())
    if args.format == "json":
        print(json.dumps({"passed": passed, "sections": sections}, indent=2, default=str))
    else:
        for name, s in sections.items():
            print(f"{name:<12} {'PASS' if s['passed'] else 'FAIL'}  {s.get('summary', '')}")
    return 0 if passed else 1


def _v_milnor(args, say):
    r = check_algebra_laws(args.samples, args.seed)
    r["summary"] = f"{r['samples']} samples, {len(r['failures'])} failures"
    return r


def _v_wilson(args, say):
    n_max = args.n or 5
    items = [(n, d) for n in range(1, n_max + 1) for d in range(args.max_degree + 1)]
    rows = _map(_wilson_job, items, args.jobs)
    bad = [r for r in rows if not r["passed"]]
    return {"passed": not bad, "failures": bad, "summary": f"{len(rows)} (n, degree) pairs"}


def _v_weights(args, say):
    from .grammar import parse_w

    n_max = args.n or 8
    bad = []
    for n in range(1, n_max + 1):
        for l in range(1, n + 1):
            if weight_bo(n, parse_w(f"w{l}", n)) != l:
                bad.append({"group": f"BO_{n}", "class": f"w{l}"})
    for n in range(3, n_max + 1):
        for l in range(2, n + 1):
            want = l if l % 2 == 0 else l - 2
            if l == n and n % 2 == 0:
                want = n - 2
            if weight_bso(n, parse_w(f"w{l}", n)) != want:
                bad.append({"group": f"BSO_{n}", "class": f"w{l}"})
    return {"passed": not bad, "failures": bad, "summary": f"w_l tables for n <= {n_max}"}


def _v_strictness(args, say):
    n_max = args.n or 6
    items = [(n, args.max_degree) for n in range(3, n_max + 1)]
    rows = [r for rs in _map(_strict_job, items, args.jobs) for r in rs]
    bad = [r for r in rows if not r["passed"]]
    control = verify_iota_strictness(max(1, (n_max - 1) // 2), args.max_degree)
    control_fails = any(not r["passed"] for r in control)
    return {"passed": not bad and control_fails, "failures": bad,
            "negative_control_failed": control_fails,
            "summary": f"n <= {n_max}, degrees <= {args.max_degree}"}


def _v_exactness(args, say):
    n_max = args.n or 6
    items = [(n, args.max_degree) for n in range(3, n_max + 1)]
    rows = [r for rs in _map(_exact_job, items, args.jobs) for r in rs]
    m_max = args.m or 3
    odd = [r for m in range(1, m_max + 1) for r in ses_odd(m, args.max_degree)]
    square = [r for n in range(3, n_max + 1) for r in verify_iota_kappa_square(n, args.max_degree)]
    bad = [r for r in rows + odd + square if not r["passed"]]
    return {"passed": not bad, "failures": bad[:20],
            "summary": f"{len(rows)} degrees, {len(odd)} bidegrees"}


def _v_comparison(args, say):
    ms = [args.m] if args.m else [2, 3]
    reports = [verify_weight_comparison(m, args.max_degree) for m in ms]
    return {"passed": all(r["passed"] for r in reports),
            "checks": {r["m"]: r["checks"] for r in reports},
            "failures": [f for r in reports for f in r["failures"]],
            "summary": "; ".join(f"m={r['m']}: {len(r['failures'])} of {r['checked']} fail"
                                 for r in reports)}


def _v_theorem(args, say):
    ms = [args.m] if args.m else [2, 3]
    reports = [verify_main_theorem(m, args.max_degree, progress=say) for m in ms]
    return {"passed": all(r["passed"] for r in reports), "reports": reports,
            "summary": "; ".join(
                f"m={r['m']}: {sum(e['passed'] for e in r['entries'])}/{len(r['entries'])} bidegrees"
                for r in reports)}


_VERIFIERS = {
    "milnor": _v_milnor,
    "wilson": _v_wilson,
    "weights": _v_weights,
    "strictness": _v_strictness,
    "exactness": _v_exactness,
    "comparison": _v_comparison,
    "theorem": _v_theorem,
}


def cmd_tables(args) -> int:
    out = Path(args.out_dir or os.environ.get(GOLDEN_ENV) or "golden")
    out.mkdir(parents=True, exist_ok=True)
    say = _progress(not args.quiet)
    for spec in args.groups:
        ring = parse_group(spec)
        model = group_model(ring, args.max_degree, progress=say)
        entries = dimension_table(model, args.max_degree, "all")
        stem = spec.replace(":", "").replace("/", "_")
        (out / f"{stem}.json").write_text(table_to_json(ring.name, entries) + "\n")
        (out / f"{stem}.csv").write_text(table_to_csv(ring.name, entries))
        say(f"wrote {stem}.json and {stem}.csv")
    print(str(out))
    return 0


# -- parser ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="bsomot", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["text", "json", "csv"], default="text")
    common.add_argument("--quiet", action="store_true", help="no progress on stderr")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)
    common.add_argument("--jobs", type=int, default=1)
    sub = p.add_subparsers(dest="verb", required=True)

    d = sub.add_parser("dims", parents=[common], help="motivic dimension tables")
    d.add_argument("--group", required=True, help="bo:N, bso:N, optionally /cK")
    d.add_argument("--max-degree", type=_positive, default=12)
    g = d.add_mutually_exclusive_group()
    g.add_argument("--twist", type=_positive)
    g.add_argument("--bigraded", action="store_true", help="every twist with nonnegative weight")
    d.set_defaults(func=cmd_dims)

    w = sub.add_parser("weight", parents=[common], help="weight of a class")
    w.add_argument("--group", required=True)
    w.add_argument("--class", dest="cls", required=True)
    w.set_defaults(func=cmd_weight)

    q = sub.add_parser("qop", parents=[common], help="apply Milnor operations")
    q.add_argument("--k", required=True, help="index or increasing list, e.g. 0,1")
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--class", dest="cls", required=True)
    q.add_argument("--so", action="store_true", help="act on H*(BSO_n)")
    q.add_argument("--output", choices=["m", "w"], default="m")
    q.set_defaults(func=cmd_qop)

    wi = sub.add_parser("wilson", parents=[common], help="Wilson basis in one degree")
    wi.add_argument("--n", type=int, required=True)
    wi.add_argument("--degree", type=_positive, required=True)
    wi.set_defaults(func=cmd_wilson)

    k = sub.add_parser("kernel", parents=[common], help="Ker t for BSO_2m by induction")
    k.add_argument("--m", type=int, required=True)
    k.add_argument("--max-degree", type=_positive, default=16)
    k.set_defaults(func=cmd_kernel)

    v = sub.add_parser("verify", parents=[common], help="run a verification suite")
    v.add_argument("what", choices=["theorem", "milnor", "wilson", "weights", "strictness",
                                    "exactness", "comparison", "all"])
    v.add_argument("--m", type=int)
    v.add_argument("--n", type=int)
    v.add_argument("--max-degree", type=_positive, default=12)
    v.add_argument("--samples", type=int, default=1000)
    v.set_defaults(func=cmd_verify)

    t = sub.add_parser("tables", parents=[common], help="regenerate golden dimension tables")
    t.add_argument("--out-dir", help=f"defaults to ${GOLDEN_ENV} or ./golden")
    t.add_argument("--max-degree", type=_positive, default=12)
    t.add_argument("--groups", nargs="+",
                   default=["bo:2", "bo:3", "bo:4", "bso:3", "bso:4", "bso:5", "bso:6"])
    t.set_defaults(func=cmd_tables)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "m", None) is not None and args.m < 1:
        parser.error("--m must be positive")
    if getattr(args, "n", None) is not None and args.n < 1:
        parser.error("--n must be positive")
    try:
        return args.func(args)
    except VerificationFailure as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return 1
    except InternalError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 1
    except (ClassSyntaxError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
