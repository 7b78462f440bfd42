"""Command line surface.

Subcommands build algebras, verify the orthosymplectic decomposition,
analyze natural modules, run the feasibility screen, and sweep a grid of
parameters.  Every command emits one canonical JSON document: keys are
sorted, scalars are exact "p/q" strings, and a trailing newline closes
the file, so identical inputs and seed give identical bytes.  Timing is
reported on stderr only, never inside the document.

Exit codes: 0 success, 1 a mathematical check failed, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor

from .decomp import (
    build_example_decomposition,
    enumerate_candidates,
    feasibility_screen,
    verify_sum,
)
from .repmod import (
    classify_type,
    decompose_module,
    highest_weight,
    restrict_natural_action,
)
from .structure import _ideal_positions
from .superalg import (
    Superalgebra,
    build_gl,
    build_orthogonal,
    build_osp,
    build_sl,
    build_special_linear,
    build_symplectic,
)

SCHEMA_VERSION = "1"


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# canonical serialization


def canonical_json(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def write_atomic(path: str, text: str) -> None:
    tmp = f"{path}.tmp.{os.getpid()}"
    with open(tmp, "w", encoding="utf-8") as fh:
        fh.write(text)
    os.replace(tmp, path)


def _render_matrix(matrix) -> list:
    return [[v.encode() for v in row] for row in matrix.entries]


def _render_fingerprint(fp) -> dict:
    return {
        "gradedDims": list(fp.graded_dims),
        "evenIdealDims": list(fp.even_ideal_dims),
        "oddSplitI1": [list(pair) for pair in fp.odd_split_i1],
        "oddSplitI2": [list(pair) for pair in fp.odd_split_i2],
    }


def _render_report(report) -> dict:
    return {
        "dims": {name: list(v) for name, v in report.dims.items()},
        "sumRank": report.sum_rank,
        "intersectionDim": report.intersection_dim,
        "closureK": report.closure_k,
        "closureL": report.closure_l,
        "fingerprintK": _render_fingerprint(report.fingerprint_k),
        "fingerprintL": _render_fingerprint(report.fingerprint_l),
        "verdict": report.verdict,
        "notes": report.notes,
    }


# ---------------------------------------------------------------------------
# module tables


def _module_table(algebra: Superalgebra, which: str, seed: int) -> list:
    m, t = algebra.block_sizes
    dim = m if which == "V" else t
    if dim == 0:
        return []
    act = restrict_natural_action(algebra, which, use_reference=True)
    comps = decompose_module(act, seed=seed)
    i1 = _ideal_positions(algebra, "I1") if "I1" in algebra.ideals else []
    i2 = _ideal_positions(algebra, "I2") if "I2" in algebra.ideals else []
    if m == 0 and not i2:
        # purely symplectic: the single ideal sits on the symplectic side
        i1, i2 = i2, i1
    cartan = algebra.cartans.get("I1" if which == "V" else "I2")
    if cartan is None and which == "W" and m == 0:
        # purely symplectic algebras keep their single Cartan under "I1"
        cartan = algebra.cartans.get("I1")
    if cartan is not None:
        if which == "V":
            blocks = [e.block(0, m, 0, m) for e in cartan.elements]
        else:
            blocks = [e.block(m, m + t, m, m + t) for e in cartan.elements]
    out = []
    for comp in comps:
        entry = {"dim": comp.dim}
        if i1 or i2:
            entry["type"] = classify_type(comp, act, i1, i2)
        if cartan is not None and cartan.rank > 0:
            entry["highestWeight"] = list(
                highest_weight(comp, cartan, blocks))
        out.append(entry)
    return out


# ---------------------------------------------------------------------------
# command bodies (pure: parameters in, document out)


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise UsageError(message)


def _build_algebra(name: str, m, n, form: str) -> Superalgebra:
    if name == "gl":
        _require(m is not None and n is not None, "gl needs --m and --n")
        return build_gl(m, 2 * n)
    if name == "sl":
        _require(m is not None and n is not None, "sl needs --m and --n")
        return build_sl(m, n)
    if name == "osp":
        _require(m is not None and n is not None, "osp needs --m and --n")
        return build_osp(m, n, form=form)
    if name == "o":
        _require(m is not None, "o needs --m")
        return build_orthogonal(m, form=form)
    if name == "sp":
        _require(n is not None, "sp needs --n")
        return build_symplectic(n)
    if name == "slk":
        _require(m is not None, "slk needs --m")
        return build_special_linear(m)
    raise UsageError(f"unknown algebra {name!r}")


def _algebra_echo(args) -> dict:
    echo = {"name": args.cmd, "algebra": args.algebra, "form": args.form,
            "seed": args.resolved_seed}
    if args.m is not None:
        echo["m"] = args.m
    if args.n is not None:
        echo["n"] = args.n
    return echo


def build_document(args) -> dict:
    algebra = _build_algebra(args.algebra, args.m, args.n, args.form)
    form = None
    if algebra.form is not None:
        form = {"ortho": algebra.form.ortho, "m": algebra.form.m,
                "n": algebra.form.n}
    return {
        "schemaVersion": SCHEMA_VERSION,
        "command": _algebra_echo(args),
        "label": algebra.label,
        "blockSizes": list(algebra.block_sizes),
        "form": form,
        "basis": [
            {"parity": g.parity, "entries": _render_matrix(g.matrix)}
            for g in algebra.basis
        ],
    }


def modules_document(args) -> dict:
    algebra = _build_algebra(args.algebra, args.m, args.n, args.form)
    seed = args.resolved_seed
    return {
        "schemaVersion": SCHEMA_VERSION,
        "command": _algebra_echo(args),
        "results": {
            "label": algebra.label,
            "gradedDims": list(algebra.graded_dims),
            "V": _module_table(algebra, "V", seed),
            "W": _module_table(algebra, "W", seed),
        },
    }


def verify_document(k: int, n: int, seed: int) -> dict:
    s, kk, ll = build_example_decomposition(k, n)
    report = verify_sum(s, kk, ll, seed=seed)
    return {
        "schemaVersion": SCHEMA_VERSION,
        "command": {"name": "verify", "k": k, "n": n, "seed": seed},
        "results": {
            "labels": {"S": s.label, "K": kk.label, "L": ll.label},
            "report": _render_report(report),
            "modules": {
                "V": _module_table(ll, "V", seed),
                "W": _module_table(ll, "W", seed),
            },
        },
    }


def screen_document(m: int, n: int, seed: int = 0) -> dict:
    pairs = []
    survivors = []
    for pair in enumerate_candidates(m, n):
        verdict = feasibility_screen(m, n, pair)
        row = {
            "familyK": list(pair.family_k),
            "familyL": list(pair.family_l),
            "status": verdict.status,
            "rule": verdict.rule,
            "detail": verdict.detail,
        }
        pairs.append(row)
        if verdict.survives:
            survivors.append({"familyK": list(pair.family_k),
                              "familyL": list(pair.family_l)})
    return {
        "schemaVersion": SCHEMA_VERSION,
        "command": {"name": "screen", "m": m, "n": n, "seed": seed},
        "results": {
            "candidates": len(pairs),
            "pairs": pairs,
            "survivors": survivors,
        },
    }


def _sweep_point(params: tuple) -> tuple:
    k, n, seed = params
    doc = verify_document(k, n, seed)
    verdict = doc["results"]["report"]["verdict"]
    return k, n, doc, verdict


def sweep_documents(k_max: int, n_max: int, seed: int, jobs: int):
    """Per-point verify documents in grid order plus a summary document."""
    grid = [(k, n) for k in range(2, k_max + 1) for n in range(1, n_max + 1)]
    work = [(k, n, seed) for k, n in grid if k != n]
    if jobs > 1 and work:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            done = {(k, n): (doc, verdict)
                    for k, n, doc, verdict in pool.map(_sweep_point, work)}
    else:
        done = {}
        for params in work:
            k, n, doc, verdict = _sweep_point(params)
            done[(k, n)] = (doc, verdict)
    points = []
    point_docs = {}
    all_ok = True
    for k, n in grid:
        if k == n:
            points.append({"k": k, "n": n, "status": "skipped"})
            continue
        doc, verdict = done[(k, n)]
        points.append({"k": k, "n": n, "status": verdict})
        point_docs[(k, n)] = doc
        if verdict != "exact-sum":
            all_ok = False
    summary = {
        "schemaVersion": SCHEMA_VERSION,
        "command": {"name": "sweep", "kMax": k_max, "nMax": n_max,
                    "seed": seed},
        "results": {"points": points, "allOk": all_ok},
    }
    return summary, point_docs


# ---------------------------------------------------------------------------
# argument plumbing


def _add_common(sub) -> None:
    sub.add_argument("--seed", type=int, default=None,
                     help="seed for randomized internals "
                          "(default: $OSPDECOMP_SEED or 0)")
    sub.add_argument("--out", default=None, help="write the document here")
    sub.add_argument("--json", action="store_true",
                     help="print the document to stdout even when --out is set")


def _add_algebra_flags(sub) -> None:
    sub.add_argument("--algebra", required=True,
                     choices=["gl", "sl", "osp", "o", "sp", "slk"])
    sub.add_argument("--m", type=int, default=None)
    sub.add_argument("--n", type=int, default=None)
    sub.add_argument("--form", choices=["identity", "split"],
                     default="identity")


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ospdecomp",
        description="exact decompositions of orthosymplectic Lie superalgebras")
    subs = parser.add_subparsers(dest="cmd", required=True)

    p_build = subs.add_parser("build", help="dump an algebra basis as JSON")
    _add_algebra_flags(p_build)
    _add_common(p_build)

    p_verify = subs.add_parser(
        "verify", help="build the decomposition at (k, n) and certify it")
    p_verify.add_argument("--k", type=int, required=True)
    p_verify.add_argument("--n", type=int, required=True)
    _add_common(p_verify)

    p_modules = subs.add_parser(
        "modules", help="decompose the natural modules of an algebra")
    _add_algebra_flags(p_modules)
    _add_common(p_modules)

    p_screen = subs.add_parser(
        "screen", help="run the candidate-pair feasibility screen")
    p_screen.add_argument("--m", type=int, required=True)
    p_screen.add_argument("--n", type=int, required=True)
    _add_common(p_screen)

    p_sweep = subs.add_parser(
        "sweep", help="verify a whole (k, n) grid")
    p_sweep.add_argument("--k-max", type=int, required=True)
    p_sweep.add_argument("--n-max", type=int, required=True)
    p_sweep.add_argument("--jobs", type=int, default=1)
    p_sweep.add_argument("--out-dir", default=None,
                         help="write one verify document per grid point here")
    _add_common(p_sweep)
    return parser


def _resolve_seed(args) -> int:
    if getattr(args, "seed", None) is not None:
        return args.seed
    env = os.environ.get("OSPDECOMP_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"OSPDECOMP_SEED is not an integer: {env!r}")


def _emit(doc: dict, args) -> None:
    text = canonical_json(doc)
    if args.out:
        write_atomic(args.out, text)
    if args.json or not args.out:
        sys.stdout.write(text)


def main(argv=None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    started = time.perf_counter()
    try:
        args.resolved_seed = _resolve_seed(args)
        status = 0
        if args.cmd == "build":
            _emit(build_document(args), args)
        elif args.cmd == "modules":
            _emit(modules_document(args), args)
        elif args.cmd == "verify":
            _require(args.k >= 2 and args.n >= 1, "need k >= 2 and n >= 1")
            _require(args.k != args.n, "k = n is excluded (sl(n,n))")
            doc = verify_document(args.k, args.n, args.resolved_seed)
            _emit(doc, args)
            if doc["results"]["report"]["verdict"] != "exact-sum":
                status = 1
        elif args.cmd == "screen":
            _require(args.m >= 3 and args.n >= 1, "need m >= 3 and n >= 1")
            _emit(screen_document(args.m, args.n, args.resolved_seed), args)
        elif args.cmd == "sweep":
            _require(args.k_max >= 2 and args.n_max >= 1,
                     "need k-max >= 2 and n-max >= 1")
            _require(args.jobs >= 1, "need jobs >= 1")
            summary, point_docs = sweep_documents(
                args.k_max, args.n_max, args.resolved_seed, args.jobs)
            if args.out_dir:
                os.makedirs(args.out_dir, exist_ok=True)
                for (k, n), doc in sorted(point_docs.items()):
                    path = os.path.join(args.out_dir,
                                        f"verify-k{k}-n{n}.json")
                    write_atomic(path, canonical_json(doc))
            _emit(summary, args)
            if not summary["results"]["allOk"]:
                status = 1
    except UsageError as exc:
        print(f"ospdecomp: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        # constructor preconditions surface as ValueError
        print(f"ospdecomp: {exc}", file=sys.stderr)
        return 2
    elapsed = time.perf_counter() - started
    print(f"[ospdecomp] {args.cmd} finished in {elapsed:.3f}s",
          file=sys.stderr)
    return status
