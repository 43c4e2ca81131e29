"""Command-line surface: constructions, certificates, reconstruction, counts,
minimum search, code-size bounds, dimension, and size reports.

Exit codes partition outcomes: 0 success, 1 certified negative verdict
(a set failed certification, a search proved absence, partial data admits
no completion), 2 validation/usage error, 3 resource cap reached before a
verdict.  Success output is JSON on stdout (stable schemas, sorted keys)
or a text rendering under --pretty; diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from math import log

from .bitrades import resolve_engine
from .core import (GridSig, PointSet, ReconstructionError, ResourceCapError,
                   ValidationError, render_cube, render_point_set)
from .cubes import (FreqParams, PartialCube, cardinality_report, count_cubes,
                    lk_dimension, lk_nullity, reconstruct_baseline,
                    reconstruct_csp)
from .lincodes import bounds_min_testing, greedy_code_testing_set
from .testsets import (Certificate, ConstructionSpec, MinSearchResult,
                       certify_supertesting, certify_testing_by_enumeration,
                       certify_testing_by_sampling, min_supertesting_search)

_FLAG_FAMILIES = ("baseline", "three-cube", "three-cube-min", "hamming",
                  "recursive", "lifted-product")
_COMPOSITE_FAMILIES = ("lift", "product", "step-up")


def report_bound(q: int, n: int) -> dict:
    """Size and growth-rate arithmetic for the lifted-product set (k = 1).

    Reports the constructed size |T|, the exponent log_{q-1}|T| (strictly
    below n once n >= 3), its per-dimension rate alpha_n, and the limiting
    per-dimension rate (1/3) log_{q-1}((q-1)^3 - 1) of the 3-dimensional
    block construction.
    """
    if q < 3:
        raise ValidationError("growth-rate report needs alphabet q >= 3")
    GridSig(q, n)
    m, t = divmod(n, 3)
    size = ((q - 1) ** 3 - 1) ** m * (q - 1) ** t
    base = q - 1
    exponent = log(size) / log(base)
    limit = log(base ** 3 - 1) / log(base) / 3
    return {
        "q": q, "n": n,
        "set_size": {"value": size, "source": "constructed"},
        "trivial_size": {"value": base ** n, "source": "formula"},
        "exponent": {"value": exponent, "source": "constructed"},
        "alpha_n": {"value": exponent / n, "source": "constructed"},
        "alpha_limit": {"value": limit, "source": "formula"},
    }


# ---------------------------------------------------------------------------
# small helpers

def _read_json(path: str):
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise ValidationError(f"cannot read {path!r}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path!r} is not valid JSON: {exc}") from exc


def _parse_lambdas(text: str) -> tuple:
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError as exc:
        raise ValidationError(
            f"--lambdas expects comma-separated integers, got {text!r}") from exc


def _emit(doc, pretty_text: str | None, pretty: bool) -> None:
    if pretty and pretty_text is not None:
        print(pretty_text)
    else:
        print(json.dumps(doc, indent=2, sort_keys=True))


def _render_set(T: PointSet) -> str:
    lines = [f"point set over [{T.sig.q}]^{T.sig.n}, size {len(T)}"]
    if T.sig.n <= 3:
        lines.append(render_point_set(T))
    else:
        lines.extend(str(p) for p in T)
    return "\n".join(lines)


def _render_certificate(c: Certificate) -> str:
    lines = [f"kind    : {c.kind}",
             f"verdict : {c.verdict}",
             f"params  : {c.params}",
             f"engine  : {c.engine}"]
    for key in sorted(c.evidence):
        if key == "witness_values":
            continue
        lines.append(f"{key:8s}: {c.evidence[key]}")
    return "\n".join(lines)


def _render_search(r: MinSearchResult) -> str:
    lines = [f"minimum supertesting search q={r.q} n={r.n} k={r.k} "
             f"bound={r.size_bound}"]
    if r.found is None:
        lines.append("no supertesting set within the size bound")
    else:
        lines.append(f"found size {len(r.found)}: {r.found.points}")
    lines.append(f"candidates enumerated {r.candidates_enumerated}, "
                 f"passed filters {r.candidates_filtered}, "
                 f"classes certified {r.classes_certified}, "
                 f"search nodes {r.nodes_total}")
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# verb implementations

def _cmd_construct(args) -> int:
    if args.spec:
        spec = ConstructionSpec.from_json_dict(_read_json(args.spec))
    else:
        if args.family is None:
            raise ValidationError("construct needs --family or --spec")
        if args.family in _COMPOSITE_FAMILIES:
            raise ValidationError(
                f"family {args.family!r} nests inner sets; pass it as a "
                "--spec JSON document")
        params = {}
        for key in ("q", "n", "k"):
            val = getattr(args, key)
            if val is not None:
                params[key] = val
        if args.affine:
            params["affine"] = True
        spec = ConstructionSpec(args.family, params)
    T = spec.build()
    _emit(T.to_json_dict(), _render_set(T), args.pretty)
    return 0


def _cmd_certify(args) -> int:
    T = PointSet.from_json_dict(_read_json(args.set))
    if args.mode == "supertesting":
        cert = certify_supertesting(T, T.sig.q, T.sig.n, args.k,
                                    node_cap=args.node_cap,
                                    engine=args.engine)
    else:
        if args.lambdas is None:
            raise ValidationError(f"mode {args.mode!r} needs --lambdas")
        params = FreqParams(T.sig.q, T.sig.n, args.k,
                            _parse_lambdas(args.lambdas))
        if args.mode == "enumeration":
            cert = certify_testing_by_enumeration(T, params,
                                                  member_cap=args.member_cap,
                                                  node_cap=args.node_cap,
                                                  engine=args.engine)
        else:  # sampling
            if args.seed is None:
                raise ValidationError(
                    "sampling certificates need an explicit --seed")
            cert = certify_testing_by_sampling(T, params, args.samples,
                                               args.seed,
                                               node_cap=args.node_cap,
                                               engine=args.engine)
    _emit(cert.to_json_dict(), _render_certificate(cert), args.pretty)
    return 0 if cert.verdict else 1


def _cmd_reconstruct(args) -> int:
    partial = PartialCube.from_json_dict(_read_json(args.partial))
    params = FreqParams(partial.sig.q, partial.sig.n, args.k,
                        _parse_lambdas(args.lambdas))
    if args.mode == "baseline":
        cube = reconstruct_baseline(partial, params)
        unique = True
    else:  # csp
        T = (PointSet.from_json_dict(_read_json(args.set))
             if args.set else partial.domain())
        cube, unique = reconstruct_csp(partial, T, params,
                                       node_cap=args.node_cap,
                                       engine=args.engine)
    doc = cube.to_json_dict(m=params.m)
    doc["unique"] = unique
    pretty = (f"unique: {unique}\n{render_cube(cube)}"
              if partial.sig.n <= 3 else f"unique: {unique}\n{cube.values}")
    _emit(doc, pretty, args.pretty)
    return 0


def _cmd_count(args) -> int:
    params = FreqParams(args.q, args.n, args.k, _parse_lambdas(args.lambdas))
    n = count_cubes(params, node_cap=args.node_cap, engine=args.engine)
    _emit({"count": n}, f"count: {n}", args.pretty)
    return 0


def _cmd_search_min(args) -> int:
    result = min_supertesting_search(args.q, args.n, args.k, args.bound,
                                     candidate_budget=args.budget,
                                     node_cap=args.node_cap,
                                     engine=args.engine)
    _emit(result.to_json_dict(), _render_search(result), args.pretty)
    return 0 if result.found is not None else 1


def _cmd_bounds(args) -> int:
    lower, upper = bounds_min_testing(args.n, args.k, affine=args.affine)
    doc = {"n": args.n, "k": args.k, "affine": args.affine,
           "lower": {"value": lower, "source": "formula"},
           "upper": {"value": upper, "source": "formula"},
           "greedy_size": None}
    if args.n <= 62:
        greedy = greedy_code_testing_set(args.n, args.k, affine=args.affine)
        doc["greedy_size"] = {"value": len(greedy), "source": "constructed"}
    lines = [f"minimum testing-set size for degree-{args.k} "
             f"{'affine' if args.affine else 'linear'} forms on {args.n} bits",
             f"  lower bound : {lower}",
             f"  upper bound : {upper}"]
    if doc["greedy_size"]:
        lines.append(f"  greedy size : {doc['greedy_size']['value']}")
    _emit(doc, "\n".join(lines), args.pretty)
    return 0


def _cmd_dim(args) -> int:
    dim = lk_dimension(args.q, args.n, args.k)
    doc = {"q": args.q, "n": args.n, "k": args.k,
           "dimension": {"value": dim, "source": "formula"}}
    lines = [f"zero-face-sum space for q={args.q}, n={args.n}, k={args.k}",
             f"  dimension : {dim}"]
    if args.rank_check:
        nullity = lk_nullity(args.q, args.n, args.k)
        doc["rank_nullity"] = {"value": nullity, "source": "enumerated"}
        doc["agrees"] = nullity == dim
        lines.append(f"  rank check: {nullity} "
                     f"({'agrees' if nullity == dim else 'DISAGREES'})")
    _emit(doc, "\n".join(lines), args.pretty)
    return 0


def _cmd_report(args) -> int:
    rep = cardinality_report(args.q, args.n, args.k)
    doc = rep.to_json_dict()
    lines = [rep.render()]
    if args.q >= 3 and args.k == 1:
        doc["asymptotic"] = report_bound(args.q, args.n)
        a = doc["asymptotic"]
        lines.append(
            f"  growth: size {a['set_size']['value']}, exponent "
            f"{a['exponent']['value']:.4f} < {args.n}, per-dimension rate "
            f"{a['alpha_n']['value']:.4f} (limit "
            f"{a['alpha_limit']['value']:.4f})")
    _emit(doc, "\n".join(lines), args.pretty)
    return 0


# ---------------------------------------------------------------------------
# parser

def _add_common(sp, *, engine=True, node_cap=True, jobs=True):
    sp.add_argument("--pretty", action="store_true",
                    help="text rendering instead of JSON")
    if engine:
        sp.add_argument("--engine", choices=("pure", "compiled"),
                        help="search engine (default: best available)")
    if node_cap:
        sp.add_argument("--node-cap", type=int, default=None,
                        help="search node budget (env FREQCUBE_NODE_CAP)")
    if jobs:
        sp.add_argument("--jobs", type=int, default=0,
                        help="advisory parallelism hint (current "
                             "implementation is sequential)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="freqcube",
        description="testing sets and bitrades for frequency hypercubes")
    sub = ap.add_subparsers(dest="verb", required=True)

    sp = sub.add_parser("construct", help="build a named point-set family")
    sp.add_argument("--family", choices=_FLAG_FAMILIES + _COMPOSITE_FAMILIES)
    sp.add_argument("--spec", help="ConstructionSpec JSON file ('-' = stdin)")
    sp.add_argument("--q", type=int)
    sp.add_argument("--n", type=int)
    sp.add_argument("--k", type=int)
    sp.add_argument("--affine", action="store_true",
                    help="hamming family: include the zero point")
    _add_common(sp, engine=False, node_cap=False, jobs=False)
    sp.set_defaults(func=_cmd_construct)

    sp = sub.add_parser("certify", help="certify a point set")
    sp.add_argument("--mode", required=True,
                    choices=("supertesting", "enumeration", "sampling"))
    sp.add_argument("--set", required=True,
                    help="PointSet JSON file ('-' = stdin)")
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--lambdas", help="comma-separated symbol frequencies")
    sp.add_argument("--samples", type=int, default=1000)
    sp.add_argument("--seed", type=int, default=None,
                    help="required for sampling mode")
    sp.add_argument("--member-cap", type=int, default=10 ** 6)
    _add_common(sp)
    sp.set_defaults(func=_cmd_certify)

    sp = sub.add_parser("reconstruct",
                        help="complete an array from its testing-set values")
    sp.add_argument("--mode", required=True, choices=("baseline", "csp"))
    sp.add_argument("--partial", required=True,
                    help="PartialCube JSON file ('-' = stdin)")
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--lambdas", required=True)
    sp.add_argument("--set", help="PointSet JSON (csp mode; default: the "
                                  "partial assignment's domain)")
    _add_common(sp)
    sp.set_defaults(func=_cmd_reconstruct)

    sp = sub.add_parser("count", help="count family members exactly")
    sp.add_argument("--q", type=int, required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--lambdas", required=True)
    _add_common(sp)
    sp.set_defaults(func=_cmd_count)

    sp = sub.add_parser("search-min",
                        help="smallest supertesting set within a size bound")
    sp.add_argument("--q", type=int, required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--bound", type=int, required=True)
    sp.add_argument("--budget", type=int, default=2_000_000,
                    help="candidate-subset budget")
    _add_common(sp)
    sp.set_defaults(func=_cmd_search_min)

    sp = sub.add_parser("bounds",
                        help="size bounds for binary code-based testing sets")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--affine", action="store_true")
    _add_common(sp, engine=False, node_cap=False, jobs=False)
    sp.set_defaults(func=_cmd_bounds)

    sp = sub.add_parser("dim", help="dimension of the zero-face-sum space")
    sp.add_argument("--q", type=int, required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--rank-check", action="store_true",
                    help="cross-check against the exact matrix rank")
    _add_common(sp, engine=False, node_cap=False, jobs=False)
    sp.set_defaults(func=_cmd_dim)

    sp = sub.add_parser("report", help="testing-set size comparison report")
    sp.add_argument("--q", type=int, required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--k", type=int, default=1)
    _add_common(sp, engine=False, node_cap=False, jobs=False)
    sp.set_defaults(func=_cmd_report)

    return ap


def run(argv=None) -> int:
    """Parse and execute one command; returns the exit code."""
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:  # argparse reports usage errors itself
        code = exc.code
        return 2 if code not in (0,) else 0
    if getattr(args, "engine", None) is not None:
        try:
            resolve_engine(args.engine)
        except Exception as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
    try:
        return args.func(args)
    except ResourceCapError as exc:
        print(f"inconclusive: {exc}", file=sys.stderr)
        return 3
    except ReconstructionError as exc:
        print(f"negative: {exc}", file=sys.stderr)
        return 1
    except (ValidationError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())
