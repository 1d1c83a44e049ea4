"""Command-line entry point.

  wciscope wps 2 3 5 5
  wciscope classify 1 1 1 1 1 --degrees 5
  wciscope search --max-n 4 --max-weight 3 --min-degree 6 --max-degree 6 --index 3
  wciscope aut 1 1 2
  wciscope qs data/nonqs1.json
  wciscope lab nodal-curve 7

Exit codes: 0 success, 1 a verification failed, 2 invalid input.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .aut import aut_structure
from .errors import WCIError
from .lab import run_lab
from .qs import DEFAULT_BUDGET, DEFAULT_PRIMES, ExplicitWCI, cone_dimension_probe, is_singular_cone_point, search_singular_points
from .search import ProbeOptions, SearchBounds, search
from .wci import WCIDescriptor, classify, generic_wellformedness, hilbert_series_X
from .wps import WeightedProjectiveSpace, hilbert_series_P, is_well_formed, picard_generator, singular_strata

EXIT_OK, EXIT_VERIFY, EXIT_INPUT = 0, 1, 2
THREADS_ENV = "WCISCOPE_THREADS"


def _primes(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(p) for p in text.split(",") if p.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated primes, got {text!r}")


def _index_filter(text: str):
    if text in ("positive", "zero", "negative"):
        return text
    try:
        return int(text)
    except ValueError:
        raise argparse.ArgumentTypeError("index filter is positive, zero, negative or an integer")


def _emit(payload, as_json: bool) -> None:
    if as_json:
        print(json.dumps(payload, sort_keys=True))
        return
    rows = payload if isinstance(payload, list) else [payload]
    for row in rows:
        if isinstance(row, dict):
            print("  ".join(f"{k}={json.dumps(v, sort_keys=True)}" for k, v in row.items()))
        else:
            print(row)


def cmd_wps(args) -> int:
    P = WeightedProjectiveSpace(tuple(args.weights))
    out = {"weights": list(P.weights), "grouped": P.grouped_label(), "well_formed": is_well_formed(P)}
    if out["well_formed"]:
        out["strata"] = [s.to_dict() for s in singular_strata(P)]
        out["picard"] = picard_generator(P)
    out["graded_dims"] = hilbert_series_P(P, args.up_to)
    _emit(out, args.json)
    return EXIT_OK


def cmd_classify(args) -> int:
    X = WCIDescriptor.of(args.weights, args.degrees)
    out = {**X.to_dict(), **classify(X).to_dict(), "hilbert_series": hilbert_series_X(X, args.up_to)}
    if is_well_formed(X.ambient):
        out["generic_wellformedness"] = generic_wellformedness(X, strict=args.strict).to_dict()
    if out["linear_cone"]:
        print("warning: intersection with a linear cone", file=sys.stderr)
    _emit(out, args.json)
    return EXIT_OK


def _thread_count(requested: int | None) -> int:
    cap = os.environ.get(THREADS_ENV)
    cap = int(cap) if cap and cap.isdigit() and int(cap) > 0 else None
    n = requested if requested is not None else (cap or 1)
    return min(n, cap) if cap else n


def cmd_search(args) -> int:
    bounds = SearchBounds(
        max_n=args.n if args.n is not None else args.max_n,
        max_weight=args.max_weight,
        max_degree=args.max_degree,
        codim=args.codim,
        index_filter=args.index,
        min_n=args.n if args.n is not None else 1,
        min_degree=args.min_degree,
    )
    probe = ProbeOptions(args.primes, args.budget, args.seed) if args.probe_qs else None
    records = search(bounds, threads=_thread_count(args.threads), probe=probe)
    _emit(records, args.json)
    return EXIT_OK


def cmd_aut(args) -> int:
    P = WeightedProjectiveSpace(tuple(args.weights))
    _emit({"weights": list(P.weights), **aut_structure(P).to_dict()}, args.json)
    return EXIT_OK


def cmd_qs(args) -> int:
    try:
        data = json.loads(Path(args.file).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise WCIError(f"cannot read descriptor file: {exc}") from exc
    X = ExplicitWCI.from_json(data)
    verdict = search_singular_points(X, args.primes, args.budget, args.seed)
    out = {**X.descriptor.to_dict(), "verdict": verdict.to_dict()}
    if verdict.found:
        out["confirmed_over_Q"] = is_singular_cone_point(X, verdict.point, None)
    if args.probe is not None:
        out["cone_probe"] = cone_dimension_probe(X, args.probe).to_dict()
    status = EXIT_OK
    expected = data.get("expected_witness")
    if expected is not None:
        out["expected_witness_singular"] = is_singular_cone_point(X, expected, None)
        if not (verdict.found and out["expected_witness_singular"]):
            status = EXIT_VERIFY
    _emit(out, args.json)
    return status


def cmd_lab(args) -> int:
    records = run_lab(args.example, *args.params)
    _emit([r.to_dict() for r in records], args.json)
    return EXIT_OK if all(r.verified for r in records) else EXIT_VERIFY


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit JSON")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--primes", type=_primes, default=DEFAULT_PRIMES, help="comma-separated, default 5,7,11")
    common.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="points per prime")
    common.add_argument("--up-to", type=int, default=10, help="last degree of graded tables")

    ap = argparse.ArgumentParser(prog="wciscope", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("wps", parents=[common], help="invariants of P(a_0,...,a_N)")
    p.add_argument("weights", type=int, nargs="+")
    p.set_defaults(fn=cmd_wps)

    p = sub.add_parser("classify", parents=[common], help="index and classification of a descriptor")
    p.add_argument("weights", type=int, nargs="+")
    p.add_argument("--degrees", "-d", type=int, nargs="+", required=True)
    p.add_argument("--strict", action="store_true", help="boundary strata give Indeterminate")
    p.set_defaults(fn=cmd_classify)

    p = sub.add_parser("search", parents=[common], help="enumerate descriptors within bounds")
    p.add_argument("--max-n", type=int, default=4)
    p.add_argument("--n", type=int, default=None, help="fix the ambient dimension")
    p.add_argument("--max-weight", type=int, default=3)
    p.add_argument("--max-degree", type=int, default=6)
    p.add_argument("--min-degree", type=int, default=1)
    p.add_argument("--codim", type=int, default=1, choices=(1, 2))
    p.add_argument("--index", type=_index_filter, default=None)
    p.add_argument("--probe-qs", action="store_true", help="attach a verdict on a seeded member")
    p.add_argument("--threads", type=int, default=None, help=f"worker processes (capped by {THREADS_ENV})")
    p.set_defaults(fn=cmd_search)

    p = sub.add_parser("aut", parents=[common], help="structure of Aut(P)")
    p.add_argument("weights", type=int, nargs="+")
    p.set_defaults(fn=cmd_aut)

    p = sub.add_parser("qs", parents=[common], help="singular cone point search for a descriptor file")
    p.add_argument("file")
    p.add_argument("--probe", type=int, default=None, metavar="P", help="also count cone points over F_P")
    p.set_defaults(fn=cmd_qs)

    p = sub.add_parser("lab", parents=[common], help="rebuild and verify an example family")
    p.add_argument("example")
    p.add_argument("params", type=int, nargs="*")
    p.set_defaults(fn=cmd_lab)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except WCIError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    raise SystemExit(main())
