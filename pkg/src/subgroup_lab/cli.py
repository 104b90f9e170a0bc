"""Command-line entry point: ``subgroup-lab <command> ...``.

Every command prints JSON (sorted keys) to stdout or ``--out``. ``verify``
exits with status 1 when an asserted check fails; any input error exits
with status 2.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

import numpy as np

from .collinear import t_bounds_report
from .energy import energy_add, energy_mult
from .errors import ParseError, SubgroupLabError
from .fields import Subgroup, make_field, parse_set
from .harness import SUITES, ExperimentConfig, primes_in_range, run_suite, scan_primes
from .records import to_jsonable
from .search import difference_cover_search, find_decompositions, shift_intersection
from .spectral import OperatorSpec, operator_spectrum


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise ParseError(f"expected comma-separated integers, got {text!r}") from exc


def _p_range(text: str) -> list[int]:
    lo, sep, hi = text.partition("..")
    if not sep:
        raise ParseError(f"expected A..B, got {text!r}")
    try:
        return primes_in_range(int(lo), int(hi))
    except ValueError as exc:
        raise ParseError(f"bad range {text!r}") from exc


def _primes(args) -> list[int]:
    out: list[int] = []
    if args.p_range:
        out.extend(_p_range(args.p_range))
    if args.primes:
        out.extend(_int_list(args.primes))
    return sorted(set(out))


def _suites(values: list[str] | None) -> list[str]:
    names: list[str] = []
    for v in values or []:
        names.extend(s.strip() for s in v.split(",") if s.strip())
    if "all" in names:
        return list(SUITES)
    return names


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dump(obj, out: str | None) -> None:
    _emit(json.dumps(to_jsonable(obj), indent=2, sort_keys=True) + "\n", out)


def _config(args, suites: list[str]) -> ExperimentConfig:
    return ExperimentConfig(
        primes=_primes(args),
        suites=suites,
        orders=_int_list(args.orders) if args.orders else None,
        seed=args.seed,
        trials=args.trials,
        threads=args.threads,
        format=args.format,
    )


def cmd_verify(args) -> int:
    report = run_suite(_config(args, _suites(args.suite)), timings=args.timings)
    _emit(report.dumps(), args.out)
    s = report.summary()
    print(
        f"asserted pass {s['asserted_pass']}, asserted fail {s['asserted_fail']}, diagnostic {s['diagnostic']}",
        file=sys.stderr,
    )
    return 0 if report.ok else 1


def cmd_scan(args) -> int:
    report = scan_primes(_config(args, []), timings=args.timings)
    _emit(report.dumps(), args.out)
    return 0


def cmd_decompose(args) -> int:
    F = make_field(args.p)
    target = parse_set(F, args.target)
    res = find_decompositions(
        target, min_size=args.min_size, exhaustive=True if args.exhaustive else None,
        samples=args.samples, seed=args.seed,
    )
    _dump(res.to_json(), args.out)
    return 0


def cmd_diffcover(args) -> int:
    F = make_field(args.p)
    res = difference_cover_search(F, Subgroup(F, args.order), args.mode, args.max_size)
    _dump(res.to_json(), args.out)
    return 0


def cmd_intersect(args) -> int:
    F = make_field(args.p)
    G = Subgroup(F, args.order)
    base = G if args.coset is None else G.coset(args.coset)
    rec = shift_intersection(base, _int_list(args.shifts))
    _dump(rec.to_json(), args.out)
    return 0


def cmd_tquantity(args) -> int:
    F = make_field(args.p)
    A = parse_set(F, args.A)
    B = parse_set(F, args.B) if args.B else A
    C = parse_set(F, args.C) if args.C else A
    D = parse_set(F, args.D) if args.D else C
    _dump(t_bounds_report(A, B, C, D).to_json(), args.out)
    return 0


def cmd_energy(args) -> int:
    F = make_field(args.p)
    A = parse_set(F, args.A)
    B = parse_set(F, args.B) if args.B else A
    _dump({"p": F.p, "energy_add": energy_add(A, B), "energy_mult": energy_mult(A, B)}, args.out)
    return 0


def cmd_spectrum(args) -> int:
    F = make_field(args.p)
    G = Subgroup(F, args.order)
    if args.weight_set:
        g = parse_set(F, args.weight_set).indicator().astype(np.float64)
    else:
        g = np.array(_int_list(args.weight), dtype=np.float64)
    _dump(operator_spectrum(OperatorSpec(G, g)).to_json(), args.out)
    return 0


def _add_prime_args(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--p-range", help="inclusive prime range A..B")
    sp.add_argument("--primes", help="comma-separated primes")
    sp.add_argument("--orders", help="comma-separated subgroup orders (default: all)")
    sp.add_argument("--seed", type=int, default=1)
    sp.add_argument("--trials", type=int, help="trials per suite (default: per-suite)")
    sp.add_argument("--threads", type=int, default=1)
    sp.add_argument("--format", choices=("json", "csv"), default="json")
    sp.add_argument("--out", help="write the report here instead of stdout")
    sp.add_argument("--timings", action="store_true", help="include wall-clock runtimes in the report")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="subgroup-lab", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("verify", help="run verification suites")
    sp.add_argument("--suite", action="append", help=f"suite name(s) or 'all': {', '.join(SUITES)}")
    _add_prime_args(sp)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("scan", help="per-(p, order) energies and diagnostic ratios")
    _add_prime_args(sp)
    sp.set_defaults(func=cmd_scan)

    sp = sub.add_parser("decompose", help="search S = A + B")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--target", required=True, help='set literal, e.g. "G:6|0"')
    sp.add_argument("--exhaustive", action="store_true")
    sp.add_argument("--min-size", type=int, default=2)
    sp.add_argument("--samples", type=int, default=2000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_decompose)

    sp = sub.add_parser("diffcover", help="sets with A - A inside or equal to ξΓ ⊔ {0}")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--order", type=int, required=True)
    sp.add_argument("--mode", choices=("exact", "subset"), default="exact")
    sp.add_argument("--max-size", type=int)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_diffcover)

    sp = sub.add_parser("intersect", help="|Γ ∩ (Γ + x_1) ∩ ... ∩ (Γ + x_k)|")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--order", type=int, required=True)
    sp.add_argument("--shifts", required=True)
    sp.add_argument("--coset", type=int, help="use the coset ξΓ instead of Γ")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_intersect)

    sp = sub.add_parser("tquantity", help="T(A, B, C, D) with its bounds")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--A", required=True)
    sp.add_argument("--B", help="default: A")
    sp.add_argument("--C", help="default: A")
    sp.add_argument("--D", help="default: C")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_tquantity)

    sp = sub.add_parser("energy", help="additive and multiplicative energies")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--A", required=True)
    sp.add_argument("--B", help="default: A")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_energy)

    sp = sub.add_parser("spectrum", help="eigenvalues of g(x - y) on Γ")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--order", type=int, required=True)
    w = sp.add_mutually_exclusive_group(required=True)
    w.add_argument("--weight-set", help="g is the indicator of this set")
    w.add_argument("--weight", help="g(0),...,g(p-1) as integers")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_spectrum)
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (SubgroupLabError, ValueError) as exc:
        print(f"subgroup-lab: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
