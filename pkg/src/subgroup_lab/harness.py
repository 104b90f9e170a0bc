"""Batch verification suites and prime scans.

Every random draw comes from a Philox generator keyed by
(seed, suite, prime, order, trial), so a task's inputs do not depend on how
tasks are scheduled and reports are byte-identical across reruns and thread
counts. Diagnostic bounds use constant 1 in place of the unspecified
constants; their records carry slack ratios and never pass or fail.
"""

from __future__ import annotations

import csv
import io
import json
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from math import log2
from typing import Callable, Sequence

import numpy as np

from . import oracles
from .collinear import dual_energy_sum, sigma_diagnostic_bound, t_bounds_report, t_quantity, t_star
from .energy import energy_add, energy_bound_cs, energy_mult
from .errors import EmptyConfig, LimitExceeded
from .fields import FpSet, PrimeField, Subgroup, divisors, is_prime, make_field, max_p, sumset
from .records import CheckRecord, equality_record, to_jsonable, tolerance_record
from .search import (
    DEFAULT_EXHAUSTIVE_LIMIT,
    ab_p_check,
    difference_cover_search,
    find_decompositions,
    perfect_difference_check,
    same_affine_class,
    shift_intersection,
)
from .spectral import (
    CharBasis,
    OperatorSpec,
    average_action_identity,
    eigenfunction_residual,
    energy_mult_via_chars,
    operator_spectrum,
    t_via_chars,
)

SCHEMA_VERSION = 1

SUITES = ("identities", "spectral", "symmetries", "intersections", "t-bounds", "search", "oracles")

DEFAULT_TRIALS = {
    "identities": 200,
    "spectral": 20,
    "symmetries": 500,
    "intersections": 50,
    "t-bounds": 5,
    "search": 1,
    "oracles": 500,
}

CHAR_RTOL = 1e-9
AVERAGE_RTOL = 1e-8
EIGEN_ATOL = 1e-8
ORACLE_MAX_P = 31
AB_P_MAX_P = 13


@dataclass
class ExperimentConfig:
    primes: list[int]
    suites: list[str]
    orders: list[int] | None = None  # None means every divisor of p-1
    seed: int = 1
    trials: int | None = None  # None means the per-suite default
    threads: int = 1
    format: str = "json"

    def trials_for(self, suite: str) -> int:
        return DEFAULT_TRIALS[suite] if self.trials is None else self.trials

    def subgroups(self, field_: PrimeField) -> list[Subgroup]:
        ts = divisors(field_.p - 1)
        if self.orders is not None:
            ts = [t for t in ts if t in self.orders]
        return [Subgroup(field_, t) for t in ts]

    def to_json(self) -> dict:
        return asdict(self)


@dataclass
class Report:
    config: ExperimentConfig
    suites: dict[str, list[CheckRecord]] = field(default_factory=dict)
    rows: list[dict] | None = None
    runtime: dict | None = None

    def summary(self) -> dict:
        out = {"asserted_pass": 0, "asserted_fail": 0, "diagnostic": 0}
        for recs in self.suites.values():
            for r in recs:
                if not r.asserted:
                    out["diagnostic"] += 1
                elif r.passed:
                    out["asserted_pass"] += 1
                else:
                    out["asserted_fail"] += 1
        return out

    def per_suite_summary(self) -> dict:
        out = {}
        for name, recs in self.suites.items():
            fails = sum(1 for r in recs if r.asserted and not r.passed)
            out[name] = {"records": len(recs), "asserted_fail": fails}
        return out

    @property
    def ok(self) -> bool:
        return self.summary()["asserted_fail"] == 0

    def failures(self) -> list[CheckRecord]:
        return [r for recs in self.suites.values() for r in recs if r.asserted and not r.passed]

    def to_json(self) -> dict:
        out = {
            "schema_version": SCHEMA_VERSION,
            "config": self.config.to_json(),
            "summary": self.summary(),
            "suites": {name: [r.to_json() for r in recs] for name, recs in self.suites.items()},
        }
        if self.rows is not None:
            out["rows"] = [to_jsonable(r) for r in self.rows]
        if self.runtime is not None:
            out["runtime"] = to_jsonable(self.runtime)
        return out

    def dumps(self, fmt: str | None = None) -> str:
        fmt = fmt or self.config.format
        if fmt == "json":
            return json.dumps(self.to_json(), indent=2, sort_keys=True) + "\n"
        if fmt == "csv":
            return self._csv()
        raise ValueError(f"unknown format {fmt!r}")

    def _csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        if self.rows is not None:
            cols = list(self.rows[0]) if self.rows else []
            w.writerow(cols)
            for row in self.rows:
                w.writerow([_csv_cell(row[c]) for c in cols])
            return buf.getvalue()
        w.writerow(["suite", "name", "asserted", "passed", "lhs", "rhs", "slack", "context"])
        for suite, recs in self.suites.items():
            for r in recs:
                d = r.to_json()
                w.writerow(
                    [suite, d["name"], d["asserted"], d["passed"], _csv_cell(d["lhs"]), _csv_cell(d["rhs"]),
                     _csv_cell(d["slack"]), json.dumps(d["context"], sort_keys=True)]
                )
        return buf.getvalue()


def _csv_cell(x) -> str:
    x = to_jsonable(x)
    if x is None:
        return ""
    if isinstance(x, float):
        return format(x, ".17g")
    return str(x)


# -- randomness ---------------------------------------------------------------


def task_rng(seed: int, suite: str, *key: int) -> np.random.Generator:
    ss = np.random.SeedSequence(entropy=seed % 2**64, spawn_key=(SUITES.index(suite), *key))
    return np.random.Generator(np.random.Philox(ss))


def random_set(rng: np.random.Generator, pool: Sequence[int], lo: int, hi: int) -> list[int]:
    pool = list(pool)
    size = int(rng.integers(lo, min(hi, len(pool)) + 1))
    return sorted(int(x) for x in rng.choice(pool, size=size, replace=False))


def invariant_even_weight(rng: np.random.Generator, G: Subgroup) -> np.ndarray:
    """Random real g constant on the cosets of <Γ, -1>."""
    F = G.field
    p = F.p
    h = G.t if (p - 1) in G.elements or p == 2 else 2 * G.t
    index = (p - 1) // h
    w = rng.normal(size=index)
    g = np.empty(p)
    g[0] = rng.normal()
    g[1:] = w[F.dlog_table[1:] % index]
    return g


# -- suites -------------------------------------------------------------------------


def _hypothesis_instance(rng, F: PrimeField, G: Subgroup):
    """Sets A, B, C, D with A - C and B - D inside Γ."""

    def side():
        while True:
            C = random_set(rng, range(F.p), 1, 2)
            pool = F.full_mask
            for c in C:
                pool &= G.elements.translate(c).mask
            if pool:
                members = FpSet.from_mask(F, pool).elements
                return F.set(random_set(rng, members, 1, 6)), F.set(C)

    A, C = side()
    B, D = side()
    return A, B, C, D


def _nontrivial_subgroups(cfg: ExperimentConfig, F: PrimeField) -> list[Subgroup]:
    return [G for G in cfg.subgroups(F) if G.t >= 2]


def suite_identities(cfg: ExperimentConfig, trial: int) -> list[CheckRecord]:
    primes = [p for p in cfg.primes if p > 3]
    if not primes:
        return []
    p = primes[trial % len(primes)]
    F = make_field(p)
    groups = _nontrivial_subgroups(cfg, F)
    if not groups:
        return []
    rng = task_rng(cfg.seed, "identities", p, trial)
    G = groups[int(rng.integers(len(groups)))]
    basis = CharBasis(G)
    ctx = {"p": p, "t": G.t, "trial": trial}
    A, B, C, D = _hypothesis_instance(rng, F, G)
    out = [tolerance_record("E_c_k", t_via_chars(basis, A, B, C, D), t_quantity(A, B, C, D), CHAR_RTOL, **ctx)]
    X = F.set(random_set(rng, G.elements.elements, 1, G.t))
    Y = F.set(random_set(rng, G.elements.elements, 1, G.t))
    out.append(tolerance_record("E_mult_chars", energy_mult_via_chars(basis, X, Y), energy_mult(X, Y), CHAR_RTOL, **ctx))
    g = rng.normal(size=p)
    idx = list(G.elements.elements)
    h1 = np.zeros(p, dtype=np.complex128)
    h2 = np.zeros(p, dtype=np.complex128)
    h1[idx] = rng.normal(size=G.t) + 1j * rng.normal(size=G.t)
    h2[idx] = rng.normal(size=G.t) + 1j * rng.normal(size=G.t)
    lhs, rhs = average_action_identity(OperatorSpec(G, g), h1, h2)
    out.append(tolerance_record("average_mult", rhs, lhs, AVERAGE_RTOL, **ctx))
    return out


def suite_spectral(cfg: ExperimentConfig, p: int, G: Subgroup) -> list[CheckRecord]:
    out = []
    for trial in range(cfg.trials_for("spectral")):
        rng = task_rng(cfg.seed, "spectral", p, G.t, trial)
        spec = OperatorSpec(G, invariant_even_weight(rng, G))
        rep = operator_spectrum(spec)
        ctx = {"p": p, "t": G.t, "trial": trial}
        out.append(CheckRecord("eigenfunction", eigenfunction_residual(spec, rep.eigenvalues), EIGEN_ATOL, True, ctx))
        for r in (rep.trace1_check, rep.trace2_check, rep.normality_check):
            r.context["trial"] = trial
            out.append(r)
    return out


def _affine_instance(rng, F: PrimeField):
    sets = [F.set(random_set(rng, range(F.p), 1, 5)) for _ in range(4)]
    x, y = (int(v) for v in rng.integers(0, F.p, size=2))
    lam, mu = (int(v) for v in rng.integers(1, F.p, size=2))
    return sets, x, y, lam, mu


def suite_symmetries(cfg: ExperimentConfig, trial: int) -> list[CheckRecord]:
    p = cfg.primes[trial % len(cfg.primes)]
    if p < 3:
        return []
    F = make_field(p)
    rng = task_rng(cfg.seed, "symmetries", p, trial)
    (A, B, C, D), x, y, lam, mu = _affine_instance(rng, F)
    base = t_quantity(A, B, C, D)
    shifted = t_quantity(A - x, B - y, C - x, D - y)
    dilated = t_quantity(A.dilate(lam), B.dilate(mu), C.dilate(lam), D.dilate(mu))
    ctx = {"p": p, "trial": trial}
    return [
        equality_record("T_invariance", shifted, base, **ctx),
        equality_record("T_invariance_m", dilated, base, **ctx),
    ]


def suite_intersections(cfg: ExperimentConfig, p: int, G: Subgroup) -> list[CheckRecord]:
    out = []
    for k in (1, 2, 3):
        if k > p - 1:
            continue
        rng = task_rng(cfg.seed, "intersections", p, G.t, k)
        worst = None
        worst_theta = 0.0
        for _ in range(cfg.trials_for("intersections")):
            shifts = [int(v) for v in rng.choice(np.arange(1, p), size=k, replace=False)]
            rec = shift_intersection(G, shifts)
            dev = abs(rec.count - rec.main_term)
            if worst is None or dev > worst[0] or not rec.passed:
                worst = (dev, rec, shifts)
            worst_theta = max(worst_theta, abs(rec.theta))
            if not rec.passed:
                break
        dev, rec, shifts = worst
        ctx = {"p": p, "t": G.t, "k": k, "worst_shifts": shifts, "max_abs_theta": worst_theta}
        # the comparison Fraction <= float is exact
        out.append(CheckRecord("C_for_subgroups", dev, rec.error_bound, True, ctx))
    return out


def suite_tbounds(cfg: ExperimentConfig, p: int, G: Subgroup) -> list[CheckRecord]:
    F = G.field
    X = G.elements
    ctx = {"p": p, "t": G.t}
    out = [CheckRecord("E_CS", energy_add(X), energy_bound_cs(G.t, G.t), True, ctx)]
    for r in t_bounds_report(X, X, X, X, subgroups=(G, G)).bound_checks:
        r.context["t"] = G.t
        r.context["instance"] = "subgroup"
        out.append(r)
    for trial in range(cfg.trials_for("t-bounds")):
        rng = task_rng(cfg.seed, "t-bounds", p, G.t, trial)
        B, C, D = (F.set(random_set(rng, range(p), 1, 6)) for _ in range(3))
        for r in t_bounds_report(X, B, C, D).bound_checks:
            r.context.update(t=G.t, instance="subgroup_vs_random", trial=trial)
            out.append(r)
        A = F.set(random_set(rng, range(p), 1, 6))
        out.append(CheckRecord("E_CS", energy_add(A, B), energy_bound_cs(len(A), len(B)), True, {**ctx, "trial": trial}))
        for r in t_bounds_report(A, A, A, A).bound_checks:
            r.context.update(t=G.t, instance="random", trial=trial)
            out.append(r)
    return out


def suite_search(cfg: ExperimentConfig, p: int) -> list[CheckRecord]:
    if p > DEFAULT_EXHAUSTIVE_LIMIT:
        return [CheckRecord("search_skipped", p, DEFAULT_EXHAUSTIVE_LIMIT, False, {"p": p})]
    F = make_field(p)
    out: list[CheckRecord] = []
    for G in cfg.subgroups(F):
        ctx = {"p": p, "t": G.t}
        res = difference_cover_search(F, G, "exact")
        for sol in res.solutions:
            chk = perfect_difference_check(sol.A, G, sol.xi)
            lhs = len(sol.A) ** 2 - len(sol.A)
            rec_ctx = {**ctx, "A": list(sol.A.elements), "xi": sol.xi, "c": sol.c}
            out.append(equality_record("cover_is_exact", int(chk.is_cover), 1, **rec_ctx))
            if chk.c_constant is not None:
                out.append(equality_record("LS_identity", lhs, chk.c_constant * G.t, **rec_ctx))
        out.append(CheckRecord("exact_covers_found", len(res.solutions), 0, False, ctx))
        out.extend(_known_examples(F, G, res))
        if G.t < p - 1 and p <= AB_P_MAX_P:
            out.append(ab_p_check(G))
        if 2 <= G.t < p - 1:
            for target in (G.elements, G.with_zero()):
                dec = find_decompositions(target)
                tctx = {**ctx, "with_zero": 0 in target}
                for A, B in dec.pairs:
                    out.append(equality_record("decomposition_sound", int(sumset(A, B) == target), 1, **tctx))
                out.extend(dec.checks)
                out.append(CheckRecord("decompositions_found", len(dec.pairs), 0, False, tctx))
    return out


def _known_examples(F: PrimeField, G: Subgroup, res) -> list[CheckRecord]:
    examples = {(13, 6): ([2, 5, 6], 1), (5, 2): ([1, 4], 2)}
    key = (F.p, G.t)
    if key not in examples:
        return []
    elems, xi = examples[key]
    A = F.set(elems)
    found = [s for s in res.solutions if same_affine_class(s.A, A)]
    chk = perfect_difference_check(A, G, xi)
    ctx = {"p": F.p, "t": G.t, "A": elems, "xi": xi, "c": chk.c_constant}
    return [
        equality_record("known_example_rediscovered", len(found), 1, **ctx),
        equality_record("known_example_cover", int(chk.is_cover and chk.identity_holds), 1, **ctx),
    ]


def suite_oracles(cfg: ExperimentConfig, trial: int) -> list[CheckRecord]:
    primes = [p for p in cfg.primes if 3 <= p <= ORACLE_MAX_P]
    if not primes:
        return []
    p = primes[trial % len(primes)]
    F = make_field(p)
    rng = task_rng(cfg.seed, "oracles", p, trial)
    A, B, C, D = (F.set(random_set(rng, range(p), 1, 5)) for _ in range(4))
    a, b, c, d = (list(S.elements) for S in (A, B, C, D))
    ctx = {"p": p, "trial": trial}
    return [
        equality_record("energy_add", energy_add(A, B), oracles.energy_add_naive(a, b, p), **ctx),
        equality_record("energy_mult", energy_mult(A, B), oracles.energy_mult_naive(a, b, p), **ctx),
        equality_record("t_quantity", t_quantity(A, B, C, D), oracles.t_naive(a, b, c, d, p), **ctx),
        equality_record("t_star", t_star(A, C), oracles.t_star_naive(a, c, p), **ctx),
        equality_record("dual_energy_sum", dual_energy_sum(A, B, C), oracles.dual_energy_naive(a, b, c, p), **ctx),
    ]


# -- driver ---------------------------------------------------------------------


def _validate(cfg: ExperimentConfig, need_suites: bool = True) -> None:
    if not cfg.primes:
        raise EmptyConfig("no primes selected")
    if need_suites and not cfg.suites:
        raise EmptyConfig("no suites selected")
    for s in cfg.suites:
        if s not in SUITES:
            raise ValueError(f"unknown suite {s!r}; choose from {', '.join(SUITES)}")
    limit = max_p()
    for p in cfg.primes:
        if p > limit:
            raise LimitExceeded(f"p={p} exceeds table limit {limit}")
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")


def _tasks(cfg: ExperimentConfig, suite: str) -> list[Callable[[], list[CheckRecord]]]:
    if suite in ("identities", "symmetries", "oracles"):
        fn = {"identities": suite_identities, "symmetries": suite_symmetries, "oracles": suite_oracles}[suite]
        return [lambda i=i: fn(cfg, i) for i in range(cfg.trials_for(suite))]
    if suite == "search":
        return [lambda p=p: suite_search(cfg, p) for p in cfg.primes]
    fn = {"spectral": suite_spectral, "intersections": suite_intersections, "t-bounds": suite_tbounds}[suite]
    tasks = []
    for p in cfg.primes:
        for G in cfg.subgroups(make_field(p)):
            tasks.append(lambda p=p, G=G: fn(cfg, p, G))
    return tasks


def _run(tasks: list[Callable[[], list]], threads: int) -> list:
    if threads <= 1:
        return [t() for t in tasks]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda f: f(), tasks))


def run_suite(cfg: ExperimentConfig, timings: bool = False) -> Report:
    """Run the configured suites; the report is a pure function of ``cfg``."""
    _validate(cfg)
    report = Report(cfg)
    clock = {}
    for suite in cfg.suites:
        start = time.perf_counter()
        chunks = _run(_tasks(cfg, suite), cfg.threads)
        report.suites[suite] = [r for chunk in chunks for r in chunk]
        clock[suite] = time.perf_counter() - start
    if timings:
        report.runtime = {"seconds": clock}
    return report


def scan_row(p: int, G: Subgroup) -> dict:
    X = G.elements
    t = G.t
    e_add = energy_add(X)
    T = t_quantity(X, X, X, X)
    dual = dual_energy_sum(X, X, X)
    log_t = max(1.0, log2(t)) if t > 1 else 1.0
    row = {
        "p": p,
        "order": t,
        "energy_add": e_add,
        "T": T,
        "dual_energy_sum": dual,
        "ratio_sigma": T / sigma_diagnostic_bound(t, t),
        "ratio_32_13": e_add / (t ** (32 / 13) * log_t ** (41 / 65)),
        "ratio_semi_T": dual / (t**3 * t),
        "ratio_E_CS": e_add / t**3,
    }
    if p > 2:
        rec = shift_intersection(G, [1])
        row["shift1_count"] = rec.count
        row["ratio_many_shifts"] = rec.count / rec.diagnostics[0].rhs
    else:
        row["shift1_count"] = None
        row["ratio_many_shifts"] = None
    return row


def scan_primes(cfg: ExperimentConfig, timings: bool = False) -> Report:
    """One row per (p, subgroup order) with energies, T and diagnostic slack ratios."""
    _validate(cfg, need_suites=False)
    if list(cfg.primes) != sorted(cfg.primes):
        raise ValueError("primes must be ascending")
    start = time.perf_counter()
    tasks = [
        (lambda p=p, G=G: scan_row(p, G))
        for p in cfg.primes
        for G in cfg.subgroups(make_field(p))
    ]
    rows = _run(tasks, cfg.threads)
    report = Report(cfg, rows=rows)
    if timings:
        report.runtime = {"seconds": {"scan": time.perf_counter() - start}}
    return report


def primes_in_range(lo: int, hi: int) -> list[int]:
    return [p for p in range(max(2, lo), hi + 1) if is_prime(p)]


__all__ = [
    "ExperimentConfig",
    "Report",
    "SUITES",
    "primes_in_range",
    "run_suite",
    "scan_primes",
    "task_rng",
]
