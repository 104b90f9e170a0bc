import json
import math

import pytest

from subgroup_lab.errors import EmptyConfig, LimitExceeded
from subgroup_lab.fields import divisors
from subgroup_lab.harness import (
    SUITES, ExperimentConfig, Report, primes_in_range, run_suite, scan_primes, task_rng,
)


def test_identities_small():
    rep = run_suite(ExperimentConfig(primes=[13], suites=["identities"], seed=1, trials=50))
    s = rep.summary()
    assert s["asserted_fail"] == 0 and s["asserted_pass"] == 150


def test_empty_config():
    with pytest.raises(EmptyConfig):
        run_suite(ExperimentConfig(primes=[], suites=["identities"]))
    with pytest.raises(EmptyConfig):
        run_suite(ExperimentConfig(primes=[13], suites=[]))
    with pytest.raises(EmptyConfig):
        scan_primes(ExperimentConfig(primes=primes_in_range(24, 28), suites=[]))


def test_limits(monkeypatch):
    monkeypatch.setenv("SUBGROUP_LAB_MAX_P", "50")
    with pytest.raises(LimitExceeded):
        run_suite(ExperimentConfig(primes=[53], suites=["oracles"]))
    with pytest.raises(ValueError):
        run_suite(ExperimentConfig(primes=[15], suites=["oracles"]))
    with pytest.raises(ValueError):
        run_suite(ExperimentConfig(primes=[13], suites=["nonsense"]))


def test_search_suite_rediscovers_example():
    rep = run_suite(ExperimentConfig(primes=[13], suites=["search"]))
    assert rep.ok
    names = {(r.name, tuple(r.context.get("A", ()))) for r in rep.suites["search"]}
    assert ("known_example_rediscovered", (2, 5, 6)) in names
    hit = [r for r in rep.suites["search"] if r.name == "known_example_rediscovered"]
    assert hit[0].passed


@pytest.mark.parametrize("suite", SUITES)
def test_each_suite_green(suite):
    cfg = ExperimentConfig(primes=[5, 7, 13, 31], suites=[suite], trials=3)
    assert run_suite(cfg).ok


def test_orders_filter():
    rep = run_suite(ExperimentConfig(primes=[13], suites=["intersections"], orders=[6], trials=2))
    assert {r.context["t"] for r in rep.suites["intersections"]} == {6}


def test_deterministic_across_threads():
    base = dict(primes=[13, 31, 61], suites=["identities", "symmetries", "t-bounds", "intersections"], trials=4, seed=7)
    one = run_suite(ExperimentConfig(threads=1, **base)).dumps()
    again = run_suite(ExperimentConfig(threads=1, **base)).dumps()
    many = run_suite(ExperimentConfig(threads=4, **base)).dumps()
    assert one == again
    assert json.loads(one)["suites"] == json.loads(many)["suites"]
    other = run_suite(ExperimentConfig(threads=1, **{**base, "seed": 8})).dumps()
    assert other != one


def test_report_json_shape():
    rep = run_suite(ExperimentConfig(primes=[13], suites=["symmetries"], trials=2, seed=3))
    d = json.loads(rep.dumps("json"))
    assert d["schema_version"] == 1
    assert d["config"]["seed"] == 3
    assert "runtime" not in d
    assert set(d["summary"]) == {"asserted_pass", "asserted_fail", "diagnostic"}
    timed = run_suite(rep.config, timings=True).to_json()
    assert "runtime" in timed
    csv_text = rep.dumps("csv")
    assert csv_text.splitlines()[0].startswith("suite,name,asserted")
    assert len(csv_text.splitlines()) == 1 + 4


def test_task_rng_is_keyed():
    a = task_rng(1, "oracles", 13, 0).integers(0, 2**63, size=4)
    b = task_rng(1, "oracles", 13, 0).integers(0, 2**63, size=4)
    c = task_rng(1, "oracles", 13, 1).integers(0, 2**63, size=4)
    assert (a == b).all() and not (a == c).all()


def test_scan_rows():
    primes = primes_in_range(13, 199)
    rep = scan_primes(ExperimentConfig(primes=primes, suites=[]))
    assert len(rep.rows) == sum(len(divisors(p - 1)) for p in primes)
    for row in rep.rows:
        for k, v in row.items():
            if k.startswith("ratio") and v is not None:
                assert math.isfinite(v)
    row = next(r for r in rep.rows if r["p"] == 13 and r["order"] == 6)
    assert row["energy_add"] == 114
    assert rep.dumps("csv").splitlines()[0].startswith("p,order,energy_add")


def test_scan_requires_ascending():
    with pytest.raises(ValueError):
        scan_primes(ExperimentConfig(primes=[13, 7], suites=[]))


def test_primes_in_range():
    assert primes_in_range(10, 30) == [11, 13, 17, 19, 23, 29]
    assert primes_in_range(24, 28) == []
