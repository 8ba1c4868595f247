import json

import pytest

from conftest import seeded_instances
from dpsynth.cnf import SynthesisProblem
from dpsynth.pipeline import solve
from dpsynth.realizability import Verdict, new_manager
from dpsynth.verify import (SupportViolation, TooLarge, oracle_realizability, verify_witnesses,
                            witness_holds_by_enumeration)


def _known_witnesses(m):
    x1, x2, x3 = m.var(1), m.var(2), m.var(3)
    return {4: x1 | ~x3, 5: (x1 & x2) | ~x3, 6: m.true}


def test_oracle_running_example(example):
    o = oracle_realizability(example)
    assert o.verdict == Verdict.FULLY
    assert len(o.realizable_inputs) == 8


def test_oracle_small_cases():
    o = oracle_realizability(SynthesisProblem.build([1], [2], [[1], [2]]))
    assert o.verdict == Verdict.PARTIALLY and o.realizable_inputs == {(True,)}
    o = oracle_realizability(SynthesisProblem.build([], [1], [[1], [-1]]))
    assert o.verdict == Verdict.NULLARY and not o.realizable_inputs
    o = oracle_realizability(SynthesisProblem.build([], [1], []))
    assert o.verdict == Verdict.FULLY and o.realizable_inputs == {()}


def test_oracle_bound():
    p = SynthesisProblem.build(range(1, 12), range(12, 23), [])
    with pytest.raises(TooLarge):
        oracle_realizability(p, bound=20)


def test_known_witnesses_verify(example):
    m = new_manager(example)
    report = verify_witnesses(example, m.true, _known_witnesses(m))
    assert report.ok and report.counterexample is None
    assert report.checked_count == 8 and report.enumerated


def test_broken_witness_gives_counterexample(example):
    m = new_manager(example)
    w = _known_witnesses(m)
    w[5] = m.false
    report = verify_witnesses(example, m.true, w)
    assert not report.ok
    assert report.counterexample == {1: 0, 2: 1, 3: 0}
    sigma = {1: False, 2: True, 3: False}
    full = {**sigma, **{y: f.eval(sigma) for y, f in w.items()}}
    assert not example.evaluate(full)
    assert json.loads(json.dumps(report.to_json()))["counterexample"] == {"1": 0, "2": 1, "3": 0}


def test_witness_domain_and_support_checked(example):
    m = new_manager(example)
    w = _known_witnesses(m)
    with pytest.raises(ValueError):
        verify_witnesses(example, m.true, {4: w[4]})
    w[4] = m.var(5)
    with pytest.raises(SupportViolation):
        verify_witnesses(example, m.true, w)


def test_witnesses_outside_realizability_set_are_ignored():
    p = SynthesisProblem.build([1], [2], [[1], [2]])
    m = new_manager(p)
    assert verify_witnesses(p, m.var(1), {2: m.true}).ok
    assert not verify_witnesses(p, m.true, {2: m.true}).ok


def test_pipeline_witnesses_hold_pointwise():
    for p in seeded_instances(200, salt=41):
        oracle = oracle_realizability(p)
        for engine in ("dpsynth", "baseline"):
            res = solve(p, engine=engine, verify=True)
            assert res.outcome.verdict == oracle.verdict
            if res.witnesses is not None:
                assert res.report.ok and res.report.enumerated
                assert res.report.checked_count == len(oracle.realizable_inputs)
                assert witness_holds_by_enumeration(p, oracle, res.witnesses.witnesses)
