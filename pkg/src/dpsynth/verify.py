"""Independent correctness checks.

The enumeration oracle never touches the BDD package: it evaluates clauses
on explicit assignments with numpy. The witness check works at the BDD level
and, when the instance is small enough, is cross-checked by enumeration.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bdd import BddFunction, BddManager, conjoin
from .cnf import SynthesisProblem
from .realizability import Verdict

DEFAULT_ENUM_BOUND = 20


class TooLarge(ValueError):
    pass


class SupportViolation(ValueError):
    pass


@dataclass
class OracleResult:
    verdict: Verdict
    realizable_inputs: set[tuple[bool, ...]]   # value tuples ordered like problem.inputs

    def contains(self, p: SynthesisProblem, assignment: dict[int, bool]) -> bool:
        return tuple(bool(assignment[x]) for x in p.inputs) in self.realizable_inputs


@dataclass
class WitnessReport:
    ok: bool
    counterexample: dict[int, int] | None
    checked_count: int
    enumerated: bool = False

    def to_json(self) -> dict:
        cex = None if self.counterexample is None else {
            str(v): b for v, b in sorted(self.counterexample.items())}
        return {"ok": self.ok, "counterexample": cex, "checked_count": self.checked_count,
                "enumerated": self.enumerated}


def _assignment_matrix(n: int) -> np.ndarray:
    """Row k holds the bits of k, most significant column first."""
    k = np.arange(1 << n, dtype=np.int64)[:, None]
    shifts = np.arange(n - 1, -1, -1, dtype=np.int64)[None, :]
    return ((k >> shifts) & 1).astype(bool)


def _eval_cnf(p: SynthesisProblem, columns: dict[int, np.ndarray], rows: int) -> np.ndarray:
    sat = np.ones(rows, dtype=bool)
    for c in p.clauses:
        cl = np.zeros(rows, dtype=bool)
        for lit in c:
            col = columns[abs(lit)]
            cl |= col if lit > 0 else ~col
        sat &= cl
    return sat


def oracle_realizability(p: SynthesisProblem, bound: int = DEFAULT_ENUM_BOUND) -> OracleResult:
    nx, ny = len(p.inputs), len(p.outputs)
    if nx + ny > bound:
        raise TooLarge(f"{nx + ny} variables exceed the enumeration bound {bound}")
    bits = _assignment_matrix(nx + ny)
    order = list(p.inputs) + list(p.outputs)
    columns = {v: bits[:, i] for i, v in enumerate(order)}
    sat = _eval_cnf(p, columns, len(bits))
    realizable = sat.reshape(1 << nx, 1 << ny).any(axis=1)
    xbits = _assignment_matrix(nx)
    inputs = {tuple(bool(b) for b in xbits[k]) for k in np.flatnonzero(realizable)}
    if not inputs:
        verdict = Verdict.NULLARY
    elif len(inputs) == 1 << nx:
        verdict = Verdict.FULLY
    else:
        verdict = Verdict.PARTIALLY
    return OracleResult(verdict, inputs)


def cnf_bdd(m: BddManager, p: SynthesisProblem) -> BddFunction:
    return conjoin((m.clause(c) for c in p.clauses), m)


def _enumerate_witnesses(p: SynthesisProblem, r: BddFunction,
                         witnesses: dict[int, BddFunction]) -> tuple[bool, dict[int, int] | None, int]:
    nx = len(p.inputs)
    xbits = _assignment_matrix(nx)
    checked = 0
    for row in xbits:
        sigma = {x: bool(b) for x, b in zip(p.inputs, row)}
        if not r.eval(sigma):
            continue
        checked += 1
        full = dict(sigma)
        for y in p.outputs:
            full[y] = witnesses[y].eval(sigma)
        if not p.evaluate(full):
            return False, {x: int(b) for x, b in sigma.items()}, checked
    return True, None, checked


def verify_witnesses(p: SynthesisProblem, r: BddFunction, w, bound: int = DEFAULT_ENUM_BOUND
                     ) -> WitnessReport:
    """Check that substituting every witness into phi holds throughout ``r``.

    ``w`` is a :class:`~dpsynth.synthesis.WitnessMap` or a plain dict.
    """
    witnesses = dict(getattr(w, "witnesses", w))
    if set(witnesses) != set(p.outputs):
        raise ValueError(f"witness domain {sorted(witnesses)} differs from outputs {sorted(p.outputs)}")
    xs = set(p.inputs)
    for y, f in witnesses.items():
        bad = f.support() - xs
        if bad:
            raise SupportViolation(f"witness for {y} mentions non-inputs {sorted(bad)}")
    if not r.support() <= xs:
        raise SupportViolation("realizability set mentions non-inputs")
    m = r.manager
    f = cnf_bdd(m, p)
    for y in sorted(witnesses):
        f = f.compose(y, witnesses[y])
    bad = r & ~f
    ok = bad.is_false
    cex = None
    if not ok:
        cex = {x: int(b) for x, b in bad.pick_min(p.inputs).items()}
    checked = r.sat_count(p.inputs)
    report = WitnessReport(ok, cex, checked)
    if len(p.inputs) + len(p.outputs) <= bound:
        e_ok, _, _ = _enumerate_witnesses(p, r, witnesses)
        if e_ok != ok:
            raise AssertionError("BDD-level and enumeration witness checks disagree")
        report.enumerated = True
    return report


def witness_holds_by_enumeration(p: SynthesisProblem, oracle: OracleResult,
                                 witnesses: dict[int, BddFunction]) -> bool:
    """Definition-level check on the oracle's realizable inputs only."""
    for vals in oracle.realizable_inputs:
        sigma = dict(zip(p.inputs, vals))
        full = dict(sigma)
        for y in p.outputs:
            full[y] = witnesses[y].eval(sigma)
        if not p.evaluate(full):
            return False
    return True
