"""End-to-end solve: plan, compile, realizability, synthesis, verification."""
from __future__ import annotations

import time
from dataclasses import asdict, dataclass, field

from .bdd import BddManager
from .cnf import SynthesisProblem
from .planner import GradedProjectJoinTree, bdd_order, plan, tree_width, validate_tree
from .realizability import RealizabilityOutcome, Verdict, check_realizability, compile_clauses
from .synthesis import (WitnessMap, dp_synth, factored_realizability, factored_width,
                        factored_witnesses)
from .verify import DEFAULT_ENUM_BOUND, WitnessReport, verify_witnesses

ENGINES = ("dpsynth", "baseline")


@dataclass
class SolveStats:
    instance: str = ""
    engine: str = ""
    planner: str = ""
    width: int = 0
    plan_ms: float = 0.0
    compile_ms: float = 0.0
    realizability_ms: float = 0.0
    synthesis_ms: float = 0.0
    total_ms: float = 0.0
    peak_nodes: int = 0
    verdict: str = ""
    verified: str = "skipped"     # "ok", "failed" or "skipped"

    def to_json(self) -> dict:
        return asdict(self)


@dataclass
class SolveResult:
    problem: SynthesisProblem
    outcome: RealizabilityOutcome
    witnesses: WitnessMap | None
    manager: BddManager
    stats: SolveStats
    tree: GradedProjectJoinTree | None = None
    report: WitnessReport | None = None
    extra: dict = field(default_factory=dict)


class _Clock:
    def __init__(self):
        self.t = time.monotonic()

    def lap(self) -> float:
        now = time.monotonic()
        dt, self.t = (now - self.t) * 1000.0, now
        return dt


def solve(p: SynthesisProblem, planner: str = "treedecomp", engine: str = "dpsynth",
          verify: bool = False, tree: GradedProjectJoinTree | None = None,
          factor_order=None, oracle_bound: int = DEFAULT_ENUM_BOUND, name: str = "",
          on_solve=None) -> SolveResult:
    """Run one engine on ``p``.

    A supplied ``tree`` bypasses the planner (it must validate). The baseline
    engine ignores ``planner`` and uses ``factor_order`` (file order by
    default).
    """
    if engine not in ENGINES:
        raise ValueError(f"unknown engine {engine!r}; choose from {ENGINES}")
    stats = SolveStats(instance=name, engine=engine, planner=planner if engine == "dpsynth" else "chain")
    start = time.monotonic()
    clock = _Clock()

    if engine == "dpsynth":
        if tree is None:
            tree = plan(p, planner)
        else:
            stats.planner = "given"
            problems = validate_tree(p, tree)
            if problems:
                raise ValueError("supplied tree is invalid: " + "; ".join(map(str, problems)))
        stats.width = tree_width(p, tree)
    else:
        if factor_order is None:
            factor_order = list(range(len(p.clauses)))
        stats.width = factored_width(p, factor_order)
    m = BddManager(bdd_order(p))
    stats.plan_ms = clock.lap()

    clause_bdds = compile_clauses(m, p)
    stats.compile_ms = clock.lap()

    witnesses = None
    if engine == "dpsynth":
        outcome = check_realizability(p, tree, m, clause_bdds)
        stats.realizability_ms = clock.lap()
        if outcome.verdict != Verdict.NULLARY:
            witnesses = dp_synth(p, tree, outcome.valuations, m, on_solve)
        stats.synthesis_ms = clock.lap()
    else:
        outcome, chain = factored_realizability(p, factor_order, m, clause_bdds)
        stats.realizability_ms = clock.lap()
        if outcome.verdict != Verdict.NULLARY:
            witnesses = factored_witnesses(p, chain, m)
        stats.synthesis_ms = clock.lap()
    stats.verdict = outcome.verdict.value

    report = None
    if verify and witnesses is not None:
        report = verify_witnesses(p, outcome.realizability_set, witnesses, oracle_bound)
        stats.verified = "ok" if report.ok else "failed"
    stats.peak_nodes = m.peak_nodes
    stats.total_ms = (time.monotonic() - start) * 1000.0
    return SolveResult(p, outcome, witnesses, m, stats, tree if engine == "dpsynth" else None, report)


EXIT_CODES = {Verdict.FULLY: 0, Verdict.PARTIALLY: 10, Verdict.NULLARY: 20}
EXIT_TIMEOUT = 30
EXIT_ERROR = 2
