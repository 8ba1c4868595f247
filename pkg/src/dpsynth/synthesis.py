"""Witness construction.

Three routes, all built on the self-substitution witness ``g = B[y := 1]``:

* :func:`solve_eqn` -- monolithic: quantify outputs inside-out, then build
  witnesses outside-in, substituting earlier witnesses as it goes.
* :func:`dp_synth` -- top-down over the output-grade nodes of a graded
  project-join tree, seeded by the pre-valuations from realizability.
* :func:`factored_baseline` -- early quantification over a linear chain of
  clause factors, witnesses top-down along the chain.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from .bdd import BddFunction, BddManager
from .cnf import SynthesisProblem
from .planner import Y_GRADE, GradedProjectJoinTree
from .realizability import (NodeValuations, RealizabilityOutcome, Verdict, compile_clauses,
                            new_manager, x_leaves)


class NotRealizable(ValueError):
    pass


@dataclass
class WitnessMap:
    witnesses: dict[int, BddFunction] = field(default_factory=dict)
    order: list[int] = field(default_factory=list)

    def __getitem__(self, y: int) -> BddFunction:
        return self.witnesses[y]

    def __contains__(self, y: int) -> bool:
        return y in self.witnesses

    def __len__(self):
        return len(self.witnesses)

    def set(self, y: int, w: BddFunction):
        self.witnesses[y] = w
        self.order.append(y)

    def to_json(self, p: SynthesisProblem) -> dict:
        return {
            "inputs": list(p.inputs),
            "outputs": list(p.outputs),
            "witnesses": {str(y): self.witnesses[y].to_expr() for y in sorted(self.witnesses)},
        }


@dataclass
class SolveEqnChain:
    quantified: list[BddFunction]   # quantified[i] is B_i; quantified[k] is the input
    primed: list[BddFunction]       # primed[i - 1] is B'_i


def witness_single(b: BddFunction, y: int) -> BddFunction:
    """Self-substitution witness for one output: the positive cofactor."""
    return b.restrict(y, True)


def solve_eqn(b: BddFunction, ys: Sequence[int]) -> tuple[dict[int, BddFunction], SolveEqnChain]:
    if len(set(ys)) != len(ys):
        raise ValueError("output variables must be distinct")
    k = len(ys)
    chain = [b] * (k + 1)
    for i in range(k, 0, -1):
        chain[i - 1] = chain[i].exists([ys[i - 1]])
    wit: dict[int, BddFunction] = {}
    primed = []
    for i in range(1, k + 1):
        bi = chain[i]
        for j in range(i - 1):
            bi = bi.compose(ys[j], wit[ys[j]])
        primed.append(bi)
        wit[ys[i - 1]] = witness_single(bi, ys[i - 1])
    return wit, SolveEqnChain(chain, primed)


def dp_synth(p: SynthesisProblem, t: GradedProjectJoinTree, vals: NodeValuations, m: BddManager,
             on_solve: Callable[[int, BddFunction], None] | None = None) -> WitnessMap:
    """Top-down witness construction over the output-grade nodes of ``t``.

    ``vals`` must hold pre-valuations for every output-grade node; they are
    copied, not modified. ``on_solve(node, pre)`` is called right before the
    witnesses of ``node`` are extracted from ``pre``.
    """
    pre = {n: vals.pre[n] for n in t.internal(Y_GRADE)}
    wm = WitnessMap()
    layer = x_leaves(t)
    while layer:
        nxt = []
        for n in layer:
            nxt.extend(c for c in t.children(n) if not t.is_leaf(c))
            if on_solve is not None:
                on_solve(n, pre[n])
            wit, _ = solve_eqn(pre[n], sorted(t.label(n)))
            for y in sorted(wit):
                wm.set(y, wit[y])
            for d in t.descendants(n):
                if t.is_leaf(d):
                    continue
                f = pre[d]
                for y in sorted(wit):
                    f = f.compose(y, wit[y])
                pre[d] = f
        layer = nxt
    for y in p.outputs:
        if y not in wm:
            wm.set(y, m.true)
    return wm


def synthesize(p: SynthesisProblem, t: GradedProjectJoinTree, outcome: RealizabilityOutcome,
               m: BddManager, on_solve=None) -> WitnessMap:
    if outcome.verdict == Verdict.NULLARY:
        raise NotRealizable("no input is realizable; nothing to synthesize")
    return dp_synth(p, t, outcome.valuations, m, on_solve)


@dataclass
class FactoredChain:
    factor_order: list[int]
    blocks: list[list[int]]          # blocks[j]: outputs first seen in factor j
    chain: list[BddFunction]         # chain[j] = B_j, j = 0..m
    factors: list[BddFunction]


def factor_blocks(p: SynthesisProblem, factor_order: Sequence[int]) -> list[list[int]]:
    """Outputs of each factor that no earlier factor mentions."""
    ys = set(p.outputs)
    seen: set[int] = set()
    out = []
    for ci in factor_order:
        blk = sorted(v for v in p.clause_vars(ci) if v in ys and v not in seen)
        seen.update(blk)
        out.append(blk)
    return out


def factored_width(p: SynthesisProblem, factor_order: Sequence[int]) -> int:
    """Largest live-variable set over the conjunctions ``F_j & B_j``."""
    blocks = factor_blocks(p, factor_order)
    live: set[int] = set()
    width = 0
    for j in range(len(factor_order) - 1, -1, -1):
        live = live | p.clause_vars(factor_order[j])
        width = max(width, len(live))
        live = live - set(blocks[j])
    return width


def factored_realizability(p: SynthesisProblem, factor_order: Sequence[int] | None = None,
                           m: BddManager | None = None,
                           clause_bdds: list[BddFunction] | None = None
                           ) -> tuple[RealizabilityOutcome, FactoredChain]:
    """Bottom-up half of the baseline: ``B_{j-1} = exists Y_j . (F_j & B_j)``."""
    if factor_order is None:
        factor_order = list(range(len(p.clauses)))
    factor_order = list(factor_order)
    if sorted(factor_order) != list(range(len(p.clauses))):
        raise ValueError("factor_order must be a permutation of the clause indices")
    if m is None:
        m = new_manager(p)
    if clause_bdds is None:
        clause_bdds = compile_clauses(m, p)
    factors = [clause_bdds[i] for i in factor_order]
    blocks = factor_blocks(p, factor_order)
    k = len(factors)

    chain: list[BddFunction] = [m.true] * (k + 1)
    for j in range(k, 0, -1):
        conj = factors[j - 1] & chain[j]
        chain[j - 1] = conj.exists(blocks[j - 1])
    fc = FactoredChain(factor_order, blocks, chain, factors)
    xs = set(p.inputs)
    b_pure_x = m.true
    for ci in factor_order:
        if all(abs(lit) in xs for lit in p.clauses[ci]):
            b_pure_x = b_pure_x & clause_bdds[ci]
    r_set = chain[0]
    if r_set.is_false:
        verdict = Verdict.NULLARY
    elif r_set.is_true:
        verdict = Verdict.FULLY
    else:
        verdict = Verdict.PARTIALLY
    return RealizabilityOutcome(verdict, r_set, b_pure_x, None), fc


def factored_witnesses(p: SynthesisProblem, fc: FactoredChain, m: BddManager) -> WitnessMap:
    """Top-down half: witnesses for ``Y_j`` come from ``F_j & B_j`` after the
    witnesses of earlier blocks are substituted."""
    if fc.chain[0].is_false:
        raise NotRealizable("no input is realizable; nothing to synthesize")
    wm = WitnessMap()
    for j in range(1, len(fc.factors) + 1):
        block = fc.blocks[j - 1]
        if not block:
            continue
        b = fc.factors[j - 1] & fc.chain[j]
        for y in sorted(b.support()):
            if y in wm:
                b = b.compose(y, wm[y])
        wit, _ = solve_eqn(b, block)
        for y in block:
            wm.set(y, wit[y])
    for y in p.outputs:
        if y not in wm:
            wm.set(y, m.true)
    return wm


def factored_baseline(p: SynthesisProblem, factor_order: Sequence[int] | None = None,
                      m: BddManager | None = None,
                      clause_bdds: list[BddFunction] | None = None
                      ) -> tuple[RealizabilityOutcome, WitnessMap | None]:
    """Realizability and witnesses along a linear chain of clause factors.

    ``witnesses`` is ``None`` for a nullary instance.
    """
    if m is None:
        m = new_manager(p)
    outcome, fc = factored_realizability(p, factor_order, m, clause_bdds)
    if outcome.verdict == Verdict.NULLARY:
        return outcome, None
    return outcome, factored_witnesses(p, fc, m)


def substitute_all(f: BddFunction, witnesses: dict[int, BddFunction],
                   variables: Iterable[int] | None = None) -> BddFunction:
    for y in sorted(witnesses if variables is None else variables):
        f = f.compose(y, witnesses[y])
    return f
