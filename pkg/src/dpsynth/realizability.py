"""Bottom-up realizability checking over a graded project-join tree.

Every node gets a pre-valuation (conjunction of its children's
post-valuations, or the clause itself at a leaf) and a post-valuation (the
pre-valuation with the node's label projected out). The output-grade part
of the tree is evaluated first; its topmost output nodes ("x-leaves") are
then turned into leaves of an input-only tree whose root decides between
partial and nullary realizability.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .bdd import BddFunction, BddManager, conjoin
from .cnf import SynthesisProblem, pure_x_clauses
from .planner import Y_GRADE, GradedProjectJoinTree, Node, bdd_order


class Verdict(str, enum.Enum):
    FULLY = "fully"
    PARTIALLY = "partially"
    NULLARY = "nullary"


class MissingChildValuation(RuntimeError):
    pass


@dataclass
class NodeValuations:
    pre: dict[int, BddFunction] = field(default_factory=dict)
    post: dict[int, BddFunction] = field(default_factory=dict)
    order: list[int] = field(default_factory=list)


@dataclass
class HandOff:
    """The input-only tree passed from the low to the high phase."""
    tree: GradedProjectJoinTree
    leaf_bdds: dict[int, BddFunction]
    xleaves: list[int]
    b_pure_x: BddFunction
    valuations: NodeValuations


@dataclass
class RealizabilityOutcome:
    verdict: Verdict
    realizability_set: BddFunction
    b_pure_x: BddFunction
    valuations: NodeValuations | None
    reduced_tree: GradedProjectJoinTree | None = None
    early_exit: bool = False


def compile_clauses(m: BddManager, p: SynthesisProblem) -> list[BddFunction]:
    return [m.clause(c) for c in p.clauses]


def new_manager(p: SynthesisProblem) -> BddManager:
    return BddManager(bdd_order(p))


def generic_valuation(t: GradedProjectJoinTree, leaf_bdds: dict[int, BddFunction], n: int,
                      vals: NodeValuations, manager: BddManager | None = None) -> bool:
    """Fill in ``vals.pre[n]`` and ``vals.post[n]``.

    Returns ``False`` when a zero BDD shows up among the children or in a
    partial conjunction; both valuations of ``n`` are then FALSE and the
    formula is unsatisfiable.
    """
    node = t.nodes[n]
    vals.order.append(n)
    if node.leaf:
        vals.pre[n] = vals.post[n] = leaf_bdds[n]
        return True
    m = manager or _manager_of(leaf_bdds, vals)
    pre = m.true
    for c in node.children:
        try:
            child_post = vals.post[c]
        except KeyError:
            raise MissingChildValuation(f"node {n}: child {c} not yet valued") from None
        if child_post.is_false:
            vals.pre[n] = vals.post[n] = m.false
            return False
        pre = pre & child_post
        if pre.is_false:
            vals.pre[n] = vals.post[n] = m.false
            return False
    vals.pre[n] = pre
    vals.post[n] = pre.exists(node.label)
    return True


def _manager_of(leaf_bdds, vals) -> BddManager:
    for f in leaf_bdds.values():
        return f.manager
    for f in vals.post.values():
        return f.manager
    raise ValueError("cannot infer the BDD manager from an empty tree")


def x_leaves(t: GradedProjectJoinTree) -> list[int]:
    """Output-grade nodes whose parent is not output-grade, ascending."""
    return [n for n in t.internal(Y_GRADE)
            if n not in t.parent or t.grade(t.parent[n]) != Y_GRADE]


def leaf_bdds_for(t: GradedProjectJoinTree, clause_bdds: list[BddFunction]) -> dict[int, BddFunction]:
    return {n: clause_bdds[t.nodes[n].clause] for n in t.leaves()}


def low_valuation(p: SynthesisProblem, t: GradedProjectJoinTree, m: BddManager,
                  clause_bdds: list[BddFunction] | None = None) -> RealizabilityOutcome | HandOff:
    if clause_bdds is None:
        clause_bdds = compile_clauses(m, p)
    vals = NodeValuations()
    b_pure_x = conjoin((clause_bdds[i] for i in pure_x_clauses(p)), m)
    if b_pure_x.is_false:
        return RealizabilityOutcome(Verdict.NULLARY, m.false, b_pure_x, vals, early_exit=True)
    if not t.internal(Y_GRADE) and b_pure_x.is_true:
        return RealizabilityOutcome(Verdict.FULLY, m.true, b_pure_x, vals)

    leaf_bdds = leaf_bdds_for(t, clause_bdds)
    for n in t.postorder():
        node = t.nodes[n]
        if not node.leaf and node.grade != Y_GRADE:
            continue
        if not generic_valuation(t, leaf_bdds, n, vals, m) or vals.pre[n].is_false:
            return RealizabilityOutcome(Verdict.NULLARY, m.false, b_pure_x, vals, early_exit=True)

    tops = x_leaves(t)
    all_true = True
    for n in tops:
        if vals.post[n].is_false:
            return RealizabilityOutcome(Verdict.NULLARY, m.false, b_pure_x, vals, early_exit=True)
        if not vals.post[n].is_true:
            all_true = False
    if all_true and b_pure_x.is_true:
        return RealizabilityOutcome(Verdict.FULLY, m.true, b_pure_x, vals)

    # cut the tree at the x-leaves
    nodes: dict[int, Node] = {}
    t_leaves: dict[int, BddFunction] = {}
    top_set = set(tops)
    stack = [t.root]
    while stack:
        n = stack.pop()
        node = t.nodes[n]
        if n in top_set:
            nodes[n] = Node(leaf=True)
            t_leaves[n] = vals.post[n]
        elif node.leaf:
            nodes[n] = node
            t_leaves[n] = leaf_bdds[n]
        else:
            nodes[n] = node
            stack.extend(node.children)
    return HandOff(GradedProjectJoinTree(nodes, t.root), t_leaves, tops, b_pure_x, vals)


def high_valuation(p: SynthesisProblem, handoff: HandOff) -> RealizabilityOutcome:
    t_x = handoff.tree
    m = handoff.b_pure_x.manager
    vals = handoff.valuations
    xvals = NodeValuations()
    r_set = handoff.b_pure_x
    for n in handoff.xleaves:
        r_set = r_set & vals.post[n]
    for n in t_x.postorder():
        if not generic_valuation(t_x, handoff.leaf_bdds, n, xvals, m):
            return RealizabilityOutcome(Verdict.NULLARY, m.false, handoff.b_pure_x, vals, t_x)
    # x-grade valuations go alongside the y-grade ones; x-leaf ids keep theirs
    for n in t_x.postorder():
        if t_x.nodes[n].leaf and n in vals.post:
            continue
        vals.pre[n], vals.post[n] = xvals.pre[n], xvals.post[n]
        vals.order.append(n)
    if xvals.post[t_x.root].is_false:
        return RealizabilityOutcome(Verdict.NULLARY, m.false, handoff.b_pure_x, vals, t_x)
    return RealizabilityOutcome(Verdict.PARTIALLY, r_set, handoff.b_pure_x, vals, t_x)


def check_realizability(p: SynthesisProblem, t: GradedProjectJoinTree, m: BddManager | None = None,
                        clause_bdds: list[BddFunction] | None = None) -> RealizabilityOutcome:
    """Run the low phase and, when needed, the high phase."""
    if m is None:
        m = new_manager(p)
    res = low_valuation(p, t, m, clause_bdds)
    if isinstance(res, HandOff):
        return high_valuation(p, res)
    return res


def realizability_set(outcome: RealizabilityOutcome) -> BddFunction:
    return outcome.realizability_set


def direct_valuations(t: GradedProjectJoinTree, leaf_bdds: dict[int, BddFunction],
                      m: BddManager) -> NodeValuations:
    """Straight recursive reading of the valuation definition, with no early
    exits; a reference for testing :func:`generic_valuation`."""
    vals = NodeValuations()

    def post(n):
        pre_n = pre(n)
        node = t.nodes[n]
        r = pre_n if node.leaf else pre_n.exists(node.label)
        vals.post[n] = r
        return r

    def pre(n):
        node = t.nodes[n]
        if node.leaf:
            r = leaf_bdds[n]
        else:
            r = m.true
            for c in node.children:
                r = r & post(c)
        vals.pre[n] = r
        return r

    post(t.root)
    return vals


__all__ = [
    "Verdict", "NodeValuations", "HandOff", "RealizabilityOutcome", "MissingChildValuation",
    "compile_clauses", "new_manager", "generic_valuation", "x_leaves", "low_valuation",
    "high_valuation", "check_realizability", "realizability_set", "direct_valuations",
]
