"""Planning: Gaifman graphs, variable orders, tree decompositions and
(X, Y)-graded project-join trees.

Ties are always broken by the smallest variable id and then by the smallest
clause index, so every planner here is deterministic.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations

from .cnf import SynthesisProblem

X_GRADE = "X"
Y_GRADE = "Y"


class InvalidDecomposition(ValueError):
    pass


class OrderViolation(ValueError):
    pass


@dataclass
class GaifmanGraph:
    vertices: set[int]
    adj: dict[int, set[int]]

    @property
    def edges(self) -> set[frozenset[int]]:
        return {frozenset((u, v)) for u in self.adj for v in self.adj[u] if u < v}


def build_gaifman(p: SynthesisProblem) -> GaifmanGraph:
    verts = p.used_vars()
    adj: dict[int, set[int]] = {v: set() for v in verts}
    for i in range(len(p.clauses)):
        for u, v in combinations(p.clause_vars(i), 2):
            adj[u].add(v)
            adj[v].add(u)
    return GaifmanGraph(verts, adj)


def mcs_order(g: GaifmanGraph) -> list[int]:
    """Maximum cardinality search; ties by smallest id."""
    weight = {v: 0 for v in g.vertices}
    order = []
    while weight:
        v = min(weight, key=lambda u: (-weight[u], u))
        del weight[v]
        order.append(v)
        for u in g.adj[v]:
            if u in weight:
                weight[u] += 1
    return order


def bdd_order(p: SynthesisProblem) -> list[int]:
    """MCS order of the Gaifman graph followed by clause-free variables."""
    order = mcs_order(build_gaifman(p))
    seen = set(order)
    return order + [v for v in sorted(p.inputs + p.outputs) if v not in seen]


@dataclass
class TreeDecomposition:
    bags: list[frozenset[int]]
    edges: list[tuple[int, int]]

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags), default=0) - 1

    def neighbors(self) -> dict[int, list[int]]:
        nb: dict[int, list[int]] = {i: [] for i in range(len(self.bags))}
        for a, b in self.edges:
            nb[a].append(b)
            nb[b].append(a)
        return {i: sorted(v) for i, v in nb.items()}

    def is_valid_for(self, g: GaifmanGraph) -> bool:
        return not decomposition_violations(self, g)


def decomposition_violations(td: TreeDecomposition, g: GaifmanGraph) -> list[str]:
    out = []
    n = len(td.bags)
    if n and len(td.edges) != n - 1:
        out.append(f"{len(td.edges)} edges for {n} bags; not a tree")
    nb = td.neighbors()
    # connectedness of the bag tree
    if n:
        seen = {0}
        stack = [0]
        while stack:
            for j in nb[stack.pop()]:
                if j not in seen:
                    seen.add(j)
                    stack.append(j)
        if len(seen) != n:
            out.append("bag tree is disconnected")
    covered = set().union(*td.bags) if td.bags else set()
    for v in g.vertices - covered:
        out.append(f"vertex {v} in no bag")
    for e in g.edges:
        if not any(e <= b for b in td.bags):
            out.append(f"edge {sorted(e)} in no bag")
    for v in covered:
        holding = [i for i, b in enumerate(td.bags) if v in b]
        seen = {holding[0]}
        stack = [holding[0]]
        while stack:
            for j in nb[stack.pop()]:
                if j not in seen and v in td.bags[j]:
                    seen.add(j)
                    stack.append(j)
        if len(seen) != len(holding):
            out.append(f"bags holding {v} are not connected")
    return out


def min_fill_order(g: GaifmanGraph) -> list[int]:
    adj = {v: set(ns) for v, ns in g.adj.items()}
    order = []
    while adj:
        def fill(v):
            ns = sorted(adj[v])
            return sum(1 for a, b in combinations(ns, 2) if b not in adj[a])
        v = min(adj, key=lambda u: (fill(u), u))
        ns = adj.pop(v)
        for a, b in combinations(ns, 2):
            adj[a].add(b)
            adj[b].add(a)
        for u in ns:
            adj[u].discard(v)
        order.append(v)
    return order


def decomposition_from_order(g: GaifmanGraph, order: list[int]) -> TreeDecomposition:
    """Elimination-clique decomposition, with subsumed bags contracted away."""
    pos = {v: i for i, v in enumerate(order)}
    adj = {v: set(ns) for v, ns in g.adj.items()}
    bags: list[set[int]] = []
    parent: list[int | None] = []
    for v in order:
        ns = adj.pop(v)
        bags.append({v} | ns)
        for a, b in combinations(ns, 2):
            adj[a].add(b)
            adj[b].add(a)
        for u in ns:
            adj[u].discard(v)
        parent.append(pos[min(ns, key=pos.__getitem__)] if ns else None)
    # join components so the result is a single tree
    roots = [i for i, par in enumerate(parent) if par is None]
    for r in roots[:-1]:
        parent[r] = roots[-1]

    alive = list(range(len(bags)))
    changed = True
    while changed:
        changed = False
        for i in list(alive):
            par = parent[i]
            if par is not None and bags[i] <= bags[par]:
                target = par
            else:
                kids = [j for j in alive if parent[j] == i and bags[i] <= bags[j]]
                if not kids:
                    continue
                target = kids[0]
                parent[target] = parent[i]
            for j in alive:
                if parent[j] == i and j != target:
                    parent[j] = target
            alive.remove(i)
            changed = True
            break
    index = {old: new for new, old in enumerate(alive)}
    out_bags = [frozenset(bags[i]) for i in alive]
    edges = sorted((index[i], index[parent[i]]) for i in alive if parent[i] is not None)
    return TreeDecomposition(out_bags, [tuple(sorted(e)) for e in edges])


def min_fill_decomposition(g: GaifmanGraph) -> TreeDecomposition:
    return decomposition_from_order(g, min_fill_order(g))


# ---------------------------------------------------------------------------
# Graded project-join trees


@dataclass
class Node:
    clause: int | None = None          # leaves: clause index (None for synthetic leaves)
    label: frozenset[int] = frozenset()
    children: tuple[int, ...] = ()
    grade: str | None = None           # internal nodes only
    leaf: bool = False


@dataclass
class GradedProjectJoinTree:
    nodes: dict[int, Node]
    root: int
    parent: dict[int, int] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if not self.parent:
            self.parent = {c: n for n, node in self.nodes.items() for c in node.children}

    @classmethod
    def from_parts(cls, leaves: dict[int, int], internal: dict[int, tuple], root: int):
        """``leaves`` maps node id to clause index; ``internal`` maps node id
        to ``(label, children, grade)``."""
        nodes = {n: Node(clause=c, leaf=True) for n, c in leaves.items()}
        for n, (label, children, grade) in internal.items():
            nodes[n] = Node(label=frozenset(label), children=tuple(children), grade=grade)
        return cls(nodes, root)

    def is_leaf(self, n: int) -> bool:
        return self.nodes[n].leaf

    def children(self, n: int) -> tuple[int, ...]:
        return self.nodes[n].children

    def label(self, n: int) -> frozenset[int]:
        return self.nodes[n].label

    def grade(self, n: int) -> str | None:
        return self.nodes[n].grade

    def leaves(self) -> list[int]:
        return sorted(n for n, node in self.nodes.items() if node.leaf)

    def internal(self, grade: str | None = None) -> list[int]:
        return sorted(n for n, node in self.nodes.items()
                      if not node.leaf and (grade is None or node.grade == grade))

    def postorder(self, root: int | None = None) -> list[int]:
        """Children before parents, children in stored order."""
        out = []
        stack = [(self.root if root is None else root, False)]
        while stack:
            n, done = stack.pop()
            if done:
                out.append(n)
                continue
            stack.append((n, True))
            for c in reversed(self.nodes[n].children):
                stack.append((c, False))
        return out

    def descendants(self, n: int) -> list[int]:
        return self.postorder(n)[:-1]

    def ancestors(self, n: int) -> list[int]:
        out = []
        while n in self.parent:
            n = self.parent[n]
            out.append(n)
        return out

    def to_json(self) -> dict:
        return {
            "root": self.root,
            "nodes": [
                {"id": n, "leaf": True, "clause": node.clause} if node.leaf else
                {"id": n, "leaf": False, "label": sorted(node.label),
                 "grade": node.grade, "children": list(node.children)}
                for n, node in sorted(self.nodes.items())
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> "GradedProjectJoinTree":
        nodes = {}
        for d in data["nodes"]:
            if d["leaf"]:
                nodes[d["id"]] = Node(clause=d["clause"], leaf=True)
            else:
                nodes[d["id"]] = Node(label=frozenset(d["label"]), children=tuple(d["children"]),
                                      grade=d["grade"])
        return cls(nodes, data["root"])

    def to_dot(self, p: SynthesisProblem | None = None) -> str:
        """Leaves show clause text; internal nodes ``e: v1,v2``; X-grade is a
        box, Y-grade an ellipse."""
        lines = ["digraph pjtree {"]
        for n, node in sorted(self.nodes.items()):
            if node.leaf:
                if p is not None and node.clause is not None:
                    text = " | ".join(_lit_name(p, lit) for lit in p.clauses[node.clause]) or "false"
                else:
                    text = f"clause {node.clause}"
                lines.append(f'  n{n} [shape=plaintext, label="{n}: {text}"];')
            else:
                names = ",".join(_var_name(p, v) for v in sorted(node.label))
                shape = "box" if node.grade == X_GRADE else "ellipse"
                lines.append(f'  n{n} [shape={shape}, label="{n}\\ne: {names}"];')
        for n, node in sorted(self.nodes.items()):
            for c in node.children:
                lines.append(f"  n{n} -> n{c};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def _var_name(p: SynthesisProblem | None, v: int) -> str:
    if p is None:
        return str(v)
    return f"x{v}" if v in p.inputs else f"y{v}"


def _lit_name(p: SynthesisProblem, lit: int) -> str:
    return ("-" if lit < 0 else "") + _var_name(p, abs(lit))


def tree_json(t: GradedProjectJoinTree) -> str:
    return json.dumps(t.to_json(), sort_keys=True, indent=2)


@dataclass(frozen=True)
class Violation:
    kind: str
    node: int | None
    detail: str

    def __str__(self):
        where = f"node {self.node}: " if self.node is not None else ""
        return f"[{self.kind}] {where}{self.detail}"


def validate_tree(p: SynthesisProblem, t: GradedProjectJoinTree) -> list[Violation]:
    """All ways in which ``t`` fails to be an (X, Y)-graded project-join tree
    for ``p``; empty when valid."""
    out: list[Violation] = []
    xs, ys = set(p.inputs), set(p.outputs)
    if t.root not in t.nodes:
        return [Violation("structure", None, f"root {t.root} is not a node")]

    # tree shape: every node reached exactly once from the root
    reached: dict[int, int] = {}
    stack = [t.root]
    while stack:
        n = stack.pop()
        reached[n] = reached.get(n, 0) + 1
        if reached[n] > 1:
            out.append(Violation("structure", n, "reached more than once"))
            continue
        node = t.nodes.get(n)
        if node is None:
            out.append(Violation("structure", n, "child id is not a node"))
            continue
        if node.leaf and node.children:
            out.append(Violation("structure", n, "leaf has children"))
        stack.extend(node.children)
    for n in t.nodes:
        if n not in reached:
            out.append(Violation("structure", n, "unreachable from the root"))
    if out:
        return out
    if t.nodes[t.root].leaf and p.clauses:
        out.append(Violation("structure", t.root, "root is a leaf"))

    # leaf map is a bijection onto the clauses
    owner: dict[int, int] = {}
    for n in t.leaves():
        c = t.nodes[n].clause
        if c is None or not 0 <= c < len(p.clauses):
            out.append(Violation("leaf-map", n, f"clause index {c} out of range"))
        elif c in owner:
            out.append(Violation("leaf-map", n, f"clause {c} also at leaf {owner[c]}"))
        else:
            owner[c] = n
    for c in range(len(p.clauses)):
        if c not in owner:
            out.append(Violation("leaf-map", None, f"clause {c} has no leaf"))

    # labels partition X and the used outputs
    labelled: dict[int, int] = {}
    for n in t.internal():
        for v in sorted(t.label(n)):
            if v in labelled:
                out.append(Violation("partition", n, f"variable {v} also labels node {labelled[v]}"))
            else:
                labelled[v] = n
            if v not in xs and v not in ys:
                out.append(Violation("partition", n, f"variable {v} is not in the problem"))
    required = xs | set(p.used_outputs())
    for v in sorted(required - set(labelled)):
        out.append(Violation("partition", None, f"variable {v} labels no node"))

    # every clause mentioning v sits below the node labelling v
    for c, leaf in sorted(owner.items()):
        anc = set(t.ancestors(leaf))
        for v in sorted(p.clause_vars(c)):
            if v in labelled and labelled[v] not in anc:
                out.append(Violation("occurrence", leaf,
                                     f"clause {c} mentions {v} but is not below node {labelled[v]}"))

    # grades
    for n in t.internal():
        g, lab = t.grade(n), t.label(n)
        if g == X_GRADE:
            if not lab <= xs:
                out.append(Violation("grade", n, f"X-grade label has non-inputs {sorted(lab - xs)}"))
            if any(t.grade(a) == Y_GRADE for a in t.ancestors(n)):
                out.append(Violation("grade-order", n, "X-grade node below a Y-grade node"))
        elif g == Y_GRADE:
            if not lab <= ys:
                out.append(Violation("grade", n, f"Y-grade label has non-outputs {sorted(lab - ys)}"))
        else:
            out.append(Violation("grade", n, f"unknown grade {g!r}"))
    return out


def free_vars(p: SynthesisProblem, t: GradedProjectJoinTree) -> dict[int, frozenset[int]]:
    """Variables live when each node is evaluated (before its own label is
    projected out)."""
    free: dict[int, frozenset[int]] = {}
    for n in t.postorder():
        node = t.nodes[n]
        if node.leaf:
            free[n] = p.clause_vars(node.clause) if node.clause is not None else frozenset()
        else:
            s: set[int] = set()
            for c in node.children:
                cn = t.nodes[c]
                s |= free[c] if cn.leaf else free[c] - cn.label
            free[n] = frozenset(s)
    return free


def tree_width(p: SynthesisProblem, t: GradedProjectJoinTree) -> int:
    free = free_vars(p, t)
    return max((len(free[n] | t.label(n)) for n in t.internal()), default=0)


def _grade_of(p: SynthesisProblem, v: int) -> str:
    return X_GRADE if v in set(p.inputs) else Y_GRADE


def bucket_elimination_tree(p: SynthesisProblem, order: list[int]) -> GradedProjectJoinTree:
    """Join pending subtrees variable by variable along ``order``.

    ``order`` must list every used output before every used input. A
    variable whose pending set is a single internal node of the same grade is
    merged into that node's label instead of opening a new node.
    """
    xs = set(p.inputs)
    used = p.used_vars()
    seen_x = False
    for v in order:
        if v in xs:
            seen_x = True
        elif v in set(p.outputs):
            if seen_x and v in used:
                raise OrderViolation(f"output {v} appears after an input")
        else:
            raise OrderViolation(f"variable {v} is not in the problem")
    if len(set(order)) != len(order):
        raise OrderViolation("order repeats a variable")
    missing = used - set(order)
    if missing:
        raise OrderViolation(f"order omits used variables {sorted(missing)}")

    nodes: dict[int, Node] = {}
    pending: list[tuple[int, frozenset[int]]] = []
    for i in range(len(p.clauses)):
        nodes[i] = Node(clause=i, leaf=True)
        pending.append((i, p.clause_vars(i)))
    next_id = len(p.clauses)

    for v in order:
        if v not in used:
            continue
        grade = _grade_of(p, v)
        hit = [item for item in pending if v in item[1]]
        pending = [item for item in pending if v not in item[1]]
        if len(hit) == 1 and not nodes[hit[0][0]].leaf and nodes[hit[0][0]].grade == grade:
            n, free = hit[0]
            node = nodes[n]
            nodes[n] = Node(label=node.label | {v}, children=node.children, grade=grade)
            pending.append((n, free - {v}))
            continue
        n = next_id
        next_id += 1
        free = frozenset().union(*(f for _, f in hit)) - {v}
        nodes[n] = Node(label=frozenset({v}), children=tuple(c for c, _ in hit), grade=grade)
        pending.append((n, free))

    leftover = frozenset(x for x in p.inputs if x not in used)
    if len(pending) == 1 and not nodes[pending[0][0]].leaf and (
            not leftover or nodes[pending[0][0]].grade == X_GRADE):
        root = pending[0][0]
        if leftover:
            node = nodes[root]
            nodes[root] = Node(label=node.label | leftover, children=node.children, grade=X_GRADE)
    else:
        root = next_id
        nodes[root] = Node(label=leftover, children=tuple(c for c, _ in pending), grade=X_GRADE)
    return GradedProjectJoinTree(nodes, root)


def bucket_order(p: SynthesisProblem) -> list[int]:
    """Reverse MCS restricted to outputs, then reverse MCS on inputs."""
    mcs = mcs_order(build_gaifman(p))
    xs = set(p.inputs)
    rev = list(reversed(mcs))
    return [v for v in rev if v not in xs] + [v for v in rev if v in xs]


def plan_bucket(p: SynthesisProblem) -> GradedProjectJoinTree:
    return bucket_elimination_tree(p, bucket_order(p))


def decomposition_order(td: TreeDecomposition) -> list[int]:
    """Elimination order induced by a rooted decomposition: a variable goes
    when the post-order walk leaves the topmost bag holding it."""
    if not td.bags:
        return []
    nb = td.neighbors()
    root = len(td.bags) - 1
    depth = {root: 0}
    post = []
    stack = [(root, False)]
    while stack:
        b, done = stack.pop()
        if done:
            post.append(b)
            continue
        stack.append((b, True))
        for c in reversed(nb[b]):
            if c not in depth:
                depth[c] = depth[b] + 1
                stack.append((c, False))
    top: dict[int, int] = {}
    for b, bag in enumerate(td.bags):
        for v in bag:
            if v not in top or depth[b] < depth[top[v]]:
                top[v] = b
    rank = {b: i for i, b in enumerate(post)}
    return sorted(top, key=lambda v: (rank[top[v]], v))


def decomposition_to_graded_tree(p: SynthesisProblem, td: TreeDecomposition) -> GradedProjectJoinTree:
    """Two-phase construction: outputs are eliminated first (in the
    decomposition's order), then inputs over the resulting forest."""
    for i in range(len(p.clauses)):
        cv = p.clause_vars(i)
        if cv and not any(cv <= b for b in td.bags):
            raise InvalidDecomposition(f"clause {i} fits no bag")
    order = decomposition_order(td)
    used = p.used_vars()
    missing = used - set(order)
    if missing:
        raise InvalidDecomposition(f"variables {sorted(missing)} in no bag")
    xs = set(p.inputs)
    order = [v for v in order if v not in xs] + [v for v in order if v in xs]
    return bucket_elimination_tree(p, order)


def plan_treedecomp(p: SynthesisProblem) -> GradedProjectJoinTree:
    return decomposition_to_graded_tree(p, min_fill_decomposition(build_gaifman(p)))


PLANNERS = {"treedecomp": plan_treedecomp, "bucket": plan_bucket}


def plan(p: SynthesisProblem, planner: str = "treedecomp") -> GradedProjectJoinTree:
    try:
        fn = PLANNERS[planner]
    except KeyError:
        raise ValueError(f"unknown planner {planner!r}; choose from {sorted(PLANNERS)}") from None
    return fn(p)


def example_tree() -> GradedProjectJoinTree:
    """The hand-built tree for :func:`dpsynth.cnf.running_example`.

    Leaves 1..5 carry clauses 0..4; node 6 = {y4}, 7 = {y5}, 8 = {x3},
    9 = {y6}, root 10 = {x1, x2}.
    """
    return GradedProjectJoinTree.from_parts(
        leaves={1: 0, 2: 1, 3: 2, 4: 3, 5: 4},
        internal={
            6: ({4}, (1, 4), Y_GRADE),
            7: ({5}, (5, 2, 6), Y_GRADE),
            8: ({3}, (7,), X_GRADE),
            9: ({6}, (3,), Y_GRADE),
            10: ({1, 2}, (8, 9), X_GRADE),
        },
        root=10,
    )
