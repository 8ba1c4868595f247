"""A small reduced ordered BDD package.

Nodes live in an append-only table owned by a :class:`BddManager`. Node 0 is
FALSE, node 1 is TRUE, and every other node is a ``(level, low, high)``
triple kept unique through a hash table. There are no complement edges, no
garbage collection and no dynamic reordering: the variable order is fixed
when the manager is created.

User code mostly works with :class:`BddFunction` handles, which support
``&``, ``|``, ``^`` and ``~`` and compare equal iff they denote the same
Boolean function in the same manager.
"""
from __future__ import annotations

from typing import Iterable, Mapping

FALSE_ID = 0
TRUE_ID = 1

_AND, _OR, _XOR = "and", "or", "xor"


class BddError(Exception):
    pass


class UnknownVariable(BddError, KeyError):
    pass


class ManagerMismatch(BddError, ValueError):
    pass


class IncompleteAssignment(BddError, KeyError):
    pass


class BddManager:
    """Node store, unique table and computed cache for one variable order."""

    def __init__(self, order: Iterable[int]):
        self.order: tuple[int, ...] = tuple(order)
        self.level: dict[int, int] = {v: i for i, v in enumerate(self.order)}
        if len(self.level) != len(self.order):
            raise ValueError("variable order contains duplicates")
        self.terminal_level = len(self.order)
        self._lvl = [self.terminal_level, self.terminal_level]
        self._lo = [FALSE_ID, TRUE_ID]
        self._hi = [FALSE_ID, TRUE_ID]
        self._unique: dict[tuple[int, int, int], int] = {}
        self._cache: dict[tuple, int] = {}

    def __repr__(self):
        return f"BddManager(vars={len(self.order)}, nodes={len(self._lvl)})"

    # -- node table ---------------------------------------------------------

    def _mk(self, lvl: int, lo: int, hi: int) -> int:
        if lo == hi:
            return lo
        key = (lvl, lo, hi)
        u = self._unique.get(key)
        if u is None:
            u = len(self._lvl)
            self._lvl.append(lvl)
            self._lo.append(lo)
            self._hi.append(hi)
            self._unique[key] = u
        return u

    def node(self, u: int) -> tuple[int, int, int]:
        """The ``(level, low, high)`` triple of node ``u``."""
        return self._lvl[u], self._lo[u], self._hi[u]

    @property
    def peak_nodes(self) -> int:
        # append-only store: peak equals everything ever allocated
        return len(self._lvl)

    def clear_cache(self):
        self._cache.clear()

    def _level_of(self, v: int) -> int:
        try:
            return self.level[v]
        except KeyError:
            raise UnknownVariable(v) from None

    def wrap(self, u: int) -> "BddFunction":
        return BddFunction(self, u)

    # -- constructors -------------------------------------------------------

    def const(self, b: bool) -> "BddFunction":
        return BddFunction(self, TRUE_ID if b else FALSE_ID)

    @property
    def true(self) -> "BddFunction":
        return BddFunction(self, TRUE_ID)

    @property
    def false(self) -> "BddFunction":
        return BddFunction(self, FALSE_ID)

    def var(self, v: int) -> "BddFunction":
        return BddFunction(self, self._mk(self._level_of(v), FALSE_ID, TRUE_ID))

    def literal(self, lit: int) -> "BddFunction":
        lvl = self._level_of(abs(lit))
        if lit > 0:
            return BddFunction(self, self._mk(lvl, FALSE_ID, TRUE_ID))
        return BddFunction(self, self._mk(lvl, TRUE_ID, FALSE_ID))

    def clause(self, lits: Iterable[int]) -> "BddFunction":
        """Disjunction of DIMACS literals, built bottom-up in one pass."""
        by_level = {}
        for lit in lits:
            lvl = self._level_of(abs(lit))
            if by_level.get(lvl, lit) != lit:
                return self.true
            by_level[lvl] = lit
        u = FALSE_ID
        for lvl in sorted(by_level, reverse=True):
            if by_level[lvl] > 0:
                u = self._mk(lvl, u, TRUE_ID)
            else:
                u = self._mk(lvl, TRUE_ID, u)
        return BddFunction(self, u)

    def cube(self, assignment: Mapping[int, bool]) -> "BddFunction":
        u = TRUE_ID
        for lvl, val in sorted(((self._level_of(v), b) for v, b in assignment.items()), reverse=True):
            u = self._mk(lvl, FALSE_ID, u) if val else self._mk(lvl, u, FALSE_ID)
        return BddFunction(self, u)

    def from_truth_table(self, variables: list[int], table: int) -> "BddFunction":
        """Build the function whose value on assignment index ``k`` is bit ``k``
        of ``table``; bit ``i`` of ``k`` is the value of ``variables[i]``.

        Used as an independent construction route in tests.
        """
        n = len(variables)
        pos = sorted(range(n), key=lambda i: self._level_of(variables[i]))
        lvls = [self._level_of(variables[i]) for i in pos]

        def rec(depth: int, k: int) -> int:
            if depth == n:
                return TRUE_ID if (table >> k) & 1 else FALSE_ID
            bit = 1 << pos[depth]
            return self._mk(lvls[depth], rec(depth + 1, k), rec(depth + 1, k | bit))

        return BddFunction(self, rec(0, 0))

    # -- core algorithms on node ids -----------------------------------------

    def _apply(self, op: str, f: int, g: int) -> int:
        if op == _AND:
            if f == FALSE_ID or g == FALSE_ID:
                return FALSE_ID
            if f == TRUE_ID:
                return g
            if g == TRUE_ID or f == g:
                return f
        elif op == _OR:
            if f == TRUE_ID or g == TRUE_ID:
                return TRUE_ID
            if f == FALSE_ID:
                return g
            if g == FALSE_ID or f == g:
                return f
        else:
            if f == g:
                return FALSE_ID
            if f == FALSE_ID:
                return g
            if g == FALSE_ID:
                return f
            if f == TRUE_ID and g == TRUE_ID:
                return FALSE_ID
        if f > g:
            f, g = g, f
        key = (op, f, g)
        r = self._cache.get(key)
        if r is not None:
            return r
        lf, lg = self._lvl[f], self._lvl[g]
        lvl = min(lf, lg)
        f0, f1 = (self._lo[f], self._hi[f]) if lf == lvl else (f, f)
        g0, g1 = (self._lo[g], self._hi[g]) if lg == lvl else (g, g)
        r = self._mk(lvl, self._apply(op, f0, g0), self._apply(op, f1, g1))
        self._cache[key] = r
        return r

    def _exists(self, f: int, levels: tuple[int, ...]) -> int:
        # levels is sorted ascending; drop those above f's top variable
        lf = self._lvl[f]
        i = 0
        while i < len(levels) and levels[i] < lf:
            i += 1
        if i:
            levels = levels[i:]
        if not levels or f <= TRUE_ID:
            return f
        key = ("exists", f, levels)
        r = self._cache.get(key)
        if r is not None:
            return r
        lo = self._exists(self._lo[f], levels)
        if levels[0] == lf:
            if lo == TRUE_ID:
                r = TRUE_ID
            else:
                r = self._apply(_OR, lo, self._exists(self._hi[f], levels))
        else:
            r = self._mk(lf, lo, self._exists(self._hi[f], levels))
        self._cache[key] = r
        return r

    def _restrict(self, f: int, lvl: int, b: bool) -> int:
        lf = self._lvl[f]
        if lf > lvl:
            return f
        if lf == lvl:
            return self._hi[f] if b else self._lo[f]
        key = ("restrict", f, lvl, b)
        r = self._cache.get(key)
        if r is not None:
            return r
        r = self._mk(lf, self._restrict(self._lo[f], lvl, b), self._restrict(self._hi[f], lvl, b))
        self._cache[key] = r
        return r

    def _ite(self, c: int, t: int, e: int) -> int:
        if c == TRUE_ID:
            return t
        if c == FALSE_ID:
            return e
        if t == e:
            return t
        if t == TRUE_ID and e == FALSE_ID:
            return c
        key = ("ite", c, t, e)
        r = self._cache.get(key)
        if r is not None:
            return r
        lvl = min(self._lvl[c], self._lvl[t], self._lvl[e])
        cof = []
        for u in (c, t, e):
            if self._lvl[u] == lvl:
                cof.append((self._lo[u], self._hi[u]))
            else:
                cof.append((u, u))
        r = self._mk(lvl, self._ite(cof[0][0], cof[1][0], cof[2][0]),
                     self._ite(cof[0][1], cof[1][1], cof[2][1]))
        self._cache[key] = r
        return r

    def _compose(self, f: int, lvl: int, g: int) -> int:
        lf = self._lvl[f]
        if lf > lvl:
            return f
        if lf == lvl:
            return self._ite(g, self._hi[f], self._lo[f])
        key = ("compose", f, lvl, g)
        r = self._cache.get(key)
        if r is not None:
            return r
        lo = self._compose(self._lo[f], lvl, g)
        hi = self._compose(self._hi[f], lvl, g)
        # g may mention variables above lf, so rebuild with ite on f's top var
        top = self._mk(lf, FALSE_ID, TRUE_ID)
        r = self._ite(top, hi, lo)
        self._cache[key] = r
        return r

    def _reachable(self, f: int) -> set[int]:
        seen = set()
        stack = [f]
        while stack:
            u = stack.pop()
            if u in seen:
                continue
            seen.add(u)
            if u > TRUE_ID:
                stack.append(self._lo[u])
                stack.append(self._hi[u])
        return seen

    def _sat_count(self, f: int, lvls: list[int]) -> int:
        """Models of ``f`` over the sorted variable levels ``lvls``."""
        pos = {lvl: i for i, lvl in enumerate(lvls)}
        memo: dict[int, int] = {}
        n = len(lvls)

        def idx(u):
            return n if u <= TRUE_ID else pos[self._lvl[u]]

        def rec(u):
            if u == FALSE_ID:
                return 0
            if u == TRUE_ID:
                return 1
            if u in memo:
                return memo[u]
            i = idx(u)
            lo, hi = self._lo[u], self._hi[u]
            c = (rec(lo) << (idx(lo) - i - 1)) + (rec(hi) << (idx(hi) - i - 1))
            memo[u] = c
            return c

        return rec(f) << idx(f)


class BddFunction:
    """Handle to a node of a :class:`BddManager`."""

    __slots__ = ("manager", "node")

    def __init__(self, manager: BddManager, node: int):
        self.manager = manager
        self.node = node

    def _peer(self, other: "BddFunction") -> int:
        if not isinstance(other, BddFunction):
            raise TypeError(f"expected BddFunction, got {type(other).__name__}")
        if other.manager is not self.manager:
            raise ManagerMismatch("operands belong to different managers")
        return other.node

    def __and__(self, other):
        return BddFunction(self.manager, self.manager._apply(_AND, self.node, self._peer(other)))

    def __or__(self, other):
        return BddFunction(self.manager, self.manager._apply(_OR, self.node, self._peer(other)))

    def __xor__(self, other):
        return BddFunction(self.manager, self.manager._apply(_XOR, self.node, self._peer(other)))

    def __invert__(self):
        return BddFunction(self.manager, self.manager._apply(_XOR, self.node, TRUE_ID))

    def __eq__(self, other):
        if not isinstance(other, BddFunction):
            return NotImplemented
        return self.manager is other.manager and self.node == other.node

    def __hash__(self):
        return hash((id(self.manager), self.node))

    def __repr__(self):
        if self.node <= TRUE_ID:
            return f"BddFunction({bool(self.node)})"
        return f"BddFunction(node={self.node}, support={sorted(self.support())})"

    @property
    def is_true(self) -> bool:
        return self.node == TRUE_ID

    @property
    def is_false(self) -> bool:
        return self.node == FALSE_ID

    def exists(self, variables: Iterable[int]) -> "BddFunction":
        m = self.manager
        levels = tuple(sorted({m._level_of(v) for v in variables}))
        return BddFunction(m, m._exists(self.node, levels))

    def restrict(self, v: int, value: bool) -> "BddFunction":
        m = self.manager
        return BddFunction(m, m._restrict(self.node, m._level_of(v), bool(value)))

    def compose(self, v: int, g: "BddFunction") -> "BddFunction":
        m = self.manager
        gn = self._peer(g)
        return BddFunction(m, m._compose(self.node, m._level_of(v), gn))

    def implies(self, other: "BddFunction") -> bool:
        return (self & ~other).is_false

    def eval(self, assignment: Mapping[int, bool]) -> bool:
        m = self.manager
        u = self.node
        while u > TRUE_ID:
            v = m.order[m._lvl[u]]
            try:
                val = assignment[v]
            except KeyError:
                raise IncompleteAssignment(v) from None
            u = m._hi[u] if val else m._lo[u]
        return u == TRUE_ID

    def support(self) -> set[int]:
        m = self.manager
        return {m.order[m._lvl[u]] for u in m._reachable(self.node) if u > TRUE_ID}

    def node_count(self) -> int:
        """Reachable nodes, counting whichever terminals are reachable."""
        return len(self.manager._reachable(self.node))

    def sat_count(self, variables: Iterable[int]) -> int:
        m = self.manager
        lvls = sorted({m._level_of(v) for v in variables})
        if not self.support() <= {m.order[lvl] for lvl in lvls}:
            raise ValueError("support is not contained in the counting variables")
        return m._sat_count(self.node, lvls)

    def pick_min(self, variables: Iterable[int]) -> dict[int, bool] | None:
        """Lexicographically least model over ``variables`` (in BDD order,
        preferring 0), or ``None`` when unsatisfiable."""
        m = self.manager
        if self.node == FALSE_ID:
            return None
        out = {v: False for v in variables}
        u = self.node
        while u > TRUE_ID:
            v = m.order[m._lvl[u]]
            if m._lo[u] != FALSE_ID:
                out[v] = False
                u = m._lo[u]
            else:
                out[v] = True
                u = m._hi[u]
        return out

    def to_expr(self) -> dict:
        """Nested JSON-friendly expression tree (shared subgraphs are
        expanded)."""
        m = self.manager
        memo: dict[int, dict] = {}

        def rec(u):
            if u <= TRUE_ID:
                return {"const": u == TRUE_ID}
            if u in memo:
                return memo[u]
            v = m.order[m._lvl[u]]
            lo, hi = m._lo[u], m._hi[u]
            if lo == FALSE_ID and hi == TRUE_ID:
                e = {"var": v}
            elif lo == TRUE_ID and hi == FALSE_ID:
                e = {"not": {"var": v}}
            else:
                e = {"ite": [v, rec(hi), rec(lo)]}
            memo[u] = e
            return e

        return rec(self.node)


def from_expr(m: BddManager, e: dict) -> BddFunction:
    """Inverse of :meth:`BddFunction.to_expr`; also accepts ``and``/``or``
    lists."""
    if "const" in e:
        return m.const(e["const"])
    if "var" in e:
        return m.var(e["var"])
    if "not" in e:
        return ~from_expr(m, e["not"])
    if "ite" in e:
        v, hi, lo = e["ite"]
        c = m.var(v)
        return (c & from_expr(m, hi)) | (~c & from_expr(m, lo))
    if "and" in e:
        r = m.true
        for a in e["and"]:
            r = r & from_expr(m, a)
        return r
    if "or" in e:
        r = m.false
        for a in e["or"]:
            r = r | from_expr(m, a)
        return r
    raise ValueError(f"unrecognized expression node: {sorted(e)}")


# Functional aliases --------------------------------------------------------

def mk_const(m: BddManager, b: bool) -> BddFunction:
    return m.const(b)


def mk_var(m: BddManager, v: int) -> BddFunction:
    return m.var(v)


def apply_and(f: BddFunction, g: BddFunction) -> BddFunction:
    return f & g


def apply_or(f: BddFunction, g: BddFunction) -> BddFunction:
    return f | g


def negate(f: BddFunction) -> BddFunction:
    return ~f


def exists(f: BddFunction, variables: Iterable[int]) -> BddFunction:
    return f.exists(variables)


def restrict(f: BddFunction, v: int, b: bool) -> BddFunction:
    return f.restrict(v, b)


def compose(f: BddFunction, v: int, g: BddFunction) -> BddFunction:
    return f.compose(v, g)


def conjoin(fs: Iterable[BddFunction], m: BddManager) -> BddFunction:
    r = m.true
    for f in fs:
        r = r & f
        if r.is_false:
            break
    return r
