"""CNF specifications with an input/output variable partition.

A :class:`SynthesisProblem` is a 2QBF ``forall X exists Y . phi(X, Y)`` where
``phi`` is a list of clauses. Clauses are tuples of DIMACS literals (nonzero
ints); a negative literal is a negated variable.
"""
from __future__ import annotations

import io
import logging
import random
from dataclasses import dataclass, field
from typing import Iterable, Sequence, TextIO

log = logging.getLogger(__name__)

Clause = tuple[int, ...]


class QdimacsError(ValueError):
    """Base class for parse errors."""


class MalformedHeader(QdimacsError):
    pass


class QuantifierOrderViolation(QdimacsError):
    pass


class UndeclaredVariable(QdimacsError):
    pass


def normalize_clause(lits: Iterable[int]) -> Clause | None:
    """Deduplicate literals and sort by variable; ``None`` for tautologies."""
    seen = set(lits)
    if 0 in seen:
        raise ValueError("literal 0 is not a variable")
    if any(-lit in seen for lit in seen):
        return None
    return tuple(sorted(seen, key=lambda lit: (abs(lit), lit < 0)))


@dataclass(frozen=True)
class SynthesisProblem:
    inputs: tuple[int, ...]
    outputs: tuple[int, ...]
    clauses: tuple[Clause, ...]
    warnings: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        xs, ys = set(self.inputs), set(self.outputs)
        if xs & ys:
            raise ValueError(f"inputs and outputs overlap: {sorted(xs & ys)}")
        if any(v < 1 for v in xs | ys):
            raise ValueError("variable ids must be >= 1")
        for i, c in enumerate(self.clauses):
            for lit in c:
                if abs(lit) not in xs and abs(lit) not in ys:
                    raise ValueError(f"clause {i} mentions unpartitioned variable {abs(lit)}")

    @classmethod
    def build(cls, inputs: Iterable[int], outputs: Iterable[int],
              clauses: Iterable[Iterable[int]]) -> "SynthesisProblem":
        """Construct from raw literal lists, dropping tautologies."""
        kept = []
        for c in clauses:
            nc = normalize_clause(c)
            if nc is not None:
                kept.append(nc)
        return cls(tuple(inputs), tuple(outputs), tuple(kept))

    @property
    def variables(self) -> tuple[int, ...]:
        return tuple(sorted(self.inputs + self.outputs))

    def clause_vars(self, i: int) -> frozenset[int]:
        return frozenset(abs(lit) for lit in self.clauses[i])

    def used_vars(self) -> set[int]:
        return {abs(lit) for c in self.clauses for lit in c}

    def used_outputs(self) -> list[int]:
        used = self.used_vars()
        return [y for y in self.outputs if y in used]

    def unused_outputs(self) -> list[int]:
        used = self.used_vars()
        return [y for y in self.outputs if y not in used]

    def evaluate(self, assignment: dict[int, bool]) -> bool:
        """Truth value of phi under a total assignment."""
        return all(any(assignment[abs(lit)] == (lit > 0) for lit in c)
                   for c in self.clauses)


def pure_x_clauses(p: SynthesisProblem) -> list[int]:
    """Indices of clauses mentioning no output variable."""
    xs = set(p.inputs)
    return [i for i, c in enumerate(p.clauses) if all(abs(lit) in xs for lit in c)]


def _ints(tokens: Sequence[str], lineno: int) -> list[int]:
    try:
        return [int(t) for t in tokens]
    except ValueError:
        raise QdimacsError(f"line {lineno}: expected integers, got {' '.join(tokens)!r}") from None


def parse_qdimacs(text: str | TextIO) -> SynthesisProblem:
    """Parse a closed (or free-variable) 2QBF in QDIMACS format.

    Free variables become inputs. Tautological clauses are dropped and an
    empty clause is kept as is. Every departure from the file contents is
    recorded in ``SynthesisProblem.warnings`` and logged.
    """
    if not isinstance(text, str):
        text = text.read()
    nvars = None
    blocks: list[tuple[str, list[int]]] = []
    clauses: list[Clause] = []
    warnings: list[str] = []
    pending: list[int] = []
    seen_clause = False

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        tokens = line.split()
        if tokens[0] == "p":
            if nvars is not None:
                raise MalformedHeader(f"line {lineno}: duplicate header")
            if len(tokens) != 4 or tokens[1] != "cnf":
                raise MalformedHeader(f"line {lineno}: expected 'p cnf <nvars> <nclauses>'")
            try:
                nvars, _ = int(tokens[2]), int(tokens[3])
            except ValueError:
                raise MalformedHeader(f"line {lineno}: non-integer header fields") from None
            if nvars < 0:
                raise MalformedHeader(f"line {lineno}: negative variable count")
            continue
        if nvars is None:
            raise MalformedHeader(f"line {lineno}: content before 'p cnf' header")
        if tokens[0] in ("a", "e"):
            if seen_clause:
                raise QuantifierOrderViolation(f"line {lineno}: quantifier block after clauses")
            vs = _ints(tokens[1:], lineno)
            if not vs or vs[-1] != 0:
                raise QdimacsError(f"line {lineno}: quantifier line must end with 0")
            vs = vs[:-1]
            for v in vs:
                if v < 1 or v > nvars:
                    raise UndeclaredVariable(f"line {lineno}: variable {v} outside 1..{nvars}")
            if blocks and blocks[-1][0] == tokens[0]:
                blocks[-1][1].extend(vs)
                continue
            if blocks and blocks[-1][0] == "e":
                raise QuantifierOrderViolation(f"line {lineno}: 'a' block after 'e' block")
            if len(blocks) == 2:
                raise QuantifierOrderViolation(f"line {lineno}: more than two quantifier blocks")
            blocks.append((tokens[0], vs))
            continue
        seen_clause = True
        for lit in _ints(tokens, lineno):
            if lit == 0:
                nc = normalize_clause(pending)
                if nc is None:
                    msg = f"line {lineno}: dropped tautological clause {pending}"
                    warnings.append(msg)
                    log.warning(msg)
                else:
                    clauses.append(nc)
                pending = []
            elif abs(lit) > nvars:
                raise UndeclaredVariable(f"line {lineno}: literal {lit} exceeds nvars={nvars}")
            else:
                pending.append(lit)
    if nvars is None:
        raise MalformedHeader("missing 'p cnf' header")
    if pending:
        raise QdimacsError("last clause is not terminated by 0")

    univ = [v for q, vs in blocks if q == "a" for v in vs]
    exist = [v for q, vs in blocks if q == "e" for v in vs]
    if set(univ) & set(exist) or len(set(univ)) != len(univ) or len(set(exist)) != len(exist):
        raise QuantifierOrderViolation("variable quantified more than once")
    bound = set(univ) | set(exist)
    free = [v for v in range(1, nvars + 1) if v not in bound]
    if free:
        msg = f"free variables treated as inputs: {free}"
        warnings.append(msg)
        log.warning(msg)
    return SynthesisProblem(tuple(univ + free), tuple(exist), tuple(clauses), tuple(warnings))


def read_qdimacs(path) -> SynthesisProblem:
    with open(path) as fh:
        return parse_qdimacs(fh)


def write_qdimacs(p: SynthesisProblem, out: TextIO | None = None, comment: str | None = None) -> str:
    """Serialize to QDIMACS; returns the text and also writes it to ``out``."""
    buf = io.StringIO()
    if comment:
        for line in comment.splitlines():
            buf.write(f"c {line}\n")
    nvars = max(p.inputs + p.outputs, default=0)
    buf.write(f"p cnf {nvars} {len(p.clauses)}\n")
    if p.inputs:
        buf.write("a " + " ".join(map(str, p.inputs)) + " 0\n")
    if p.outputs:
        buf.write("e " + " ".join(map(str, p.outputs)) + " 0\n")
    for c in p.clauses:
        buf.write(" ".join(map(str, c + (0,))) + "\n")
    text = buf.getvalue()
    if out is not None:
        out.write(text)
    return text


def random_problem(rng: random.Random, n_inputs: int, n_outputs: int, n_clauses: int,
                   max_width: int = 3) -> SynthesisProblem:
    """Uniform random CNF over ``x = 1..n_inputs`` and ``y = n_inputs+1..``."""
    nv = n_inputs + n_outputs
    clauses = []
    for _ in range(n_clauses):
        width = rng.randint(1, min(max_width, nv))
        vs = rng.sample(range(1, nv + 1), width)
        clauses.append([v if rng.random() < 0.5 else -v for v in vs])
    return SynthesisProblem.build(range(1, n_inputs + 1), range(n_inputs + 1, nv + 1), clauses)


def random_instance(rng: random.Random, max_vars: int = 12, max_clauses: int = 30) -> SynthesisProblem:
    """Small random instance with a roughly even spread of verdicts.

    Clause counts scale with the clause width so that short clauses do not
    drive almost everything unsatisfiable.
    """
    nv = rng.randint(2, max_vars)
    nx = rng.randint(1, nv - 1)
    width = rng.randint(2, 4)
    ratio = {2: 1.5, 3: 3.5, 4: 7.0}[width]
    nc = rng.randint(1, max(1, min(max_clauses, int(nv * ratio))))
    return random_problem(rng, nx, nv - nx, nc, max_width=width)


RUNNING_EXAMPLE = """\
c (x1 | y4 | -y5) & (-x3 | x2 | -y5) & (-x1 | x2 | y6) & (-x3 | x1 | -y4) & (x1 | -x2 | x3 | y5)
p cnf 6 5
a 1 2 3 0
e 4 5 6 0
1 4 -5 0
-3 2 -5 0
-1 2 6 0
-3 1 -4 0
1 -2 3 5 0
"""


def running_example() -> SynthesisProblem:
    """The five-clause example over x1..x3, y4..y6 used throughout the docs."""
    return parse_qdimacs(RUNNING_EXAMPLE)
