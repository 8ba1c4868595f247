"""Regenerate the QDIMACS files bundled under src/dpsynth/corpus.

Fixtures are small handcrafted instances; the bench set is a mix of
structured families and seeded random instances. Run from the repo root:

    python3 tools/make_corpus.py
"""
import random
from pathlib import Path

from dpsynth.cnf import RUNNING_EXAMPLE, SynthesisProblem, write_qdimacs
from dpsynth.verify import oracle_realizability

ROOT = Path(__file__).resolve().parents[1] / "src" / "dpsynth" / "corpus"

# name -> (comment, inputs, outputs, clauses, expected verdict)
FIXTURES = {
    "unit_partial": ("x1 must hold; y2 is free", [1], [2], [[1], [2]], "partially"),
    "contradiction": ("y1 and not y1", [], [1], [[1], [-1]], "nullary"),
    "input_only_sat": ("no outputs, satisfiable but not valid", [1, 2], [], [[1, 2]], "partially"),
    "input_only_valid": ("no outputs, no clauses", [1, 2], [], [], "fully"),
    "output_only_sat": ("no inputs, satisfiable", [], [1, 2, 3], [[1, 2], [-1, 3], [-2, -3]], "fully"),
    "output_only_unsat": ("no inputs, pigeonhole 3 into 2",
                          [], [1, 2, 3, 4, 5, 6],
                          [[1, 2], [3, 4], [5, 6], [-1, -3], [-1, -5], [-3, -5],
                           [-2, -4], [-2, -6], [-4, -6]], "nullary"),
    "copy_inputs": ("y_i <-> x_i for three bits", [1, 2, 3], [4, 5, 6],
                    [[-1, 4], [1, -4], [-2, 5], [2, -5], [-3, 6], [3, -6]], "fully"),
    "xor_chain": ("y4 = x1 ^ x2, y5 = y4 ^ x3", [1, 2, 3], [4, 5],
                  [[-1, -2, -4], [1, 2, -4], [1, -2, 4], [-1, 2, 4],
                   [-4, -3, -5], [4, 3, -5], [4, -3, 5], [-4, 3, 5]], "fully"),
    "half_adder": ("y3 = x1 ^ x2, y4 = x1 & x2", [1, 2], [3, 4],
                   [[-1, -2, -3], [1, 2, -3], [1, -2, 3], [-1, 2, 3],
                    [-4, 1], [-4, 2], [4, -1, -2]], "fully"),
    "mux": ("y4 = x1 ? x2 : x3", [1, 2, 3], [4],
            [[-1, -2, 4], [-1, 2, -4], [1, -3, 4], [1, 3, -4]], "fully"),
    "equal_inputs": ("y3 <-> x1 and y3 <-> x2, realizable iff x1 = x2", [1, 2], [3],
                     [[-1, 3], [1, -3], [-2, 3], [2, -3]], "partially"),
    "pure_input_clause": ("pure input clause restricts the realizable inputs", [1, 2], [3],
                          [[1, 2], [-1, 3], [-2, -3]], "partially"),
    "empty_clause": ("an empty clause forces nullary", [1], [2], [[1, 2], []], "nullary"),
    "unused_output": ("y3 appears in no clause", [1], [2, 3], [[-1, 2], [1, -2]], "fully"),
    "unused_input": ("x2 appears in no clause", [1, 2], [3], [[1, 3]], "fully"),
    "implication_chain": ("x1 -> y3 -> y4 -> y5 -> x2", [1, 2], [3, 4, 5],
                          [[-1, 3], [-3, 4], [-4, 5], [-5, 2]], "partially"),
    "two_components": ("two independent copy constraints", [1, 2], [3, 4],
                       [[-1, 3], [1, -3], [-2, -4], [2, 4]], "fully"),
    "output_forces_input": ("every y value clashes for x1 = 0", [1], [2],
                            [[1, 2], [1, -2]], "partially"),
    "deep_outputs": ("outputs chained below a single input", [1], [2, 3, 4, 5],
                     [[-1, 2, 3], [-2, 4], [-3, 5], [-4, -5], [1, -2], [1, 4, 5]], "fully"),
    "star_input": ("one input shared by many clauses", [1], [2, 3, 4],
                   [[1, 2], [-1, 3], [1, -4], [-1, 4, 2], [-2, -3, 4]], "fully"),
}

RAW_FIXTURES = {
    "running_example": RUNNING_EXAMPLE,
    "free_variable": "c variable 3 is in no quantifier block and becomes an input\n"
                     "p cnf 3 2\na 1 0\ne 2 0\n1 2 3 0\n-2 -3 0\n",
    "tautology": "c the first clause is tautological and is dropped on parse\n"
                 "p cnf 2 2\na 1 0\ne 2 0\n1 -1 2 0\n-1 2 0\n",
}


def bench_instances():
    out = {}
    n = 6
    xs = list(range(1, n + 1))
    ys = list(range(n + 1, 2 * n + 1))
    clauses = []
    for x, y in zip(xs, ys):
        clauses += [[-x, y], [x, -y]]
    out["copy6"] = ("y_i <-> x_i for six bits", xs, ys, clauses)

    # ripple-carry adder over two 3-bit numbers: sums y, carries c
    a, b = [1, 2, 3], [4, 5, 6]
    s, c = [7, 8, 9], [10, 11, 12]
    cl = []
    prev = None
    for i in range(3):
        if prev is None:
            cl += [[-a[i], -b[i], -s[i]], [a[i], b[i], -s[i]], [a[i], -b[i], s[i]], [-a[i], b[i], s[i]]]
            cl += [[-c[i], a[i]], [-c[i], b[i]], [c[i], -a[i], -b[i]]]
        else:
            for va in (0, 1):
                for vb in (0, 1):
                    for vc in (0, 1):
                        lits = [a[i] if not va else -a[i], b[i] if not vb else -b[i],
                                prev if not vc else -prev]
                        sum_bit = va ^ vb ^ vc
                        carry = (va + vb + vc) >= 2
                        cl.append(lits + [s[i] if sum_bit else -s[i]])
                        cl.append(lits + [c[i] if carry else -c[i]])
        prev = c[i]
    out["adder3"] = ("three-bit ripple-carry adder", a + b, s + c, cl)

    # comparator chain: y_i means x_1..x_i are all equal to x_{i+1}..
    xs = list(range(1, 8))
    ys = list(range(8, 14))
    cl = []
    for i, y in enumerate(ys):
        u, v = xs[i], xs[i + 1]
        cl += [[-y, -u, v], [-y, u, -v], [y, u, v], [y, -u, -v]]
    out["equality_chain"] = ("y_i <-> (x_i == x_i+1)", xs, ys, cl)

    # parity with a bounded output window: partial because of pure input clause
    xs = list(range(1, 6))
    ys = list(range(6, 11))
    cl = [[1, 2, 3]]
    prev = xs[0]
    for x, y in zip(xs[1:], ys):
        cl += [[-prev, -x, -y], [prev, x, -y], [prev, -x, y], [-prev, x, y]]
        prev = y
    cl.append([ys[3]])
    out["parity_constrained"] = ("running parity with a fixed final bit", xs, ys, cl)

    # fixed-width random clauses, kept only when they hit the wanted verdict
    rng = random.Random(20260101)
    shapes = [(5, 9, 30, 3, "partially"), (6, 8, 14, 3, "fully"), (7, 9, 36, 3, "partially"),
              (4, 10, 40, 4, "fully"), (6, 10, 90, 4, "partially"), (6, 8, 64, 3, "nullary")]
    for k, (nx, ny, nc, w, want) in enumerate(shapes):
        while True:
            clauses = []
            for _ in range(nc):
                vs = rng.sample(range(1, nx + ny + 1), w)
                clauses.append([v if rng.random() < 0.5 else -v for v in vs])
            p = SynthesisProblem.build(range(1, nx + 1), range(nx + 1, nx + ny + 1), clauses)
            if oracle_realizability(p).verdict.value == want:
                break
        out[f"random{k}"] = (f"random {w}-CNF, {nx} inputs, {ny} outputs", list(p.inputs),
                             list(p.outputs), [list(c) for c in p.clauses])
    return out


def main():
    fx = ROOT / "fixtures"
    bench = ROOT / "bench"
    fx.mkdir(parents=True, exist_ok=True)
    bench.mkdir(parents=True, exist_ok=True)
    for name, (comment, xs, ys, clauses, verdict) in FIXTURES.items():
        p = SynthesisProblem(tuple(xs), tuple(ys), tuple(tuple(c) for c in clauses))
        (fx / f"{name}.qdimacs").write_text(write_qdimacs(p, comment=f"{comment}\nexpected: {verdict}"))
    for name, text in RAW_FIXTURES.items():
        (fx / f"{name}.qdimacs").write_text(text)
    for name, (comment, xs, ys, clauses) in bench_instances().items():
        p = SynthesisProblem.build(xs, ys, clauses)
        (bench / f"{name}.qdimacs").write_text(write_qdimacs(p, comment=comment))


if __name__ == "__main__":
    main()
