# %% [markdown]
# # When only some inputs can be served
#
# Here the output y3 has to equal both x1 and x2, which works only when the
# two inputs agree. The realizability set is x1 <-> x2, and the witness only
# has to be right there.

# %%
from dpsynth.cnf import SynthesisProblem
from dpsynth.pipeline import solve
from dpsynth.verify import oracle_realizability, verify_witnesses

p = SynthesisProblem.build([1, 2], [3], [[-1, 3], [1, -3], [-2, 3], [2, -3]])
res = solve(p, verify=True)
m = res.manager
r = res.outcome.realizability_set
print("verdict:", res.stats.verdict)
print("R is x1 <-> x2:", r == ~(m.var(1) ^ m.var(2)))
print("witness for y3:", res.witnesses[3].to_expr())

# %% [markdown]
# Brute force agrees.

# %%
o = oracle_realizability(p)
print(o.verdict.value, sorted(o.realizable_inputs))

# %% [markdown]
# A bad witness is caught with the smallest failing input.

# %%
report = verify_witnesses(p, r, {3: m.false})
print(report.to_json())

# %% [markdown]
# The clause-chain baseline lands on the same set.

# %%
base = solve(p, engine="baseline", verify=True)
# separate solves own separate managers, so compare exported expressions
print(base.outcome.realizability_set.to_expr() == r.to_expr(), base.stats.verified)
