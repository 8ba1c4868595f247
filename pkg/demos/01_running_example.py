# %% [markdown]
# # A five-clause synthesis problem, start to finish
#
# Inputs x1..x3 are chosen by the environment, outputs y4..y6 by us. We ask
# two things: for which inputs can the outputs be set so every clause holds,
# and how to compute those outputs from the inputs.

# %%
from dpsynth.cnf import RUNNING_EXAMPLE, running_example
from dpsynth.pipeline import solve
from dpsynth.planner import example_tree, tree_width, validate_tree

print(RUNNING_EXAMPLE)
p = running_example()
print("inputs:", p.inputs, "outputs:", p.outputs)

# %% [markdown]
# ## A hand-built graded tree
#
# Leaves carry clauses. Output-grade nodes (ellipses) sit below input-grade
# nodes (boxes), so outputs are quantified away first.

# %%
t = example_tree()
print("violations:", validate_tree(p, t))
print("width:", tree_width(p, t))
print(t.to_dot(p))

# %% [markdown]
# ## Realizability and witnesses

# %%
res = solve(p, tree=t, verify=True)
print("verdict:", res.stats.verdict)
for n in (6, 7, 9):
    post = res.outcome.valuations.post[n]
    print(f"post-valuation of node {n}: support {sorted(post.support())}, constant={post.is_true}")

m = res.manager
x1, x2, x3 = m.var(1), m.var(2), m.var(3)
print("y4 == x1 | ~x3:", res.witnesses[4] == (x1 | ~x3))
print("y5 == (x1 & x2) | ~x3:", res.witnesses[5] == ((x1 & x2) | ~x3))
print("y6 == 1:", res.witnesses[6].is_true)
print("verified:", res.report.ok, "on", res.report.checked_count, "inputs")

# %% [markdown]
# The planner finds the same shape on its own.

# %%
auto = solve(p, planner="treedecomp", verify=True)
print(auto.tree.to_dot(p))
print(auto.stats.to_json())
