# %% [markdown]
# # The BDD kernel
#
# Every symbolic step runs on a small reduced ordered BDD package with a
# fixed variable order, a unique table and a computed cache.

# %%
from dpsynth.bdd import BddManager

m = BddManager([1, 2, 3, 4])
x1, x2, x3, y4 = (m.var(v) for v in (1, 2, 3, 4))

# %% [markdown]
# Canonicity: equal functions share a node id, however they were built.

# %%
a = (x1 & x2) | (x1 & x3)
b = x1 & (x2 | x3)
print(a.node, b.node, a == b)

xor3 = x1 ^ x2 ^ x3
print("nodes in x1^x2^x3, terminals included:", xor3.node_count())

# %% [markdown]
# Quantification, cofactors and substitution.

# %%
f = m.clause([1, 4]) & m.clause([-1, -4])     # y4 <-> ~x1
print("exists y4:", f.exists([4]).is_true)
g = f.restrict(4, True)
print("cofactor y4=1 is ~x1:", g == ~x1)
print("substituting it back gives true:", f.compose(4, g).is_true)

# %% [markdown]
# Exported expressions are plain JSON.

# %%
import json

print(json.dumps(((x1 & x2) | ~x3).to_expr(), indent=1))
print("allocated nodes so far:", m.peak_nodes)
