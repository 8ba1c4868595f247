# %% [markdown]
# # Both engines on the bundled corpus
#
# Same parsed input, one BDD manager per solve. Times are wall-clock
# milliseconds; peak_nodes counts every node allocated.

# %%
import sys
from importlib import resources

import numpy as np

from dpsynth.cli import ENGINES, run_bench, write_csv

bench = resources.files("dpsynth") / "corpus" / "bench"
rows = run_bench(str(bench), timeout=120)
write_csv(rows, ENGINES, sys.stdout)

# %% [markdown]
# Width against total time per engine.

# %%
for e in ENGINES:
    width = np.array([r[f"{e}_width"] for r in rows], dtype=float)
    ms = np.array([r[f"{e}_total_ms"] for r in rows], dtype=float)
    nodes = np.array([r[f"{e}_peak_nodes"] for r in rows], dtype=float)
    print(f"{e:9s} median width {np.median(width):4.1f}  median ms {np.median(ms):8.2f}  "
          f"max nodes {int(nodes.max())}")
    if width.std() > 0 and ms.std() > 0:
        print("          width/log-time correlation:",
              round(float(np.corrcoef(width, np.log(ms))[0, 1]), 2))
