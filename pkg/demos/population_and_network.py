"""Sample a seeded population and wire it into a small-world graph.

Run: python demos/population_and_network.py
"""

from collections import Counter

import numpy as np

from discourse_sim import build_ws_graph, sample_population
from discourse_sim.rng import GRAPH, stream

SEED = 42

agents = sample_population(100, seed=SEED)
print("kind counts:", dict(Counter(a.kind.value for a in agents)))

# Starting attitude spread per kind
for kind in ("far_right", "centrist", "media", "pro_imm"):
    att = np.array([a.attitude for a in agents if a.kind.value == kind])
    print(f"  {kind:<10} mean {att.mean():+.3f}  min {att.min():+.3f}  max {att.max():+.3f}")

graph = build_ws_graph(100, 6, 0.3, stream(SEED, GRAPH))
degrees = np.array([len(graph.neighbors(i)) for i in range(graph.n)])
print(f"graph: {graph.n_edges} edges, degree mean {degrees.mean():.1f}, range {degrees.min()}-{degrees.max()}")

# Same seed, same population
again = sample_population(100, seed=SEED)
print("reproducible:", [a.attitude for a in agents] == [a.attitude for a in again])
