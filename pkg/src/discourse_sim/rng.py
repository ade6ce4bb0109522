"""Seeded sub-streams derived from one master seed.

Every consumer of randomness gets its own ``numpy.random.Generator`` keyed by
``(master seed, purpose, *indices)``, so draws never depend on the order in
which agents are processed.
"""

from __future__ import annotations

import numpy as np

POPULATION = 1
AGENT = 2
GRAPH = 3
QUIRK = 4
STUB_POST = 5


def stream(seed: int, purpose: int, *indices: int) -> np.random.Generator:
    return np.random.default_rng([int(seed), purpose, *(int(i) for i in indices)])
