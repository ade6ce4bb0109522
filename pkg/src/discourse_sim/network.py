"""Watts-Strogatz small-world graph, fixed for the whole run."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .model import ConfigError


@dataclass(frozen=True)
class SocialGraph:
    n: int
    k: int
    p: float
    adjacency: tuple[tuple[int, ...], ...]

    def neighbors(self, i: int) -> list[int]:
        if not 0 <= i < self.n:
            raise IndexError(f"node {i} out of range for graph with {self.n} nodes")
        return list(self.adjacency[i])

    def edges(self) -> list[tuple[int, int]]:
        return [(i, j) for i, nbrs in enumerate(self.adjacency) for j in nbrs if i < j]

    @property
    def n_edges(self) -> int:
        return sum(len(a) for a in self.adjacency) // 2

    def write_edgelist(self, path: str | Path) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            for i, j in self.edges():
                fh.write(f"{i} {j}\n")


def build_ws_graph(n: int, k: int, p: float, rng: np.random.Generator) -> SocialGraph:
    """Ring lattice of even degree ``k``, each lattice edge rewired with probability ``p``.

    Lattice edges are visited in (node, offset) order:
    for edge (u, u+offset) the far endpoint is replaced by a uniform node that is
    neither ``u`` nor already adjacent to it. If no such node exists the edge stays.
    """
    if k % 2 or k < 2:
        raise ConfigError(f"k must be an even integer >= 2, got {k}")
    if k >= n:
        raise ConfigError(f"k must be smaller than n (k={k}, n={n})")
    if not 0.0 <= p <= 1.0:
        raise ConfigError(f"rewiring probability must lie in [0, 1], got {p}")

    adj: list[set[int]] = [set() for _ in range(n)]
    for u in range(n):
        for off in range(1, k // 2 + 1):
            v = (u + off) % n
            adj[u].add(v)
            adj[v].add(u)

    if p > 0.0:
        for u in range(n):
            for off in range(1, k // 2 + 1):
                v = (u + off) % n
                if v not in adj[u] or rng.random() >= p:
                    continue
                candidates = [w for w in range(n) if w != u and w not in adj[u]]
                if not candidates:
                    continue
                w = candidates[int(rng.integers(len(candidates)))]
                adj[u].discard(v)
                adj[v].discard(u)
                adj[u].add(w)
                adj[w].add(u)

    return SocialGraph(n=n, k=k, p=p, adjacency=tuple(tuple(sorted(a)) for a in adj))


def neighbors(graph: SocialGraph, agent_index: int) -> list[int]:
    return graph.neighbors(agent_index)
