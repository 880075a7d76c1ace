"""Attacker communication topology: weighted directed graph, Laplacian, connectivity."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numpy.typing import NDArray


@dataclass(frozen=True)
class CommGraph:
    """Weighted directed communication graph over the attacker group.

    ``weights[i, j] > 0`` means node i receives information from node j.
    Self-loops are not permitted and all weights are nonnegative.
    """

    weights: NDArray[np.float64] = field()

    def __post_init__(self) -> None:
        w = np.asarray(self.weights, dtype=np.float64)
        object.__setattr__(self, "weights", w)
        if w.ndim != 2 or w.shape[0] != w.shape[1]:
            raise ValueError(f"weight matrix must be square, got shape {w.shape}")
        if w.shape[0] < 2:
            raise ValueError("graph needs at least 2 nodes")
        if np.any(w < 0):
            raise ValueError("edge weights must be nonnegative")
        if np.any(np.diag(w) != 0):
            raise ValueError("self-loops are not permitted")

    @property
    def n(self) -> int:
        return self.weights.shape[0]


def laplacian(g: CommGraph) -> NDArray[np.float64]:
    """Graph Laplacian: off-diagonal -a_ij, diagonal sum of the row weights."""
    lap = -g.weights.copy()
    np.fill_diagonal(lap, g.weights.sum(axis=1))
    return lap


def neighbors(g: CommGraph, i: int) -> set[int]:
    """In-neighbors of node i, i.e. the nodes whose information i receives."""
    if not 0 <= i < g.n:
        raise IndexError(f"node index {i} out of range for {g.n}-node graph")
    return set(np.flatnonzero(g.weights[i] > 0).tolist())


def _reachable_from(g: CommGraph, root: int) -> set[int]:
    # Edge j -> i exists iff weights[i, j] > 0; traverse in flow direction.
    seen = {root}
    frontier = [root]
    while frontier:
        j = frontier.pop()
        for i in np.flatnonzero(g.weights[:, j] > 0):
            if i not in seen:
                seen.add(int(i))
                frontier.append(int(i))
    return seen


def has_spanning_tree(g: CommGraph) -> bool:
    """True iff some root reaches every node along directed edges.

    Plain reachability search from each candidate root; the graphs here are
    small (dozens of nodes at most).
    """
    return any(len(_reachable_from(g, r)) == g.n for r in range(g.n))
