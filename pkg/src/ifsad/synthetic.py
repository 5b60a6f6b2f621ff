"""Random temporal networks with injected structural anomalies.

Normal ticks are Erdos-Renyi graphs.  An anomalous tick either loses a
fraction of its nodes (``delete``) or has its edges rewired onto a ring
lattice, which keeps the size roughly unchanged but stretches the diameter
(``rewire``).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ifsad.graph_metrics import Snapshot, build_snapshot


@dataclass(frozen=True)
class SyntheticSequence:
    snapshots: list[Snapshot]
    labels: np.ndarray
    kinds: tuple[str, ...]


def erdos_renyi_edges(rng: np.random.Generator, n: int, p: float) -> np.ndarray:
    iu, ju = np.triu_indices(n, k=1)
    keep = rng.random(iu.size) < p
    return np.column_stack([iu[keep], ju[keep]])


def delete_nodes(rng: np.random.Generator, edges: np.ndarray, n: int, fraction: float) -> np.ndarray:
    gone = np.zeros(n, dtype=bool)
    gone[rng.choice(n, size=int(round(fraction * n)), replace=False)] = True
    return edges[~(gone[edges[:, 0]] | gone[edges[:, 1]])]


def rewire_to_ring(rng: np.random.Generator, edges: np.ndarray, n: int, reach: int) -> np.ndarray:
    """Send every edge from its first endpoint to a node at most ``reach``
    steps further round a ring."""
    src = edges[:, 0]
    dst = (src + rng.integers(1, reach + 1, size=len(src))) % n
    return np.column_stack([src, dst])


def generate_sequence(
    seed: int,
    n_ticks: int = 100,
    n_nodes: int = 200,
    n_anomalies: int = 10,
    avg_degree: float = 8.0,
    degree_jitter: float = 0.1,
    delete_fraction: float = 0.6,
    ring_reach: int = 4,
) -> SyntheticSequence:
    rng = np.random.default_rng(seed)
    anomalous = np.sort(rng.choice(n_ticks, size=n_anomalies, replace=False))
    kinds_at = {int(t): ("delete" if k % 2 == 0 else "rewire") for k, t in enumerate(anomalous)}

    snapshots, kinds = [], []
    for t in range(n_ticks):
        k = avg_degree * (1.0 + degree_jitter * rng.uniform(-1.0, 1.0))
        edges = erdos_renyi_edges(rng, n_nodes, k / (n_nodes - 1))
        kind = kinds_at.get(t, "normal")
        if kind == "delete":
            edges = delete_nodes(rng, edges, n_nodes, delete_fraction)
        elif kind == "rewire":
            edges = rewire_to_ring(rng, edges, n_nodes, ring_reach)
        snapshots.append(build_snapshot(map(tuple, edges.tolist()), tick=t))
        kinds.append(kind)

    labels = np.array([k != "normal" for k in kinds], dtype=bool)
    return SyntheticSequence(snapshots, labels, tuple(kinds))
