"""Snapshot graphs and the eleven structural characteristics computed on them.

All graphs are undirected, unweighted and simple.  Path based metrics are
taken over the largest connected component so that disconnected snapshots
still yield finite values.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Hashable, Iterable, Mapping, NamedTuple

import numpy as np
from scipy import sparse
from scipy.sparse import csgraph

from ifsad.errors import InputFormatError

CHARACTERISTIC_NAMES = (
    "node_size",
    "edge_size",
    "max_degree",
    "avg_degree",
    "kcore",
    "assortativity",
    "clustering",
    "structure_entropy",
    "avg_path_length",
    "diameter_max",
    "diameter_avg",
)


class CharacteristicVector(NamedTuple):
    node_size: float = 0.0
    edge_size: float = 0.0
    max_degree: float = 0.0
    avg_degree: float = 0.0
    kcore: float = 0.0
    assortativity: float = 0.0
    clustering: float = 0.0
    structure_entropy: float = 0.0
    avg_path_length: float = 0.0
    diameter_max: float = 0.0
    diameter_avg: float = 0.0


def _label_order(labels: Iterable[Hashable]) -> list:
    labels = list(labels)
    try:
        return sorted(labels)
    except TypeError:
        return sorted(labels, key=repr)


@dataclass(frozen=True)
class Snapshot:
    """One time tick of a temporal network."""

    tick: int
    adjacency: Mapping[Hashable, frozenset] = field(repr=False)

    @property
    def nodes(self) -> list:
        return _label_order(self.adjacency)

    @property
    def node_count(self) -> int:
        return len(self.adjacency)

    @property
    def edge_count(self) -> int:
        return sum(len(nbrs) for nbrs in self.adjacency.values()) // 2

    def edges(self) -> list[tuple]:
        index = {n: i for i, n in enumerate(self.nodes)}
        out = []
        for u in self.nodes:
            for v in self.adjacency[u]:
                if index[u] < index[v]:
                    out.append((u, v))
        return out

    def index_arrays(self) -> tuple[list, np.ndarray, np.ndarray]:
        """Node list in label order plus edge endpoint index arrays (u < v)."""
        nodes = self.nodes
        index = {n: i for i, n in enumerate(nodes)}
        rows, cols = [], []
        for u in nodes:
            iu = index[u]
            for v in self.adjacency[u]:
                iv = index[v]
                if iu < iv:
                    rows.append(iu)
                    cols.append(iv)
        return nodes, np.asarray(rows, dtype=np.intp), np.asarray(cols, dtype=np.intp)


def build_snapshot(edges: Iterable, tick: int = 0) -> Snapshot:
    """Build an undirected simple graph from node-label pairs.

    Self-loops are dropped and repeated pairs (in either orientation) are
    collapsed into one edge.
    """
    adjacency: dict[Hashable, set] = {}
    for k, pair in enumerate(edges):
        try:
            u, v = pair
        except (TypeError, ValueError):
            raise InputFormatError(f"edge #{k} is not a pair: {pair!r}") from None
        if u == v:
            continue
        adjacency.setdefault(u, set()).add(v)
        adjacency.setdefault(v, set()).add(u)
    return Snapshot(int(tick), {n: frozenset(nbrs) for n, nbrs in adjacency.items()})


def _csr(n: int, rows: np.ndarray, cols: np.ndarray) -> sparse.csr_matrix:
    data = np.ones(2 * len(rows), dtype=np.float64)
    r = np.concatenate([rows, cols])
    c = np.concatenate([cols, rows])
    return sparse.csr_matrix((data, (r, c)), shape=(n, n))


def degeneracy(adj: sparse.csr_matrix) -> int:
    """Largest k for which a non-empty k-core exists (min-degree peeling)."""
    n = adj.shape[0]
    if n == 0:
        return 0
    deg = np.asarray(adj.sum(axis=1)).ravel().astype(np.int64)
    alive = np.ones(n, dtype=bool)
    indptr, indices = adj.indptr, adj.indices
    best = 0
    big = np.iinfo(np.int64).max
    for _ in range(n):
        masked = np.where(alive, deg, big)
        u = int(np.argmin(masked))
        best = max(best, int(deg[u]))
        alive[u] = False
        nbrs = indices[indptr[u]:indptr[u + 1]]
        nbrs = nbrs[alive[nbrs]]
        deg[nbrs] -= 1
    return best


def _assortativity(deg: np.ndarray, rows: np.ndarray, cols: np.ndarray) -> float:
    if len(rows) == 0:
        return 0.0
    x = np.concatenate([deg[rows], deg[cols]]).astype(np.float64)
    y = np.concatenate([deg[cols], deg[rows]]).astype(np.float64)
    xc = x - x.mean()
    yc = y - y.mean()
    var = float(np.dot(xc, xc))
    if var <= 1e-12 * max(1.0, float(np.dot(x, x))):
        return 0.0
    r = float(np.dot(xc, yc)) / var
    return min(1.0, max(-1.0, r))


def _largest_component(adj: sparse.csr_matrix) -> np.ndarray:
    """Node indices of the largest component; ties go to the lowest index,
    which is the smallest label because nodes are indexed in label order."""
    _, labels = csgraph.connected_components(adj, directed=False)
    sizes = np.bincount(labels)
    # component ids are assigned in order of first (lowest) node index
    return np.flatnonzero(labels == int(np.argmax(sizes)))


def _path_profile(adj: sparse.csr_matrix) -> tuple[float, float, float]:
    if adj.shape[0] <= 1:
        return 0.0, 0.0, 0.0
    comp = _largest_component(adj)
    k = len(comp)
    if k <= 1:
        return 0.0, 0.0, 0.0
    sub = adj[comp][:, comp]
    dist = csgraph.shortest_path(sub, method="D", directed=False, unweighted=True)
    ecc = dist.max(axis=1)
    apl = float(dist.sum()) / (k * (k - 1))
    return apl, float(ecc.max()), float(ecc.mean())


def eccentricity_profile(s: Snapshot) -> tuple[float, float, float]:
    """(avg_path_length, diameter_max, diameter_avg) on the largest component."""
    nodes, rows, cols = s.index_arrays()
    return _path_profile(_csr(len(nodes), rows, cols))


def compute_characteristics(s: Snapshot) -> CharacteristicVector:
    nodes, rows, cols = s.index_arrays()
    n = len(nodes)
    e = len(rows)
    if n == 0:
        return CharacteristicVector()
    adj = _csr(n, rows, cols)
    deg = np.asarray(adj.sum(axis=1)).ravel()

    # local clustering: triangles through i over C(deg_i, 2)
    tri = np.asarray((adj @ adj).multiply(adj).sum(axis=1)).ravel() / 2.0
    pairs = deg * (deg - 1) / 2.0
    local = np.divide(tri, pairs, out=np.zeros(n), where=deg >= 2)

    if e > 0:
        p = deg[deg > 0] / (2.0 * e)
        entropy = float(-np.sum(p * np.log(p)))
    else:
        entropy = 0.0

    apl, dmax, davg = _path_profile(adj)
    return CharacteristicVector(
        node_size=float(n),
        edge_size=float(e),
        max_degree=float(deg.max()),
        avg_degree=2.0 * e / n,
        kcore=float(degeneracy(adj)),
        assortativity=_assortativity(deg, rows, cols),
        clustering=float(local.mean()),
        structure_entropy=entropy,
        avg_path_length=apl,
        diameter_max=dmax,
        diameter_avg=davg,
    )
