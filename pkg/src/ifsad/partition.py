"""Intuitionistic fuzzy C-means on a 1-D series and the interval partition
derived from the sorted cluster centres."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ifsad.errors import InfeasiblePartitionError, ParameterError

COLLISION_TOL = 1e-9


@dataclass(frozen=True)
class ClusterConfig:
    """Settings for the clustering step.

    ``method`` is ``"ifcm"`` (memberships raised by their Yager hesitation
    before the centre update) or ``"fcm"`` (plain fuzzy C-means).
    """

    method: str = "ifcm"
    fuzzifier: float = 2.0
    beta: float = 0.85
    tol: float = 1e-6
    max_iters: int = 300
    restarts: int = 1
    seed: int = 0

    def __post_init__(self):
        if self.method not in ("ifcm", "fcm"):
            raise ParameterError(f"unknown clustering method {self.method!r}")
        if not self.fuzzifier > 1.0:
            raise ParameterError("fuzzifier exponent must be > 1")
        if not 0.0 < self.beta <= 1.0:
            raise ParameterError("beta must lie in (0, 1]")
        if self.restarts < 1 or self.max_iters < 1:
            raise ParameterError("restarts and max_iters must be positive")


@dataclass(frozen=True)
class Partition:
    centers: np.ndarray
    boundaries: np.ndarray
    objective_history: tuple = field(default=(), compare=False, repr=False)

    @property
    def m(self) -> int:
        return len(self.centers)

    @property
    def domain_lo(self) -> float:
        return float(self.boundaries[0])

    @property
    def domain_hi(self) -> float:
        return float(self.boundaries[-1])

    def __eq__(self, other):
        if not isinstance(other, Partition):
            return NotImplemented
        return np.array_equal(self.centers, other.centers) and np.array_equal(
            self.boundaries, other.boundaries
        )

    __hash__ = None


def domain_padding(lo: float, hi: float) -> float:
    return max(0.05 * (hi - lo), 1e-9)


def make_partition(centers, lo: float, hi: float, history=()) -> Partition:
    """Assemble boundaries from sorted centres and the raw series range."""
    centers = np.sort(np.asarray(centers, dtype=np.float64))
    eps = domain_padding(lo, hi)
    mids = (centers[:-1] + centers[1:]) / 2.0
    boundaries = np.concatenate([[lo - eps], mids, [hi + eps]])
    return Partition(centers, boundaries, tuple(history))


def interval_of(p: Partition, x: float) -> int:
    """Zero-based interval index i with boundaries[i] <= x < boundaries[i+1].

    Values outside the padded domain are clamped to the first or last
    interval.
    """
    i = int(np.searchsorted(p.boundaries, x, side="right")) - 1
    return min(max(i, 0), p.m - 1)


def intervals_of(p: Partition, xs) -> np.ndarray:
    i = np.searchsorted(p.boundaries, np.asarray(xs, dtype=np.float64), side="right") - 1
    return np.clip(i, 0, p.m - 1)


def _memberships(x: np.ndarray, v: np.ndarray, q: float) -> np.ndarray:
    """FCM membership matrix, shape (m, n).  A point sitting on a centre
    belongs to it fully."""
    d2 = (x[None, :] - v[:, None]) ** 2
    nearest = d2.min(axis=0)
    hit = nearest == 0.0
    # distances relative to the nearest centre keep the powers in [0, 1]
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        inv = (d2 / np.where(hit, 1.0, nearest)) ** (-1.0 / (q - 1.0))
        u = inv / inv.sum(axis=0, keepdims=True)
    if hit.any():
        zero = d2[:, hit] == 0.0
        u[:, hit] = zero / zero.sum(axis=0)
    return u


def _yager_hesitation(u: np.ndarray, beta: float) -> np.ndarray:
    with np.errstate(divide="ignore"):
        gamma = np.exp(np.log(-np.expm1(beta * np.log(u))) / beta)
    return np.clip(1.0 - u - gamma, 0.0, None)


def _objective(x: np.ndarray, v: np.ndarray, w: np.ndarray, q: float) -> float:
    return float(np.sum(w ** q * (x[None, :] - v[:, None]) ** 2))


def _run(x: np.ndarray, v0: np.ndarray, m: int, cfg: ClusterConfig):
    q = cfg.fuzzifier
    v = v0.copy()
    history = []
    for _ in range(cfg.max_iters):
        u = _memberships(x, v, q)
        if cfg.method == "ifcm":
            u = u + _yager_hesitation(u, cfg.beta)
        history.append(_objective(x, v, u, q))
        wq = u ** q
        v_new = (wq @ x) / wq.sum(axis=1)
        shift = float(np.max(np.abs(v_new - v)))
        v = v_new
        if shift < cfg.tol:
            break
    u = _memberships(x, v, q)
    if cfg.method == "ifcm":
        u = u + _yager_hesitation(u, cfg.beta)
    history.append(_objective(x, v, u, q))
    return v, history


def fit_partition(series, m: int, cfg: ClusterConfig | None = None) -> Partition:
    """Cluster a 1-D series into ``m`` groups and cut its padded range at the
    midpoints between neighbouring centres."""
    cfg = cfg or ClusterConfig()
    x = np.asarray(series, dtype=np.float64).ravel()
    if x.size == 0:
        raise ParameterError("cannot partition an empty series")
    if not np.all(np.isfinite(x)):
        raise ParameterError("series contains non-finite values")
    if m < 1:
        raise ParameterError(f"number of intervals must be >= 1, got {m}")
    distinct = np.unique(x)
    if m > distinct.size:
        raise InfeasiblePartitionError(
            f"{m} intervals requested but the series has {distinct.size} distinct values"
        )
    lo, hi = float(x.min()), float(x.max())

    levels = (np.arange(m) + 0.5) / m
    v0 = np.quantile(x, levels)
    if m > 1 and np.min(np.diff(v0)) < COLLISION_TOL:
        # heavy ties in the series; quantiles of the distinct values never tie
        v0 = np.quantile(distinct, levels)
    starts = [v0]
    rng = np.random.default_rng(cfg.seed)
    for _ in range(cfg.restarts - 1):
        starts.append(np.sort(rng.choice(distinct, size=m, replace=False)))

    best = None
    for v0 in starts:
        v, history = _run(x, np.asarray(v0, dtype=np.float64), m, cfg)
        if best is None or history[-1] < best[1][-1]:
            best = (v, history)
    centers = np.sort(best[0])
    if m > 1 and np.min(np.diff(centers)) < COLLISION_TOL * max(1.0, hi - lo):
        raise InfeasiblePartitionError("cluster centres collided")
    return make_partition(centers, lo, hi, best[1])
