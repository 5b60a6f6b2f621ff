"""IFS matrix assembly, weighted geometric fusion and score/precision ranking."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ifsad.errors import ModelConsistencyError, ParameterError
from ifsad.fuzzifier import Fuzzifier, IfsTriple

# S and H are rounded to this many decimals before comparing, so that
# 0.5 - 0.2 and 0.6 - 0.3 count as the same score.
TIE_DECIMALS = 12


def check_weights(w, p: int | None = None) -> np.ndarray:
    w = np.asarray(w, dtype=np.float64).ravel()
    if p is not None and w.size != p:
        raise ParameterError(f"expected {p} weights, got {w.size}")
    if np.any(w < 0) or np.any(w > 1) or not np.isfinite(w).all():
        raise ParameterError("weights must lie in [0, 1]")
    if abs(w.sum() - 1.0) > 1e-9:
        raise ParameterError(f"weights must sum to 1, got {w.sum():.12g}")
    return w


def build_ifs_matrix(c_prime: Sequence[float], fuzzifiers: Sequence[Fuzzifier]) -> np.ndarray:
    """Row j holds characteristic j's triples over the m variables.

    Returns an array of shape (p, m, 3) with (mu, gamma, pi) on the last axis.
    """
    if len(c_prime) != len(fuzzifiers):
        raise ModelConsistencyError(
            f"{len(c_prime)} characteristic values for {len(fuzzifiers)} fuzzifiers"
        )
    ms = {f.m for f in fuzzifiers}
    if len(ms) > 1:
        raise ModelConsistencyError(f"fuzzifiers disagree on m: {sorted(ms)}")
    return np.stack([f.fuzzify_array(float(c)) for f, c in zip(fuzzifiers, c_prime)])


def ifwg_fuse_array(column: np.ndarray, w: np.ndarray) -> np.ndarray:
    """Fuse along axis 0.  ``column`` has shape (p, ..., 2) or (p, ..., 3);
    any hesitation entries are ignored and recomputed."""
    column = np.asarray(column, dtype=np.float64)
    w = np.asarray(w, dtype=np.float64).reshape((-1,) + (1,) * (column.ndim - 2))
    mu_j = column[..., 0]
    keep = 1.0 - column[..., 1]
    # numpy gives 0.0 ** 0.0 == 1.0, so zero-weight rows drop out
    mu = np.prod(mu_j ** w, axis=0)
    kept = np.prod(keep ** w, axis=0)
    fused = np.stack([mu, 1.0 - kept, np.clip(kept - mu, 0.0, None)], axis=-1)

    # identical inputs fuse to themselves; return them bit for bit
    rows = column[w.ravel() > 0]
    same = np.all(rows == rows[:1], axis=(0, -1))
    if rows.shape[0] and np.any(same):
        first = rows[0]
        if first.shape[-1] == 2:
            first = np.concatenate([first, 1.0 - first[..., :1] - first[..., 1:]], axis=-1)
        fused = np.where(same[..., None], first, fused)
    return fused


def ifwg_fuse(column, w) -> IfsTriple:
    """Intuitionistic fuzzy weighted geometric mean of p triples."""
    column = np.asarray(column, dtype=np.float64)
    if column.ndim != 2 or column.shape[1] not in (2, 3):
        raise ParameterError("column must be a sequence of (mu, gamma[, pi]) triples")
    w = check_weights(w, column.shape[0])
    return IfsTriple(*map(float, ifwg_fuse_array(column, w)))


def score(a) -> float:
    return float(a[0]) - float(a[1])


def precision(a) -> float:
    return float(a[0]) + float(a[1])


@dataclass(frozen=True)
class Ranking:
    order: tuple[int, ...]
    scores: tuple[tuple[float, float], ...]

    @property
    def best(self) -> int:
        return self.order[0]


def rank_key(a, index: int) -> tuple:
    return (-round(score(a), TIE_DECIMALS), -round(precision(a), TIE_DECIMALS), index)


def rank(fused) -> Ranking:
    """Order variables best first: higher score, then higher precision, then
    lower index."""
    fused = list(fused)
    if not fused:
        raise ParameterError("cannot rank an empty set of IFS values")
    order = sorted(range(len(fused)), key=lambda i: rank_key(fused[i], i))
    return Ranking(
        order=tuple(order),
        scores=tuple((score(a), precision(a)) for a in fused),
    )
