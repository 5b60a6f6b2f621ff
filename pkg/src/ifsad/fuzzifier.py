"""Turning one characteristic value into intuitionistic fuzzy evaluations.

Each interval of a :class:`~ifsad.partition.Partition` is a linguistic
variable.  Membership is Gaussian around the interval centre with a width
chosen so that

* a value sitting on the centre has membership 1, and
* a value halfway to the nearest neighbouring centre has membership
  ``(1 - alpha) / 2``.

Non-membership is the Yager complement ``(1 - mu**beta) ** (1/beta)``, and
the hesitation is whatever is left over.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from ifsad.errors import ParameterError
from ifsad.partition import Partition


class IfsTriple(NamedTuple):
    mu: float
    gamma: float
    pi: float

    @classmethod
    def from_mu_gamma(cls, mu: float, gamma: float) -> "IfsTriple":
        return cls(float(mu), float(gamma), 1.0 - float(mu) - float(gamma))


def _check_beta(beta: float) -> None:
    if not 0.0 < beta <= 1.0:
        raise ParameterError(f"beta must lie in (0, 1], got {beta}")


def _check_alpha(alpha: float) -> None:
    if not 0.0 <= alpha < 1.0:
        raise ParameterError(f"alpha must lie in [0, 1), got {alpha}")


def yager_complement(mu, beta: float):
    # 1 - mu**beta via expm1 keeps precision when beta is small
    mu = np.asarray(mu, dtype=np.float64)
    with np.errstate(divide="ignore"):
        return np.exp(np.log(-np.expm1(beta * np.log(mu))) / beta)


def nonmembership(mu, beta: float):
    """Yager non-membership for membership ``mu`` (scalar or array)."""
    _check_beta(beta)
    g = yager_complement(mu, beta)
    return float(g) if g.ndim == 0 else g


def gaussian_widths(partition: Partition, alpha: float) -> np.ndarray:
    """Variance per centre; ``(1 - alpha)/2`` membership at half the gap to the
    nearest neighbouring centre."""
    _check_alpha(alpha)
    v = partition.centers
    if len(v) == 1:
        half = np.array([(partition.domain_hi - partition.domain_lo) / 2.0])
    else:
        gaps = np.diff(v)
        nearest = np.minimum(np.r_[np.inf, gaps], np.r_[gaps, np.inf])
        half = nearest / 2.0
    return -(half ** 2) / (2.0 * np.log((1.0 - alpha) / 2.0))


@dataclass(frozen=True, eq=False)
class Fuzzifier:
    partition: Partition
    alpha: float = 0.2
    beta: float = 0.5
    sigma2: np.ndarray = None

    def __post_init__(self):
        _check_alpha(self.alpha)
        _check_beta(self.beta)
        if self.sigma2 is None:
            object.__setattr__(self, "sigma2", gaussian_widths(self.partition, self.alpha))
        if np.any(~(np.asarray(self.sigma2) > 0)):
            raise ParameterError("every Gaussian variance must be positive")

    @property
    def m(self) -> int:
        return self.partition.m

    @property
    def centers(self) -> np.ndarray:
        return self.partition.centers

    def memberships(self, x) -> np.ndarray:
        """Membership of ``x`` in every variable; shape ``x.shape + (m,)``."""
        x = np.asarray(x, dtype=np.float64)[..., None]
        return np.exp(-((x - self.centers) ** 2) / (2.0 * self.sigma2))

    def fuzzify_array(self, x) -> np.ndarray:
        """Triples as an array of shape ``x.shape + (m, 3)``."""
        mu = self.memberships(x)
        gamma = yager_complement(mu, self.beta)
        # mu <= 1 - gamma holds exactly for beta <= 1; enforce it after rounding
        # (a tiny mu whose gamma rounded to 1 is flushed to 0)
        keep = 1.0 - gamma
        mu = np.minimum(mu, keep)
        return np.stack([mu, gamma, keep - mu], axis=-1)

    def fuzzify(self, x: float) -> list[IfsTriple]:
        return [IfsTriple(*map(float, row)) for row in self.fuzzify_array(float(x))]


def membership(f: Fuzzifier, x: float, i: int) -> float:
    """Gaussian membership of ``x`` in variable ``i`` (zero-based)."""
    if not 0 <= i < f.m:
        raise IndexError(f"variable index {i} out of range for m={f.m}")
    return float(np.exp(-((x - f.centers[i]) ** 2) / (2.0 * f.sigma2[i])))


def fuzzify(f: Fuzzifier, x: float) -> list[IfsTriple]:
    return f.fuzzify(x)
