"""Training, classification, single-characteristic baselines and scoring."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Mapping, Sequence

import numpy as np

from ifsad.errors import (
    InfeasiblePartitionError,
    InputFormatError,
    MaskedCharacteristicError,
    ModelConsistencyError,
    ParameterError,
    UntrainableModelError,
)
from ifsad.fusion import Ranking, check_weights, ifwg_fuse_array, rank
from ifsad.fuzzifier import Fuzzifier, IfsTriple
from ifsad.graph_metrics import CHARACTERISTIC_NAMES, compute_characteristics
from ifsad.partition import ClusterConfig, fit_partition, intervals_of

NORMAL = "normal"
ABNORMAL = "abnormal"
POLARITIES = ("rare", "low", "high")

# a characteristic with no usable partition contributes this row to B
FULLY_HESITANT = (0.0, 0.0, 1.0)


def variable_names(m: int) -> tuple[str, ...]:
    """Linguistic variables for ``m`` states, ``normal`` first and
    ``abnormal`` last."""
    if m < 2:
        raise ParameterError(f"need at least two linguistic variables, got m={m}")
    if m == 2:
        return (NORMAL, ABNORMAL)
    if m == 3:
        return (NORMAL, "fluctuate", ABNORMAL)
    return (NORMAL,) + tuple(f"fluctuate{k}" for k in range(1, m - 1)) + (ABNORMAL,)


@dataclass(frozen=True, eq=False)
class CharacteristicMatrix:
    """p characteristic series over n ticks; ``values`` has shape (p, n)."""

    values: np.ndarray
    names: tuple[str, ...] = CHARACTERISTIC_NAMES
    ticks: np.ndarray = None

    def __post_init__(self):
        values = np.atleast_2d(np.asarray(self.values, dtype=np.float64))
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "names", tuple(self.names))
        if len(self.names) != values.shape[0]:
            raise InputFormatError(
                f"{len(self.names)} names for {values.shape[0]} characteristic rows"
            )
        ticks = np.arange(values.shape[1]) if self.ticks is None else np.asarray(self.ticks)
        if ticks.shape != (values.shape[1],):
            raise InputFormatError("one tick per column required")
        object.__setattr__(self, "ticks", ticks.astype(np.int64))

    @classmethod
    def from_snapshots(cls, snapshots) -> "CharacteristicMatrix":
        snapshots = list(snapshots)
        rows = [compute_characteristics(s) for s in snapshots]
        values = np.array(rows, dtype=np.float64).T.reshape(len(CHARACTERISTIC_NAMES), -1)
        return cls(values, CHARACTERISTIC_NAMES, np.array([s.tick for s in snapshots]))

    @property
    def p(self) -> int:
        return self.values.shape[0]

    @property
    def n(self) -> int:
        return self.values.shape[1]

    def column(self, k: int) -> np.ndarray:
        return self.values[:, k]

    def select(self, names: Sequence[str]) -> "CharacteristicMatrix":
        idx = [self.names.index(n) for n in names]
        return CharacteristicMatrix(self.values[idx], tuple(names), self.ticks)


@dataclass(frozen=True)
class PipelineConfig:
    m: int = 3
    alpha: float = 0.2
    beta: float = 0.5
    weights: str | tuple = "uniform"
    seed: int = 0
    train_fraction: float = 1.0
    polarity: Mapping[str, str] = field(default_factory=dict)
    cluster: ClusterConfig | None = None

    def __post_init__(self):
        if not 0.0 <= self.alpha < 1.0:
            raise ParameterError(f"alpha must lie in [0, 1), got {self.alpha}")
        if not 0.0 < self.beta <= 1.0:
            raise ParameterError(f"beta must lie in (0, 1], got {self.beta}")
        if not 0.0 < self.train_fraction <= 1.0:
            raise ParameterError("train_fraction must lie in (0, 1]")
        if isinstance(self.weights, str):
            if self.weights != "uniform":
                raise ParameterError(f"unknown weights scheme {self.weights!r}")
        else:
            object.__setattr__(self, "weights", tuple(float(w) for w in self.weights))
            check_weights(self.weights)
        for name, pol in self.polarity.items():
            if pol not in POLARITIES:
                raise ParameterError(f"polarity for {name!r} must be one of {POLARITIES}")

    def cluster_config(self) -> ClusterConfig:
        if self.cluster is not None:
            return self.cluster
        return ClusterConfig(seed=self.seed)


@dataclass(frozen=True, eq=False)
class DetectionModel:
    names: tuple[str, ...]
    fuzzifiers: tuple[Fuzzifier | None, ...]
    weights: np.ndarray
    variables: tuple[str, ...]
    active_mask: np.ndarray
    # variable_maps[j][k] is the interval of characteristic j bound to variables[k]
    variable_maps: tuple[np.ndarray | None, ...]

    @property
    def p(self) -> int:
        return len(self.names)

    @property
    def m(self) -> int:
        return len(self.variables)

    def characteristic_triples(self, j: int, x) -> np.ndarray:
        """Triples of characteristic j in variable order, shape x.shape + (m, 3)."""
        f = self.fuzzifiers[j]
        if f is None:
            shape = np.shape(x) + (self.m, 3)
            return np.broadcast_to(np.asarray(FULLY_HESITANT), shape).copy()
        return f.fuzzify_array(x)[..., self.variable_maps[j], :]

    def ifs_matrix(self, c_prime) -> np.ndarray:
        """B for one tick, shape (p, m, 3); inactive rows are fully hesitant."""
        c_prime = np.asarray(c_prime, dtype=np.float64)
        if c_prime.shape != (self.p,):
            raise ModelConsistencyError(f"expected {self.p} characteristic values")
        return np.stack([self.characteristic_triples(j, c_prime[j]) for j in range(self.p)])

    def fuse(self, c_prime) -> np.ndarray:
        return ifwg_fuse_array(self.ifs_matrix(c_prime), self.weights)


@dataclass(frozen=True)
class Classification:
    tick: int
    fused: tuple[IfsTriple, ...]
    ranking: Ranking
    predicted: str
    binary_abnormal: bool


@dataclass(frozen=True)
class EvalMetrics:
    a: float
    p: float
    r: float
    f1: float
    tp: int
    fp: int
    tn: int
    fn: int

    def as_dict(self) -> dict:
        return {
            "accuracy": self.a,
            "precision": self.p,
            "recall": self.r,
            "f1": self.f1,
            "tp": self.tp,
            "fp": self.fp,
            "tn": self.tn,
            "fn": self.fn,
        }


def _bind_variables(counts: np.ndarray, polarity: str) -> np.ndarray:
    """Map variable order (normal, fluctuate..., abnormal) to interval indices.

    The abnormal interval is picked by polarity: the least populated one
    (``rare``), the lowest or the highest.  The most populated of the rest is
    normal; the remaining intervals become the fluctuate variables in order
    of decreasing population.
    """
    m = len(counts)
    if polarity == "low":
        abnormal = 0
    elif polarity == "high":
        abnormal = m - 1
    else:
        busiest = int(np.argmax(counts))
        # ties go to the interval farthest from the busiest one
        abnormal = min(range(m), key=lambda i: (counts[i], -abs(i - busiest), i))
    rest = sorted((i for i in range(m) if i != abnormal), key=lambda i: (-counts[i], i))
    return np.array(rest + [abnormal], dtype=np.intp)


def _resolve_weights(cfg: PipelineConfig, active: np.ndarray) -> np.ndarray:
    p = len(active)
    if cfg.weights == "uniform":
        w = active.astype(np.float64)
    else:
        w = np.asarray(check_weights(cfg.weights, p)) * active
    total = w.sum()
    if total <= 0:
        raise UntrainableModelError("every characteristic with a usable partition has zero weight")
    return w / total


def train(c_matrix: CharacteristicMatrix, m: int | None = None, cfg: PipelineConfig | None = None) -> DetectionModel:
    """Fit one partition and fuzzifier per characteristic on the training ticks."""
    cfg = cfg or PipelineConfig()
    m = cfg.m if m is None else m
    variables = variable_names(m)
    n_train = max(1, math.ceil(cfg.train_fraction * c_matrix.n))
    if n_train < m:
        raise UntrainableModelError(f"{n_train} training ticks cannot support m={m}")
    unknown = set(cfg.polarity) - set(c_matrix.names)
    if unknown:
        raise ParameterError(f"polarity given for unknown characteristics: {sorted(unknown)}")

    cluster_cfg = cfg.cluster_config()
    fuzzifiers, maps, active = [], [], []
    for j, name in enumerate(c_matrix.names):
        series = c_matrix.values[j, :n_train]
        try:
            part = fit_partition(series, m, cluster_cfg)
        except InfeasiblePartitionError:
            fuzzifiers.append(None)
            maps.append(None)
            active.append(False)
            continue
        counts = np.bincount(intervals_of(part, series), minlength=m)
        fuzzifiers.append(Fuzzifier(part, cfg.alpha, cfg.beta))
        maps.append(_bind_variables(counts, cfg.polarity.get(name, "rare")))
        active.append(True)

    active = np.array(active, dtype=bool)
    if not active.any():
        raise UntrainableModelError("no characteristic admits a partition into m intervals")
    return DetectionModel(
        names=c_matrix.names,
        fuzzifiers=tuple(fuzzifiers),
        weights=_resolve_weights(cfg, active),
        variables=variables,
        active_mask=active,
        variable_maps=tuple(maps),
    )


def _classification(model: DetectionModel, fused: np.ndarray, tick: int) -> Classification:
    triples = tuple(IfsTriple(*map(float, row)) for row in fused)
    ranking = rank(triples)
    predicted = model.variables[ranking.best]
    return Classification(tick, triples, ranking, predicted, predicted == ABNORMAL)


def classify(model: DetectionModel, c_prime, tick: int = 0) -> Classification:
    return _classification(model, model.fuse(c_prime), tick)


def classify_matrix(model: DetectionModel, c_matrix: CharacteristicMatrix) -> list[Classification]:
    if c_matrix.names != model.names:
        raise ModelConsistencyError("characteristic names differ from the trained model")
    x = c_matrix.values
    b = np.stack([model.characteristic_triples(j, x[j]) for j in range(model.p)])
    fused = ifwg_fuse_array(b, model.weights)  # (n, m, 3)
    return [_classification(model, fused[k], int(t)) for k, t in enumerate(c_matrix.ticks)]


def classify_single(model: DetectionModel, j: int | str, x: float) -> str:
    """Individual detector: the best-ranked variable of one characteristic."""
    if isinstance(j, str):
        j = model.names.index(j)
    if not model.active_mask[j]:
        raise MaskedCharacteristicError(f"characteristic {model.names[j]!r} is inactive")
    triples = model.characteristic_triples(j, float(x))
    return model.variables[rank(triples).best]


def baseline_predictions(model: DetectionModel, c_matrix: CharacteristicMatrix, name: str) -> list[str]:
    j = c_matrix.names.index(name)
    return [classify_single(model, model.names.index(name), x) for x in c_matrix.values[j]]


def evaluate(preds, truth) -> EvalMetrics:
    """Confusion counts and a/p/r/F1 with ``abnormal`` as the positive class."""
    preds = np.asarray(preds, dtype=bool).ravel()
    truth = np.asarray(truth, dtype=bool).ravel()
    if preds.shape != truth.shape:
        raise InputFormatError(f"{preds.size} predictions for {truth.size} labels")
    if preds.size == 0:
        raise InputFormatError("cannot evaluate an empty series")
    tp = int(np.sum(preds & truth))
    fp = int(np.sum(preds & ~truth))
    tn = int(np.sum(~preds & ~truth))
    fn = int(np.sum(~preds & truth))
    a = (tp + tn) / preds.size
    p = tp / (tp + fp) if tp + fp else 0.0
    r = tp / (tp + fn) if tp + fn else 0.0
    f1 = 2 * p * r / (p + r) if p + r > 0 else 0.0
    return EvalMetrics(a, p, r, f1, tp, fp, tn, fn)


def detect(c_matrix: CharacteristicMatrix, cfg: PipelineConfig | None = None, m: int | None = None):
    """Train on the configured prefix and classify every tick."""
    cfg = cfg or PipelineConfig()
    model = train(c_matrix, m, cfg)
    return model, classify_matrix(model, c_matrix)


def sweep_cluster_size(c_matrix: CharacteristicMatrix, truth, m_range, cfg: PipelineConfig | None = None) -> list[tuple[int, float]]:
    cfg = cfg or PipelineConfig()
    table = []
    for m in m_range:
        if not 2 <= m <= 10:
            raise ParameterError(f"cluster size {m} outside [2, 10]")
        _, results = detect(c_matrix, replace(cfg, m=m))
        table.append((m, evaluate([c.binary_abnormal for c in results], truth).a))
    return table
