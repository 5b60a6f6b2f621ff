"""Anomaly detection for temporal networks with intuitionistic fuzzy set ensembles."""

from ifsad.errors import (
    ConfigError,
    IfsadError,
    InfeasiblePartitionError,
    InputFormatError,
    MaskedCharacteristicError,
    ModelConsistencyError,
    ParameterError,
    UntrainableModelError,
)
from ifsad.fuzzifier import Fuzzifier, IfsTriple, membership, nonmembership
from ifsad.fusion import Ranking, build_ifs_matrix, ifwg_fuse, precision, rank, score
from ifsad.graph_metrics import (
    CHARACTERISTIC_NAMES,
    CharacteristicVector,
    Snapshot,
    build_snapshot,
    compute_characteristics,
    eccentricity_profile,
)
from ifsad.partition import ClusterConfig, Partition, fit_partition, interval_of
from ifsad.pipeline import (
    CharacteristicMatrix,
    Classification,
    DetectionModel,
    EvalMetrics,
    PipelineConfig,
    classify,
    classify_single,
    evaluate,
    sweep_cluster_size,
    train,
)

__version__ = "0.1.0"
