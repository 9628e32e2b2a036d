"""Prediction-guided max-flow toolkit.

Exact Ford-Fulkerson variants whose augmenting-path choices can be steered by
per-edge scores, a warm-start repair stage for predicted flows, a seeded
graph-cut image segmenter, pluggable score predictors, ranking distances for
judging prediction quality, and a benchmarking harness tying them together.
"""

from .bench import ExperimentConfig, TrialRecord, random_network, run_matrix
from .errors import ContractError, FormatError, InfeasibleFlowError, NetworkError
from .guided import (
    AugmentingPath,
    ScoreHeap,
    adjusted_edmonds_karp,
    combined_ff,
    guided_ff,
    shortest_max_bottleneck_path,
)
from .imageflow import (
    GraphParams,
    GrayImage,
    SeedMask,
    SegmentationGraph,
    SegmentationMask,
    boundary_weight,
    build_grid_graph,
    load_pgm,
    load_seeds,
    segment,
    write_mask,
    write_pgm,
)
from .mpgnn import MPGNNWeights, load_weights, mpgnn_forward, random_weights, save_weights
from .network import (
    CutResult,
    Flow,
    FlowNetwork,
    ResidualView,
    SolveStats,
    build_network,
    flow_value,
    is_feasible,
    min_cut,
)
from .permdist import (
    WeightedDistance,
    cayley_distance,
    ranking_from_scores,
    weighted_cayley_distance,
)
from .predictors import (
    FeatureVector,
    LinearModel,
    compute_features,
    cut_membership,
    edge_features,
    linear_scores,
    oracle_scores,
    perturb_scores,
    train_linear_scorer,
)
from .solve import STRATEGIES, dfs_ford_fulkerson, edmonds_karp, ford_fulkerson
from .warmstart import (
    ExcessState,
    PseudoFlow,
    clip_to_capacity,
    excess_deficit,
    repair_feasibility,
    warm_start_solve,
)

__version__ = "0.1.0"
