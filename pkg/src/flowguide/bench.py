"""Experiment harness: instance generation, the solver x predictor matrix, and
CSV reporting.

Every trial re-checks the solver against the Edmonds-Karp reference value and
aborts the whole run (serializing the failing instance) on any mismatch:
optimality is the one non-negotiable contract.  Augmentation counts are
reported next to the min-cut size k so the perfect-predictor hypothesis can be
inspected, and prediction error is summarized by the ranking distances to the
oracle ordering.
"""

from __future__ import annotations

import json
import random
import time
from dataclasses import dataclass
from pathlib import Path

from .errors import ContractError
from .formats import format_network, format_scores
from .guided import combined_ff
from .imageflow import GraphParams, GrayImage, SeedMask, build_grid_graph
from .mpgnn import MPGNNWeights, load_weights, mpgnn_forward, random_weights
from .network import FlowNetwork, build_network, min_cut
from .permdist import cayley_distance, ranking_from_scores, weighted_cayley_distance
from .predictors import linear_scores, oracle_scores, perturb_scores, train_linear_scorer
from .solve import edmonds_karp, ford_fulkerson

CSV_COLUMNS = (
    "instance_id",
    "solver",
    "predictor",
    "noise",
    "augmentations",
    "repairs",
    "flow_value",
    "cut_size_k",
    "cayley",
    "weighted_cayley",
    "wall_time_us",
)

SOLVERS = ("dfs", "bfs", "adjusted_bfs", "guided", "combined")
PREDICTORS = ("oracle", "noisy", "linear", "mpgnn")


class BenchAbort(RuntimeError):
    """A solver disagreed with the reference optimum; the run is unusable."""


@dataclass
class ExperimentConfig:
    family: str = "random"  # "random" | "grid"
    instances: int = 10
    repetitions: int = 1
    rng_seed: int = 0
    # random-digraph family
    n: int = 8
    m: int = 14
    cap_max: int = 10
    # grid-image family (two-region synthetic)
    width: int = 16
    height: int = 16
    contrast: int = 255
    solvers: tuple[str, ...] = ("dfs", "bfs", "adjusted_bfs", "guided")
    predictors: tuple[str, ...] = ("oracle", "noisy")
    noise_levels: tuple[float, ...] = (0.0, 0.5, 1.0)
    mpgnn_weights_path: str | None = None

    def validate(self) -> None:
        if self.family not in ("random", "grid"):
            raise ContractError(f"unknown instance family {self.family!r}")
        if self.instances < 1:
            raise ContractError("need at least one instance")
        if self.repetitions < 1:
            raise ContractError("repetitions must be >= 1")
        if self.n < 2:
            raise ContractError("random networks need n >= 2")
        if self.m < 0 or self.m > self.n * (self.n - 1):
            raise ContractError(f"m must lie in [0, n(n-1)] = [0, {self.n * (self.n - 1)}]")
        if self.cap_max < 1:
            raise ContractError("cap_max must be >= 1")
        for solver in self.solvers:
            if solver not in SOLVERS:
                raise ContractError(f"unknown solver {solver!r}")
        for predictor in self.predictors:
            if predictor not in PREDICTORS:
                raise ContractError(f"unknown predictor {predictor!r}")
        for level in self.noise_levels:
            if not (0.0 <= level <= 1.0):
                raise ContractError(f"noise level {level} outside [0, 1]")


@dataclass
class TrialRecord:
    instance_id: str
    solver: str
    predictor: str
    noise: float
    augmentations: int
    repairs: int
    flow_value: int
    cut_size_k: int
    cayley: int
    weighted_cayley: float
    wall_time_us: int

    def csv_row(self) -> str:
        return ",".join(
            (
                self.instance_id,
                self.solver,
                self.predictor,
                f"{self.noise:g}",
                str(self.augmentations),
                str(self.repairs),
                str(self.flow_value),
                str(self.cut_size_k),
                str(self.cayley),
                f"{self.weighted_cayley:.9g}",
                str(self.wall_time_us),
            )
        )


def random_network(n: int, m: int, cap_max: int, rng_seed: int) -> FlowNetwork:
    """m distinct non-self-loop edges sampled uniformly; s = 0, t = n - 1.

    Source-sink connectivity is not guaranteed: a max flow of 0 is a legal
    trial, and the solvers must cope.
    """
    if n < 2:
        raise ContractError("random networks need n >= 2")
    if m < 0 or m > n * (n - 1):
        raise ContractError(f"m = {m} outside [0, {n * (n - 1)}]")
    if cap_max < 1:
        raise ContractError("cap_max must be >= 1")
    rng = random.Random(rng_seed)
    pairs = [(u, v) for u in range(n) for v in range(n) if u != v]
    chosen = rng.sample(pairs, m)
    edges = [(u, v, rng.randint(1, cap_max)) for u, v in chosen]
    return build_network(n, edges, source=0, sink=n - 1)


def two_region_image(
    width: int, height: int, contrast: int, seed_row: int | None = None
) -> tuple[GrayImage, SeedMask]:
    """Vertical split with the given intensity contrast, one seed per region."""
    lo = max(0, 128 - contrast // 2)
    hi = min(255, lo + contrast)
    pixels = [lo if x < width // 2 else hi for y in range(height) for x in range(width)]
    row = height // 2 if seed_row is None else seed_row % height
    labels = [0] * (width * height)
    labels[row * width + 0] = 1
    labels[row * width + (width - 1)] = -1
    return GrayImage(width, height, pixels), SeedMask(width, height, labels)


def _instances(config: ExperimentConfig) -> list[tuple[str, FlowNetwork]]:
    out = []
    for rep in range(config.repetitions):
        for i in range(config.instances):
            if config.family == "random":
                seed = config.rng_seed + 7919 * rep + i
                net = random_network(config.n, config.m, config.cap_max, seed)
                iid = f"random-n{config.n}-m{config.m}-s{seed}"
            else:
                image, seeds = two_region_image(
                    config.width, config.height, config.contrast, seed_row=i + rep
                )
                graph = build_grid_graph(image, seeds, GraphParams())
                net = graph.network
                iid = f"grid-{config.width}x{config.height}-c{config.contrast}-i{i}-r{rep}"
            out.append((iid, net))
    return out


def _predictor_scores(
    predictor: str,
    noise: float,
    net: FlowNetwork,
    oracle: list[float],
    linear_model,
    mpgnn_weights: MPGNNWeights | None,
    noise_seed: int,
) -> list[float]:
    if predictor == "oracle":
        return list(oracle)
    if predictor == "noisy":
        return perturb_scores(oracle, noise, noise_seed)
    if predictor == "linear":
        return linear_scores(linear_model, net)
    if predictor == "mpgnn":
        assert mpgnn_weights is not None
        return mpgnn_forward(mpgnn_weights, net)
    raise ContractError(f"unknown predictor {predictor!r}")


def _solve(solver: str, net: FlowNetwork, scores: list[float]):
    if solver == "combined":
        # Warm start from a saturate-everything prediction: exercises repair.
        raw = [float(cap) for _, _, cap in net.edges]
        return combined_ff(net, raw, scores)
    if solver == "guided":
        return ford_fulkerson(net, strategy="guided", scores=scores)
    return ford_fulkerson(net, strategy=solver)


def run_matrix(
    config: ExperimentConfig,
    csv_path: str | Path | None = None,
    repro_dir: str | Path | None = None,
) -> tuple[list[TrialRecord], str]:
    """Execute every (instance, solver, predictor, noise) cell.

    Returns the records plus the CSV text (also written to csv_path when
    given).  Raises BenchAbort, after serializing a reproduction bundle, if
    any solver misses the reference optimum.
    """
    config.validate()
    instances = _instances(config)

    linear_model = None
    if "linear" in config.predictors:
        linear_model = train_linear_scorer([net for _, net in instances])
    mpgnn_weights = None
    if "mpgnn" in config.predictors:
        if config.mpgnn_weights_path:
            mpgnn_weights = load_weights(config.mpgnn_weights_path)
        else:
            mpgnn_weights = random_weights(hidden_dim=4, rounds=2, seed=config.rng_seed)

    records: list[TrialRecord] = []
    for index, (iid, net) in enumerate(instances):
        reference, ref_stats = edmonds_karp(net)
        ref_value = ref_stats.total_flow
        k = min_cut(net, reference).size
        oracle = oracle_scores(net)
        oracle_rank = ranking_from_scores(oracle)
        harmonic = [1.0 / (i + 1) for i in range(net.edge_count)]

        for predictor in config.predictors:
            levels = config.noise_levels if predictor == "noisy" else (0.0,)
            for noise_index, noise in enumerate(levels):
                noise_seed = config.rng_seed * 1_000_003 + index * 101 + noise_index
                scores = _predictor_scores(
                    predictor, noise, net, oracle, linear_model, mpgnn_weights, noise_seed
                )
                if net.edge_count:
                    rank = ranking_from_scores(scores)
                    cayley = cayley_distance(oracle_rank, rank)
                    wc = weighted_cayley_distance(oracle_rank, rank, harmonic).value
                else:
                    cayley, wc = 0, 0.0
                for solver in config.solvers:
                    start = time.perf_counter()
                    flow, stats = _solve(solver, net, scores)
                    elapsed = time.perf_counter() - start
                    if stats.total_flow != ref_value:
                        _write_repro(repro_dir, iid, net, scores, config)
                        raise BenchAbort(
                            f"solver {solver} found {stats.total_flow} on {iid}, "
                            f"reference is {ref_value}"
                        )
                    records.append(
                        TrialRecord(
                            instance_id=iid,
                            solver=solver,
                            predictor=predictor,
                            noise=noise,
                            augmentations=stats.augmentations,
                            repairs=stats.repairs,
                            flow_value=stats.total_flow,
                            cut_size_k=k,
                            cayley=cayley,
                            weighted_cayley=wc,
                            wall_time_us=int(elapsed * 1e6),
                        )
                    )

    records.sort(key=lambda r: (r.instance_id, r.solver, r.predictor, r.noise))
    csv_text = ",".join(CSV_COLUMNS) + "\n" + "".join(r.csv_row() + "\n" for r in records)
    if csv_path is not None:
        Path(csv_path).write_text(csv_text)
    return records, csv_text


def _write_repro(
    repro_dir: str | Path | None,
    iid: str,
    net: FlowNetwork,
    scores: list[float],
    config: ExperimentConfig,
) -> None:
    base = Path(repro_dir) if repro_dir is not None else Path(".")
    base.mkdir(parents=True, exist_ok=True)
    (base / f"repro-{iid}.net").write_text(format_network(net))
    (base / f"repro-{iid}.scores").write_text(format_scores(scores))
    (base / f"repro-{iid}.json").write_text(json.dumps(config.__dict__, indent=1, default=str))
