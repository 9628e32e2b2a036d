"""Edge-score predictors: exact oracle, noise-corrupted oracle, and a linear
scorer trained on structural edge features.

All four score sources (the MPGNN lives in mpgnn.py) emit a total map
EdgeId -> p(e) in [0, 1], represented as a plain list indexed by EdgeId.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import ContractError
from .network import Flow, FlowNetwork, ResidualView, min_cut
from .solve import edmonds_karp

FEATURE_NAMES = (
    "dist_from_source",
    "dist_to_sink",
    "out_degree",
    "in_degree",
    "residual_out_neighbors",
    "residual_in_neighbors",
    "capacity",
)


@dataclass
class FeatureVector:
    """Structural description of one edge (u, v) on a residual graph.

    Hop distances are BFS over positive-residual arcs; unreachable vertices
    get the finite sentinel vertex_count, which exceeds any true distance.
    """

    dist_from_source: int
    dist_to_sink: int
    out_degree: int
    in_degree: int
    residual_out_neighbors: int
    residual_in_neighbors: int
    capacity: int

    def to_list(self) -> list[float]:
        return [float(getattr(self, name)) for name in FEATURE_NAMES]


def _hop_distances(net: FlowNetwork, values: Sequence[int], reverse: bool) -> list[int]:
    """BFS hop counts over the residual; from s forward, or to t if reverse."""
    view = ResidualView(net, list(values))
    sentinel = net.vertex_count
    dist = [sentinel] * net.vertex_count
    start = net.sink if reverse else net.source
    dist[start] = 0
    queue = [start]
    while queue:
        nxt = []
        for u in queue:
            for arc in net.arcs_from(u):
                eid, forward, head = arc
                if reverse:
                    # Arc head->u in the residual means u is one hop closer to t.
                    residual = net.edges[eid][2] - values[eid] if not forward else values[eid]
                else:
                    residual = view.residual(arc)
                if residual <= 0 or dist[head] != sentinel:
                    continue
                dist[head] = dist[u] + 1
                nxt.append(head)
        queue = nxt
    return dist


def edge_features(net: FlowNetwork, flow: Flow, edge_id: int) -> FeatureVector:
    return compute_features(net, flow)[edge_id]


def compute_features(net: FlowNetwork, flow: Flow | None = None) -> list[FeatureVector]:
    """Feature vectors for every edge at once; one BFS pair per network."""
    values = flow.values if flow is not None else [0] * net.edge_count
    d_s = _hop_distances(net, values, reverse=False)
    d_t = _hop_distances(net, values, reverse=True)
    out_deg = [0] * net.vertex_count
    in_deg = [0] * net.vertex_count
    res_out: list[set[int]] = [set() for _ in range(net.vertex_count)]
    res_in: list[set[int]] = [set() for _ in range(net.vertex_count)]
    for eid, (u, v, cap) in enumerate(net.edges):
        out_deg[u] += 1
        in_deg[v] += 1
        if cap - values[eid] > 0:
            res_out[u].add(v)
            res_in[v].add(u)
    return [
        FeatureVector(
            dist_from_source=d_s[u],
            dist_to_sink=d_t[v],
            out_degree=out_deg[u],
            in_degree=in_deg[v],
            residual_out_neighbors=len(res_out[u]),
            residual_in_neighbors=len(res_in[v]),
            capacity=cap,
        )
        for u, v, cap in net.edges
    ]


def cut_membership(net: FlowNetwork) -> list[int]:
    """Binary labels: 1 iff the edge lies in the canonical min cut."""
    flow, _ = edmonds_karp(net)
    cut = min_cut(net, flow)
    return [1 if eid in cut.cut_edges else 0 for eid in range(net.edge_count)]


def oracle_scores(net: FlowNetwork) -> list[float]:
    """Exact-solution scores: the largest-capacity min-cut edge scores 1.0.

    Cut edges score c(e) / max cut capacity; every non-cut edge scores
    strictly below the lowest cut edge, with the ordering still following
    capacity so the ranking stays informative.  When several min cuts exist,
    the source-side-minimal cut from min_cut is the canonical one.
    """
    if net.edge_count == 0:
        return []
    flow, _ = edmonds_karp(net)
    cut = min_cut(net, flow)
    max_cut_cap = max((net.edges[eid][2] for eid in cut.cut_edges), default=0)
    max_cap = max(cap for _, _, cap in net.edges)
    scores = [0.0] * net.edge_count
    if max_cut_cap == 0:
        return scores  # degenerate: the cut is all zero-capacity edges
    floor = min(net.edges[eid][2] for eid in cut.cut_edges) / max_cut_cap
    for eid, (_, _, cap) in enumerate(net.edges):
        if eid in cut.cut_edges:
            scores[eid] = cap / max_cut_cap
        else:
            scores[eid] = 0.5 * floor * (cap / max_cap if max_cap else 0.0)
    return scores


def perturb_scores(
    scores: Sequence[float], noise_level: float, rng_seed: int
) -> list[float]:
    """Mix each score with uniform noise: (1-L)*p + L*U(0,1), clamped to [0,1]."""
    if not (0.0 <= noise_level <= 1.0):
        raise ContractError(f"noise_level must be in [0, 1], got {noise_level}")
    if noise_level == 0.0:
        return list(scores)
    rng = random.Random(rng_seed)
    out = []
    for p in scores:
        mixed = (1.0 - noise_level) * p + noise_level * rng.random()
        out.append(min(1.0, max(0.0, mixed)))
    return out


@dataclass
class LinearModel:
    """Logistic scorer over normalized edge features."""

    weights: np.ndarray
    bias: float
    feature_means: np.ndarray
    feature_scales: np.ndarray
    loss_history: list[float] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "weights": self.weights.tolist(),
            "bias": self.bias,
            "feature_means": self.feature_means.tolist(),
            "feature_scales": self.feature_scales.tolist(),
        }

    @staticmethod
    def from_dict(data: dict) -> "LinearModel":
        try:
            return LinearModel(
                weights=np.asarray(data["weights"], dtype=float),
                bias=float(data["bias"]),
                feature_means=np.asarray(data["feature_means"], dtype=float),
                feature_scales=np.asarray(data["feature_scales"], dtype=float),
            )
        except KeyError as exc:
            raise ContractError(f"linear model file missing key {exc}") from exc


def _sigmoid(z: np.ndarray) -> np.ndarray:
    return 1.0 / (1.0 + np.exp(-np.clip(z, -500, 500)))


def train_linear_scorer(
    training_networks: Sequence[FlowNetwork],
    labels: Sequence[Sequence[int]] | None = None,
    epochs: int = 100,
    learning_rate: float = 0.01,
) -> LinearModel:
    """Full-batch logistic regression on min-cut membership.

    Labels default to the oracle's cut membership.  Weights start at zero, so
    zero epochs returns the zero model, and the mean-gradient update makes the
    result invariant under duplicating the training set.
    """
    if not training_networks:
        raise ContractError("training set is empty")
    if labels is not None and len(labels) != len(training_networks):
        raise ContractError("one label vector per training network required")
    rows = []
    targets = []
    for idx, net in enumerate(training_networks):
        net_labels = labels[idx] if labels is not None else cut_membership(net)
        for eid, feat in enumerate(compute_features(net)):
            rows.append(feat.to_list())
            targets.append(net_labels[eid])
    x = np.asarray(rows, dtype=float)
    y = np.asarray(targets, dtype=float)
    means = x.mean(axis=0)
    scales = x.std(axis=0)
    scales[scales == 0.0] = 1.0
    xn = (x - means) / scales

    w = np.zeros(x.shape[1])
    b = 0.0
    history = []
    for _ in range(epochs):
        p = _sigmoid(xn @ w + b)
        eps = 1e-12
        loss = float(-np.mean(y * np.log(p + eps) + (1 - y) * np.log(1 - p + eps)))
        history.append(loss)
        grad = p - y
        w -= learning_rate * (xn.T @ grad) / len(y)
        b -= learning_rate * float(grad.mean())
    return LinearModel(w, b, means, scales, history)


def linear_scores(model: LinearModel, net: FlowNetwork, flow: Flow | None = None) -> list[float]:
    if len(model.weights) != len(FEATURE_NAMES):
        raise ContractError(
            f"model has {len(model.weights)} weights, extractor emits {len(FEATURE_NAMES)}"
        )
    if net.edge_count == 0:
        return []
    x = np.asarray([f.to_list() for f in compute_features(net, flow)], dtype=float)
    xn = (x - model.feature_means) / model.feature_scales
    return [float(v) for v in _sigmoid(xn @ model.weights + model.bias)]
