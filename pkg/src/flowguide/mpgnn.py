"""Message-passing network inference over flow networks.

Node and edge embeddings are updated jointly for a fixed number of rounds:
messages fuse both endpoint embeddings with the edge state, are sum-aggregated
at the receiving (head) vertex, and the edge embedding is refreshed from the
pre-update endpoint states, so one round is a simultaneous update.  A scoring
head then squashes [h_u || h_v || h_uv || e_uv] through a sigmoid.

The weight container is deliberately plain (dense layers, ReLU between them,
none after the last) so that files emitted by an external trainer reproduce
this forward pass exactly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import ContractError
from .network import Flow, FlowNetwork

# x_v = [out_degree, in_degree, is_source, is_sink]; e_uv = [residual, capacity, flow]
NODE_FEATURE_DIM = 4
EDGE_FEATURE_DIM = 3


@dataclass
class DenseLayer:
    weights: np.ndarray  # (rows, cols): y = W x + b
    bias: np.ndarray

    @property
    def rows(self) -> int:
        return self.weights.shape[0]

    @property
    def cols(self) -> int:
        return self.weights.shape[1]


@dataclass
class MPGNNWeights:
    node_in_dim: int
    edge_in_dim: int
    hidden_dim: int
    rounds: int
    phi_m: list[DenseLayer]
    phi_u: list[DenseLayer]
    phi_e: list[DenseLayer]
    head: list[DenseLayer]

    def validate(self) -> None:
        if self.rounds < 1:
            raise ContractError(f"rounds must be >= 1, got {self.rounds}")
        if self.node_in_dim != NODE_FEATURE_DIM:
            raise ContractError(
                f"node_in_dim {self.node_in_dim} does not match the "
                f"{NODE_FEATURE_DIM}-feature node extractor"
            )
        if self.edge_in_dim != EDGE_FEATURE_DIM:
            raise ContractError(
                f"edge_in_dim {self.edge_in_dim} does not match the "
                f"{EDGE_FEATURE_DIM}-feature edge extractor"
            )
        h, e_in = self.hidden_dim, self.edge_in_dim
        expected = {
            "phi_m": (3 * h + e_in, h),
            "phi_u": (2 * h, h),
            "phi_e": (3 * h + e_in, h),
            "head": (3 * h + e_in, 1),
        }
        for name, (want_in, want_out) in expected.items():
            layers: list[DenseLayer] = getattr(self, name)
            if not layers:
                raise ContractError(f"{name} has no layers")
            if layers[0].cols != want_in:
                raise ContractError(
                    f"{name} layer 0 expects {layers[0].cols} inputs, needs {want_in}"
                )
            for i in range(len(layers) - 1):
                if layers[i].rows != layers[i + 1].cols:
                    raise ContractError(
                        f"shape mismatch between {name} layer {i} "
                        f"({layers[i].rows} outputs) and {name} layer {i + 1} "
                        f"({layers[i + 1].cols} inputs)"
                    )
            if layers[-1].rows != want_out:
                raise ContractError(
                    f"{name} final layer emits {layers[-1].rows}, needs {want_out}"
                )
            for i, layer in enumerate(layers):
                if layer.bias.shape != (layer.rows,):
                    raise ContractError(
                        f"{name} layer {i}: bias length {layer.bias.shape[0]} "
                        f"!= rows {layer.rows}"
                    )


def _apply_mlp(layers: list[DenseLayer], x: np.ndarray) -> np.ndarray:
    """ReLU between layers, linear output.  x is (batch, features)."""
    out = x
    for i, layer in enumerate(layers):
        out = out @ layer.weights.T + layer.bias
        if i < len(layers) - 1:
            out = np.maximum(out, 0.0)
    return out


def _fit_width(rows: np.ndarray, width: int) -> np.ndarray:
    """Zero-pad or truncate feature rows to the embedding width."""
    n, d = rows.shape
    if d == width:
        return rows.copy()
    if d > width:
        return rows[:, :width].copy()
    out = np.zeros((n, width))
    out[:, :d] = rows
    return out


def node_input_features(net: FlowNetwork) -> np.ndarray:
    x = np.zeros((net.vertex_count, NODE_FEATURE_DIM))
    for u, v, _ in net.edges:
        x[u, 0] += 1.0
        x[v, 1] += 1.0
    x[net.source, 2] = 1.0
    x[net.sink, 3] = 1.0
    return x


def edge_input_features(net: FlowNetwork, values: Sequence[int]) -> np.ndarray:
    e = np.zeros((net.edge_count, EDGE_FEATURE_DIM))
    for eid, (_, _, cap) in enumerate(net.edges):
        e[eid, 0] = cap - values[eid]
        e[eid, 1] = cap
        e[eid, 2] = values[eid]
    return e


def mpgnn_forward(
    weights: MPGNNWeights, net: FlowNetwork, flow: Flow | None = None
) -> list[float]:
    """Score every edge with one inference pass; deterministic, all in (0, 1)."""
    weights.validate()
    if net.edge_count == 0:
        return []
    values = flow.values if flow is not None else [0] * net.edge_count
    h = weights.hidden_dim

    x_v = node_input_features(net)
    e_uv = edge_input_features(net, values)
    h_node = _fit_width(x_v, h)
    h_edge = _fit_width(e_uv, h)

    tails = np.fromiter((u for u, _, _ in net.edges), dtype=int, count=net.edge_count)
    heads = np.fromiter((v for _, v, _ in net.edges), dtype=int, count=net.edge_count)

    for _ in range(weights.rounds):
        msg_in = np.hstack([h_node[tails], h_node[heads], h_edge, e_uv])
        messages = _apply_mlp(weights.phi_m, msg_in)
        agg = np.zeros((net.vertex_count, h))
        np.add.at(agg, heads, messages)
        new_node = _apply_mlp(weights.phi_u, np.hstack([h_node, agg]))
        new_edge = _apply_mlp(
            weights.phi_e, np.hstack([h_edge, h_node[tails], h_node[heads], e_uv])
        )
        h_node, h_edge = new_node, new_edge

    head_in = np.hstack([h_node[tails], h_node[heads], h_edge, e_uv])
    logits = _apply_mlp(weights.head, head_in)[:, 0]
    scores = 1.0 / (1.0 + np.exp(-np.clip(logits, -500, 500)))
    return [float(s) for s in scores]


def _layer_to_dict(layer: DenseLayer) -> dict:
    return {
        "rows": layer.rows,
        "cols": layer.cols,
        "weights": [float(w) for w in layer.weights.reshape(-1)],
        "bias": [float(b) for b in layer.bias],
    }


def _layer_from_dict(data: dict, mlp: str, index: int) -> DenseLayer:
    for key in ("rows", "cols", "weights", "bias"):
        if key not in data:
            raise ContractError(f"{mlp} layer {index}: missing key {key!r}")
    rows, cols = int(data["rows"]), int(data["cols"])
    flat = np.asarray(data["weights"], dtype=float)
    if flat.size != rows * cols:
        raise ContractError(
            f"{mlp} layer {index}: {flat.size} weights for shape {rows}x{cols}"
        )
    bias = np.asarray(data["bias"], dtype=float)
    if bias.size != rows:
        raise ContractError(f"{mlp} layer {index}: bias length {bias.size} != {rows}")
    return DenseLayer(flat.reshape(rows, cols), bias)


def save_weights(weights: MPGNNWeights, path: str | Path) -> None:
    weights.validate()
    payload = {
        "node_in_dim": weights.node_in_dim,
        "edge_in_dim": weights.edge_in_dim,
        "hidden_dim": weights.hidden_dim,
        "rounds": weights.rounds,
        "phi_m": [_layer_to_dict(layer) for layer in weights.phi_m],
        "phi_u": [_layer_to_dict(layer) for layer in weights.phi_u],
        "phi_e": [_layer_to_dict(layer) for layer in weights.phi_e],
        "head": [_layer_to_dict(layer) for layer in weights.head],
    }
    Path(path).write_text(json.dumps(payload, indent=1))


def load_weights(path: str | Path) -> MPGNNWeights:
    try:
        payload = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ContractError(f"weights file is not valid JSON: {exc}") from exc
    for key in ("node_in_dim", "edge_in_dim", "hidden_dim", "rounds",
                "phi_m", "phi_u", "phi_e", "head"):
        if key not in payload:
            raise ContractError(f"weights file missing key {key!r}")
    weights = MPGNNWeights(
        node_in_dim=int(payload["node_in_dim"]),
        edge_in_dim=int(payload["edge_in_dim"]),
        hidden_dim=int(payload["hidden_dim"]),
        rounds=int(payload["rounds"]),
        phi_m=[_layer_from_dict(d, "phi_m", i) for i, d in enumerate(payload["phi_m"])],
        phi_u=[_layer_from_dict(d, "phi_u", i) for i, d in enumerate(payload["phi_u"])],
        phi_e=[_layer_from_dict(d, "phi_e", i) for i, d in enumerate(payload["phi_e"])],
        head=[_layer_from_dict(d, "head", i) for i, d in enumerate(payload["head"])],
    )
    weights.validate()
    return weights


def random_weights(hidden_dim: int, rounds: int, seed: int, scale: float = 0.5) -> MPGNNWeights:
    """Small seeded weights; useful for exercising guided search without training."""
    rng = np.random.default_rng(seed)

    def layer(rows: int, cols: int) -> DenseLayer:
        return DenseLayer(
            rng.uniform(-scale, scale, size=(rows, cols)),
            rng.uniform(-scale, scale, size=rows),
        )

    h, e_in = hidden_dim, EDGE_FEATURE_DIM
    return MPGNNWeights(
        node_in_dim=NODE_FEATURE_DIM,
        edge_in_dim=e_in,
        hidden_dim=h,
        rounds=rounds,
        phi_m=[layer(h, 3 * h + e_in), layer(h, h)],
        phi_u=[layer(h, 2 * h), layer(h, h)],
        phi_e=[layer(h, 3 * h + e_in), layer(h, h)],
        head=[layer(h, 3 * h + e_in), layer(1, h)],
    )
