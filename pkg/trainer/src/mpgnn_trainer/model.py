"""Torch model whose forward pass matches the solver toolkit's inference.

The inference contract it must reproduce exactly: node inputs are
[out_degree, in_degree, is_source, is_sink] and edge inputs
[residual, capacity, prior_flow]; both are zero-padded or truncated to the
hidden width for the round-0 embeddings; each round computes per-edge messages
phi_m([h_u, h_v, h_uv, e_uv]), sum-aggregates them at the head vertex, and
applies phi_u / phi_e simultaneously (both read the pre-round node states);
MLPs put ReLU between layers but not after the last; the scoring head ends in
a sigmoid.  Everything runs in float64 so exported weights reproduce scores
well inside the 1e-5 interchange tolerance.
"""

from __future__ import annotations

import json
from pathlib import Path

import torch
from torch import nn

from .data import Instance

NODE_FEATURE_DIM = 4
EDGE_FEATURE_DIM = 3


def _mlp(in_dim: int, hidden: int, out_dim: int) -> nn.Sequential:
    return nn.Sequential(nn.Linear(in_dim, hidden), nn.ReLU(), nn.Linear(hidden, out_dim))


class EdgeScoringNet(nn.Module):
    def __init__(self, hidden_dim: int, rounds: int):
        super().__init__()
        if rounds < 1:
            raise ValueError("rounds must be >= 1")
        self.hidden_dim = hidden_dim
        self.rounds = rounds
        h, e_in = hidden_dim, EDGE_FEATURE_DIM
        self.phi_m = _mlp(3 * h + e_in, h, h)
        self.phi_u = _mlp(2 * h, h, h)
        self.phi_e = _mlp(3 * h + e_in, h, h)
        self.head = _mlp(3 * h + e_in, h, 1)
        self.double()

    def forward(self, instance: Instance) -> torch.Tensor:
        n = instance.vertex_count
        edges = instance.edges
        x = torch.zeros((n, NODE_FEATURE_DIM), dtype=torch.float64)
        for u, v, _ in edges:
            x[u, 0] += 1.0
            x[v, 1] += 1.0
        x[instance.source, 2] = 1.0
        x[instance.sink, 3] = 1.0
        e_feat = torch.tensor(
            [[float(c), float(c), 0.0] for _, _, c in edges], dtype=torch.float64
        )
        tails = torch.tensor([u for u, _, _ in edges], dtype=torch.long)
        heads = torch.tensor([v for _, v, _ in edges], dtype=torch.long)

        h_node = self._fit(x)
        h_edge = self._fit(e_feat)
        for _ in range(self.rounds):
            msg_in = torch.cat([h_node[tails], h_node[heads], h_edge, e_feat], dim=1)
            messages = self.phi_m(msg_in)
            agg = torch.zeros((n, self.hidden_dim), dtype=torch.float64)
            agg = agg.index_add(0, heads, messages)
            new_node = self.phi_u(torch.cat([h_node, agg], dim=1))
            new_edge = self.phi_e(
                torch.cat([h_edge, h_node[tails], h_node[heads], e_feat], dim=1)
            )
            h_node, h_edge = new_node, new_edge
        head_in = torch.cat([h_node[tails], h_node[heads], h_edge, e_feat], dim=1)
        return torch.sigmoid(self.head(head_in)[:, 0])

    def _fit(self, rows: torch.Tensor) -> torch.Tensor:
        width = self.hidden_dim
        n, d = rows.shape
        if d == width:
            return rows.clone()
        if d > width:
            return rows[:, :width].clone()
        out = torch.zeros((n, width), dtype=torch.float64)
        out[:, :d] = rows
        return out

    # --- weight interchange -------------------------------------------------

    def _mlp_layers(self, mlp: nn.Sequential) -> list[dict]:
        layers = []
        for module in mlp:
            if isinstance(module, nn.Linear):
                weight = module.weight.detach()
                layers.append(
                    {
                        "rows": weight.shape[0],
                        "cols": weight.shape[1],
                        "weights": [float(w) for w in weight.reshape(-1)],
                        "bias": [float(b) for b in module.bias.detach()],
                    }
                )
        return layers

    def export_weights(self, path: str | Path) -> None:
        payload = {
            "node_in_dim": NODE_FEATURE_DIM,
            "edge_in_dim": EDGE_FEATURE_DIM,
            "hidden_dim": self.hidden_dim,
            "rounds": self.rounds,
            "phi_m": self._mlp_layers(self.phi_m),
            "phi_u": self._mlp_layers(self.phi_u),
            "phi_e": self._mlp_layers(self.phi_e),
            "head": self._mlp_layers(self.head),
        }
        Path(path).write_text(json.dumps(payload, indent=1))
