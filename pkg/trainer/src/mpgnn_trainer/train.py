"""Cross-entropy training of the edge scorer on min-cut membership labels."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import torch

from .data import Instance, load_dataset
from .model import EdgeScoringNet


@dataclass
class Hyperparameters:
    hidden_dim: int = 8
    rounds: int = 2
    epochs: int = 200
    learning_rate: float = 0.01
    seed: int = 0


@dataclass
class TrainingResult:
    model: EdgeScoringNet
    losses: list[float] = field(default_factory=list)

    @property
    def initial_loss(self) -> float:
        return self.losses[0]

    @property
    def final_loss(self) -> float:
        return self.losses[-1]


def train_on_instances(
    instances: list[Instance], params: Hyperparameters
) -> TrainingResult:
    """Full-batch Adam over every labelled edge of every instance.

    Labels are exact min-cut membership, so the ranking the solver needs is
    induced rather than regressed directly.  Instances without edges carry no
    gradient signal and are skipped.
    """
    torch.manual_seed(params.seed)
    model = EdgeScoringNet(params.hidden_dim, params.rounds)
    usable = [inst for inst in instances if inst.edges]
    if not usable:
        raise ValueError("dataset has no edges to train on")
    targets = {
        inst.name: torch.tensor(inst.labels, dtype=torch.float64) for inst in usable
    }
    optimizer = torch.optim.Adam(model.parameters(), lr=params.learning_rate)
    bce = torch.nn.BCELoss()
    losses = []
    for _ in range(max(1, params.epochs)):
        optimizer.zero_grad()
        total = torch.zeros((), dtype=torch.float64)
        edge_count = 0
        for inst in usable:
            scores = model(inst)
            total = total + bce(scores, targets[inst.name]) * len(inst.edges)
            edge_count += len(inst.edges)
        loss = total / edge_count
        loss.backward()
        losses.append(loss.item())
        if params.learning_rate > 0:
            optimizer.step()
    return TrainingResult(model, losses)


def train(
    dataset_dir: str | Path,
    params: Hyperparameters,
    weights_out: str | Path,
    loss_log_out: str | Path | None = None,
) -> TrainingResult:
    """Load an exported dataset, train, and write the interchange artifacts."""
    instances = load_dataset(dataset_dir)
    result = train_on_instances(instances, params)
    result.model.export_weights(weights_out)
    if loss_log_out is not None:
        lines = ["epoch,loss"]
        lines += [f"{epoch},{loss:.9f}" for epoch, loss in enumerate(result.losses)]
        Path(loss_log_out).write_text("\n".join(lines) + "\n")
    return result
