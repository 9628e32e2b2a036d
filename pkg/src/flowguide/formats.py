"""Text formats shared by the CLI and the bench/dataset tooling.

Network file: line 1 is ``n m s t``, then m lines ``u v cap``; everything
after a ``#`` is a comment.  Writers emit edges in EdgeId order, which makes
the format bit-exact for round-trips.

Prediction-flow file: lines ``edge_id value`` (non-negative decimals); edges
not mentioned default to 0.  Scores file: lines ``edge_id score`` with scores
in [0, 1]; must mention every edge exactly once.  Labels file: ``edge_id 0|1``.
"""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

from .errors import FormatError
from .network import FlowNetwork, build_network


def _data_lines(text: str) -> list[str]:
    lines = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append(line)
    return lines


def parse_network(text: str) -> FlowNetwork:
    lines = _data_lines(text)
    if not lines:
        raise FormatError("empty network file")
    head = lines[0].split()
    if len(head) != 4:
        raise FormatError(f"header must be 'n m s t', got {lines[0]!r}")
    try:
        n, m, s, t = (int(tok) for tok in head)
    except ValueError as exc:
        raise FormatError(f"non-integer header field in {lines[0]!r}") from exc
    if len(lines) - 1 != m:
        raise FormatError(f"header promises {m} edges, file has {len(lines) - 1}")
    edges = []
    for idx, line in enumerate(lines[1:]):
        parts = line.split()
        if len(parts) != 3:
            raise FormatError(f"edge line {idx}: expected 'u v cap', got {line!r}")
        try:
            u, v, cap = (int(tok) for tok in parts)
        except ValueError as exc:
            raise FormatError(f"edge line {idx}: non-integer field in {line!r}") from exc
        edges.append((u, v, cap))
    return build_network(n, edges, s, t)


def load_network(path: str | Path) -> FlowNetwork:
    return parse_network(Path(path).read_text())


def format_network(net: FlowNetwork) -> str:
    lines = [f"{net.vertex_count} {net.edge_count} {net.source} {net.sink}"]
    lines.extend(f"{u} {v} {cap}" for u, v, cap in net.edges)
    return "\n".join(lines) + "\n"


def save_network(net: FlowNetwork, path: str | Path) -> None:
    Path(path).write_text(format_network(net))


def _parse_pairs(text: str, what: str) -> list[tuple[int, float]]:
    pairs = []
    for idx, line in enumerate(_data_lines(text)):
        parts = line.split()
        if len(parts) != 2:
            raise FormatError(f"{what} line {idx}: expected 'edge_id value', got {line!r}")
        try:
            eid = int(parts[0])
            value = float(parts[1])
        except ValueError as exc:
            raise FormatError(f"{what} line {idx}: bad field in {line!r}") from exc
        pairs.append((eid, value))
    return pairs


def parse_prediction_flow(text: str, edge_count: int) -> list[float]:
    """Raw warm-start values; unlisted edges default to 0."""
    values = [0.0] * edge_count
    for eid, value in _parse_pairs(text, "prediction"):
        if not (0 <= eid < edge_count):
            raise FormatError(f"prediction names edge {eid}, network has {edge_count}")
        if value < 0:
            raise FormatError(f"prediction for edge {eid} is negative ({value})")
        values[eid] = value
    return values


def load_prediction_flow(path: str | Path, edge_count: int) -> list[float]:
    return parse_prediction_flow(Path(path).read_text(), edge_count)


def parse_scores(text: str, edge_count: int) -> list[float]:
    """Edge scores; must cover every EdgeId exactly once, each in [0, 1]."""
    scores: list[float | None] = [None] * edge_count
    for eid, value in _parse_pairs(text, "scores"):
        if not (0 <= eid < edge_count):
            raise FormatError(f"scores name edge {eid}, network has {edge_count}")
        if scores[eid] is not None:
            raise FormatError(f"duplicate score for edge {eid}")
        if not (0.0 <= value <= 1.0):
            raise FormatError(f"score for edge {eid} is {value}, outside [0, 1]")
        scores[eid] = value
    missing = [eid for eid, s in enumerate(scores) if s is None]
    if missing:
        raise FormatError(f"scores missing for edges {missing[:8]}")
    return [float(s) for s in scores]  # type: ignore[arg-type]


def load_scores(path: str | Path, edge_count: int) -> list[float]:
    return parse_scores(Path(path).read_text(), edge_count)


def format_scores(scores: Sequence[float]) -> str:
    return "".join(f"{eid} {score:.9f}\n" for eid, score in enumerate(scores))


def save_scores(scores: Sequence[float], path: str | Path) -> None:
    Path(path).write_text(format_scores(scores))


def format_flow_dump(values: Sequence[int]) -> str:
    return "".join(f"{eid} {val}\n" for eid, val in enumerate(values))


def parse_labels(text: str, edge_count: int) -> list[int]:
    labels = [0] * edge_count
    for eid, value in _parse_pairs(text, "labels"):
        if not (0 <= eid < edge_count):
            raise FormatError(f"labels name edge {eid}, network has {edge_count}")
        if value not in (0.0, 1.0):
            raise FormatError(f"label for edge {eid} must be 0 or 1, got {value}")
        labels[eid] = int(value)
    return labels


def format_labels(labels: Sequence[int]) -> str:
    return "".join(f"{eid} {label}\n" for eid, label in enumerate(labels))


def parse_weight_list(text: str) -> list[float]:
    """Position weights for the weighted permutation distance, one per line."""
    weights = []
    for idx, line in enumerate(_data_lines(text)):
        try:
            weights.append(float(line))
        except ValueError as exc:
            raise FormatError(f"weight line {idx}: not a number: {line!r}") from exc
    return weights
