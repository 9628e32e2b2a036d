"""Readers for the exported dataset formats.

The dataset directory contains, per instance, a network file (``n m s t``
header plus ``u v cap`` lines, ``#`` comments allowed) and a ``.labels`` file
(``edge_id 0|1`` lines marking min-cut membership).  These formats are the
interchange boundary with the solver toolkit, so they are parsed here from
scratch rather than importing it.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path


class DatasetError(ValueError):
    pass


@dataclass
class Instance:
    name: str
    vertex_count: int
    edges: list[tuple[int, int, int]]  # (tail, head, capacity)
    source: int
    sink: int
    labels: list[int]


def _data_lines(text: str) -> list[str]:
    out = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            out.append(line)
    return out


def parse_network(text: str, name: str) -> tuple[int, list[tuple[int, int, int]], int, int]:
    lines = _data_lines(text)
    if not lines:
        raise DatasetError(f"{name}: empty network file")
    try:
        n, m, s, t = (int(tok) for tok in lines[0].split())
    except ValueError as exc:
        raise DatasetError(f"{name}: bad header {lines[0]!r}") from exc
    if len(lines) - 1 != m:
        raise DatasetError(f"{name}: header promises {m} edges, found {len(lines) - 1}")
    edges = []
    for line in lines[1:]:
        try:
            u, v, cap = (int(tok) for tok in line.split())
        except ValueError as exc:
            raise DatasetError(f"{name}: bad edge line {line!r}") from exc
        edges.append((u, v, cap))
    return n, edges, s, t


def parse_labels(text: str, edge_count: int, name: str) -> list[int]:
    labels = [0] * edge_count
    for line in _data_lines(text):
        parts = line.split()
        if len(parts) != 2:
            raise DatasetError(f"{name}: bad label line {line!r}")
        eid, value = int(parts[0]), int(float(parts[1]))
        if not (0 <= eid < edge_count):
            raise DatasetError(f"{name}: label names edge {eid} of {edge_count}")
        if value not in (0, 1):
            raise DatasetError(f"{name}: label for edge {eid} is {value}")
        labels[eid] = value
    return labels


def load_dataset(directory: str | Path) -> list[Instance]:
    directory = Path(directory)
    net_files = sorted(directory.glob("*.net"))
    if not net_files:
        raise DatasetError(f"no *.net files in {directory}")
    instances = []
    for net_file in net_files:
        n, edges, s, t = parse_network(net_file.read_text(), net_file.name)
        label_file = net_file.with_suffix(".labels")
        if not label_file.exists():
            raise DatasetError(f"{net_file.name}: missing {label_file.name}")
        labels = parse_labels(label_file.read_text(), len(edges), label_file.name)
        instances.append(Instance(net_file.stem, n, edges, s, t, labels))
    return instances
