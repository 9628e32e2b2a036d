"""Grid-graph construction for seeded image segmentation, plus PGM I/O.

Every pixel becomes a vertex (row-major), two terminals are appended, and
each 4- or 8-neighborhood adjacency becomes a pair of opposite directed edges
whose capacity falls off with local contrast.  Seeded pixels get a terminal
edge whose capacity exceeds everything that could be cut around the pixel, so
seeds can never end up on the wrong side of the min cut.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .errors import ContractError, FormatError
from .network import Flow, FlowNetwork, SolveStats, build_network, min_cut
from .solve import ford_fulkerson

NEUTRAL, SOURCE_SEED, SINK_SEED = 0, 1, -1

# Seeds-file pixel values (PGM): 0 neutral, 255 source seed, 128 sink seed.
_SEED_PIXELS = {0: NEUTRAL, 255: SOURCE_SEED, 128: SINK_SEED}


@dataclass
class GrayImage:
    width: int
    height: int
    pixels: list[int]  # row-major, 0..255

    def __post_init__(self) -> None:
        if self.width <= 0 or self.height <= 0:
            raise ContractError(f"bad image dimensions {self.width}x{self.height}")
        if len(self.pixels) != self.width * self.height:
            raise ContractError(
                f"{len(self.pixels)} pixels for a {self.width}x{self.height} image"
            )
        for i, p in enumerate(self.pixels):
            if not (0 <= p <= 255):
                raise ContractError(f"pixel {i} has intensity {p}, outside [0, 255]")


@dataclass
class SeedMask:
    width: int
    height: int
    labels: list[int]  # NEUTRAL / SOURCE_SEED / SINK_SEED

    def __post_init__(self) -> None:
        if len(self.labels) != self.width * self.height:
            raise ContractError("seed mask size does not match its dimensions")
        for i, label in enumerate(self.labels):
            if label not in (NEUTRAL, SOURCE_SEED, SINK_SEED):
                raise ContractError(f"seed {i} has unknown label {label}")


@dataclass
class GraphParams:
    contrast_scale: int = 100  # C in the boundary weight
    sigma: float = 10.0
    neighborhood: int = 4
    weight_scale: int = 1000  # fixed-point multiplier before rounding

    def __post_init__(self) -> None:
        if self.contrast_scale < 1:
            raise ContractError("contrast_scale must be >= 1")
        if self.sigma <= 0:
            raise ContractError("sigma must be positive")
        if self.neighborhood not in (4, 8):
            raise ContractError(f"neighborhood must be 4 or 8, got {self.neighborhood}")
        if self.weight_scale < 1:
            raise ContractError("weight_scale must be >= 1")


@dataclass
class SegmentationGraph:
    network: FlowNetwork
    width: int
    height: int
    grid_edge_count: int  # EdgeIds below this are pixel-pixel edges

    @property
    def source_vertex(self) -> int:
        return self.width * self.height

    @property
    def sink_vertex(self) -> int:
        return self.width * self.height + 1

    def vertex_of_pixel(self, x: int, y: int) -> int:
        return y * self.width + x

    def pixel_of_vertex(self, vertex: int) -> tuple[int, int]:
        if vertex >= self.width * self.height:
            raise ContractError(f"vertex {vertex} is a terminal, not a pixel")
        return vertex % self.width, vertex // self.width

    def terminal_edge_ids(self) -> range:
        return range(self.grid_edge_count, self.network.edge_count)


@dataclass
class SegmentationMask:
    width: int
    height: int
    foreground: list[bool]


def boundary_weight(ip: int, iq: int, params: GraphParams) -> int:
    """Contrast-sensitive capacity; never 0, which would disconnect the grid."""
    w = params.weight_scale * params.contrast_scale * math.exp(
        -((ip - iq) ** 2) / (2.0 * params.sigma**2)
    )
    return max(1, round(w))


def _neighbor_offsets(neighborhood: int) -> list[tuple[int, int]]:
    # Forward-only offsets: each undirected adjacency is enumerated once.
    if neighborhood == 4:
        return [(1, 0), (0, 1)]
    return [(1, 0), (-1, 1), (0, 1), (1, 1)]


def build_grid_graph(
    image: GrayImage, seeds: SeedMask, params: GraphParams | None = None
) -> SegmentationGraph:
    """Pixel grid plus terminals; both directions of every adjacency share a
    capacity, and seed edges are sized to be uncuttable."""
    params = params or GraphParams()
    if (image.width, image.height) != (seeds.width, seeds.height):
        raise ContractError(
            f"image is {image.width}x{image.height} but seeds are "
            f"{seeds.width}x{seeds.height}"
        )
    if SOURCE_SEED not in seeds.labels:
        raise ContractError("no source seed")
    if SINK_SEED not in seeds.labels:
        raise ContractError("no sink seed")

    w, h = image.width, image.height
    s_vertex, t_vertex = w * h, w * h + 1
    edges: list[tuple[int, int, int]] = []
    incident = [0] * (w * h)  # sum of directed grid capacities touching a pixel
    for y in range(h):
        for x in range(w):
            p = y * w + x
            for dx, dy in _neighbor_offsets(params.neighborhood):
                nx, ny = x + dx, y + dy
                if not (0 <= nx < w and 0 <= ny < h):
                    continue
                q = ny * w + nx
                cap = boundary_weight(image.pixels[p], image.pixels[q], params)
                edges.append((p, q, cap))
                edges.append((q, p, cap))
                incident[p] += 2 * cap
                incident[q] += 2 * cap
    grid_edge_count = len(edges)
    for p, label in enumerate(seeds.labels):
        if label == SOURCE_SEED:
            edges.append((s_vertex, p, 1 + incident[p]))
    for p, label in enumerate(seeds.labels):
        if label == SINK_SEED:
            edges.append((p, t_vertex, 1 + incident[p]))

    net = build_network(w * h + 2, edges, s_vertex, t_vertex)
    return SegmentationGraph(net, w, h, grid_edge_count)


def segment(
    graph: SegmentationGraph,
    strategy: str = "bfs",
    scores: Sequence[float] | None = None,
) -> tuple[SegmentationMask, SolveStats]:
    """Solve the max flow and label each pixel by its side of the min cut."""
    flow, stats = ford_fulkerson(graph.network, strategy=strategy, scores=scores)
    cut = min_cut(graph.network, flow)
    foreground = [v in cut.source_side for v in range(graph.width * graph.height)]
    return SegmentationMask(graph.width, graph.height, foreground), stats


def mask_flow_value(graph: SegmentationGraph, flow: Flow) -> int:
    from .network import flow_value

    return flow_value(graph.network, flow)


# ---------------------------------------------------------------------------
# PGM I/O (P2 ascii / P5 binary, maxval <= 255)

def _tokenize_pgm(data: bytes) -> tuple[list[bytes], int]:
    """First four header tokens and the offset just past the maxval token."""
    tokens: list[bytes] = []
    i = 0
    while len(tokens) < 4:
        if i >= len(data):
            raise FormatError("truncated PGM header")
        c = data[i : i + 1]
        if c == b"#":
            while i < len(data) and data[i : i + 1] not in (b"\n", b"\r"):
                i += 1
        elif c.isspace():
            i += 1
        else:
            start = i
            while i < len(data) and not data[i : i + 1].isspace() and data[i : i + 1] != b"#":
                i += 1
            tokens.append(data[start:i])
    return tokens, i


def parse_pgm(data: bytes) -> GrayImage:
    tokens, offset = _tokenize_pgm(data)
    magic = tokens[0]
    if magic not in (b"P2", b"P5"):
        raise FormatError(f"unsupported magic {magic!r}; expected P2 or P5")
    try:
        width, height, maxval = int(tokens[1]), int(tokens[2]), int(tokens[3])
    except ValueError as exc:
        raise FormatError(f"non-integer PGM header field: {tokens[1:]}") from exc
    if width <= 0 or height <= 0:
        raise FormatError(f"bad PGM dimensions {width}x{height}")
    if not (0 < maxval <= 255):
        raise FormatError(f"unsupported PGM depth: maxval {maxval} (need <= 255)")
    count = width * height
    if magic == b"P5":
        payload = data[offset + 1 : offset + 1 + count]  # exactly one separator byte
        if len(payload) < count:
            raise FormatError(
                f"truncated P5 payload: {len(payload)} of {count} bytes"
            )
        pixels = list(payload)
    else:
        try:
            values = data[offset:].split()
            pixels = [int(tok) for tok in values]
        except ValueError as exc:
            raise FormatError("non-integer P2 pixel") from exc
        if len(pixels) < count:
            raise FormatError(f"truncated P2 payload: {len(pixels)} of {count} values")
        pixels = pixels[:count]
    for i, p in enumerate(pixels):
        if p > maxval:
            raise FormatError(f"pixel {i} is {p}, above maxval {maxval}")
    return GrayImage(width, height, pixels)


def load_pgm(path: str | Path) -> GrayImage:
    return parse_pgm(Path(path).read_bytes())


def write_pgm(image: GrayImage, path: str | Path) -> None:
    header = f"P5\n{image.width} {image.height}\n255\n".encode()
    Path(path).write_bytes(header + bytes(image.pixels))


def mask_to_image(mask: SegmentationMask) -> GrayImage:
    return GrayImage(
        mask.width, mask.height, [255 if fg else 0 for fg in mask.foreground]
    )


def write_mask(mask: SegmentationMask, path: str | Path) -> None:
    write_pgm(mask_to_image(mask), path)


def seeds_from_image(image: GrayImage) -> SeedMask:
    labels = []
    for i, p in enumerate(image.pixels):
        if p not in _SEED_PIXELS:
            raise FormatError(
                f"seed pixel {i} has value {p}; expected 0, 128 or 255"
            )
        labels.append(_SEED_PIXELS[p])
    return SeedMask(image.width, image.height, labels)


def seeds_to_image(seeds: SeedMask) -> GrayImage:
    back = {v: k for k, v in _SEED_PIXELS.items()}
    return GrayImage(seeds.width, seeds.height, [back[l] for l in seeds.labels])


def load_seeds(path: str | Path) -> SeedMask:
    return seeds_from_image(load_pgm(path))
