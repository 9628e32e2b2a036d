"""Capacitated flow networks, residual views, feasibility checks and min cuts.

Vertices are integers ``0..vertex_count-1``.  Edges are identified by their
position in the edge list (the EdgeId); parallel edges are legal and stay
distinct so that per-edge prediction scores attach unambiguously.  All
capacities are non-negative integers, which is what guarantees augmenting-path
solvers terminate.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

from .errors import InfeasibleFlowError, NetworkError

# A residual arc is (edge_id, forward?, head vertex).  Forward arcs carry the
# unused capacity c - f of the original edge, backward arcs carry f.
Arc = tuple[int, bool, int]


@dataclass(frozen=True)
class FlowNetwork:
    vertex_count: int
    edges: tuple[tuple[int, int, int], ...]
    source: int
    sink: int

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @cached_property
    def _adjacency(self) -> tuple[tuple[Arc, ...], ...]:
        """Per-vertex residual arcs, sorted by EdgeId for deterministic scans."""
        adj: list[list[Arc]] = [[] for _ in range(self.vertex_count)]
        for eid, (u, v, _) in enumerate(self.edges):
            adj[u].append((eid, True, v))
            adj[v].append((eid, False, u))
        return tuple(tuple(sorted(arcs)) for arcs in adj)

    def arcs_from(self, vertex: int) -> tuple[Arc, ...]:
        return self._adjacency[vertex]

    def capacity(self, edge_id: int) -> int:
        return self.edges[edge_id][2]


def build_network(
    vertex_count: int,
    edge_list: Iterable[tuple[int, int, int]],
    source: int,
    sink: int,
) -> FlowNetwork:
    """Validate and freeze a flow network; EdgeIds follow input order."""
    if vertex_count <= 0:
        raise NetworkError(f"vertex_count must be positive, got {vertex_count}")
    if not (0 <= source < vertex_count):
        raise NetworkError(f"source {source} out of range [0, {vertex_count})")
    if not (0 <= sink < vertex_count):
        raise NetworkError(f"sink {sink} out of range [0, {vertex_count})")
    if source == sink:
        raise NetworkError(f"source and sink must differ, both are {source}")
    edges = []
    for idx, (u, v, cap) in enumerate(edge_list):
        if not (0 <= u < vertex_count) or not (0 <= v < vertex_count):
            raise NetworkError(f"edge {idx}: endpoint ({u}, {v}) out of range")
        if u == v:
            raise NetworkError(f"edge {idx}: self-loop at vertex {u}")
        if not isinstance(cap, int) or isinstance(cap, bool):
            raise NetworkError(f"edge {idx}: capacity {cap!r} is not an integer")
        if cap < 0:
            raise NetworkError(f"edge {idx}: negative capacity {cap}")
        edges.append((u, v, cap))
    return FlowNetwork(vertex_count, tuple(edges), source, sink)


@dataclass
class Flow:
    """Per-EdgeId flow values.  Feasibility is checked by is_feasible, not here."""

    values: list[int]

    @staticmethod
    def zero(net: FlowNetwork) -> "Flow":
        return Flow([0] * net.edge_count)

    def copy(self) -> "Flow":
        return Flow(list(self.values))


def check_feasible(net: FlowNetwork, values: Sequence[int]) -> str | None:
    """Return None if feasible, else a message naming the first violation."""
    if len(values) != net.edge_count:
        return f"flow has {len(values)} values for {net.edge_count} edges"
    for eid, (u, v, cap) in enumerate(net.edges):
        f = values[eid]
        if f < 0:
            return f"capacity violation at edge {eid}: flow {f} < 0"
        if f > cap:
            return f"capacity violation at edge {eid}: flow {f} > capacity {cap}"
    balance = [0] * net.vertex_count
    for eid, (u, v, _) in enumerate(net.edges):
        balance[u] -= values[eid]
        balance[v] += values[eid]
    for vertex in range(net.vertex_count):
        if vertex in (net.source, net.sink):
            continue
        if balance[vertex] != 0:
            return (
                f"conservation violation at vertex {vertex}: "
                f"inflow - outflow = {balance[vertex]}"
            )
    return None


def is_feasible(net: FlowNetwork, flow: Flow) -> tuple[bool, str | None]:
    violation = check_feasible(net, flow.values)
    return violation is None, violation


def flow_value(net: FlowNetwork, flow: Flow) -> int:
    """Net flow out of the source; raises if the flow is not feasible."""
    violation = check_feasible(net, flow.values)
    if violation is not None:
        raise InfeasibleFlowError(violation)
    total = 0
    for eid, (u, v, _) in enumerate(net.edges):
        if u == net.source:
            total += flow.values[eid]
        if v == net.source:
            total -= flow.values[eid]
    return total


class ResidualView:
    """Residual capacities induced by a flow, mutated in place by augmentations.

    Reverse arcs are derived from the flow values rather than stored; the view
    owns its flow list, so callers hand in a copy when the input must survive.
    """

    def __init__(self, net: FlowNetwork, values: list[int]):
        self.net = net
        self.values = values

    def residual(self, arc: Arc) -> int:
        eid, forward, _ = arc
        if forward:
            return self.net.edges[eid][2] - self.values[eid]
        return self.values[eid]

    def arcs_from(self, vertex: int) -> tuple[Arc, ...]:
        return self.net.arcs_from(vertex)

    def forward_residual(self, edge_id: int) -> int:
        return self.net.edges[edge_id][2] - self.values[edge_id]

    def augment(self, arcs: Sequence[Arc], delta: int, heap=None) -> None:
        """Push delta along the arcs; optionally sync a ScoreHeap's liveness.

        When a heap is given, edges whose forward residual drops to zero are
        killed and edges whose forward residual was restored from zero (a
        backward-arc push) are revived at their original score.
        """
        if delta <= 0:
            raise ValueError(f"augmentation delta must be positive, got {delta}")
        for eid, forward, _ in arcs:
            before = self.forward_residual(eid)
            if forward:
                self.values[eid] += delta
            else:
                self.values[eid] -= delta
            if self.values[eid] < 0 or self.values[eid] > self.net.edges[eid][2]:
                raise AssertionError(f"residual bookkeeping broke at edge {eid}")
            if heap is not None:
                after = self.forward_residual(eid)
                if before > 0 and after == 0:
                    heap.kill(eid)
                elif before == 0 and after > 0:
                    heap.revive(eid)


@dataclass(frozen=True)
class CutResult:
    source_side: frozenset[int]
    cut_edges: frozenset[int]
    capacity: int
    size: int


def reachable_from_source(net: FlowNetwork, values: Sequence[int]) -> set[int]:
    """Vertices reachable from s over positive-residual arcs."""
    view = ResidualView(net, list(values))
    seen = {net.source}
    stack = [net.source]
    while stack:
        u = stack.pop()
        for arc in net.arcs_from(u):
            head = arc[2]
            if head not in seen and view.residual(arc) > 0:
                seen.add(head)
                stack.append(head)
    return seen


def min_cut(net: FlowNetwork, max_flow: Flow) -> CutResult:
    """Extract the source-side-minimal min cut certified by a maximum flow."""
    violation = check_feasible(net, max_flow.values)
    if violation is not None:
        raise InfeasibleFlowError(violation)
    side = reachable_from_source(net, max_flow.values)
    if net.sink in side:
        raise ValueError("flow not maximal: an augmenting path to the sink exists")
    cut = frozenset(
        eid
        for eid, (u, v, _) in enumerate(net.edges)
        if u in side and v not in side
    )
    capacity = sum(net.edges[eid][2] for eid in cut)
    return CutResult(frozenset(side), cut, capacity, len(cut))


@dataclass
class SolveStats:
    """Instrumentation for a single solve; wall_time is in seconds."""

    augmentations: int = 0
    residual_arc_scans: int = 0
    total_flow: int = 0
    wall_time: float = 0.0
    repairs: int = 0
    pivots: list[int] = field(default_factory=list)
