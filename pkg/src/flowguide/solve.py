"""Baseline augmenting-path solvers and the strategy dispatcher.

Strategies:

* ``dfs``          depth-first path search, residual arcs visited in ascending
                   EdgeId order so runs are reproducible
* ``bfs``          Edmonds-Karp shortest augmenting paths
* ``adjusted_bfs`` shortest paths with maximum-bottleneck tie-breaking
* ``guided``       score-heap-guided bidirectional assembly (needs edge scores)
"""

from __future__ import annotations

import time
from collections import deque
from typing import Callable, Sequence

from .errors import ContractError, InfeasibleFlowError
from .network import Arc, Flow, FlowNetwork, ResidualView, SolveStats, check_feasible

# Optional per-augmentation trace: (flow values before, arcs, bottleneck).
TraceEntry = tuple[list[int], list[Arc], int]


def _dfs_path(view: ResidualView, stats: SolveStats) -> list[Arc] | None:
    net = view.net
    parent: dict[int, Arc] = {}
    seen = {net.source}
    stack = [net.source]
    while stack:
        u = stack.pop()
        # Reversed push order so the lowest EdgeId is explored first.
        for arc in reversed(view.arcs_from(u)):
            stats.residual_arc_scans += 1
            head = arc[2]
            if head in seen or view.residual(arc) <= 0:
                continue
            seen.add(head)
            parent[head] = arc
            if head == net.sink:
                return _walk_back(net, parent)
            stack.append(head)
    return None


def _bfs_path(view: ResidualView, stats: SolveStats) -> list[Arc] | None:
    net = view.net
    parent: dict[int, Arc] = {}
    seen = {net.source}
    queue = deque([net.source])
    while queue:
        u = queue.popleft()
        for arc in view.arcs_from(u):
            stats.residual_arc_scans += 1
            head = arc[2]
            if head in seen or view.residual(arc) <= 0:
                continue
            seen.add(head)
            parent[head] = arc
            if head == net.sink:
                return _walk_back(net, parent)
            queue.append(head)
    return None


def _walk_back(net: FlowNetwork, parent: dict[int, Arc]) -> list[Arc]:
    arcs: list[Arc] = []
    v = net.sink
    while v != net.source:
        arc = parent[v]
        arcs.append(arc)
        eid, forward, _ = arc
        u, w, _cap = net.edges[eid]
        v = u if forward else w
    arcs.reverse()
    return arcs


def augmenting_loop(
    net: FlowNetwork,
    values: list[int],
    find_path: Callable[[ResidualView, SolveStats], list[Arc] | None],
    stats: SolveStats,
    trace: list[TraceEntry] | None = None,
) -> Flow:
    """Augment along find_path until it yields nothing; mutates values."""
    view = ResidualView(net, values)
    while True:
        arcs = find_path(view, stats)
        if arcs is None:
            break
        delta = min(view.residual(a) for a in arcs)
        if trace is not None:
            trace.append((list(values), list(arcs), delta))
        view.augment(arcs, delta)
        stats.augmentations += 1
    return Flow(values)


def _require_feasible(net: FlowNetwork, initial_flow: Flow | None) -> list[int]:
    if initial_flow is None:
        return [0] * net.edge_count
    violation = check_feasible(net, initial_flow.values)
    if violation is not None:
        raise InfeasibleFlowError(f"initial flow rejected: {violation}")
    return list(initial_flow.values)


def dfs_ford_fulkerson(
    net: FlowNetwork,
    initial_flow: Flow | None = None,
    trace: list[TraceEntry] | None = None,
) -> tuple[Flow, SolveStats]:
    stats = SolveStats()
    start = time.perf_counter()
    flow = augmenting_loop(net, _require_feasible(net, initial_flow), _dfs_path, stats, trace)
    stats.wall_time = time.perf_counter() - start
    stats.total_flow = _net_out_of_source(net, flow.values)
    return flow, stats


def edmonds_karp(
    net: FlowNetwork,
    initial_flow: Flow | None = None,
    trace: list[TraceEntry] | None = None,
) -> tuple[Flow, SolveStats]:
    stats = SolveStats()
    start = time.perf_counter()
    flow = augmenting_loop(net, _require_feasible(net, initial_flow), _bfs_path, stats, trace)
    stats.wall_time = time.perf_counter() - start
    stats.total_flow = _net_out_of_source(net, flow.values)
    return flow, stats


def _net_out_of_source(net: FlowNetwork, values: Sequence[int]) -> int:
    total = 0
    for eid, (u, v, _) in enumerate(net.edges):
        if u == net.source:
            total += values[eid]
        if v == net.source:
            total -= values[eid]
    return total


STRATEGIES = ("dfs", "bfs", "adjusted_bfs", "guided")


def ford_fulkerson(
    net: FlowNetwork,
    initial_flow: Flow | None = None,
    strategy: str = "bfs",
    scores: Sequence[float] | None = None,
    trace: list[TraceEntry] | None = None,
) -> tuple[Flow, SolveStats]:
    """Solve max flow with the chosen augmenting-path strategy.

    All strategies return a flow of the same (maximum) value; they differ only
    in which augmenting paths they pick and therefore in iteration counts.
    """
    from . import guided  # deferred: guided composes on top of this module

    if strategy == "dfs":
        return dfs_ford_fulkerson(net, initial_flow, trace)
    if strategy == "bfs":
        return edmonds_karp(net, initial_flow, trace)
    if strategy == "adjusted_bfs":
        return guided.adjusted_edmonds_karp(net, initial_flow, trace)
    if strategy == "guided":
        if scores is None:
            raise ContractError("strategy 'guided' requires edge scores")
        return guided.guided_ff(net, initial_flow, scores, trace)
    raise ContractError(f"unknown strategy {strategy!r}; choose from {STRATEGIES}")
