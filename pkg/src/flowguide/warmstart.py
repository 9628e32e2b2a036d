"""Turning predicted edge values into a feasible starting flow.

Predictions are untrusted model output: values are floored to integers and
clipped into [0, capacity] (negatives are tallied, not fatal), then the
conservation violations are repaired by routing each vertex's imbalance along
shortest residual paths.  Excess prefers to drain into a deficit vertex, then
into a terminal; deficits left over are filled from a terminal.  Every routed
path moves at least one unit of imbalance, so repair terminates.
"""

from __future__ import annotations

import math
import time
from collections import deque
from dataclasses import dataclass, field
from typing import Sequence

from .network import Arc, Flow, FlowNetwork, ResidualView, SolveStats, check_feasible


@dataclass
class PseudoFlow:
    """Capacity-respecting per-edge values that may violate conservation."""

    values: list[int]
    negative_clipped: int = 0


@dataclass
class ExcessState:
    excess: dict[int, int]
    deficit: dict[int, int]

    @property
    def a_prime(self) -> set[int]:
        return set(self.excess)

    @property
    def b_prime(self) -> set[int]:
        return set(self.deficit)

    @property
    def total_imbalance(self) -> int:
        return sum(self.excess.values()) + sum(self.deficit.values())


@dataclass
class RepairStats:
    iterations: int = 0
    units_moved: int = 0
    imbalance_trace: list[int] = field(default_factory=list)


def clip_to_capacity(net: FlowNetwork, raw_values: Sequence[float]) -> PseudoFlow:
    """Floor each prediction to an integer, then clip into [0, capacity].

    Flooring can only under-use capacity, so clipping never manufactures an
    infeasible value; negative predictions clip to 0 and bump a warning tally.
    """
    values = []
    negatives = 0
    for eid in range(net.edge_count):
        raw = raw_values[eid] if eid < len(raw_values) else 0.0
        if raw < 0:
            negatives += 1
            values.append(0)
            continue
        values.append(min(math.floor(raw), net.edges[eid][2]))
    return PseudoFlow(values, negatives)


def excess_deficit(net: FlowNetwork, pseudo: PseudoFlow) -> ExcessState:
    """Per-vertex imbalance maps; the source and sink are exempt."""
    balance = [0] * net.vertex_count
    for eid, (u, v, _) in enumerate(net.edges):
        balance[u] -= pseudo.values[eid]
        balance[v] += pseudo.values[eid]
    excess: dict[int, int] = {}
    deficit: dict[int, int] = {}
    for vertex in range(net.vertex_count):
        if vertex in (net.source, net.sink):
            continue
        if balance[vertex] > 0:
            excess[vertex] = balance[vertex]
        elif balance[vertex] < 0:
            deficit[vertex] = -balance[vertex]
    return ExcessState(excess, deficit)


def _shortest_path_to(
    view: ResidualView, frm: int, targets: set[int]
) -> tuple[list[Arc], int] | None:
    """BFS over positive-residual arcs to the nearest target; (arcs, endpoint)."""
    if frm in targets:
        return [], frm
    parent: dict[int, Arc] = {}
    seen = {frm}
    queue = deque([frm])
    while queue:
        u = queue.popleft()
        for arc in view.arcs_from(u):
            head = arc[2]
            if head in seen or view.residual(arc) <= 0:
                continue
            seen.add(head)
            parent[head] = arc
            if head in targets:
                arcs: list[Arc] = []
                v = head
                while v != frm:
                    a = parent[v]
                    arcs.append(a)
                    eid, forward, _ = a
                    tail, hd, _cap = view.net.edges[eid]
                    v = tail if forward else hd
                arcs.reverse()
                return arcs, head
            queue.append(head)
    return None


def repair_feasibility(
    net: FlowNetwork, pseudo: PseudoFlow
) -> tuple[Flow, RepairStats]:
    """Route imbalances away until the pseudo-flow satisfies conservation.

    Largest imbalance first, excesses before deficits.  An excess vertex can
    always reach a deficit vertex or a terminal in the residual graph (flow
    entering it had to come from somewhere), so every iteration strictly
    shrinks the total imbalance and the loop is finite.
    """
    values = list(pseudo.values)
    view = ResidualView(net, values)
    stats = RepairStats()
    state = excess_deficit(net, PseudoFlow(values))
    while state.excess or state.deficit:
        stats.imbalance_trace.append(state.total_imbalance)
        if state.excess:
            # Largest excess first, lowest vertex id on ties.
            w = min(state.excess, key=lambda v: (-state.excess[v], v))
            found = _shortest_path_to(view, w, state.b_prime)
            if found is None:
                found = _shortest_path_to(view, w, {net.source, net.sink})
            if found is None:
                raise AssertionError(f"excess at vertex {w} cannot be drained")
            arcs, endpoint = found
            cap = state.excess[w]
            if endpoint in state.deficit:
                cap = min(cap, state.deficit[endpoint])
            mu = min([cap] + [view.residual(a) for a in arcs])
        else:
            w = min(state.deficit, key=lambda v: (-state.deficit[v], v))
            # Pull from a terminal: route along the residual from t (or s) to w.
            found = None
            for terminal in (net.sink, net.source):
                found = _shortest_path_to(view, terminal, {w})
                if found is not None:
                    break
            if found is None:
                raise AssertionError(f"deficit at vertex {w} cannot be filled")
            arcs, _ = found
            mu = min([state.deficit[w]] + [view.residual(a) for a in arcs])
        view.augment(arcs, mu)
        stats.iterations += 1
        stats.units_moved += mu
        state = excess_deficit(net, PseudoFlow(values))
    violation = check_feasible(net, values)
    if violation is not None:
        raise AssertionError(f"repair produced an infeasible flow: {violation}")
    return Flow(values), stats


def warm_start_solve(
    net: FlowNetwork,
    raw_values: Sequence[float],
    strategy: str = "bfs",
    scores: Sequence[float] | None = None,
) -> tuple[Flow, SolveStats]:
    """Clip -> repair -> solve to optimality; repairs are reported separately."""
    from .solve import ford_fulkerson

    start = time.perf_counter()
    pseudo = clip_to_capacity(net, raw_values)
    repaired, repair_stats = repair_feasibility(net, pseudo)
    flow, stats = ford_fulkerson(net, repaired, strategy, scores)
    stats.repairs = repair_stats.iterations
    stats.wall_time = time.perf_counter() - start
    return flow, stats
