"""Score-guided augmenting-path search.

Two path disciplines live here:

* adjusted Edmonds-Karp: among the shortest residual paths, pick one with the
  largest bottleneck (BFS layering + a widest-path pass over the layered DAG);
* guided search: pop the highest-scoring edge e* = (v, w) from a lazy max-heap
  and assemble a vertex-simple path P1 . e* . P2 with the adjusted search,
  falling back to one plain adjusted augmentation whenever no pivot is usable,
  which is what keeps the final flow maximal for arbitrary scores.

Scores are computed once on the input graph and never refreshed; saturated
edges die lazily in the heap and are revived at their original score when a
backward-arc push restores their residual capacity.
"""

from __future__ import annotations

import heapq
import math
import time
from collections import deque
from dataclasses import dataclass
from typing import Sequence

from .errors import ContractError
from .network import Arc, Flow, FlowNetwork, ResidualView, SolveStats
from .solve import TraceEntry, _net_out_of_source, _require_feasible


@dataclass
class AugmentingPath:
    """A residual path; empty arcs with infinite bottleneck mean 'already there'."""

    arcs: list[Arc]
    bottleneck: float
    pivot: int | None = None
    segments: tuple[list[Arc], list[Arc]] | None = None

    def vertices(self, net: FlowNetwork, start: int) -> list[int]:
        out = [start]
        for eid, forward, _ in self.arcs:
            u, v, _cap = net.edges[eid]
            out.append(v if forward else u)
        return out


class ScoreHeap:
    """Lazy-deletion max-heap over (score, EdgeId), ties to the lowest EdgeId.

    Entries are never surgically removed: kill() flips a liveness flag and the
    entry is dropped when popped; revive() re-inserts the edge at its original
    score, so it reappears "in its relative position".
    """

    def __init__(self, scores: Sequence[float]):
        self.scores = list(scores)
        self._live = [True] * len(self.scores)
        self._enqueued = [True] * len(self.scores)
        self._heap = [(-s, eid) for eid, s in enumerate(self.scores)]
        heapq.heapify(self._heap)

    def pop(self) -> int | None:
        """Remove and return the live edge with the highest score, if any."""
        while self._heap:
            _, eid = heapq.heappop(self._heap)
            self._enqueued[eid] = False
            if self._live[eid]:
                return eid
        return None

    def push(self, edge_id: int) -> None:
        self._live[edge_id] = True
        if not self._enqueued[edge_id]:
            self._enqueued[edge_id] = True
            heapq.heappush(self._heap, (-self.scores[edge_id], edge_id))

    def kill(self, edge_id: int) -> None:
        self._live[edge_id] = False

    def revive(self, edge_id: int) -> None:
        self.push(edge_id)


def shortest_max_bottleneck_path(
    view: ResidualView,
    frm: int,
    to: int,
    banned_vertices: frozenset[int] | set[int] = frozenset(),
    stats: SolveStats | None = None,
) -> AugmentingPath | None:
    """Among the fewest-arc residual paths frm->to, return one of maximum
    bottleneck, or None when to is unreachable.

    banned_vertices are treated as absent from the graph and must not contain
    frm or to.  frm == to yields the empty path.
    """
    if frm == to:
        return AugmentingPath([], math.inf)
    scans = stats if stats is not None else SolveStats()

    dist = {frm: 0}
    order = [frm]
    queue = deque([frm])
    while queue:
        u = queue.popleft()
        if u == to:
            continue  # arcs past the sink can't lie on a shortest path to it
        for arc in view.arcs_from(u):
            scans.residual_arc_scans += 1
            head = arc[2]
            if head in dist or head in banned_vertices:
                continue
            if view.residual(arc) <= 0:
                continue
            dist[head] = dist[u] + 1
            order.append(head)
            queue.append(head)
    if to not in dist:
        return None

    # Widest-path pass over the BFS layering: order is sorted by (layer,
    # discovery), so every width[u] is final before u's arcs are relaxed.
    width: dict[int, float] = {frm: math.inf}
    parent: dict[int, Arc] = {}
    limit = dist[to]
    for u in order:
        if dist[u] >= limit or u not in width:
            continue
        for arc in view.arcs_from(u):
            scans.residual_arc_scans += 1
            head = arc[2]
            if dist.get(head) != dist[u] + 1:
                continue
            r = view.residual(arc)
            if r <= 0:
                continue
            cand = min(width[u], r)
            if cand > width.get(head, 0):
                width[head] = cand
                parent[head] = arc

    arcs: list[Arc] = []
    v = to
    while v != frm:
        arc = parent[v]
        arcs.append(arc)
        eid, forward, _ = arc
        u, w, _cap = view.net.edges[eid]
        v = u if forward else w
    arcs.reverse()
    return AugmentingPath(arcs, int(width[to]))


def adjusted_edmonds_karp(
    net: FlowNetwork,
    initial_flow: Flow | None = None,
    trace: list[TraceEntry] | None = None,
) -> tuple[Flow, SolveStats]:
    """Edmonds-Karp with maximum-bottleneck tie-breaking among shortest paths."""
    stats = SolveStats()
    start = time.perf_counter()
    values = _require_feasible(net, initial_flow)
    view = ResidualView(net, values)
    while True:
        path = shortest_max_bottleneck_path(view, net.source, net.sink, stats=stats)
        if path is None:
            break
        if trace is not None:
            trace.append((list(values), list(path.arcs), int(path.bottleneck)))
        view.augment(path.arcs, int(path.bottleneck))
        stats.augmentations += 1
    stats.wall_time = time.perf_counter() - start
    stats.total_flow = _net_out_of_source(net, values)
    return Flow(values), stats


def _assemble_pivot_path(
    view: ResidualView, pivot: int, stats: SolveStats
) -> AugmentingPath | None:
    """Build the vertex-simple path P1 . pivot . P2, or None if impossible."""
    net = view.net
    v, w, _ = net.edges[pivot]
    pivot_arc: Arc = (pivot, True, w)
    residual = view.residual(pivot_arc)
    if residual <= 0:
        return None
    if v == net.sink or w == net.source:
        return None

    # P1 avoids w and t so the concatenation can stay simple and end at t.
    p1 = shortest_max_bottleneck_path(
        view, net.source, v, banned_vertices={w, net.sink} - {v}, stats=stats
    )
    if p1 is None:
        return None
    p1_vertices = set(p1.vertices(net, net.source))
    if w in p1_vertices:
        return None
    p2 = shortest_max_bottleneck_path(
        view, w, net.sink, banned_vertices=p1_vertices | {v}, stats=stats
    )
    if p2 is None:
        return None
    arcs = p1.arcs + [pivot_arc] + p2.arcs
    bottleneck = min(p1.bottleneck, residual, p2.bottleneck)
    return AugmentingPath(arcs, int(bottleneck), pivot=pivot, segments=(p1.arcs, p2.arcs))


def guided_ff(
    net: FlowNetwork,
    initial_flow: Flow | None,
    scores: Sequence[float],
    trace: list[TraceEntry] | None = None,
) -> tuple[Flow, SolveStats]:
    """Ford-Fulkerson steered by per-edge scores cached in a max-heap.

    Each round pops pivots until one admits a simple s-t path through it;
    pivots that are live but unusable are re-queued after the round so a later
    residual change can rehabilitate them.  An exhausted heap triggers a
    single adjusted-Edmonds-Karp augmentation, so optimality never depends on
    score quality.
    """
    if len(scores) != net.edge_count:
        raise ContractError(
            f"scores cover {len(scores)} edges but the network has {net.edge_count}"
        )
    for eid, s in enumerate(scores):
        if not (0.0 <= s <= 1.0):
            raise ContractError(f"score for edge {eid} is {s}, outside [0, 1]")

    stats = SolveStats()
    start = time.perf_counter()
    values = _require_feasible(net, initial_flow)
    view = ResidualView(net, values)
    heap = ScoreHeap(scores)

    while True:
        augmented = False
        deferred: list[int] = []
        while True:
            pivot = heap.pop()
            if pivot is None:
                break
            if view.forward_residual(pivot) <= 0:
                heap.kill(pivot)  # stale entry; revived only by a back-edge push
                continue
            stats.pivots.append(pivot)
            path = _assemble_pivot_path(view, pivot, stats)
            if path is None:
                deferred.append(pivot)
                continue
            if trace is not None:
                trace.append((list(values), list(path.arcs), int(path.bottleneck)))
            view.augment(path.arcs, int(path.bottleneck), heap=heap)
            stats.augmentations += 1
            if view.forward_residual(pivot) > 0:
                heap.push(pivot)
            augmented = True
            break
        for eid in deferred:
            if view.forward_residual(eid) > 0:
                heap.push(eid)
        if augmented:
            continue
        fallback = shortest_max_bottleneck_path(view, net.source, net.sink, stats=stats)
        if fallback is None:
            break
        if trace is not None:
            trace.append((list(values), list(fallback.arcs), int(fallback.bottleneck)))
        view.augment(fallback.arcs, int(fallback.bottleneck), heap=heap)
        stats.augmentations += 1

    stats.wall_time = time.perf_counter() - start
    stats.total_flow = _net_out_of_source(net, values)
    return Flow(values), stats


def combined_ff(
    net: FlowNetwork,
    raw_flow_values: Sequence[float],
    scores: Sequence[float],
    trace: list[TraceEntry] | None = None,
) -> tuple[Flow, SolveStats]:
    """Warm-started guided search: clip -> repair -> guided_ff on the residual."""
    from .warmstart import clip_to_capacity, repair_feasibility

    pseudo = clip_to_capacity(net, raw_flow_values)
    repaired, repair_stats = repair_feasibility(net, pseudo)
    flow, stats = guided_ff(net, repaired, scores, trace)
    stats.repairs = repair_stats.iterations
    return flow, stats
