"""Distances between edge rankings.

Rankings are sequences of distinct items (EdgeIds in practice).  The plain
transposition distance is n minus the cycle count of the relative permutation;
the weighted variant charges a swap of positions (i, j), i < j, the weight of
position i, so disturbing the top of the ranking costs more.  Exact weighted
distances come from a uniform-cost search over permutation states and are
limited to n <= 8; beyond that a greedy per-cycle bound is returned, flagged.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from itertools import combinations
from typing import Hashable, Sequence

from .errors import ContractError

EXACT_LIMIT = 8


def ranking_from_scores(scores: Sequence[float]) -> list[int]:
    """EdgeIds by descending score; ties resolve to the lowest EdgeId."""
    return sorted(range(len(scores)), key=lambda eid: (-scores[eid], eid))


def _relative_positions(
    sigma: Sequence[Hashable], sigma_hat: Sequence[Hashable]
) -> list[int]:
    """Position map pi with sigma_hat[i] == sigma[pi[i]]; validates inputs."""
    if len(sigma) != len(sigma_hat):
        raise ContractError(
            f"rankings differ in length: {len(sigma)} vs {len(sigma_hat)}"
        )
    pos = {}
    for i, item in enumerate(sigma):
        if item in pos:
            raise ContractError(f"duplicate item {item!r} in ranking")
        pos[item] = i
    try:
        pi = [pos[item] for item in sigma_hat]
    except KeyError as exc:
        raise ContractError(f"item {exc} missing from the other ranking") from exc
    if len(set(pi)) != len(pi):
        raise ContractError("second ranking repeats an item")
    return pi


def _cycle_count(pi: Sequence[int]) -> int:
    seen = [False] * len(pi)
    cycles = 0
    for start in range(len(pi)):
        if seen[start]:
            continue
        cycles += 1
        j = start
        while not seen[j]:
            seen[j] = True
            j = pi[j]
    return cycles


def cayley_distance(sigma: Sequence[Hashable], sigma_hat: Sequence[Hashable]) -> int:
    """Minimum number of transpositions turning sigma into sigma_hat."""
    pi = _relative_positions(sigma, sigma_hat)
    return len(pi) - _cycle_count(pi)


@dataclass(frozen=True)
class WeightedDistance:
    value: float
    exact: bool


def _check_weights(w: Sequence[float], n: int) -> list[float]:
    if len(w) != n:
        raise ContractError(f"{len(w)} weights for rankings of length {n}")
    for i, wi in enumerate(w):
        if wi <= 0:
            raise ContractError(f"weight {i + 1} is {wi}, must be positive")
        if i and wi > w[i - 1]:
            raise ContractError("weights must be non-increasing")
    return [float(x) for x in w]


def _greedy_cycle_bound(pi: Sequence[int], w: Sequence[float]) -> float:
    """Resolve each cycle with swaps anchored at its cheapest (top) position."""
    seen = [False] * len(pi)
    total = 0.0
    for start in range(len(pi)):
        if seen[start]:
            continue
        cycle = []
        j = start
        while not seen[j]:
            seen[j] = True
            cycle.append(j)
            j = pi[j]
        if len(cycle) > 1:
            total += (len(cycle) - 1) * w[min(cycle)]
    return total


def _exact_search(pi: tuple[int, ...], w: Sequence[float]) -> float:
    """Uniform-cost search from pi to the identity over position swaps."""
    n = len(pi)
    identity = tuple(range(n))
    swaps = list(combinations(range(n), 2))
    best = {pi: 0.0}
    frontier: list[tuple[float, tuple[int, ...]]] = [(0.0, pi)]
    while frontier:
        cost, state = heapq.heappop(frontier)
        if state == identity:
            return cost
        if cost > best.get(state, float("inf")):
            continue
        for i, j in swaps:
            nxt = list(state)
            nxt[i], nxt[j] = nxt[j], nxt[i]
            t = tuple(nxt)
            c = cost + w[i]
            if c < best.get(t, float("inf")):
                best[t] = c
                heapq.heappush(frontier, (c, t))
    raise AssertionError("identity unreachable; the swap graph is connected")


def weighted_cayley_distance(
    sigma: Sequence[Hashable],
    sigma_hat: Sequence[Hashable],
    w: Sequence[float],
    method: str = "auto",
) -> WeightedDistance:
    """Minimum total swap cost turning sigma into sigma_hat.

    method: "exact" (n <= 8 only), "bound" (greedy upper bound), or "auto"
    (exact where tractable, bound otherwise).  The result carries an ``exact``
    flag so bounds are never mistaken for true distances.
    """
    pi = _relative_positions(sigma, sigma_hat)
    weights = _check_weights(w, len(pi))
    if method not in ("auto", "exact", "bound"):
        raise ContractError(f"unknown method {method!r}")
    if method == "exact" and len(pi) > EXACT_LIMIT:
        raise ContractError(
            f"exact search is limited to n <= {EXACT_LIMIT}, got n = {len(pi)}"
        )
    use_exact = method == "exact" or (method == "auto" and len(pi) <= EXACT_LIMIT)
    if use_exact:
        return WeightedDistance(_exact_search(tuple(pi), weights), exact=True)
    return WeightedDistance(_greedy_cycle_bound(pi, weights), exact=False)
