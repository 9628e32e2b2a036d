import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from flowguide import (
    ContractError,
    Flow,
    adjusted_edmonds_karp,
    build_network,
    combined_ff,
    ford_fulkerson,
    guided_ff,
    min_cut,
    oracle_scores,
    shortest_max_bottleneck_path,
)
from flowguide.guided import ScoreHeap
from flowguide.network import ResidualView

from conftest import small_random_pool
from oracles import brute_force_min_cut_value, shortest_paths_max_bottleneck


@pytest.fixture
def fork_net():
    """Two length-2 s-t paths with bottlenecks 1 and 4."""
    return build_network(4, [(0, 1, 1), (1, 3, 5), (0, 2, 5), (2, 3, 4)], 0, 3)


class TestShortestMaxBottleneck:
    def test_tie_breaks_to_wider_path(self, fork_net):
        view = ResidualView(fork_net, [0] * 4)
        path = shortest_max_bottleneck_path(view, 0, 3)
        assert [arc[0] for arc in path.arcs] == [2, 3]
        assert path.bottleneck == 4

    def test_unique_path(self):
        net = build_network(3, [(0, 1, 2), (1, 2, 1)], 0, 2)
        view = ResidualView(net, [0, 0])
        path = shortest_max_bottleneck_path(view, 0, 2)
        assert [arc[0] for arc in path.arcs] == [0, 1]
        assert path.bottleneck == 1

    def test_banned_vertices_respected(self, diamond):
        view = ResidualView(diamond, [0] * 5)
        path = shortest_max_bottleneck_path(view, 0, 3, banned_vertices={1})
        assert [arc[0] for arc in path.arcs] == [1, 4]
        assert path.bottleneck == 2

    def test_unreachable_returns_none(self):
        net = build_network(3, [(0, 1, 2)], 0, 2)
        view = ResidualView(net, [0])
        assert shortest_max_bottleneck_path(view, 0, 2) is None

    def test_same_endpoints_gives_empty_path(self, diamond):
        view = ResidualView(diamond, [0] * 5)
        path = shortest_max_bottleneck_path(view, 1, 1)
        assert path.arcs == []


class TestAdjustedEdmondsKarp:
    def test_first_augmentation_takes_the_wide_path(self, fork_net):
        trace = []
        flow, stats = adjusted_edmonds_karp(fork_net, trace=trace)
        assert trace[0][2] == 4
        assert [arc[0] for arc in trace[0][1]] == [2, 3]
        assert stats.total_flow == 5

    def test_diamond_cold_start(self, diamond):
        _, stats = adjusted_edmonds_karp(diamond)
        assert stats.total_flow == 5

    def test_already_optimal_does_nothing(self, diamond):
        _, stats = adjusted_edmonds_karp(diamond, initial_flow=Flow([3, 2, 1, 2, 3]))
        assert stats.augmentations == 0

    def test_tie_break_law_against_enumeration(self):
        for net in small_random_pool(30, base_seed=41, n_max=7, m_max=12):
            trace = []
            adjusted_edmonds_karp(net, trace=trace)
            for values_before, arcs, delta in trace:
                expected = shortest_paths_max_bottleneck(
                    net.vertex_count, net.edges, values_before, net.source, net.sink
                )
                assert expected is not None
                length, widest = expected
                assert len(arcs) == length
                assert delta == widest


class TestScoreHeap:
    def test_pop_order_and_tie_break(self):
        heap = ScoreHeap([0.5, 0.9, 0.9, 0.1])
        assert heap.pop() == 1  # ties resolve to the lowest EdgeId
        assert heap.pop() == 2
        assert heap.pop() == 0
        assert heap.pop() == 3
        assert heap.pop() is None

    def test_kill_then_revive_restores_relative_position(self):
        heap = ScoreHeap([0.3, 0.8, 0.5])
        heap.kill(1)
        assert heap.pop() == 2
        heap.revive(1)
        assert heap.pop() == 1  # back at its original score, above edge 0
        assert heap.pop() == 0

    def test_push_is_idempotent_while_enqueued(self):
        heap = ScoreHeap([0.3, 0.8])
        heap.push(1)
        heap.push(1)
        assert heap.pop() == 1
        assert heap.pop() == 0
        assert heap.pop() is None


class TestGuidedFF:
    def test_diamond_oracle_first_augmentation(self, diamond):
        trace = []
        flow, stats = guided_ff(diamond, None, oracle_scores(diamond), trace=trace)
        assert stats.total_flow == 5
        assert stats.pivots[0] == 0  # s->a carries the larger cut capacity
        first_arcs = [arc[0] for arc in trace[0][1]]
        assert first_arcs == [0, 3]  # s->a . a->t
        assert trace[0][2] == 2

    def test_equal_scores_pop_in_edge_id_order(self, diamond):
        _, stats = guided_ff(diamond, None, [0.5] * 5)
        assert stats.total_flow == 5
        assert stats.pivots[0] == 0

    def test_adversarial_scores_still_optimal(self, diamond):
        oracle = oracle_scores(diamond)
        _, oracle_stats = guided_ff(diamond, None, oracle)
        _, adv_stats = guided_ff(diamond, None, [1.0 - s for s in oracle])
        assert adv_stats.total_flow == 5
        assert adv_stats.augmentations >= oracle_stats.augmentations

    def test_saturated_pivot_is_skipped(self):
        # edge 1 scores highest but has capacity 0, so it is dead on arrival
        net = build_network(3, [(0, 1, 2), (0, 1, 0), (1, 2, 2)], 0, 2)
        _, stats = guided_ff(net, None, [0.2, 1.0, 0.5])
        assert stats.total_flow == 2
        assert 1 not in stats.pivots

    def test_missing_scores_rejected(self, diamond):
        with pytest.raises(ContractError, match="scores cover"):
            guided_ff(diamond, None, [0.5] * 4)

    def test_out_of_range_score_rejected(self, diamond):
        with pytest.raises(ContractError, match="outside"):
            guided_ff(diamond, None, [0.5, 0.5, 0.5, 0.5, 1.5])

    def test_no_zero_residual_arc_traversed_and_paths_simple(self):
        rng = random.Random(99)
        for net in small_random_pool(20, base_seed=47):
            scores = [rng.random() for _ in range(net.edge_count)]
            trace = []
            guided_ff(net, None, scores, trace=trace)
            for values_before, arcs, delta in trace:
                view = ResidualView(net, list(values_before))
                visited = set()
                for arc in arcs:
                    assert view.residual(arc) >= delta > 0
                    assert arc[2] not in visited  # vertex-simple
                    visited.add(arc[2])

    def test_optimality_over_many_score_vectors(self):
        rng = random.Random(7)
        nets = small_random_pool(10, base_seed=53)
        for net in nets:
            expected = brute_force_min_cut_value(
                net.vertex_count, net.edges, net.source, net.sink
            )
            for _ in range(20):  # 200 score vectors across the pool
                scores = [rng.random() for _ in range(net.edge_count)]
                _, stats = guided_ff(net, None, scores)
                assert stats.total_flow == expected

    def test_first_pivot_is_max_capacity_cut_edge(self):
        for net in small_random_pool(25, base_seed=59):
            flow, stats = ford_fulkerson(net)
            if stats.total_flow == 0:
                continue
            cut = min_cut(net, flow)
            best_cap = max(net.edges[eid][2] for eid in cut.cut_edges)
            top = {eid for eid in cut.cut_edges if net.edges[eid][2] == best_cap}
            _, guided_stats = guided_ff(net, None, oracle_scores(net))
            assert guided_stats.pivots[0] in top


class TestCombined:
    def test_perfect_prediction_zero_augmentations(self, diamond):
        _, stats = combined_ff(diamond, [3, 2, 1, 2, 3], oracle_scores(diamond))
        assert stats.total_flow == 5
        assert stats.augmentations == 0

    def test_zero_prediction_matches_guided_cold_start(self, diamond):
        scores = oracle_scores(diamond)
        _, cold = guided_ff(diamond, None, scores)
        _, warm = combined_ff(diamond, [0.0] * 5, scores)
        assert warm.total_flow == cold.total_flow == 5
        assert warm.augmentations == cold.augmentations
        assert warm.repairs == 0

    def test_half_capacity_prediction(self, diamond):
        scores = oracle_scores(diamond)
        raw = [c / 2 for _, _, c in diamond.edges]
        _, adjusted = adjusted_edmonds_karp(diamond)
        _, warm = combined_ff(diamond, raw, scores)
        assert warm.total_flow == 5
        assert warm.augmentations <= adjusted.augmentations

    def test_safety_on_random_predictions(self):
        rng = random.Random(21)
        for net in small_random_pool(15, base_seed=61):
            expected_flow, _ = ford_fulkerson(net)
            expected = sum(
                expected_flow.values[eid]
                for eid, (u, _, _) in enumerate(net.edges)
                if u == net.source
            ) - sum(
                expected_flow.values[eid]
                for eid, (_, v, _) in enumerate(net.edges)
                if v == net.source
            )
            raw = [rng.uniform(0, cap + 1) for _, _, cap in net.edges]
            scores = [rng.random() for _ in range(net.edge_count)]
            _, stats = combined_ff(net, raw, scores)
            assert stats.total_flow == expected


@given(seed=st.integers(0, 50_000))
@settings(max_examples=40, deadline=None)
def test_hypothesis_guided_matches_brute_force(seed):
    from flowguide import random_network

    rng = random.Random(seed)
    n = rng.randint(2, 6)
    m = rng.randint(0, min(10, n * (n - 1)))
    net = random_network(n, m, 8, seed)
    scores = [rng.random() for _ in range(net.edge_count)]
    _, stats = guided_ff(net, None, scores)
    assert stats.total_flow == brute_force_min_cut_value(
        net.vertex_count, net.edges, net.source, net.sink
    )
