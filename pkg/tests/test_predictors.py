import numpy as np
import pytest

from flowguide import (
    ContractError,
    Flow,
    build_network,
    edge_features,
    linear_scores,
    min_cut,
    ford_fulkerson,
    oracle_scores,
    perturb_scores,
    train_linear_scorer,
)
from flowguide.predictors import FEATURE_NAMES, LinearModel, compute_features, cut_membership

from conftest import small_random_pool


@pytest.fixture
def path_net():
    return build_network(3, [(0, 1, 2), (1, 2, 1)], 0, 2)


class TestEdgeFeatures:
    def test_path_edge_u_to_t(self, path_net):
        feat = edge_features(path_net, Flow.zero(path_net), 1)
        assert feat.dist_from_source == 1
        assert feat.dist_to_sink == 0
        assert feat.out_degree == 1
        assert feat.in_degree == 1
        assert feat.residual_out_neighbors == 1
        assert feat.residual_in_neighbors == 1
        assert feat.capacity == 1

    def test_edges_out_of_source_have_zero_distance(self, diamond):
        for eid, (u, _, _) in enumerate(diamond.edges):
            if u == diamond.source:
                assert edge_features(diamond, Flow.zero(diamond), eid).dist_from_source == 0

    def test_diamond_middle_edge(self, diamond):
        feat = edge_features(diamond, Flow.zero(diamond), 2)  # (a, b)
        assert feat.dist_from_source == 1
        assert feat.dist_to_sink == 1
        assert feat.capacity == 1

    def test_unreachable_distance_uses_sentinel(self):
        net = build_network(4, [(0, 3, 1), (1, 2, 1)], 0, 3)
        feat = edge_features(net, Flow.zero(net), 1)  # tail 1 unreachable from s
        assert feat.dist_from_source == net.vertex_count

    def test_saturated_edge_drops_from_residual_neighbor_counts(self, path_net):
        feats = compute_features(path_net, Flow([2, 0]))
        assert feats[0].residual_out_neighbors == 0  # s->u saturated
        assert feats[1].residual_out_neighbors == 1


class TestOracleScores:
    def test_diamond_scores(self, diamond):
        scores = oracle_scores(diamond)
        assert scores[0] == pytest.approx(1.0)
        assert scores[1] == pytest.approx(2 / 3)
        for eid in (2, 3, 4):
            assert scores[eid] < 2 / 3

    def test_single_edge_scores_one(self):
        net = build_network(2, [(0, 1, 7)], 0, 1)
        assert oracle_scores(net) == [1.0]

    def test_edgeless_network_empty_map(self):
        net = build_network(2, [], 0, 1)
        assert oracle_scores(net) == []

    def test_argmax_is_max_capacity_cut_edge(self):
        for net in small_random_pool(30, base_seed=71):
            if net.edge_count == 0:
                continue
            scores = oracle_scores(net)
            flow, _ = ford_fulkerson(net)
            cut = min_cut(net, flow)
            if not cut.cut_edges or max(net.edges[e][2] for e in cut.cut_edges) == 0:
                continue
            best = max(range(net.edge_count), key=lambda e: (scores[e], -e))
            best_cap = max(net.edges[e][2] for e in cut.cut_edges)
            assert best in cut.cut_edges
            assert net.edges[best][2] == best_cap

    def test_cut_edges_score_above_all_others(self):
        for net in small_random_pool(30, base_seed=73):
            if net.edge_count == 0:
                continue
            scores = oracle_scores(net)
            flow, _ = ford_fulkerson(net)
            cut = min_cut(net, flow)
            if not cut.cut_edges:
                continue
            lowest_cut = min(scores[e] for e in cut.cut_edges)
            for eid in range(net.edge_count):
                if eid not in cut.cut_edges:
                    assert scores[eid] < lowest_cut

    def test_totality_and_range_everywhere(self):
        for net in small_random_pool(20, base_seed=79):
            scores = oracle_scores(net)
            assert len(scores) == net.edge_count
            assert all(0.0 <= s <= 1.0 for s in scores)


class TestPerturb:
    def test_noise_zero_is_identity(self, diamond):
        scores = oracle_scores(diamond)
        assert perturb_scores(scores, 0.0, 42) == scores

    def test_fixed_seed_is_reproducible(self, diamond):
        scores = oracle_scores(diamond)
        a = perturb_scores(scores, 0.3, 7)
        b = perturb_scores(scores, 0.3, 7)
        assert a == b
        assert a != scores

    def test_noise_one_stays_in_range(self, diamond):
        out = perturb_scores(oracle_scores(diamond), 1.0, 3)
        assert all(0.0 <= s <= 1.0 for s in out)

    def test_bad_noise_level_rejected(self, diamond):
        with pytest.raises(ContractError):
            perturb_scores(oracle_scores(diamond), 1.5, 0)


def _capacity_separable_net():
    # One heavy edge is the unique min cut; every other edge has capacity 1.
    edges = [(0, 1, 9)]
    for i in range(10):
        mid = 2 + i
        edges.append((1, mid, 1))
        edges.append((mid, 12, 1))
    return build_network(13, edges, 0, 12)


class TestLinearScorer:
    def test_zero_epochs_returns_zero_model(self, diamond):
        model = train_linear_scorer([diamond], epochs=0)
        assert np.all(model.weights == 0.0)
        assert model.bias == 0.0

    def test_zero_model_scores_half(self, diamond):
        model = train_linear_scorer([diamond], epochs=0)
        assert linear_scores(model, diamond) == [0.5] * diamond.edge_count

    def test_duplicated_training_set_gives_same_model(self, diamond):
        single = train_linear_scorer([diamond], epochs=50)
        doubled = train_linear_scorer([diamond, diamond], epochs=50)
        assert np.allclose(single.weights, doubled.weights)
        assert single.bias == pytest.approx(doubled.bias)

    def test_loss_non_increasing_at_small_rate(self):
        nets = small_random_pool(6, base_seed=83)
        nets = [n for n in nets if n.edge_count > 0]
        model = train_linear_scorer(nets, epochs=120, learning_rate=0.01)
        for before, after in zip(model.loss_history, model.loss_history[1:]):
            assert after <= before + 1e-12

    def test_capacity_separable_net_learns_positive_capacity_weight(self):
        net = _capacity_separable_net()
        assert cut_membership(net) == [1] + [0] * 20
        model = train_linear_scorer([net], epochs=300)
        assert model.weights[FEATURE_NAMES.index("capacity")] > 0

    def test_capacity_dominant_model_ranks_by_capacity(self, diamond):
        model = LinearModel(
            weights=np.array([0, 0, 0, 0, 0, 0, 2.0]),
            bias=0.0,
            feature_means=np.zeros(7),
            feature_scales=np.ones(7),
        )
        scores = linear_scores(model, diamond)
        caps = [c for _, _, c in diamond.edges]
        for a in range(5):
            for b in range(5):
                if caps[a] > caps[b]:
                    assert scores[a] > scores[b]
        assert all(0.0 < s < 1.0 for s in scores)

    def test_empty_training_set_rejected(self):
        with pytest.raises(ContractError):
            train_linear_scorer([])

    def test_dimension_mismatch_rejected(self, diamond):
        model = LinearModel(
            weights=np.zeros(3),
            bias=0.0,
            feature_means=np.zeros(3),
            feature_scales=np.ones(3),
        )
        with pytest.raises(ContractError):
            linear_scores(model, diamond)
