import statistics

import pytest

from flowguide import ContractError, random_network
from flowguide.bench import BenchAbort, ExperimentConfig, run_matrix

from oracles import brute_force_min_cut_value, matrix_max_flow


class TestRandomNetwork:
    def test_fixed_seed_is_deterministic(self):
        a = random_network(6, 10, 10, 42)
        b = random_network(6, 10, 10, 42)
        assert a.edges == b.edges

    def test_zero_edges(self):
        net = random_network(4, 0, 5, 1)
        assert net.edge_count == 0

    def test_seed_42_matches_brute_force(self):
        net = random_network(6, 10, 10, 42)
        expected = brute_force_min_cut_value(6, net.edges, 0, 5)
        assert expected == matrix_max_flow(6, net.edges, 0, 5)
        from flowguide import ford_fulkerson

        _, stats = ford_fulkerson(net)
        assert stats.total_flow == expected

    def test_edges_distinct_and_loop_free(self):
        net = random_network(7, 20, 5, 9)
        pairs = [(u, v) for u, v, _ in net.edges]
        assert len(set(pairs)) == len(pairs)
        assert all(u != v for u, v in pairs)

    def test_parameter_bounds(self):
        with pytest.raises(ContractError):
            random_network(1, 0, 5, 0)
        with pytest.raises(ContractError):
            random_network(3, 7, 5, 0)
        with pytest.raises(ContractError):
            random_network(3, 2, 0, 0)


class TestRunMatrix:
    def test_flow_values_agree_across_solvers(self):
        config = ExperimentConfig(
            instances=5, rng_seed=3, solvers=("bfs", "guided"), predictors=("oracle",)
        )
        records, _ = run_matrix(config)
        by_instance = {}
        for record in records:
            by_instance.setdefault(record.instance_id, set()).add(record.flow_value)
        assert all(len(values) == 1 for values in by_instance.values())

    def test_noise_zero_has_zero_weighted_cayley(self):
        config = ExperimentConfig(
            instances=8,
            rng_seed=5,
            solvers=("guided",),
            predictors=("noisy",),
            noise_levels=(0.0, 0.5, 1.0),
        )
        records, _ = run_matrix(config)
        for record in records:
            if record.noise == 0.0:
                assert record.weighted_cayley == 0.0
                assert record.cayley == 0

    def test_csv_reproducible_modulo_wall_time(self):
        config = ExperimentConfig(
            instances=4,
            rng_seed=11,
            solvers=("bfs", "guided"),
            predictors=("oracle", "noisy"),
            noise_levels=(0.0, 1.0),
        )
        _, csv_a = run_matrix(config)
        _, csv_b = run_matrix(config)

        def strip_wall(csv_text):
            return "\n".join(line.rsplit(",", 1)[0] for line in csv_text.splitlines())

        assert csv_a != ""
        assert strip_wall(csv_a) == strip_wall(csv_b)

    def test_csv_header_is_exact(self):
        config = ExperimentConfig(instances=1, solvers=("bfs",), predictors=("oracle",))
        _, csv_text = run_matrix(config)
        assert csv_text.splitlines()[0] == (
            "instance_id,solver,predictor,noise,augmentations,repairs,"
            "flow_value,cut_size_k,cayley,weighted_cayley,wall_time_us"
        )

    def test_augmentations_and_k_reported_for_perfect_oracle(self):
        config = ExperimentConfig(
            instances=6, rng_seed=7, solvers=("guided",), predictors=("oracle",)
        )
        records, _ = run_matrix(config)
        for record in records:
            assert record.cut_size_k >= 0
            assert record.augmentations >= 0

    def test_weighted_cayley_mean_grows_with_noise(self):
        config = ExperimentConfig(
            instances=50,
            rng_seed=13,
            solvers=("guided",),
            predictors=("noisy",),
            noise_levels=(0.0, 1.0),
        )
        records, _ = run_matrix(config)
        at_zero = [r.weighted_cayley for r in records if r.noise == 0.0]
        at_one = [r.weighted_cayley for r in records if r.noise == 1.0]
        assert statistics.mean(at_zero) <= statistics.mean(at_one)
        assert statistics.mean(at_zero) == 0.0

    def test_grid_family_runs(self):
        config = ExperimentConfig(
            family="grid",
            instances=2,
            width=6,
            height=6,
            solvers=("bfs",),
            predictors=("oracle",),
        )
        records, _ = run_matrix(config)
        assert len(records) == 2
        assert all(r.flow_value > 0 for r in records)

    def test_mpgnn_predictor_without_weights_file(self):
        config = ExperimentConfig(
            instances=3, rng_seed=2, solvers=("guided",), predictors=("mpgnn",)
        )
        records, _ = run_matrix(config)
        assert len(records) == 3

    def test_combined_solver_reports_repairs(self):
        config = ExperimentConfig(
            instances=6, rng_seed=17, solvers=("combined",), predictors=("oracle",)
        )
        records, _ = run_matrix(config)
        assert any(r.repairs >= 0 for r in records)

    def test_non_optimal_solver_aborts_with_repro(self, tmp_path, monkeypatch):
        import flowguide.bench as bench_mod

        real_solve = bench_mod._solve

        def broken(solver, net, scores):
            flow, stats = real_solve(solver, net, scores)
            stats.total_flow += 1
            return flow, stats

        monkeypatch.setattr(bench_mod, "_solve", broken)
        config = ExperimentConfig(instances=1, solvers=("bfs",), predictors=("oracle",))
        with pytest.raises(BenchAbort):
            run_matrix(config, repro_dir=tmp_path)
        assert list(tmp_path.glob("repro-*.net"))
        assert list(tmp_path.glob("repro-*.scores"))
        assert list(tmp_path.glob("repro-*.json"))

    def test_bad_config_rejected(self):
        with pytest.raises(ContractError):
            run_matrix(ExperimentConfig(instances=0))
        with pytest.raises(ContractError):
            run_matrix(ExperimentConfig(solvers=("nope",)))
