"""Command-line entry point.

Exit codes: 0 success, 1 unreadable/unparseable input, 2 contract violation
(bad flag combinations, dimension mismatches, invalid parameters).  Stats go
to stdout as ``stat: name=value`` lines so they grep cleanly; everything
machine-readable lives in output files.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import bench as bench_mod
from .errors import ContractError, FormatError, InfeasibleFlowError, NetworkError
from .formats import (
    format_flow_dump,
    format_labels,
    format_scores,
    load_network,
    load_prediction_flow,
    load_scores,
    parse_weight_list,
    save_network,
    save_scores,
)
from .imageflow import (
    GraphParams,
    build_grid_graph,
    load_pgm,
    load_seeds,
    segment,
    write_mask,
)
from .mpgnn import load_weights, mpgnn_forward
from .network import min_cut
from .permdist import cayley_distance, ranking_from_scores, weighted_cayley_distance
from .predictors import (
    LinearModel,
    cut_membership,
    linear_scores,
    oracle_scores,
    perturb_scores,
    train_linear_scorer,
)
from .solve import STRATEGIES, ford_fulkerson
from .warmstart import warm_start_solve


def _stat(name: str, value) -> None:
    print(f"stat: {name}={value}")


def cmd_solve(args: argparse.Namespace) -> int:
    net = load_network(args.network)
    scores = None
    if args.scores:
        scores = load_scores(args.scores, net.edge_count)
    if args.strategy == "guided" and scores is None:
        raise ContractError("strategy 'guided' requires --scores")
    if args.warm_start:
        raw = load_prediction_flow(args.warm_start, net.edge_count)
        flow, stats = warm_start_solve(net, raw, args.strategy, scores)
    else:
        flow, stats = ford_fulkerson(net, strategy=args.strategy, scores=scores)
    cut = min_cut(net, flow)
    _stat("flow_value", stats.total_flow)
    _stat("augmentations", stats.augmentations)
    _stat("repairs", stats.repairs)
    _stat("cut_size_k", cut.size)
    _stat("wall_time_us", int(stats.wall_time * 1e6))
    if args.flow_out:
        Path(args.flow_out).write_text(format_flow_dump(flow.values))
    return 0


def cmd_segment(args: argparse.Namespace) -> int:
    image = load_pgm(args.image)
    seeds = load_seeds(args.seeds)
    params = GraphParams(
        contrast_scale=args.contrast_scale,
        sigma=args.sigma,
        neighborhood=args.neighborhood,
        weight_scale=args.weight_scale,
    )
    graph = build_grid_graph(image, seeds, params)
    scores = None
    if args.scores:
        scores = load_scores(args.scores, graph.network.edge_count)
    if args.strategy == "guided" and scores is None:
        raise ContractError("strategy 'guided' requires --scores")
    mask, stats = segment(graph, args.strategy, scores)
    write_mask(mask, args.out)
    _stat("flow_value", stats.total_flow)
    _stat("augmentations", stats.augmentations)
    _stat("foreground_pixels", sum(mask.foreground))
    _stat("wall_time_us", int(stats.wall_time * 1e6))
    return 0


def cmd_predict(args: argparse.Namespace) -> int:
    net = load_network(args.network)
    if args.source == "oracle":
        scores = oracle_scores(net)
    elif args.source == "noisy":
        scores = perturb_scores(oracle_scores(net), args.noise, args.seed)
    elif args.source == "linear":
        if not args.model:
            raise ContractError("--source linear requires --model")
        model = LinearModel.from_dict(json.loads(Path(args.model).read_text()))
        scores = linear_scores(model, net)
    else:  # mpgnn
        if not args.weights:
            raise ContractError("--source mpgnn requires --weights")
        scores = mpgnn_forward(load_weights(args.weights), net)
    save_scores(scores, args.out)
    _stat("edges_scored", len(scores))
    return 0


def cmd_train_linear(args: argparse.Namespace) -> int:
    dataset = Path(args.dataset)
    net_files = sorted(dataset.glob("*.net"))
    if not net_files:
        raise ContractError(f"no *.net files in {dataset}")
    networks = []
    labels = []
    from .formats import parse_labels

    for net_file in net_files:
        net = load_network(net_file)
        networks.append(net)
        label_file = net_file.with_suffix(".labels")
        if label_file.exists():
            labels.append(parse_labels(label_file.read_text(), net.edge_count))
        else:
            labels.append(cut_membership(net))
    model = train_linear_scorer(networks, labels, args.epochs, args.learning_rate)
    Path(args.out).write_text(json.dumps(model.to_dict(), indent=1))
    _stat("training_edges", sum(n.edge_count for n in networks))
    if model.loss_history:
        _stat("final_loss", f"{model.loss_history[-1]:.6f}")
    return 0


def _load_standalone_scores(path: str) -> list[float]:
    from .formats import _parse_pairs

    pairs = _parse_pairs(Path(path).read_text(), "scores")
    ids = sorted(eid for eid, _ in pairs)
    if ids != list(range(len(pairs))):
        raise FormatError(f"{path}: edge ids must be exactly 0..{len(pairs) - 1}")
    out = [0.0] * len(pairs)
    for eid, value in pairs:
        out[eid] = value
    return out


def cmd_distance(args: argparse.Namespace) -> int:
    scores_a = _load_standalone_scores(args.scores_a)
    scores_b = _load_standalone_scores(args.scores_b)
    rank_a = ranking_from_scores(scores_a)
    rank_b = ranking_from_scores(scores_b)
    if args.weights:
        w = parse_weight_list(Path(args.weights).read_text())
    else:
        w = [1.0 / (i + 1) for i in range(len(rank_a))]
    method = "exact" if args.exact else "bound" if args.bound else "auto"
    d_c = cayley_distance(rank_a, rank_b)
    d_wc = weighted_cayley_distance(rank_a, rank_b, w, method=method)
    _stat("cayley", d_c)
    _stat("weighted_cayley", f"{d_wc.value:.9g}")
    _stat("weighted_exact", str(d_wc.exact).lower())
    return 0


def cmd_bench(args: argparse.Namespace) -> int:
    config = bench_mod.ExperimentConfig(
        family=args.family,
        instances=500 if args.full_size else args.instances,
        repetitions=args.repetitions,
        rng_seed=args.seed,
        n=args.n,
        m=args.m,
        cap_max=args.cap_max,
        width=60 if args.full_size else args.width,
        height=60 if args.full_size else args.height,
        contrast=args.contrast,
        solvers=tuple(args.solvers.split(",")),
        predictors=tuple(args.predictors.split(",")),
        noise_levels=tuple(float(x) for x in args.noise.split(",")),
        mpgnn_weights_path=args.mpgnn_weights,
    )
    records, _ = bench_mod.run_matrix(
        config, csv_path=args.out, repro_dir=Path(args.out).parent
    )
    _stat("trials", len(records))
    _stat("csv", args.out)
    return 0


def cmd_export_dataset(args: argparse.Namespace) -> int:
    if args.count < 1:
        raise ContractError("--count must be >= 1")
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    for i in range(args.count):
        net = bench_mod.random_network(args.n, args.m, args.cap_max, args.seed + i)
        stem = out_dir / f"instance_{i:03d}"
        save_network(net, stem.with_suffix(".net"))
        save_scores(oracle_scores(net), stem.with_suffix(".scores"))
        stem.with_suffix(".labels").write_text(format_labels(cut_membership(net)))
    _stat("instances", args.count)
    _stat("files", args.count * 3)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="flowguide",
        description="Prediction-guided max-flow toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve max flow on a network file")
    p.add_argument("network")
    p.add_argument("--strategy", choices=STRATEGIES, default="bfs")
    p.add_argument("--warm-start", help="prediction-flow file (edge_id value lines)")
    p.add_argument("--scores", help="edge-scores file (required for guided)")
    p.add_argument("--flow-out", help="write the final flow as edge_id value lines")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("segment", help="seeded graph-cut segmentation of a PGM image")
    p.add_argument("image")
    p.add_argument("seeds", help="PGM: 0 neutral, 255 source seed, 128 sink seed")
    p.add_argument("--out", default="mask.pgm")
    p.add_argument("--strategy", choices=STRATEGIES, default="bfs")
    p.add_argument("--scores")
    p.add_argument("--contrast-scale", type=int, default=100)
    p.add_argument("--sigma", type=float, default=10.0)
    p.add_argument("--neighborhood", type=int, choices=(4, 8), default=4)
    p.add_argument("--weight-scale", type=int, default=1000)
    p.set_defaults(func=cmd_segment)

    p = sub.add_parser("predict", help="emit an edge-scores file for a network")
    p.add_argument("network")
    p.add_argument("--source", choices=("oracle", "noisy", "linear", "mpgnn"), required=True)
    p.add_argument("--noise", type=float, default=0.5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--model", help="linear model JSON (for --source linear)")
    p.add_argument("--weights", help="MPGNN weights JSON (for --source mpgnn)")
    p.add_argument("-o", "--out", default="scores.txt")
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("train-linear", help="fit the logistic edge scorer on a dataset dir")
    p.add_argument("dataset", help="directory of *.net (+ optional *.labels) files")
    p.add_argument("-o", "--out", default="linear-model.json")
    p.add_argument("--epochs", type=int, default=200)
    p.add_argument("--learning-rate", type=float, default=0.01)
    p.set_defaults(func=cmd_train_linear)

    p = sub.add_parser("distance", help="ranking distances between two scores files")
    p.add_argument("scores_a")
    p.add_argument("scores_b")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--exact", action="store_true")
    group.add_argument("--bound", action="store_true")
    p.add_argument("--weights", help="position-weight file, one decimal per line")
    p.set_defaults(func=cmd_distance)

    p = sub.add_parser("bench", help="run the solver x predictor matrix, emit CSV")
    p.add_argument("--family", choices=("random", "grid"), default="random")
    p.add_argument("--instances", type=int, default=10)
    p.add_argument("--repetitions", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n", type=int, default=8)
    p.add_argument("--m", type=int, default=14)
    p.add_argument("--cap-max", type=int, default=10)
    p.add_argument("--width", type=int, default=16)
    p.add_argument("--height", type=int, default=16)
    p.add_argument("--contrast", type=int, default=255)
    p.add_argument("--solvers", default="dfs,bfs,adjusted_bfs,guided")
    p.add_argument("--predictors", default="oracle,noisy")
    p.add_argument("--noise", default="0,0.5,1")
    p.add_argument("--mpgnn-weights")
    p.add_argument("--full-size", action="store_true",
                   help="paper-scale run: 500 instances, 60x60 grids")
    p.add_argument("--out", default="bench.csv")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("export-dataset", help="write networks + oracle labels for training")
    p.add_argument("out_dir")
    p.add_argument("--count", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n", type=int, default=8)
    p.add_argument("--m", type=int, default=14)
    p.add_argument("--cap-max", type=int, default=10)
    p.set_defaults(func=cmd_export_dataset)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except FormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ContractError, NetworkError, InfeasibleFlowError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
