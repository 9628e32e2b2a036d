import argparse
import sys

from .data import DatasetError
from .train import Hyperparameters, train


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mpgnn-train",
        description="Train an edge-scoring message-passing network on an exported dataset",
    )
    parser.add_argument("dataset", help="directory of *.net + *.labels files")
    parser.add_argument("-o", "--out", default="mpgnn-weights.json")
    parser.add_argument("--loss-log", default=None, help="CSV of epoch,loss")
    parser.add_argument("--hidden-dim", type=int, default=8)
    parser.add_argument("--rounds", type=int, default=2)
    parser.add_argument("--epochs", type=int, default=200)
    parser.add_argument("--learning-rate", type=float, default=0.01)
    parser.add_argument("--seed", type=int, default=0)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    params = Hyperparameters(
        hidden_dim=args.hidden_dim,
        rounds=args.rounds,
        epochs=args.epochs,
        learning_rate=args.learning_rate,
        seed=args.seed,
    )
    try:
        result = train(args.dataset, params, args.out, args.loss_log)
    except (DatasetError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"weights: {args.out}")
    print(f"loss: {result.initial_loss:.6f} -> {result.final_loss:.6f} "
          f"over {len(result.losses)} epochs")
    return 0


if __name__ == "__main__":
    sys.exit(main())
