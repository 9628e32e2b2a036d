"""Trainer for the edge-scoring message-passing network.

Consumes datasets exported by the solver toolkit (network + min-cut label
files) and emits weights in its JSON interchange schema.
"""

from .data import DatasetError, Instance, load_dataset
from .model import EdgeScoringNet
from .train import Hyperparameters, TrainingResult, train, train_on_instances

__version__ = "0.1.0"
