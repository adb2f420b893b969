"""
Training - loop de treino usado pelo harness
"""
from .trainer import TrainResult, Trainer, evaluate_model, predict_examples, selection_score

__all__ = [
    "TrainResult",
    "Trainer",
    "evaluate_model",
    "predict_examples",
    "selection_score",
]
