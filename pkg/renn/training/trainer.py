"""
Trainer - loop de treino com mini-batches

- Shuffle com seed a cada epoch; o último batch curto é mantido
- Loss média do batch, clipping pela norma global, passo de Adam
- Com exemplos de validação: restaura o melhor epoch ao final
"""
import copy
import logging
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np
import torch

from ..types import EvalReport, HyperParams, Task
from ..nn.functional import check_finite
from ..nn.optim import Adam
from ..models.factory import RennModel
from ..models.features import Example
from ..evaluation.metrics import evaluate_intent, evaluate_slots

logger = logging.getLogger(__name__)


@dataclass
class TrainResult:
    """Resultado do treino."""
    loss_curve: list[float] = field(default_factory=list)
    dev_scores: list[float] = field(default_factory=list)
    best_epoch: Optional[int] = None    # 1-based; None quando o modelo final é usado


def predict_examples(model: RennModel, examples: Sequence[Example]) -> list:
    """Labels preditos (str para intent, lista de str para slot)."""
    model.eval()
    return [model.predict_labels(ex) for ex in examples]


def evaluate_model(
    model: RennModel,
    examples: Sequence[Example],
    span_level: bool = False,
) -> EvalReport:
    """
    Avalia o modelo contra as sentenças gold dos exemplos.

    O macro-F1 usa o conjunto de labels do modelo: labels nunca preditos
    e ausentes do gold contam como zero.
    """
    pred = predict_examples(model, examples)
    if model.task is Task.INTENT:
        return evaluate_intent(pred, [ex.sentence.intent for ex in examples], label_set=model.labels)
    return evaluate_slots(
        pred, [list(ex.sentence.slots) for ex in examples],
        label_set=model.labels, span_level=span_level,
    )


def selection_score(report: EvalReport) -> float:
    """Métrica usada para escolher o melhor epoch."""
    if report.task is Task.INTENT:
        return report.accuracy or 0.0
    return report.micro_f1 or 0.0


class Trainer:
    """Treina um RennModel com Adam."""

    def __init__(
        self,
        model: RennModel,
        hyper: Optional[HyperParams] = None,
        epochs: int = 30,
        seed: int = 0,
    ):
        self.model = model
        self.hyper = hyper or model.hyper
        self.epochs = epochs
        self.seed = seed
        self.params = [p for p in model.parameters() if p.requires_grad]
        self.optimizer = Adam(self.params, lr=self.hyper.lr)

        # Callbacks
        self._on_epoch_end: Optional[Callable[[int, float, Optional[float]], None]] = None

    def on_epoch_end(self, callback: Callable[[int, float, Optional[float]], None]) -> None:
        """Registra callback (epoch, loss média, score de validação ou None)."""
        self._on_epoch_end = callback

    def train_batch(self, batch: Sequence[Example]) -> float:
        """Um passo de otimização sobre um batch; retorna a loss média."""
        self.model.train()
        losses = [self.model.loss(ex, training=True) for ex in batch]
        loss = torch.stack(losses).mean()
        check_finite(loss, "training loss")
        loss.backward()
        torch.nn.utils.clip_grad_norm_(self.params, self.hyper.clip_norm)
        self.optimizer.step()
        return float(loss.item())

    def fit(
        self,
        train: Sequence[Example],
        dev: Optional[Sequence[Example]] = None,
    ) -> TrainResult:
        """
        Treina por self.epochs epochs.

        Args:
            train: Exemplos de treino
            dev: Exemplos de validação para escolher o melhor epoch (opcional)

        Returns:
            TrainResult com a curva de loss por epoch
        """
        if not train:
            raise ValueError("cannot train on an empty example list")
        rng = np.random.default_rng(self.seed)
        result = TrainResult()
        best_score = -1.0
        best_state = None
        size = self.hyper.batch_size

        logger.info(
            f"Training {self.model.variant.value}/{self.model.task.value} on {len(train)} examples "
            f"for {self.epochs} epochs"
        )
        for epoch in range(1, self.epochs + 1):
            order = rng.permutation(len(train))
            total = 0.0
            for start in range(0, len(order), size):
                batch = [train[i] for i in order[start:start + size]]
                total += self.train_batch(batch) * len(batch)
                logger.debug(f"epoch {epoch} batch {start // size + 1}")
            epoch_loss = total / len(train)
            result.loss_curve.append(epoch_loss)

            score = None
            if dev:
                score = selection_score(evaluate_model(self.model, dev))
                result.dev_scores.append(score)
                if score > best_score:
                    best_score = score
                    best_state = copy.deepcopy(self.model.state_dict())
                    result.best_epoch = epoch

            if self._on_epoch_end:
                self._on_epoch_end(epoch, epoch_loss, score)

        if best_state is not None:
            self.model.load_state_dict(best_state)
            logger.info(f"Restored best epoch {result.best_epoch} (dev score {best_score:.4f})")
        self.model.eval()
        return result
