"""
Verificação de gradiente de todas as variantes

Instância fixa: 4 tokens, 3 labels, dimensões pequenas, float64, sem dropout.
"""
import logging
from typing import Iterable, Optional

import torch

from renn.types import HyperParams, Task, Variant
from renn.models import Example, LossWeights, TagVocabulary, build_model
from renn.nn import grad_check

logger = logging.getLogger(__name__)

TOLERANCE = 1e-4
TINY = HyperParams(embedding_dim=4, hidden_size=3, tag_dim=2, dropout=0.0, fusion_init=0.5)
VOCAB_SIZE = 6

INTENT_LABELS = ["airfare", "airline", "flight"]
SLOT_LABELS = ["O", "B-x", "I-x"]


def tiny_example(task: Task) -> tuple[Example, TagVocabulary]:
    """Exemplo de 4 tokens com tags, indicadores e alvos de atenção."""
    f64 = torch.float64
    token_ids = torch.tensor([1, 2, 3, 4])
    if task is Task.INTENT:
        ex = Example(
            token_ids=token_ids,
            gold=torch.tensor(0),
            intent_tags=("airfare", "airline"),
            slot_tags=((), (), (), ()),
            z=torch.tensor([1.0, 0.0, 1.0], dtype=f64),
            t_pos=torch.tensor([[0.5, 0.5, 0, 0], [0, 0, 0, 0], [0, 0, 1.0, 0]], dtype=f64),
            t_neg=torch.tensor([[0, 0, 0, 0], [0, 1.0, 0, 0], [0, 0, 0, 1.0]], dtype=f64),
        )
        return ex, TagVocabulary(tags=("airfare", "airline"))
    ex = Example(
        token_ids=token_ids,
        gold=torch.tensor([1, 2, 0, 0]),
        intent_tags=(),
        slot_tags=(("B-x",), ("I-x", "B-x"), (), ()),
        z=torch.tensor([[0, 1.0, 0], [0, 0, 1.0], [0, 0, 0], [1.0, 0, 0]], dtype=f64),
        t_pos=torch.tensor([[0, 0, 1.0, 0], [0, 0, 0.5, 0.5], [0, 0, 0, 0], [0, 0, 0, 0]], dtype=f64),
        t_neg=torch.tensor([[0, 0, 0, 1.0], [0, 0, 0, 0], [0, 0, 0, 0], [1.0, 0, 0, 0]], dtype=f64),
    )
    return ex, TagVocabulary(tags=("B-x", "I-x"))


def check_variant(variant: Variant, task: Task, seed: int = 0,
                  max_coords: Optional[int] = 25) -> float:
    """Erro relativo máximo da loss total de uma variante."""
    ex, tags = tiny_example(task)
    model = build_model(
        variant, task,
        vocab_size=VOCAB_SIZE,
        labels=INTENT_LABELS if task is Task.INTENT else SLOT_LABELS,
        tag_vocab=tags,
        hyper=TINY,
        loss_weights=LossWeights(1.0, 1.0),
        seed=seed,
        dtype=torch.float64,
    )
    return grad_check(lambda: model.loss(ex, training=False), list(model.parameters()),
                      max_coords=max_coords, seed=seed)


def check_all_variants(
    variants: Optional[Iterable[Variant]] = None,
    tasks: Iterable[Task] = (Task.INTENT, Task.SLOT),
    seed: int = 0,
) -> dict[str, float]:
    """
    Roda grad_check em cada par (tarefa, variante).

    Returns:
        {"intent/base": erro, ...}
    """
    variants = list(variants) if variants is not None else list(Variant)
    results = {}
    for task in tasks:
        for variant in variants:
            err = check_variant(variant, task, seed)
            results[f"{task.value}/{variant.value}"] = err
            logger.info(f"grad_check {task.value}/{variant.value}: {err:.2e}")
    return results
