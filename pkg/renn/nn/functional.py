"""
Operações numéricas básicas: softmax estável, cross-entropy, dropout.
"""
import random
from typing import Optional

import numpy as np
import torch

LOG_CLAMP = 1e-12


class NumericalError(FloatingPointError):
    """NaN ou Inf encontrado em um tensor."""


def check_finite(x: torch.Tensor, what: str) -> torch.Tensor:
    """Levanta NumericalError se x contém NaN/Inf; retorna x."""
    if not torch.isfinite(x).all():
        raise NumericalError(f"non-finite values in {what}")
    return x


def softmax(logits: torch.Tensor, dim: int = -1) -> torch.Tensor:
    """Softmax com subtração do máximo."""
    shifted = logits - logits.max(dim=dim, keepdim=True).values.detach()
    e = torch.exp(shifted)
    return e / e.sum(dim=dim, keepdim=True)


def log_softmax(logits: torch.Tensor, dim: int = -1) -> torch.Tensor:
    shifted = logits - logits.max(dim=dim, keepdim=True).values.detach()
    return shifted - torch.log(torch.exp(shifted).sum(dim=dim, keepdim=True))


def cross_entropy(probs: torch.Tensor, gold: torch.Tensor | int) -> torch.Tensor:
    """
    -log p_gold (média quando probs é [n x K]).

    Args:
        probs: [K] ou [n x K]
        gold: índice ou [n] índices
    """
    if probs.dim() == 1:
        return -torch.log(probs[gold].clamp_min(LOG_CLAMP))
    gold = torch.as_tensor(gold, dtype=torch.long)
    picked = probs.gather(1, gold.view(-1, 1)).squeeze(1)
    return -torch.log(picked.clamp_min(LOG_CLAMP)).mean()


def nll_from_logits(logits: torch.Tensor, gold: torch.Tensor | int) -> torch.Tensor:
    """Cross-entropy calculada direto dos logits (média por linha)."""
    logp = log_softmax(logits)
    if logits.dim() == 1:
        return -logp[gold]
    gold = torch.as_tensor(gold, dtype=torch.long)
    return -logp.gather(1, gold.view(-1, 1)).squeeze(1).mean()


def dropout(
    x: torch.Tensor,
    p: float = 0.5,
    training: bool = True,
    generator: Optional[torch.Generator] = None,
) -> torch.Tensor:
    """Inverted dropout; identidade em modo de avaliação ou com p = 0."""
    if not 0.0 <= p < 1.0:
        raise ValueError(f"dropout probability must be in [0, 1), got {p}")
    if not training or p == 0.0:
        return x
    keep = torch.empty_like(x).bernoulli_(1.0 - p, generator=generator)
    return x * keep / (1.0 - p)


def seed_everything(seed: int) -> torch.Generator:
    """Fixa as seeds globais e retorna um Generator dedicado."""
    random.seed(seed)
    np.random.seed(seed)
    torch.manual_seed(seed)
    gen = torch.Generator()
    gen.manual_seed(seed)
    return gen
