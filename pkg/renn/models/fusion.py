"""
Fusão com regras

- Entrada: embeddings de REtag (TagEmbedding) concatenados à entrada
- Módulo: loss de atenção guiando α para as palavras-pista
- Saída: logit_k = logit'_k + w_k z_k (OutputFusion)
"""
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import torch
from torch import nn

from ..types import NONE_TAG
from ..nn.functional import LOG_CLAMP


@dataclass
class LossWeights:
    """Pesos β_p e β_n das losses de atenção."""
    beta_p: float = 1.0
    beta_n: float = 1.0

    def __post_init__(self):
        if self.beta_p < 0 or self.beta_n < 0:
            raise ValueError(f"attention loss weights must be >= 0, got {self.beta_p}, {self.beta_n}")


class TagEmbedding(nn.Module):
    """
    Tabela fechada de embeddings de REtag; a linha 0 é a tag NONE.

    Tags desconhecidas levantam ValueError.
    """

    def __init__(self, tags: Sequence[str], dim: int,
                 generator: Optional[torch.Generator] = None, dtype: torch.dtype = torch.float32):
        super().__init__()
        self.tags = [NONE_TAG] + [t for t in tags if t != NONE_TAG]
        self.index = {t: i for i, t in enumerate(self.tags)}
        self.dim = dim
        table = torch.empty(len(self.tags), dim, dtype=dtype)
        table.uniform_(-0.25, 0.25, generator=generator)
        self.table = nn.Parameter(table)

    def ids(self, tags: Iterable[str]) -> list[int]:
        out = []
        for tag in tags:
            if tag not in self.index:
                raise ValueError(f"unknown REtag {tag!r}")
            out.append(self.index[tag])
        return out

    def aggregate_ids(self, ids: Sequence[int]) -> torch.Tensor:
        """Média das linhas; a linha NONE quando vazio."""
        if not ids:
            return self.table[0]
        return self.table[list(ids)].mean(dim=0)

    def aggregate(self, tags: Iterable[str]) -> torch.Tensor:
        return self.aggregate_ids(self.ids(tags))

    def intent_vector(self, tags: Iterable[str]) -> torch.Tensor:
        """Tags de intent: duplicatas colapsadas antes da média."""
        return self.aggregate(sorted(set(tags)))

    def token_matrix(self, tag_multisets: Sequence[Sequence[str]]) -> torch.Tensor:
        """[n x d_t]; cada token com a média do seu multiconjunto de tags BIO."""
        return torch.stack([self.aggregate(tags) for tags in tag_multisets])


def slot_forward_feat(
    embeddings: torch.Tensor,
    tag_multisets: Sequence[Sequence[str]],
    params: TagEmbedding,
) -> torch.Tensor:
    """Entrada do encoder: [w_i; f_i] com f_i a média das tags BIO do token i."""
    if len(tag_multisets) != embeddings.shape[0]:
        raise ValueError(
            f"{len(tag_multisets)} tag sets for {embeddings.shape[0]} tokens"
        )
    return torch.cat([embeddings, params.token_matrix(tag_multisets)], dim=1)


class OutputFusion(nn.Module):
    """Um peso escalar por label alvo (opcionalmente congelado)."""

    def __init__(self, n_labels: int, init: float = 1.0, frozen: bool = False,
                 dtype: torch.dtype = torch.float32):
        super().__init__()
        self.weight = nn.Parameter(
            torch.full((n_labels,), float(init), dtype=dtype), requires_grad=not frozen
        )

    def forward(self, logits: torch.Tensor, z: torch.Tensor) -> torch.Tensor:
        return fuse_logits(logits, z, self)


def fuse_logits(logits: torch.Tensor, z: torch.Tensor, params: OutputFusion) -> torch.Tensor:
    """logit_k + w_k apenas onde z_k = 1 (por sentença [K] ou por token [n x K])."""
    if logits.shape != z.shape:
        raise ValueError(f"logits {list(logits.shape)} and z {list(z.shape)} differ in shape")
    return torch.where(z > 0, logits + params.weight, logits)


def attention_loss(alpha: torch.Tensor, t: torch.Tensor) -> torch.Tensor:
    """
    -Σ_k Σ_i t_ki log α_ki (log com clamp em 1e-12).

    Linhas de t zeradas contribuem 0.
    """
    if alpha.shape != t.shape:
        raise ValueError(f"attention {list(alpha.shape)} and target {list(t.shape)} differ in shape")
    return -(t * torch.log(alpha.clamp_min(LOG_CLAMP))).sum()


def total_loss(
    loss_c: torch.Tensor,
    loss_att_p: Optional[torch.Tensor],
    loss_att_n: Optional[torch.Tensor],
    weights: LossWeights,
) -> torch.Tensor:
    """loss_c + β_p·loss_att_p + β_n·loss_att_n (termos None ou com β = 0 são omitidos)."""
    loss = loss_c
    if loss_att_p is not None and weights.beta_p > 0:
        loss = loss + weights.beta_p * loss_att_p
    if loss_att_n is not None and weights.beta_n > 0:
        loss = loss + weights.beta_n * loss_att_n
    return loss
