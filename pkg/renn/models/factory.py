"""
Construção dos modelos por variante

    base      BiLSTM + atenção (intent) / softmax por token (slot)
    feat      REtags como features de entrada
    logit     REtags somados aos logits (w_k z_k)
    two*      atenção two-side; two_posi/two_neg/two_both adicionam as losses de atenção
    mixed     two_both + feat + logit
"""
import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np
import torch
from torch import nn

from ..types import HyperParams, Task, Variant
from ..nn.encoder import BiLSTMEncoder
from ..nn.functional import dropout, nll_from_logits
from .features import Example, TagVocabulary
from .fusion import LossWeights, OutputFusion, TagEmbedding, attention_loss, slot_forward_feat, total_loss
from .heads import IntentBaseHead, SlotBaseHead, SlotTwoSideHead, TwoSideIntentHead

logger = logging.getLogger(__name__)


@dataclass
class ModelOutput:
    """Saída do forward: logits e atenções (None quando a variante não tem)."""
    logits: torch.Tensor
    alpha_pos: Optional[torch.Tensor] = None
    alpha_neg: Optional[torch.Tensor] = None


class RennModel(nn.Module):
    """
    Parte comum aos modelos de intent e slot.

    Ordem de criação dos parâmetros: embeddings, tags, encoder, cabeça,
    fusão de saída. A fusão não consome o gerador aleatório, então uma
    variante logit começa com os mesmos pesos que a base com a mesma seed.
    """

    task: Task

    def __init__(
        self,
        variant: Variant,
        vocab_size: int,
        labels: list[str],
        tag_vocab: Optional[TagVocabulary] = None,
        hyper: Optional[HyperParams] = None,
        embeddings: Optional[np.ndarray] = None,
        loss_weights: Optional[LossWeights] = None,
        seed: int = 0,
        dtype: torch.dtype = torch.float32,
    ):
        super().__init__()
        self.variant = Variant(variant)
        self.labels = list(labels)
        self.hyper = hyper or HyperParams()
        self.dtype = dtype
        self.tag_vocab = tag_vocab or TagVocabulary(tags=())

        weights = loss_weights or LossWeights()
        self.loss_weights = LossWeights(
            beta_p=weights.beta_p if self.variant.positive_loss else 0.0,
            beta_n=weights.beta_n if self.variant.negative_loss else 0.0,
        )

        gen = torch.Generator()
        gen.manual_seed(seed)
        self.dropout_generator = torch.Generator()
        self.dropout_generator.manual_seed(seed + 1)

        if embeddings is not None:
            if embeddings.shape[0] != vocab_size:
                raise ValueError(
                    f"embedding table has {embeddings.shape[0]} rows for a vocabulary of {vocab_size}"
                )
            self.embedding = nn.Embedding.from_pretrained(
                torch.as_tensor(embeddings, dtype=dtype), freeze=False
            )
        else:
            table = torch.empty(vocab_size, self.hyper.embedding_dim, dtype=dtype)
            table.uniform_(-0.25, 0.25, generator=gen)
            self.embedding = nn.Embedding.from_pretrained(table, freeze=False)
        emb_dim = self.embedding.embedding_dim

        self.tag_embedding: Optional[TagEmbedding] = None
        if self.variant.uses_feat:
            self.tag_embedding = TagEmbedding(self.tag_vocab.tags, self.hyper.tag_dim, gen, dtype)

        self._build_layers(emb_dim, gen)

        self.fusion: Optional[OutputFusion] = None
        if self.variant.uses_logit:
            self.fusion = OutputFusion(
                len(self.labels), self.hyper.fusion_init, self.hyper.freeze_fusion, dtype
            )

    def _build_layers(self, emb_dim: int, gen: torch.Generator) -> None:
        raise NotImplementedError

    def _drop(self, x: torch.Tensor, training: bool) -> torch.Tensor:
        return dropout(x, self.hyper.dropout, training, self.dropout_generator)

    def encode(self, ex: Example, training: bool) -> torch.Tensor:
        x = self.embedding(ex.token_ids)
        if self.task is Task.SLOT and self.tag_embedding is not None:
            x = slot_forward_feat(x, ex.slot_tags, self.tag_embedding)
        x = self._drop(x, training)
        return self._drop(self.encoder(x), training)

    def classification_loss(self, ex: Example, out: ModelOutput) -> torch.Tensor:
        if (ex.gold < 0).any():
            raise ValueError("training example has a gold label outside the model's label set")
        return nll_from_logits(out.logits, ex.gold)

    def loss(self, ex: Example, out: Optional[ModelOutput] = None, training: bool = True) -> torch.Tensor:
        """Loss total (classificação + atenção ponderada por β)."""
        if out is None:
            out = self.forward(ex, training=training)
        loss_c = self.classification_loss(ex, out)
        att_p = att_n = None
        if self.loss_weights.beta_p > 0 and out.alpha_pos is not None:
            att_p = attention_loss(out.alpha_pos, ex.t_pos)
        if self.loss_weights.beta_n > 0 and out.alpha_neg is not None:
            att_n = attention_loss(out.alpha_neg, ex.t_neg)
        return total_loss(loss_c, att_p, att_n, self.loss_weights)

    @torch.no_grad()
    def predict(self, ex: Example):
        """Índice do label (intent) ou lista de índices (slot)."""
        out = self.forward(ex, training=False)
        pred = out.logits.argmax(dim=-1)
        return pred.tolist()

    def predict_labels(self, ex: Example):
        pred = self.predict(ex)
        if isinstance(pred, list):
            return [self.labels[i] for i in pred]
        return self.labels[pred]

    def describe(self) -> dict:
        trainable = sum(p.numel() for p in self.parameters() if p.requires_grad)
        return {
            "task": self.task.value,
            "variant": self.variant.value,
            "labels": len(self.labels),
            "trainable_params": trainable,
        }


class IntentModel(RennModel):
    """Classificador de intent (uma predição por sentença)."""

    task = Task.INTENT

    def _build_layers(self, emb_dim: int, gen: torch.Generator) -> None:
        H = self.hyper.hidden_size
        self.encoder = BiLSTMEncoder(emb_dim, H, gen, self.dtype)
        extra = self.hyper.tag_dim if self.variant.uses_feat else 0
        if self.variant.two_side:
            self.head = TwoSideIntentHead(2 * H, len(self.labels), extra, gen, self.dtype)
        else:
            self.head = IntentBaseHead(2 * H, len(self.labels), extra, gen, self.dtype)

    def forward(self, ex: Example, training: bool = False) -> ModelOutput:
        enc = self.encode(ex, training)
        extra = None
        if self.tag_embedding is not None:
            extra = self.tag_embedding.intent_vector(ex.intent_tags)
        if self.variant.two_side:
            logits, alpha_p, alpha_n = self.head(enc, extra)
        else:
            logits, alpha = self.head(enc, extra)
            alpha_p, alpha_n = alpha.unsqueeze(0), None
        if self.fusion is not None:
            logits = self.fusion(logits, ex.z)
        return ModelOutput(logits=logits, alpha_pos=alpha_p, alpha_neg=alpha_n)


class SlotModel(RennModel):
    """Rotulador de sequência (uma predição por token)."""

    task = Task.SLOT

    def _build_layers(self, emb_dim: int, gen: torch.Generator) -> None:
        H = self.hyper.hidden_size
        in_dim = emb_dim + (self.hyper.tag_dim if self.variant.uses_feat else 0)
        self.encoder = BiLSTMEncoder(in_dim, H, gen, self.dtype)
        if self.variant.two_side:
            self.head = SlotTwoSideHead(2 * H, len(self.labels), gen, self.dtype)
        else:
            self.head = SlotBaseHead(2 * H, len(self.labels), gen, self.dtype)

    def forward(self, ex: Example, training: bool = False) -> ModelOutput:
        enc = self.encode(ex, training)
        alpha_p = alpha_n = None
        if self.variant.two_side:
            logits, alpha_p, alpha_n = self.head(enc)
        else:
            logits = self.head(enc)
        if self.fusion is not None:
            logits = self.fusion(logits, ex.z)
        return ModelOutput(logits=logits, alpha_pos=alpha_p, alpha_neg=alpha_n)


def build_model(
    variant: Variant | str,
    task: Task | str,
    *,
    vocab_size: int,
    labels: list[str],
    tag_vocab: Optional[TagVocabulary] = None,
    hyper: Optional[HyperParams] = None,
    embeddings: Optional[np.ndarray] = None,
    loss_weights: Optional[LossWeights] = None,
    seed: int = 0,
    dtype: torch.dtype = torch.float32,
) -> RennModel:
    """
    Cria o modelo de uma variante para uma tarefa.

    Args:
        variant: base, feat, logit, two, two_posi, two_neg, two_both ou mixed
        task: intent ou slot
        vocab_size: Tamanho do vocabulário de tokens
        labels: Labels de saída (intents ou labels BIO)
        tag_vocab: Tags de entrada (obrigatório para feat/mixed)
        hyper: Hiper-parâmetros
        embeddings: Matriz [V x d] inicial (None = aleatória)
        loss_weights: β_p e β_n (ignorados pelas variantes sem a loss correspondente)
        seed: Seed da inicialização e do dropout
        dtype: float32 para treino, float64 para verificação de gradiente

    Returns:
        IntentModel ou SlotModel
    """
    try:
        variant = Variant(variant)
        task = Task(task)
    except ValueError as e:
        raise ValueError(f"invalid model combination: {e}") from e
    if not labels:
        raise ValueError("model needs at least one output label")
    if variant.uses_feat and tag_vocab is None:
        raise ValueError(f"variant {variant.value} needs a tag vocabulary")

    cls = IntentModel if task is Task.INTENT else SlotModel
    model = cls(
        variant=variant,
        vocab_size=vocab_size,
        labels=labels,
        tag_vocab=tag_vocab,
        hyper=hyper,
        embeddings=embeddings,
        loss_weights=loss_weights,
        seed=seed,
        dtype=dtype,
    )
    logger.debug(f"Built model: {model.describe()}")
    return model
