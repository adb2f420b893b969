"""
Word embeddings pré-treinados (formato texto: palavra v1 ... vd por linha)
"""
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from .vocab import Vocabulary

logger = logging.getLogger(__name__)

OOV_RANGE = 0.25
DEFAULT_DIM = 100


class EmbeddingFormatError(ValueError):
    """Dimensão inconsistente ou valor inválido no arquivo de embeddings."""

    def __init__(self, message: str, line: int):
        self.line = line
        super().__init__(f"line {line}: {message}")


@dataclass(frozen=True)
class EmbeddingTable:
    """Matriz [V x d] alinhada a um Vocabulary."""
    vocab: Vocabulary
    vectors: np.ndarray
    found: int = 0

    @property
    def dim(self) -> int:
        return int(self.vectors.shape[1])

    def vector(self, word: str) -> np.ndarray:
        return self.vectors[self.vocab.id(word)]

    @classmethod
    def random(cls, vocab: Vocabulary, dim: int = DEFAULT_DIM, seed: int = 0) -> "EmbeddingTable":
        """Tabela toda OOV: U(-0.25, 0.25) com seed."""
        rng = np.random.default_rng(seed)
        vectors = rng.uniform(-OOV_RANGE, OOV_RANGE, size=(len(vocab), dim))
        return cls(vocab=vocab, vectors=vectors, found=0)


def load_embeddings(
    path: str | Path,
    vocab: Vocabulary,
    dim: Optional[int] = None,
    seed: int = 0,
) -> EmbeddingTable:
    """
    Carrega vetores para as palavras do vocabulário.

    Palavras presentes no arquivo recebem o vetor do arquivo; as demais um
    vetor U(-0.25, 0.25) determinístico pela seed.

    Args:
        path: Arquivo texto de embeddings
        vocab: Vocabulário alvo
        dim: Dimensão esperada (inferida da primeira linha se None)
        seed: Seed dos vetores OOV

    Returns:
        EmbeddingTable
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"embedding file not found: {path}")

    file_vectors: dict[str, np.ndarray] = {}
    with open(path, encoding="utf-8") as f:
        for lineno, raw in enumerate(f, start=1):
            parts = raw.rstrip().split(" ")
            if len(parts) == 1 and not parts[0]:
                continue
            word, values = parts[0], parts[1:]
            if dim is None:
                dim = len(values)
                if dim == 0:
                    raise EmbeddingFormatError(f"no values for {word!r}", lineno)
            if len(values) != dim:
                raise EmbeddingFormatError(
                    f"expected {dim} values for {word!r}, got {len(values)}", lineno
                )
            if word not in vocab or word in file_vectors:
                continue
            try:
                file_vectors[word] = np.asarray([float(v) for v in values], dtype=np.float64)
            except ValueError as e:
                raise EmbeddingFormatError(f"non-numeric value for {word!r}", lineno) from e

    if dim is None:
        logger.warning(f"Embedding file {path} is empty; every word gets a random vector")
        dim = DEFAULT_DIM

    table = EmbeddingTable.random(vocab, dim, seed)
    for word, vec in file_vectors.items():
        table.vectors[vocab.id(word)] = vec
    table = EmbeddingTable(vocab=vocab, vectors=table.vectors, found=len(file_vectors))
    logger.info(f"Embeddings: {len(file_vectors)}/{len(vocab)} words found in {path} (dim={dim})")
    return table
