"""
Corpus - datasets, vocabulário, embeddings e splits few-shot
"""
from .dataset import (
    DatasetFormatError,
    bio_error,
    dataset_from_sentences,
    load_dataset,
    tokenize,
    write_dataset,
)
from .vocab import UNK, Vocabulary
from .embeddings import EmbeddingFormatError, EmbeddingTable, load_embeddings
from .splits import (
    apply_manifest,
    dev_slice,
    few_shot_split_intent,
    few_shot_split_slot,
    label_mention_counts,
    partial_few_shot_intent,
    read_manifest,
    slot_mentions,
    write_manifest,
)

__all__ = [
    "DatasetFormatError",
    "bio_error",
    "dataset_from_sentences",
    "load_dataset",
    "tokenize",
    "write_dataset",
    "UNK",
    "Vocabulary",
    "EmbeddingFormatError",
    "EmbeddingTable",
    "load_embeddings",
    "apply_manifest",
    "dev_slice",
    "few_shot_split_intent",
    "few_shot_split_slot",
    "label_mention_counts",
    "partial_few_shot_intent",
    "read_manifest",
    "slot_mentions",
    "write_manifest",
]
