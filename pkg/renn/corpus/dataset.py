"""
Leitura e escrita de datasets

Formato (um bloco por sentença, separados por linha em branco):

    flights<TAB>O
    from<TAB>O
    boston<TAB>B-fromloc.city
    #intent<TAB>flight
"""
import logging
from pathlib import Path
from typing import Iterable

from ..types import Dataset, Sentence, SplitKind, OUTSIDE

logger = logging.getLogger(__name__)

INTENT_MARKER = "#intent"


class DatasetFormatError(ValueError):
    """Erro de formato no arquivo de dataset (com número de linha)."""

    def __init__(self, message: str, line: int):
        self.line = line
        super().__init__(f"line {line}: {message}")


def tokenize(raw: str) -> list[str]:
    """
    Tokenização: lower-case, split por espaço, separa o possessivo 's.

    "Miami's" -> ["miami", "'s"]; "'s" sozinho fica como está.
    """
    tokens = []
    for tok in raw.lower().split():
        if tok.endswith("'s") and len(tok) > 2:
            tokens.extend([tok[:-2], "'s"])
        else:
            tokens.append(tok)
    return tokens


def bio_error(slots: Iterable[str]) -> tuple[int, str] | None:
    """
    Primeira transição BIO inválida.

    Returns:
        (posição, mensagem) ou None se a sequência é válida
    """
    prev = OUTSIDE
    for i, label in enumerate(slots):
        if label != OUTSIDE:
            if len(label) < 3 or label[:2] not in ("B-", "I-"):
                return i, f"label {label!r} is not O, B-x or I-x"
            if label.startswith("I-") and prev[2:] != label[2:]:
                return i, f"{label} does not continue a {label[2:]} span (previous: {prev})"
        prev = label
    return None


def _build(sentences: list[Sentence], split: SplitKind) -> Dataset:
    intents = sorted({s.intent for s in sentences})
    slots = sorted({label for s in sentences for label in s.slots} | {OUTSIDE})
    return Dataset(
        sentences=tuple(sentences),
        intent_labels=tuple(intents),
        slot_labels=tuple(slots),
        split=split,
    )


def load_dataset(path: str | Path, split: SplitKind = SplitKind.TRAIN) -> Dataset:
    """
    Carrega um dataset no formato token<TAB>slot / #intent<TAB>label.

    Args:
        path: Arquivo UTF-8
        split: Papel do dataset (train/test)

    Returns:
        Dataset com ids sequenciais a partir de 0
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"dataset file not found: {path}")

    sentences: list[Sentence] = []
    tokens: list[str] = []
    slots: list[str] = []
    lines: list[int] = []
    intent: str | None = None
    block_start = 0

    def flush(lineno: int):
        nonlocal tokens, slots, lines, intent
        if not tokens and intent is None:
            return
        if not tokens:
            raise DatasetFormatError("intent line without tokens", block_start)
        if intent is None:
            raise DatasetFormatError("sentence block without an #intent line", lineno)
        err = bio_error(slots)
        if err is not None:
            pos, msg = err
            raise DatasetFormatError(msg, lines[pos])
        sentences.append(Sentence(
            tokens=tuple(tokens), intent=intent, slots=tuple(slots), sid=len(sentences),
        ))
        tokens, slots, lines, intent = [], [], [], None

    with open(path, encoding="utf-8") as f:
        lineno = 0
        for lineno, raw in enumerate(f, start=1):
            line = raw.rstrip("\n").rstrip("\r")
            if not line.strip():
                flush(lineno)
                continue
            if not tokens and intent is None:
                block_start = lineno
            parts = line.split("\t")
            if parts[0] == INTENT_MARKER:
                if len(parts) != 2 or not parts[1]:
                    raise DatasetFormatError("expected '#intent<TAB>label'", lineno)
                if intent is not None:
                    raise DatasetFormatError("duplicate #intent line", lineno)
                intent = parts[1]
                continue
            if intent is not None:
                raise DatasetFormatError("token line after #intent line", lineno)
            if len(parts) != 2 or not parts[0] or not parts[1]:
                raise DatasetFormatError(
                    f"expected 'token<TAB>slot', got {len(parts)} column(s)", lineno
                )
            tokens.append(parts[0])
            slots.append(parts[1])
            lines.append(lineno)
        flush(lineno + 1)

    ds = _build(sentences, split)
    logger.info(
        f"Loaded {len(ds)} sentences from {path} "
        f"({len(ds.intent_labels)} intents, {len(ds.slot_labels)} slot labels)"
    )
    return ds


def dataset_from_sentences(sentences: list[Sentence], split: SplitKind = SplitKind.TRAIN) -> Dataset:
    """Dataset a partir de sentenças em memória (ids renumerados)."""
    renumbered = [
        Sentence(tokens=s.tokens, intent=s.intent, slots=s.slots, sid=i)
        for i, s in enumerate(sentences)
    ]
    for s in renumbered:
        err = bio_error(s.slots)
        if err is not None:
            raise ValueError(f"sentence {s.sid}: {err[1]}")
    return _build(renumbered, split)


def write_dataset(ds: Dataset, path: str | Path) -> None:
    """Escreve um Dataset no formato lido por load_dataset."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    blocks = []
    for s in ds.sentences:
        lines = [f"{tok}\t{slot}" for tok, slot in zip(s.tokens, s.slots)]
        lines.append(f"{INTENT_MARKER}\t{s.intent}")
        blocks.append("\n".join(lines))
    path.write_text("\n\n".join(blocks) + "\n", encoding="utf-8")
