"""Builders shared by the test modules."""

from __future__ import annotations

import io
import json

from distwsd.corpus import Sentence, Token, parse_corpus, parse_word_key
from distwsd.inventory import SenseInventory, load_inventory


def make_sentence(
    words: str,
    heads: list[int] | None = None,
    deprels: list[str] | None = None,
    doc_id: str = "d0",
    sentence_index: int = 0,
) -> Sentence:
    """Build a sentence from space-separated lemma_POS tokens.

    Heads default to 0 (every token a root), which is enough for tests
    that never touch the dependency structure.
    """
    keys = [parse_word_key(w) for w in words.split()]
    n = len(keys)
    heads = heads or [0] * n
    deprels = deprels or ["_"] * n
    tokens = tuple(
        Token(index=i, surface=k.lemma, key=k, head=h, deprel=d)
        for i, (k, h, d) in enumerate(zip(keys, heads, deprels), start=1)
    )
    return Sentence(tokens=tokens, doc_id=doc_id, sentence_index=sentence_index)


def corpus_from(text: str) -> list[Sentence]:
    return parse_corpus(io.StringIO(text))


def make_inventory(records: list[dict]) -> SenseInventory:
    return load_inventory(io.StringIO("\n".join(json.dumps(r) for r in records)))


def sense_record(
    sense_id: str,
    lemmas: list[str],
    gloss: str = "",
    synonyms: list[str] | None = None,
    relations: list[tuple[str, str]] | None = None,
    connections: int | None = None,
    is_concept: bool = True,
) -> dict:
    record: dict = {"id": sense_id, "lemmas": lemmas, "gloss": gloss}
    if synonyms:
        record["synonyms"] = synonyms
    if relations:
        record["relations"] = [{"type": t, "target": g} for t, g in relations]
    if connections is not None:
        record["connections"] = connections
    if not is_concept:
        record["is_concept"] = False
    return record
