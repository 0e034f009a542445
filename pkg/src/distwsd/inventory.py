"""Sense inventory: senses with glosses, synonyms and semantic relations.

The on-disk form is JSON lines, one sense per line:

    {"id": "bn:001n", "lemmas": ["cat_N"], "gloss": "a_DT domesticated_Adj feline_Adj mammal_N",
     "synonyms": ["feline"], "relations": [{"type": "hypernym", "target": "bn:002n"}],
     "connections": 17, "is_concept": true}

Glosses ship pre-lemmatized.  A gloss token with an underscore is treated
as ``lemma_POS`` and kept only when the POS maps to a content class; a bare
token is kept unless it is a stopword.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import IO, Iterable

from .corpus import WordKey, coarse_pos, parse_word_key
from .errors import DistwsdError

HYPERNYM = "hypernym"
HYPONYM = "hyponym"
MERONYM = "meronym"
HOLONYM = "holonym"
NAMED_RELATIONS = frozenset({HYPERNYM, HYPONYM, MERONYM, HOLONYM})

# Function words dropped from untagged gloss text.
STOPWORDS = frozenset(
    """a an the this that these those some any no each every either neither
    and or but nor so yet if then else when while because although though
    of in on at to from by with without for about against between into
    through during before after above below under over again further
    i you he she it we they me him her us them my your his its our their
    be am is are was were been being have has had having do does did doing
    will would shall should may might must can could not as than such only
    also very too more most much many few little own same other another all
    both half several enough there here where who whom whose which what why
    how one ones thing things etc""".split()
)


class InventoryError(DistwsdError):
    pass


class MalformedRecord(InventoryError):
    def __init__(self, line_no: int, reason: str):
        super().__init__(f"line {line_no}: {reason}")
        self.line_no = line_no


class DuplicateSenseId(InventoryError):
    def __init__(self, sense_id: str):
        super().__init__(f"duplicate sense id {sense_id!r}")
        self.sense_id = sense_id


@dataclass(frozen=True)
class Sense:
    id: str
    lemma_keys: frozenset[WordKey]
    gloss: str = ""
    synonyms: frozenset[str] = frozenset()
    relations: tuple[tuple[str, str], ...] = ()  # (relation type, target sense id)
    connections: int | None = None
    is_concept: bool = True


def gloss_bag(sense: Sense, *, with_pos: bool = False) -> frozenset[str]:
    """Content lemmas of the sense's gloss; the synonym set if the gloss is empty.

    With ``with_pos`` the tagged items keep their ``lemma_POS`` rendering so
    overlaps become POS-strict; synonyms and untagged items stay bare.
    """
    if not sense.gloss.strip():
        return frozenset(s.lower() for s in sense.synonyms)
    out = set()
    for token in sense.gloss.split():
        lemma, sep, pos = token.rpartition("_")
        if sep and lemma and pos:
            key = WordKey(lemma.lower(), coarse_pos(pos))
            if key.is_content:
                out.add(key.render() if with_pos else key.lemma)
        elif token.lower() not in STOPWORDS:
            out.add(token.lower())
    return frozenset(out)


def connection_count(sense: Sense) -> int:
    """The record's connection count, or the relation count when absent."""
    return sense.connections if sense.connections is not None else len(sense.relations)


class SenseInventory:
    """Senses by id plus a word-to-senses mapping in file order."""

    def __init__(self) -> None:
        self.senses: dict[str, Sense] = {}
        self.by_word: dict[WordKey, list[str]] = {}
        self.dangling: list[tuple[str, str]] = []  # (sense id, unresolved target)

    def add(self, sense: Sense) -> None:
        if sense.id in self.senses:
            raise DuplicateSenseId(sense.id)
        self.senses[sense.id] = sense
        for key in sorted(sense.lemma_keys):
            self.by_word.setdefault(key, []).append(sense.id)

    def _check_relations(self) -> None:
        self.dangling = [
            (s.id, target)
            for s in self.senses.values()
            for _, target in s.relations
            if target not in self.senses
        ]

    def senses_of(self, word: WordKey, *, include_entities: bool = False) -> list[Sense]:
        """All senses listing the word, in file order; named entities are
        excluded unless requested."""
        out = [self.senses[sid] for sid in self.by_word.get(word, ())]
        if not include_entities:
            out = [s for s in out if s.is_concept]
        return out

    def is_polysemous(self, word: WordKey) -> bool:
        return len(self.senses_of(word)) >= 2

    def related_senses(self, sense: Sense) -> set[Sense]:
        """Senses reachable by one relation hop; dangling targets skipped."""
        return {
            self.senses[target]
            for _, target in sense.relations
            if target in self.senses
        }


def load_inventory(source: IO[str] | Iterable[str]) -> SenseInventory:
    """Parse JSON-lines senses; dangling relation targets are collected on
    ``inv.dangling`` rather than failing the load."""
    inv = SenseInventory()
    for line_no, raw in enumerate(source, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            record = json.loads(line)
        except json.JSONDecodeError as e:
            raise MalformedRecord(line_no, f"bad JSON: {e.msg}") from None
        if not isinstance(record, dict):
            raise MalformedRecord(line_no, "record is not an object")
        try:
            sense = _sense_from_record(record)
        except (KeyError, TypeError, ValueError, DistwsdError) as e:
            raise MalformedRecord(line_no, str(e)) from None
        inv.add(sense)
    inv._check_relations()
    return inv


def _sense_from_record(record: dict) -> Sense:
    sense_id = record["id"]
    lemmas = record["lemmas"]
    if not isinstance(sense_id, str) or not sense_id:
        raise ValueError("id must be a non-empty string")
    if not isinstance(lemmas, list) or not lemmas:
        raise ValueError("lemmas must be a non-empty list")
    relations = tuple(
        (_canonical_relation(rel["type"]), rel["target"])
        for rel in record.get("relations", ())
    )
    connections = record.get("connections")
    if connections is not None and (not isinstance(connections, int) or connections < 0):
        raise ValueError("connections must be a non-negative integer")
    return Sense(
        id=sense_id,
        lemma_keys=frozenset(parse_word_key(item) for item in lemmas),
        gloss=record.get("gloss", ""),
        synonyms=frozenset(str(s).lower() for s in record.get("synonyms", ())),
        relations=relations,
        connections=connections,
        is_concept=bool(record.get("is_concept", True)),
    )


def _canonical_relation(label: str) -> str:
    lowered = str(label).lower()
    return lowered if lowered in NAMED_RELATIONS else str(label)


def dump_inventory(inv: SenseInventory, sink: IO[str]) -> None:
    """Write the inventory back out as JSON lines, in load order."""
    for sense in inv.senses.values():
        record = {
            "id": sense.id,
            "lemmas": [k.render() for k in sorted(sense.lemma_keys)],
            "gloss": sense.gloss,
            "synonyms": sorted(sense.synonyms),
            "relations": [{"type": t, "target": target} for t, target in sense.relations],
        }
        if sense.connections is not None:
            record["connections"] = sense.connections
        if not sense.is_concept:
            record["is_concept"] = False
        sink.write(json.dumps(record, ensure_ascii=False) + "\n")
