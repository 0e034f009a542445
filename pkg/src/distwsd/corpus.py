"""Reading and writing dependency-annotated corpora.

The corpus format is a tab-separated file, one token per line, with the
columns ID, FORM, LEMMA, POS, HEAD, DEPREL (a strict subset of CoNLL-2009
column semantics).  Sentences are separated by a blank line; comment lines
start with ``#`` and ``# doc <id>`` marks a document boundary.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import IO, Iterable, Iterator, NamedTuple

from .errors import DistwsdError

# Coarse POS codes.  The four content classes are fixed; every other corpus
# tag is kept verbatim and never participates in content-word logic.
NOUN = "N"
VERB = "V"
ADJ = "Adj"
ADV = "Adv"
CONTENT_POS = frozenset({NOUN, VERB, ADJ, ADV})

# Fine-tag prefixes mapped to coarse codes, longest prefix first, matched
# case-insensitively.  Covers Penn-style tags (NN*, VB*, JJ*, RB*) as well
# as corpora that already use the coarse codes themselves.
DEFAULT_POS_TABLE: tuple[tuple[str, str], ...] = (
    ("ADJ", ADJ),
    ("ADV", ADV),
    ("N", NOUN),
    ("V", VERB),
    ("J", ADJ),
    ("R", ADV),
)

DEFAULT_DOC_ID = "d0"


def coarse_pos(fine: str, table: tuple[tuple[str, str], ...] = DEFAULT_POS_TABLE) -> str:
    """Map a fine POS label to one of the four content codes, or keep it verbatim."""
    upper = fine.upper()
    for prefix, code in table:
        if upper.startswith(prefix):
            return code
    return fine


class CorpusError(DistwsdError):
    """Base for corpus parsing failures."""


class MalformedLine(CorpusError):
    def __init__(self, line_no: int, reason: str):
        super().__init__(f"line {line_no}: {reason}")
        self.line_no = line_no
        self.reason = reason


class NonContiguousIds(CorpusError):
    pass


class HeadOutOfRange(CorpusError):
    pass


class WordKey(NamedTuple):
    """A word identity: lower-cased lemma plus coarse POS code."""

    lemma: str
    pos: str

    def render(self) -> str:
        return f"{self.lemma}_{self.pos}"

    def __str__(self) -> str:  # pragma: no cover - convenience
        return self.render()

    @property
    def is_content(self) -> bool:
        return self.pos in CONTENT_POS


def parse_word_key(text: str) -> WordKey:
    """Parse a ``lemma_POS`` string; the POS is everything after the last underscore."""
    lemma, sep, pos = text.rpartition("_")
    if not sep or not lemma or not pos:
        raise CorpusError(f"not a lemma_POS token: {text!r}")
    return WordKey(lemma.lower(), coarse_pos(pos))


@dataclass(frozen=True)
class Token:
    index: int  # 1-based position in the sentence
    surface: str
    key: WordKey
    head: int  # 0 = attached to the root
    deprel: str


@dataclass(frozen=True)
class Sentence:
    tokens: tuple[Token, ...]
    doc_id: str = DEFAULT_DOC_ID
    sentence_index: int = 0

    def __post_init__(self):
        n = len(self.tokens)
        for pos, tok in enumerate(self.tokens, start=1):
            if tok.index != pos:
                raise NonContiguousIds(
                    f"token ids must run 1..{n}; found {tok.index} at position {pos}"
                )
            if not 0 <= tok.head <= n or tok.head == tok.index:
                raise HeadOutOfRange(
                    f"token {tok.index} ({tok.surface!r}) has head {tok.head} "
                    f"outside 0..{n} excluding itself"
                )

    def __len__(self) -> int:
        return len(self.tokens)


class DepTriple(NamedTuple):
    """A dependency edge expressed over word keys."""

    governor: WordKey
    relation: str
    dependent: WordKey


def parse_corpus(
    source: IO[str] | Iterable[str],
    pos_table: tuple[tuple[str, str], ...] = DEFAULT_POS_TABLE,
) -> list[Sentence]:
    """Parse a corpus stream into sentences.

    ``source`` is any iterable of lines.  Raises :class:`MalformedLine`,
    :class:`NonContiguousIds` or :class:`HeadOutOfRange` with the offending
    line number in the message.
    """
    return list(iter_sentences(source, pos_table))


def iter_sentences(
    source: IO[str] | Iterable[str],
    pos_table: tuple[tuple[str, str], ...] = DEFAULT_POS_TABLE,
) -> Iterator[Sentence]:
    """Streaming version of :func:`parse_corpus`."""
    doc_id = DEFAULT_DOC_ID
    sentence_index = 0
    block: list[tuple[int, list[str]]] = []  # (line_no, columns)

    def flush() -> Sentence | None:
        nonlocal block, sentence_index
        if not block:
            return None
        sent = _build_sentence(block, doc_id, sentence_index, pos_table)
        sentence_index += 1
        block = []
        return sent

    for line_no, raw in enumerate(source, start=1):
        line = raw.rstrip("\n")
        if not line.strip():
            if (sent := flush()) is not None:
                yield sent
            continue
        if line.startswith("#"):
            parts = line[1:].split()
            if len(parts) >= 2 and parts[0] == "doc":
                if (sent := flush()) is not None:
                    yield sent
                doc_id = parts[1]
                sentence_index = 0
            continue
        cols = line.split("\t")
        if len(cols) != 6:
            raise MalformedLine(line_no, f"expected 6 tab-separated columns, got {len(cols)}")
        if any(not c for c in cols):
            raise MalformedLine(line_no, "empty column")
        block.append((line_no, cols))
    if (sent := flush()) is not None:
        yield sent


def _build_sentence(
    block: list[tuple[int, list[str]]],
    doc_id: str,
    sentence_index: int,
    pos_table: tuple[tuple[str, str], ...],
) -> Sentence:
    n = len(block)
    tokens = []
    for expected, (line_no, cols) in enumerate(block, start=1):
        ident, form, lemma, pos, head, deprel = cols
        try:
            ident = int(ident)
            head = int(head)
        except ValueError:
            raise MalformedLine(line_no, "ID and HEAD must be integers") from None
        if ident != expected:
            raise NonContiguousIds(
                f"line {line_no}: token ids must run 1..{n}, found {ident}"
            )
        if not 0 <= head <= n or head == ident:
            raise HeadOutOfRange(
                f"line {line_no}: head {head} outside 0..{n} excluding the token itself"
            )
        key = WordKey(lemma.lower(), coarse_pos(pos, pos_table))
        tokens.append(Token(index=ident, surface=form, key=key, head=head, deprel=deprel))
    return Sentence(tokens=tuple(tokens), doc_id=doc_id, sentence_index=sentence_index)


def serialize_corpus(sentences: Iterable[Sentence]) -> str:
    """Render sentences back to the tab-separated format.

    ``parse_corpus(serialize_corpus(s)) == s`` holds for well-formed input;
    the surface POS column carries the coarse code, which the prefix table
    maps back to itself.
    """
    out: list[str] = []
    current_doc: str | None = None
    for s in sentences:
        if s.doc_id != current_doc:
            out.append(f"# doc {s.doc_id}")
            current_doc = s.doc_id
        for t in s.tokens:
            out.append(
                "\t".join(
                    (str(t.index), t.surface, t.key.lemma, t.key.pos, str(t.head), t.deprel)
                )
            )
        out.append("")
    return "\n".join(out) + ("\n" if out else "")


def extract_triples(sentence: Sentence) -> list[DepTriple]:
    """One (governor, relation, dependent) triple per non-root token, in token order."""
    triples = []
    for t in sentence.tokens:
        if t.head == 0:
            continue
        gov = sentence.tokens[t.head - 1].key
        triples.append(DepTriple(governor=gov, relation=t.deprel, dependent=t.key))
    return triples


def content_tokens(sentence: Sentence) -> list[Token]:
    """Tokens whose POS is one of the four content classes, in order."""
    return [t for t in sentence.tokens if t.key.is_content]
