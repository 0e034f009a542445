"""Indexing of dependency triples into per-word syntactic feature sets.

Each triple (g, r, d) gives the dependent d the feature (r, as-dependent, g)
and the governor g the feature (r, as-governor, d).  The index keeps, per
word, the set of features it carries; carrier counts and per-POS vocabulary
sizes are derived from those sets and drive the feature probabilities used
by the Lin similarity measure.
"""

from __future__ import annotations

import hashlib
import math
from typing import IO, Iterable, NamedTuple

from .corpus import DepTriple, Sentence, WordKey, extract_triples
from .errors import DistwsdError

AS_DEPENDENT = "dep"
AS_GOVERNOR = "gov"

MAGIC = "LXDI"
FORMAT_VERSION = 1


class UnknownFeature(DistwsdError):
    pass


class CorruptIndex(DistwsdError):
    pass


class SyntacticFeature(NamedTuple):
    """A feature held by a word: relation, the word's role in it, and the partner."""

    relation: str
    role: str  # AS_DEPENDENT or AS_GOVERNOR
    partner: WordKey

    def render(self) -> str:
        mark = "" if self.role == AS_DEPENDENT else "~"
        return f"{self.relation}{mark}({self.partner.render()})"


class TripleIndex:
    """Feature sets per word plus the counts needed for P(f | pos).

    Mutable while being built; treat as immutable once handed out.  Carrier
    and vocabulary counts are recomputed from the feature sets, so they are
    always consistent with each other.
    """

    def __init__(self) -> None:
        self.feature_sets: dict[WordKey, set[SyntacticFeature]] = {}
        self.triple_total = 0
        self._carriers: dict[tuple[str, SyntacticFeature], int] | None = None
        self._vocab: dict[str, int] | None = None

    # -- construction -----------------------------------------------------

    def add_triple(self, triple: DepTriple) -> None:
        g, r, d = triple
        self.feature_sets.setdefault(d, set()).add(SyntacticFeature(r, AS_DEPENDENT, g))
        self.feature_sets.setdefault(g, set()).add(SyntacticFeature(r, AS_GOVERNOR, d))
        self.triple_total += 1
        self._carriers = None
        self._vocab = None

    def add_dependent_feature(self, triple: DepTriple) -> None:
        """Dependent-direction variant of :meth:`add_triple`."""
        g, r, d = triple
        self.feature_sets.setdefault(d, set()).add(SyntacticFeature(r, AS_DEPENDENT, g))
        self.triple_total += 1
        self._carriers = None
        self._vocab = None

    def merge(self, other: "TripleIndex") -> None:
        """Fold another index into this one (set union per word)."""
        for word, feats in other.feature_sets.items():
            self.feature_sets.setdefault(word, set()).update(feats)
        self.triple_total += other.triple_total
        self._carriers = None
        self._vocab = None

    def _count(self) -> None:
        carriers: dict[tuple[str, SyntacticFeature], int] = {}
        vocab: dict[str, int] = {}
        for word, feats in self.feature_sets.items():
            vocab[word.pos] = vocab.get(word.pos, 0) + 1
            for f in feats:
                key = (word.pos, f)
                carriers[key] = carriers.get(key, 0) + 1
        self._carriers = carriers
        self._vocab = vocab

    @property
    def pos_feature_carriers(self) -> dict[tuple[str, SyntacticFeature], int]:
        if self._carriers is None:
            self._count()
        return self._carriers

    @property
    def pos_vocab_size(self) -> dict[str, int]:
        if self._vocab is None:
            self._count()
        return self._vocab

    # -- queries ----------------------------------------------------------

    def words(self) -> Iterable[WordKey]:
        return self.feature_sets.keys()

    def features_of(self, word: WordKey) -> set[SyntacticFeature]:
        """F(word); the empty set if the word was never indexed."""
        return set(self.feature_sets.get(word, ()))

    def feature_probability(self, feature: SyntacticFeature, pos: str) -> float:
        """Share of indexed words of class ``pos`` carrying ``feature``."""
        carriers = self.pos_feature_carriers.get((pos, feature), 0)
        if carriers == 0:
            raise UnknownFeature(f"no {pos} word carries {feature.render()}")
        return carriers / self.pos_vocab_size[pos]

    def information(self, features: Iterable[SyntacticFeature], pos: str) -> float:
        """Information content of a feature set: -sum of ln P(f | pos).

        Summed in sorted feature order so the value does not depend on set
        iteration order.
        """
        total = 0.0
        for f in sorted(features):
            total -= math.log(self.feature_probability(f, pos))
        return total

    # -- persistence ------------------------------------------------------

    def _body_lines(self) -> list[str]:
        lines = [f"triple_total\t{self.triple_total}"]
        for word in sorted(self.feature_sets):
            feats = sorted(self.feature_sets[word])
            lines.append(f"word\t{word.lemma}\t{word.pos}\t{len(feats)}")
            for f in feats:
                lines.append(
                    f"feat\t{f.relation}\t{f.role}\t{f.partner.lemma}\t{f.partner.pos}"
                )
        return lines

    def save(self, sink: IO[str]) -> None:
        """Write the index; same content always produces identical bytes."""
        body = "\n".join(self._body_lines()) + "\n"
        digest = hashlib.sha256(body.encode("utf-8")).hexdigest()
        sink.write(f"{MAGIC}\t{FORMAT_VERSION}\n")
        sink.write(f"sha256\t{digest}\n")
        sink.write(body)

    @classmethod
    def load(cls, source: IO[str]) -> "TripleIndex":
        text = source.read()
        lines = text.split("\n")
        if len(lines) < 3:
            raise CorruptIndex("file too short")
        magic = lines[0].split("\t")
        if magic[0] != MAGIC:
            raise CorruptIndex(f"bad magic {lines[0]!r}")
        if len(magic) != 2 or magic[1] != str(FORMAT_VERSION):
            raise CorruptIndex(f"unsupported format version {lines[0]!r}")
        check = lines[1].split("\t")
        if len(check) != 2 or check[0] != "sha256":
            raise CorruptIndex("missing checksum line")
        body = "\n".join(lines[2:])
        if hashlib.sha256(body.encode("utf-8")).hexdigest() != check[1]:
            raise CorruptIndex("checksum mismatch (truncated or altered file)")

        ix = cls()
        current: set[SyntacticFeature] | None = None
        remaining = 0
        for line in body.split("\n"):
            if not line:
                continue
            cols = line.split("\t")
            try:
                if cols[0] == "triple_total" and len(cols) == 2:
                    ix.triple_total = int(cols[1])
                    continue
            except ValueError:
                raise CorruptIndex(f"bad count in {line!r}") from None
            if cols[0] == "word" and len(cols) == 4:
                if remaining:
                    raise CorruptIndex("feature count mismatch")
                current = set()
                ix.feature_sets[WordKey(cols[1], cols[2])] = current
                try:
                    remaining = int(cols[3])
                except ValueError:
                    raise CorruptIndex(f"bad count in {line!r}") from None
            elif cols[0] == "feat" and len(cols) == 5:
                if current is None or remaining == 0:
                    raise CorruptIndex("feature line outside a word block")
                current.add(SyntacticFeature(cols[1], cols[2], WordKey(cols[3], cols[4])))
                remaining -= 1
            else:
                raise CorruptIndex(f"unrecognized line {line!r}")
        if remaining:
            raise CorruptIndex("feature count mismatch")
        return ix


def build_index(
    sentences: Iterable[Sentence],
    relation_stoplist: frozenset[str] | set[str] = frozenset(),
    *,
    dependent_only: bool = False,
) -> TripleIndex:
    """Index all triples from a sentence stream.

    ``relation_stoplist`` drops triples by relation name before indexing.
    ``dependent_only`` records only the dependent-direction features, for
    experiments that want the narrower feature space.
    """
    ix = TripleIndex()
    add = ix.add_dependent_feature if dependent_only else ix.add_triple
    for sentence in sentences:
        for triple in extract_triples(sentence):
            if triple.relation in relation_stoplist:
                continue
            add(triple)
    return ix
