"""The two-stage disambiguation engine.

Stage one picks up to k neighbor tokens for each polysemous content word,
either by distributional similarity (Lin, cosine, or their mean) or by
plain right-to-left position.  Stage two picks the sense that maximizes
the summed best gloss overlap against the neighbors' senses, breaking
score ties by semantic connection count and then by sense id.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import IO, Callable, Iterable, Sequence

from .corpus import Sentence, Token, WordKey, content_tokens, parse_word_key
from .distsim import Measure, VectorSpace, rank_by_cosine, similarity_or_none
from .errors import DistwsdError
from .index import TripleIndex
from .inventory import SenseInventory, connection_count
from .lesk import ContextBag, LeskAlgorithm, sense_pair_score

LINEAR = "linear"
DISTRIBUTIONAL = "dist"

_MEASURE_LABELS = {Measure.LIN: "Lin", Measure.W2V: "W2V", Measure.ALL: "ALL"}


class NoSenses(DistwsdError):
    pass


class MalformedPrediction(DistwsdError):
    def __init__(self, line_no: int, reason: str):
        super().__init__(f"line {line_no}: {reason}")
        self.line_no = line_no


@dataclass(frozen=True)
class Strategy:
    """Neighbor selection strategy: positional or distributional with a measure."""

    kind: str  # LINEAR or DISTRIBUTIONAL
    measure: Measure | None = None

    def __post_init__(self):
        if self.kind not in (LINEAR, DISTRIBUTIONAL):
            raise ValueError(f"unknown strategy kind {self.kind!r}")
        if self.kind == DISTRIBUTIONAL and self.measure is None:
            raise ValueError("distributional strategy needs a measure")

    @property
    def label(self) -> str:
        if self.kind == LINEAR:
            return "PPVL"
        return f"PPVD/{_MEASURE_LABELS[self.measure]}"


@dataclass(frozen=True)
class EngineConfig:
    k: int = 4
    strategy: Strategy = Strategy(DISTRIBUTIONAL, Measure.LIN)
    lesk: LeskAlgorithm = LeskAlgorithm.EXTENDED
    pos_strict: bool = False
    exclude_same_lemma: bool = False

    def __post_init__(self):
        if self.k < 1:
            raise ValueError(f"k must be at least 1, got {self.k}")


@dataclass(frozen=True)
class Disambiguation:
    target: tuple[str, int, int]  # (doc_id, sentence_index, token_index)
    word: WordKey
    chosen: str
    score: float
    neighbors_used: tuple[WordKey, ...]
    tie_broken: bool


def _candidates(sentence: Sentence, target: Token, exclude_same_lemma: bool) -> list[Token]:
    out = []
    for tok in content_tokens(sentence):
        if tok.index == target.index:
            continue
        if exclude_same_lemma and tok.key.lemma == target.key.lemma:
            continue
        out.append(tok)
    return out


def select_neighbors_linear(
    sentence: Sentence,
    target: Token,
    k: int,
    *,
    exclude_same_lemma: bool = False,
) -> list[Token]:
    """Up to k content tokens other than the target, scanned from the end
    of the sentence leftwards."""
    pool = _candidates(sentence, target, exclude_same_lemma)
    return list(reversed(pool))[:k]


def rank_distributional(
    sentence: Sentence,
    target: Token,
    measure: Measure,
    ix: TripleIndex | None,
    vs: VectorSpace | None,
    *,
    exclude_same_lemma: bool = False,
) -> list[tuple[Token, float]] | None:
    """All scorable context tokens ranked by similarity to the target,
    highest first, position breaking ties.  None when nothing is scorable
    (the caller should fall back to linear selection).

    Lin and the combined measure only consider candidates sharing the
    target's POS; candidates the measure cannot score are skipped.
    """
    pool = _candidates(sentence, target, exclude_same_lemma)
    if measure in (Measure.LIN, Measure.ALL):
        pool = [t for t in pool if t.key.pos == target.key.pos]
    if not pool:
        return None
    if measure is Measure.W2V and vs is not None:
        sims = rank_by_cosine(vs, target.key, [t.key for t in pool])
    else:
        sims = [similarity_or_none(measure, ix, vs, target.key, t.key) for t in pool]
    scored = [(t, s) for t, s in zip(pool, sims) if s is not None]
    if not scored:
        return None
    scored.sort(key=lambda pair: (-pair[1], pair[0].index))
    return scored


def select_neighbors_distributional(
    sentence: Sentence,
    target: Token,
    k: int,
    measure: Measure,
    ix: TripleIndex | None,
    vs: VectorSpace | None,
    *,
    exclude_same_lemma: bool = False,
) -> list[Token]:
    """The k most similar scorable context tokens; falls back to linear
    selection when no candidate can be scored."""
    ranked = rank_distributional(
        sentence, target, measure, ix, vs, exclude_same_lemma=exclude_same_lemma
    )
    if ranked is None:
        return select_neighbors_linear(sentence, target, k, exclude_same_lemma=exclude_same_lemma)
    return [t for t, _ in ranked[:k]]


def select_neighbors(
    sentence: Sentence,
    target: Token,
    cfg: EngineConfig,
    ix: TripleIndex | None,
    vs: VectorSpace | None,
) -> list[Token]:
    if cfg.strategy.kind == LINEAR:
        return select_neighbors_linear(
            sentence, target, cfg.k, exclude_same_lemma=cfg.exclude_same_lemma
        )
    return select_neighbors_distributional(
        sentence,
        target,
        cfg.k,
        cfg.strategy.measure,
        ix,
        vs,
        exclude_same_lemma=cfg.exclude_same_lemma,
    )


def disambiguate_word(
    sentence: Sentence,
    target: Token,
    neighbors: Sequence[Token],
    inv: SenseInventory,
    cfg: EngineConfig,
) -> Disambiguation:
    """Choose the sense maximizing the summed best pair score against each
    neighbor's senses.

    Neighbors without senses contribute nothing.  On a score tie the sense
    with most semantic connections wins, then the lowest sense id; the
    record notes whether the tie-break decided the outcome.
    """
    senses = inv.senses_of(target.key)
    if not senses:
        raise NoSenses(f"{target.key.render()} has no senses")
    ctx = ContextBag.from_sentence(sentence, target, with_pos=cfg.pos_strict)
    neighbor_senses = [inv.senses_of(n.key) for n in neighbors]

    scores = []
    for sense in senses:
        total = 0
        for options in neighbor_senses:
            best = 0
            for other in options:
                value = sense_pair_score(
                    cfg.lesk, inv, ctx, sense, other, pos_strict=cfg.pos_strict
                )
                if value > best:
                    best = value
            total += best
        scores.append(total)

    top_score = max(scores)
    top = [s for s, sc in zip(senses, scores) if sc == top_score]
    tie_broken = len(top) > 1
    if tie_broken:
        best_conn = max(connection_count(s) for s in top)
        top = [s for s in top if connection_count(s) == best_conn]
        chosen = min(top, key=lambda s: s.id)
    else:
        chosen = top[0]
    return Disambiguation(
        target=(sentence.doc_id, sentence.sentence_index, target.index),
        word=target.key,
        chosen=chosen.id,
        score=float(top_score),
        neighbors_used=tuple(n.key for n in neighbors),
        tie_broken=tie_broken,
    )


def disambiguate_corpus(
    sentences: Iterable[Sentence],
    inv: SenseInventory,
    ix: TripleIndex | None,
    vs: VectorSpace | None,
    cfg: EngineConfig,
    *,
    workers: int = 1,
    on_skip: Callable[[tuple[str, int, int], WordKey, str], None] | None = None,
) -> list[Disambiguation]:
    """One record per polysemous content token, sorted by position.

    Monosemous tokens and tokens unknown to the inventory are skipped;
    ``on_skip`` receives their position, word key and the reason
    ("monosemous" or "unknown").  Sentences are independent, so ``workers`` > 1 processes
    them in a thread pool; the output is identical either way.
    """
    sentence_list = list(sentences)
    if workers > 1 and len(sentence_list) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda s: _process_sentence(s, inv, ix, vs, cfg), sentence_list))
    else:
        results = [_process_sentence(s, inv, ix, vs, cfg) for s in sentence_list]

    records: list[Disambiguation] = []
    for sentence_records, skips in results:
        records.extend(sentence_records)
        if on_skip is not None:
            for position, word, reason in skips:
                on_skip(position, word, reason)
    records.sort(key=lambda r: r.target)
    return records


def _process_sentence(
    sentence: Sentence,
    inv: SenseInventory,
    ix: TripleIndex | None,
    vs: VectorSpace | None,
    cfg: EngineConfig,
) -> tuple[list[Disambiguation], list[tuple[tuple[str, int, int], WordKey, str]]]:
    records = []
    skips = []
    for target in content_tokens(sentence):
        position = (sentence.doc_id, sentence.sentence_index, target.index)
        n_senses = len(inv.senses_of(target.key))
        if n_senses == 0:
            skips.append((position, target.key, "unknown"))
            continue
        if n_senses == 1:
            skips.append((position, target.key, "monosemous"))
            continue
        neighbors = select_neighbors(sentence, target, cfg, ix, vs)
        records.append(disambiguate_word(sentence, target, neighbors, inv, cfg))
    return records, skips


def combination_count(sentence: Sentence, inv: SenseInventory) -> int:
    """Product of the sense counts of the sentence's content words; the
    count of exhaustive sense combinations a direct method would score."""
    product = 1
    for token in content_tokens(sentence):
        n = len(inv.senses_of(token.key))
        if n >= 1:
            product *= n
    return product


# -- prediction files ------------------------------------------------------

PREDICTION_COLUMNS = (
    "doc_id",
    "sentence_index",
    "token_index",
    "lemma_pos",
    "chosen_sense_id",
    "score",
    "tie_broken",
    "neighbors",
)


def write_predictions(records: Iterable[Disambiguation], sink: IO[str]) -> None:
    for r in records:
        doc_id, sentence_index, token_index = r.target
        sink.write(
            "\t".join(
                (
                    doc_id,
                    str(sentence_index),
                    str(token_index),
                    r.word.render(),
                    r.chosen,
                    f"{r.score:g}",
                    "1" if r.tie_broken else "0",
                    ",".join(k.render() for k in r.neighbors_used),
                )
            )
            + "\n"
        )


def read_predictions(source: IO[str] | Iterable[str]) -> list[Disambiguation]:
    records = []
    for line_no, raw in enumerate(source, start=1):
        line = raw.rstrip("\n")
        if not line.strip() or line.startswith("#"):
            continue
        cols = line.split("\t")
        if len(cols) != len(PREDICTION_COLUMNS):
            raise MalformedPrediction(
                line_no, f"expected {len(PREDICTION_COLUMNS)} columns, got {len(cols)}"
            )
        try:
            position = (cols[0], int(cols[1]), int(cols[2]))
            word = parse_word_key(cols[3])
            score = float(cols[5])
            tie_broken = {"0": False, "1": True}[cols[6]]
            neighbors = tuple(parse_word_key(n) for n in cols[7].split(",") if n)
        except (ValueError, KeyError, DistwsdError) as e:
            raise MalformedPrediction(line_no, str(e)) from None
        records.append(
            Disambiguation(
                target=position,
                word=word,
                chosen=cols[4],
                score=score,
                neighbors_used=neighbors,
                tie_broken=tie_broken,
            )
        )
    return records
