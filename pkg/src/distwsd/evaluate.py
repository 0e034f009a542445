"""Scoring predictions against gold annotations and reporting accuracy.

Accuracy is computed over polysemous tokens only: gold tokens that are
monosemous in the inventory, or absent from it, are excluded and counted
separately.  A prediction is correct when the chosen sense is one of the
gold senses (gold may list several).
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import IO, Iterable, NamedTuple

from .corpus import ADJ, ADV, NOUN, VERB, Sentence, Token
from .engine import (
    Disambiguation,
    EngineConfig,
    Strategy,
    disambiguate_corpus,
)
from .errors import DistwsdError
from .index import TripleIndex
from .distsim import VectorSpace
from .inventory import SenseInventory, connection_count
from .lesk import LeskAlgorithm

POS_ORDER = (NOUN, VERB, ADJ, ADV)
POS_NAMES = {NOUN: "noun", VERB: "verb", ADJ: "adj", ADV: "adv"}

LESK_LABELS = {
    LeskAlgorithm.BASIC: "LeskB",
    LeskAlgorithm.VARIANT: "LeskVar",
    LeskAlgorithm.EXTENDED: "LeskES",
}


class EvalError(DistwsdError):
    pass


class MalformedRecord(EvalError):
    def __init__(self, line_no: int, reason: str):
        super().__init__(f"line {line_no}: {reason}")
        self.line_no = line_no


class DuplicatePosition(EvalError):
    def __init__(self, position: tuple[str, int, int]):
        super().__init__(f"duplicate position {position}")
        self.position = position


class UnmatchedPrediction(EvalError):
    def __init__(self, position: tuple[str, int, int], reason: str = "not in gold"):
        super().__init__(f"prediction at {position}: {reason}")
        self.position = position


class GoldRecord(NamedTuple):
    position: tuple[str, int, int]
    sense_ids: frozenset[str]


def load_gold(source: IO[str] | Iterable[str]) -> list[GoldRecord]:
    """Parse gold TSV: doc_id, sentence_index, token_index, '|'-joined sense ids."""
    records = []
    seen = set()
    for line_no, raw in enumerate(source, start=1):
        line = raw.rstrip("\n")
        if not line.strip() or line.startswith("#"):
            continue
        cols = line.split("\t")
        if len(cols) != 4:
            raise MalformedRecord(line_no, f"expected 4 columns, got {len(cols)}")
        try:
            position = (cols[0], int(cols[1]), int(cols[2]))
        except ValueError:
            raise MalformedRecord(line_no, "sentence and token indexes must be integers") from None
        sense_ids = frozenset(s for s in cols[3].split("|") if s)
        if not sense_ids:
            raise MalformedRecord(line_no, "empty sense id list")
        if position in seen:
            raise DuplicatePosition(position)
        seen.add(position)
        records.append(GoldRecord(position, sense_ids))
    return records


@dataclass
class BucketScore:
    attempted: int = 0
    correct: int = 0

    @property
    def accuracy(self) -> float | None:
        return self.correct / self.attempted if self.attempted else None


@dataclass
class EvalReport:
    per_pos: dict[str, BucketScore] = field(default_factory=dict)
    skipped_monosemous: int = 0
    skipped_unknown: int = 0

    @property
    def attempted(self) -> int:
        return sum(b.attempted for b in self.per_pos.values())

    @property
    def correct(self) -> int:
        return sum(b.correct for b in self.per_pos.values())

    @property
    def accuracy(self) -> float | None:
        return self.correct / self.attempted if self.attempted else None


def score(
    predictions: Iterable[Disambiguation],
    gold: Iterable[GoldRecord],
    sentences: Iterable[Sentence],
    inv: SenseInventory,
) -> EvalReport:
    """Score predictions over the gold positions.

    Every prediction position must appear in gold at a token the inventory
    treats as polysemous; anything else raises
    :class:`UnmatchedPrediction`.  A polysemous gold token without a
    prediction counts as attempted and incorrect.
    """
    token_at: dict[tuple[str, int, int], Token] = {}
    for s in sentences:
        for t in s.tokens:
            token_at[(s.doc_id, s.sentence_index, t.index)] = t

    by_position: dict[tuple[str, int, int], Disambiguation] = {}
    for p in predictions:
        if p.target in by_position:
            raise DuplicatePosition(p.target)
        by_position[p.target] = p

    report = EvalReport(per_pos={pos: BucketScore() for pos in POS_ORDER})
    matched = set()
    for record in gold:
        token = token_at.get(record.position)
        if token is None:
            raise EvalError(f"gold position {record.position} not found in the corpus")
        n_senses = len(inv.senses_of(token.key))
        if n_senses <= 1:
            reason = "word unknown to the inventory" if n_senses == 0 else "monosemous word"
            if record.position in by_position:
                raise UnmatchedPrediction(record.position, reason)
            if n_senses == 0:
                report.skipped_unknown += 1
            else:
                report.skipped_monosemous += 1
            continue
        bucket = report.per_pos.setdefault(token.key.pos, BucketScore())
        bucket.attempted += 1
        prediction = by_position.get(record.position)
        if prediction is not None:
            matched.add(record.position)
            if prediction.word != token.key:
                raise EvalError(
                    f"prediction at {record.position} is for {prediction.word.render()} "
                    f"but the corpus has {token.key.render()}"
                )
            if prediction.chosen in record.sense_ids:
                bucket.correct += 1

    extras = set(by_position) - matched
    if extras:
        raise UnmatchedPrediction(min(extras))
    return report


# -- rendering -------------------------------------------------------------

def _format_cell(accuracy: float | None) -> str:
    return "—" if accuracy is None else f"{accuracy * 100:.1f}%"


def render_report(reports: dict[str, EvalReport]) -> str:
    """Human-readable table: one row per POS class plus an overall row,
    one column per configuration label."""
    if not reports:
        raise EvalError("nothing to render")
    labels = list(reports)
    pos_rows = list(POS_ORDER) + sorted(
        {p for r in reports.values() for p in r.per_pos} - set(POS_ORDER)
    )
    rows = [(POS_NAMES.get(pos, pos), [
        _format_cell(r.per_pos[pos].accuracy if pos in r.per_pos else None)
        for r in reports.values()
    ]) for pos in pos_rows]
    rows.append(("overall", [_format_cell(r.accuracy) for r in reports.values()]))

    name_width = max(len(name) for name, _ in rows)
    widths = [max(len(label), *(len(cells[i]) for _, cells in rows)) for i, label in enumerate(labels)]
    lines = ["  ".join([" " * name_width] + [label.rjust(w) for label, w in zip(labels, widths)])]
    for name, cells in rows:
        lines.append("  ".join([name.ljust(name_width)] + [c.rjust(w) for c, w in zip(cells, widths)]))
    return "\n".join(lines)


def report_to_json(reports: dict[str, EvalReport]) -> str:
    payload = {}
    for label, report in reports.items():
        payload[label] = {
            "per_pos": {
                pos: {
                    "attempted": bucket.attempted,
                    "correct": bucket.correct,
                    "accuracy": bucket.accuracy,
                }
                for pos, bucket in report.per_pos.items()
            },
            "overall": {
                "attempted": report.attempted,
                "correct": report.correct,
                "accuracy": report.accuracy,
            },
            "skipped_monosemous": report.skipped_monosemous,
            "skipped_unknown": report.skipped_unknown,
        }
    return json.dumps(payload, indent=2, ensure_ascii=False)


def report_to_csv(reports: dict[str, EvalReport]) -> str:
    """Flat CSV with one row per (configuration, POS bucket) plus overall
    rows; the k column is parsed out of the label when present."""
    lines = ["label,k,pos,attempted,correct,accuracy"]
    for label, report in reports.items():
        match = re.search(r" k=(\d+)$", label)
        k = match.group(1) if match else ""
        for pos, bucket in report.per_pos.items():
            acc = "" if bucket.accuracy is None else f"{bucket.accuracy:.6f}"
            lines.append(
                f"{label},{k},{POS_NAMES.get(pos, pos)},{bucket.attempted},{bucket.correct},{acc}"
            )
        acc = "" if report.accuracy is None else f"{report.accuracy:.6f}"
        lines.append(f"{label},{k},overall,{report.attempted},{report.correct},{acc}")
    return "\n".join(lines) + "\n"


# -- configuration sweeps --------------------------------------------------

def most_connected_predictions(
    sentences: Iterable[Sentence], inv: SenseInventory
) -> list[Disambiguation]:
    """Baseline that always picks the sense with most semantic connections."""
    records = []
    for s in sentences:
        for token in s.tokens:
            if not token.key.is_content:
                continue
            senses = inv.senses_of(token.key)
            if len(senses) < 2:
                continue
            best_conn = max(connection_count(o) for o in senses)
            top = [o for o in senses if connection_count(o) == best_conn]
            chosen = min(top, key=lambda o: o.id)
            records.append(
                Disambiguation(
                    target=(s.doc_id, s.sentence_index, token.index),
                    word=token.key,
                    chosen=chosen.id,
                    score=float(best_conn),
                    neighbors_used=(),
                    tie_broken=len(top) > 1,
                )
            )
    records.sort(key=lambda r: r.target)
    return records


def sweep(
    sentences: Iterable[Sentence],
    gold: Iterable[GoldRecord],
    inv: SenseInventory,
    ix: TripleIndex | None,
    vs: VectorSpace | None,
    k_range: Iterable[int],
    strategies: Iterable[Strategy],
    lesk_algs: Iterable[LeskAlgorithm],
    *,
    workers: int = 1,
    include_most_connected: bool = False,
    errors_out: dict[str, Exception] | None = None,
) -> dict[str, EvalReport]:
    """Run and score one full disambiguation per configuration.

    A configuration that fails is recorded in ``errors_out`` (when given)
    and the sweep moves on to the next one.
    """
    sentence_list = list(sentences)
    gold_list = list(gold)
    reports: dict[str, EvalReport] = {}
    for k in k_range:
        for strategy in strategies:
            for alg in lesk_algs:
                label = f"{LESK_LABELS[alg]}-{strategy.label} k={k}"
                try:
                    cfg = EngineConfig(k=k, strategy=strategy, lesk=alg)
                    predictions = disambiguate_corpus(
                        sentence_list, inv, ix, vs, cfg, workers=workers
                    )
                    reports[label] = score(predictions, gold_list, sentence_list, inv)
                except Exception as e:  # noqa: BLE001 - isolate per-config failures
                    if errors_out is None:
                        raise
                    errors_out[label] = e
    if include_most_connected:
        label = "MostConnected"
        try:
            predictions = most_connected_predictions(sentence_list, inv)
            reports[label] = score(predictions, gold_list, sentence_list, inv)
        except Exception as e:  # noqa: BLE001
            if errors_out is None:
                raise
            errors_out[label] = e
    return reports
