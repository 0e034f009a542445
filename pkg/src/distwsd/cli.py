"""Command line interface.

Exit codes: 0 on success, 1 on expected failures (bad input files,
missing resources, malformed data), 2 on usage errors.
"""

from __future__ import annotations

import argparse
import sys
from typing import IO

from . import __version__
from .corpus import CorpusError, Sentence, Token, parse_corpus, parse_word_key
from .distsim import Measure, VectorSpace, load_vectors
from .engine import (
    DISTRIBUTIONAL,
    LINEAR,
    EngineConfig,
    Strategy,
    combination_count,
    disambiguate_corpus,
    rank_distributional,
    read_predictions,
    select_neighbors,
    write_predictions,
)
from .errors import DistwsdError
from .evaluate import (
    load_gold,
    render_report,
    report_to_csv,
    report_to_json,
    score,
    sweep,
)
from .index import TripleIndex, build_index
from .inventory import SenseInventory, load_inventory
from .lesk import LeskAlgorithm

_MEASURES = {"lin": Measure.LIN, "w2v": Measure.W2V, "all": Measure.ALL}
_LESK = {
    "basic": LeskAlgorithm.BASIC,
    "variant": LeskAlgorithm.VARIANT,
    "extended": LeskAlgorithm.EXTENDED,
}
_SWEEP_STRATEGIES = {
    "linear": Strategy(LINEAR),
    "dist-lin": Strategy(DISTRIBUTIONAL, Measure.LIN),
    "dist-w2v": Strategy(DISTRIBUTIONAL, Measure.W2V),
    "dist-all": Strategy(DISTRIBUTIONAL, Measure.ALL),
}


def _read_corpus(path: str) -> list[Sentence]:
    with open(path, encoding="utf-8") as f:
        return parse_corpus(f)


def _read_inventory(path: str) -> SenseInventory:
    with open(path, encoding="utf-8") as f:
        return load_inventory(f)


def _read_index(path: str) -> TripleIndex:
    with open(path, encoding="utf-8") as f:
        return TripleIndex.load(f)


def _read_vectors(path: str) -> VectorSpace:
    with open(path, encoding="utf-8") as f:
        return load_vectors(f)


def _inline_sentence(text: str) -> Sentence:
    """Build a sentence from space-separated lemma_POS tokens.

    Inline sentences carry no dependency structure; heads are all 0.
    """
    words = text.split()
    if not words:
        raise CorpusError("empty sentence")
    tokens = tuple(
        Token(index=i, surface=w, key=parse_word_key(w), head=0, deprel="_")
        for i, w in enumerate(words, start=1)
    )
    return Sentence(tokens=tokens, doc_id="inline", sentence_index=0)


def _strategy_from_args(args: argparse.Namespace) -> Strategy:
    if args.strategy == "linear":
        return Strategy(LINEAR)
    return Strategy(DISTRIBUTIONAL, _MEASURES[args.measure])


def _check_resources(
    strategy: Strategy, ix: TripleIndex | None, vs: VectorSpace | None
) -> None:
    if strategy.kind != DISTRIBUTIONAL:
        return
    if strategy.measure in (Measure.LIN, Measure.ALL) and ix is None:
        raise DistwsdError(
            f"measure {strategy.measure.value} needs a triple index (--index)"
        )
    if strategy.measure in (Measure.W2V, Measure.ALL) and vs is None:
        raise DistwsdError(
            f"measure {strategy.measure.value} needs word vectors (--vectors)"
        )


def _open_out(path: str | None) -> IO[str]:
    if path is None or path == "-":
        return sys.stdout
    return open(path, "w", encoding="utf-8")


def _close_out(handle: IO[str]) -> None:
    if handle is not sys.stdout:
        handle.close()


# -- subcommands -----------------------------------------------------------

def cmd_index(args: argparse.Namespace) -> int:
    sentences = _read_corpus(args.corpus)
    stoplist = frozenset(s for s in (args.stoplist or "").split(",") if s)
    ix = build_index(sentences, stoplist, dependent_only=args.dependent_only)
    out = _open_out(args.out)
    try:
        ix.save(out)
    finally:
        _close_out(out)
    print(
        f"indexed {len(sentences)} sentences: {len(ix.feature_sets)} words, "
        f"{ix.triple_total} triples",
        file=sys.stderr,
    )
    return 0


def cmd_neighbors(args: argparse.Namespace) -> int:
    strategy = _strategy_from_args(args)
    ix = _read_index(args.index) if args.index else None
    vs = _read_vectors(args.vectors) if args.vectors else None
    _check_resources(strategy, ix, vs)
    sentence = _inline_sentence(args.sentence)
    if not 1 <= args.target <= len(sentence.tokens):
        raise DistwsdError(
            f"target {args.target} out of range for a {len(sentence.tokens)}-token sentence"
        )
    target = sentence.tokens[args.target - 1]
    if strategy.kind == DISTRIBUTIONAL:
        ranked = rank_distributional(
            sentence,
            target,
            strategy.measure,
            ix,
            vs,
            exclude_same_lemma=args.exclude_same_lemma,
        )
        if ranked is None:
            print("no scorable candidates; falling back to linear order", file=sys.stderr)
    else:
        ranked = None
    if ranked is not None:
        for token, sim in ranked[: args.k]:
            print(f"{token.key.render()}\t{sim:.6f}")
    else:
        cfg = EngineConfig(
            k=args.k,
            strategy=Strategy(LINEAR),
            exclude_same_lemma=args.exclude_same_lemma,
        )
        for token in select_neighbors(sentence, target, cfg, None, None):
            print(token.key.render())
    return 0


def cmd_disambiguate(args: argparse.Namespace) -> int:
    strategy = _strategy_from_args(args)
    cfg = EngineConfig(
        k=args.k,
        strategy=strategy,
        lesk=_LESK[args.lesk],
        pos_strict=args.pos_strict,
        exclude_same_lemma=args.exclude_same_lemma,
    )
    ix = _read_index(args.index) if args.index else None
    vs = _read_vectors(args.vectors) if args.vectors else None
    _check_resources(strategy, ix, vs)
    sentences = _read_corpus(args.corpus)
    inv = _read_inventory(args.inventory)
    skips = {"monosemous": 0, "unknown": 0}

    def on_skip(position, word, reason):
        skips[reason] += 1

    records = disambiguate_corpus(
        sentences, inv, ix, vs, cfg, workers=args.threads, on_skip=on_skip
    )
    out = _open_out(args.out)
    try:
        write_predictions(records, out)
    finally:
        _close_out(out)
    print(
        f"disambiguated {len(records)} tokens "
        f"(skipped {skips['monosemous']} monosemous, {skips['unknown']} unknown)",
        file=sys.stderr,
    )
    return 0


def cmd_evaluate(args: argparse.Namespace) -> int:
    with open(args.predictions, encoding="utf-8") as f:
        predictions = read_predictions(f)
    with open(args.gold, encoding="utf-8") as f:
        gold = load_gold(f)
    sentences = _read_corpus(args.corpus)
    inv = _read_inventory(args.inventory)
    report = score(predictions, gold, sentences, inv)
    reports = {args.label: report}
    print(render_report(reports))
    print(
        f"attempted {report.attempted} of {len(gold)} gold tokens "
        f"(skipped {report.skipped_monosemous} monosemous, "
        f"{report.skipped_unknown} unknown)",
        file=sys.stderr,
    )
    if args.json:
        with open(args.json, "w", encoding="utf-8") as f:
            f.write(report_to_json(reports) + "\n")
    return 0


def cmd_combinations(args: argparse.Namespace) -> int:
    inv = _read_inventory(args.inventory)
    if args.sentence is not None:
        print(combination_count(_inline_sentence(args.sentence), inv))
        return 0
    sentences = _read_corpus(args.corpus)
    for s in sentences:
        print(f"{s.doc_id}\t{s.sentence_index}\t{combination_count(s, inv)}")
    return 0


def _parse_k_range(text: str) -> list[int]:
    try:
        if ":" in text:
            lo, hi = text.split(":", 1)
            values = list(range(int(lo), int(hi) + 1))
        else:
            values = [int(p) for p in text.split(",") if p]
    except ValueError:
        raise DistwsdError(f"bad k range {text!r}; use e.g. 2:7 or 2,4,6") from None
    if not values or min(values) < 1:
        raise DistwsdError(f"bad k range {text!r}; neighbourhood sizes start at 1")
    return values


def _parse_listed(text: str, table: dict, what: str) -> list:
    chosen = []
    for part in (s for s in text.split(",") if s):
        if part not in table:
            raise DistwsdError(
                f"unknown {what} {part!r}; choose from {', '.join(table)}"
            )
        chosen.append(table[part])
    if not chosen:
        raise DistwsdError(f"no {what} given")
    return chosen


def cmd_sweep(args: argparse.Namespace) -> int:
    k_range = _parse_k_range(args.k_range)
    strategies = _parse_listed(args.strategies, _SWEEP_STRATEGIES, "strategy")
    lesk_algs = _parse_listed(args.lesk, _LESK, "scorer")
    ix = _read_index(args.index) if args.index else None
    vs = _read_vectors(args.vectors) if args.vectors else None
    for strategy in strategies:
        _check_resources(strategy, ix, vs)
    sentences = _read_corpus(args.corpus)
    with open(args.gold, encoding="utf-8") as f:
        gold = load_gold(f)
    inv = _read_inventory(args.inventory)
    errors: dict[str, Exception] = {}
    reports = sweep(
        sentences,
        gold,
        inv,
        ix,
        vs,
        k_range,
        strategies,
        lesk_algs,
        workers=args.threads,
        include_most_connected=args.most_connected,
        errors_out=errors,
    )
    for label, error in errors.items():
        print(f"warning: {label} failed: {error}", file=sys.stderr)
    if not reports:
        raise DistwsdError("every configuration failed")
    print(render_report(reports))
    if args.csv:
        with open(args.csv, "w", encoding="utf-8") as f:
            f.write(report_to_csv(reports))
    if args.json:
        with open(args.json, "w", encoding="utf-8") as f:
            f.write(report_to_json(reports) + "\n")
    return 0


# -- parser ----------------------------------------------------------------

def _add_engine_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("-k", type=int, default=4, help="neighbourhood size (default 4)")
    p.add_argument(
        "--strategy",
        choices=("dist", "linear"),
        default="dist",
        help="neighbour selection strategy (default dist)",
    )
    p.add_argument(
        "--measure",
        choices=tuple(_MEASURES),
        default="lin",
        help="similarity measure for the dist strategy (default lin)",
    )
    p.add_argument("--index", help="triple index file")
    p.add_argument("--vectors", help="word vectors in text format")
    p.add_argument(
        "--exclude-same-lemma",
        action="store_true",
        help="never select a neighbour with the target's lemma",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="distwsd",
        description="Knowledge-based word sense disambiguation with distributional neighbour selection.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("index", help="build a dependency triple index from a corpus")
    p.add_argument("--corpus", required=True, help="dependency-annotated corpus (TSV)")
    p.add_argument("--out", help="output file (default stdout)")
    p.add_argument("--stoplist", help="comma-separated relation labels to drop")
    p.add_argument(
        "--dependent-only",
        action="store_true",
        help="record features for dependents only, not governors",
    )
    p.set_defaults(func=cmd_index)

    p = sub.add_parser("neighbors", help="rank context words around a target")
    p.add_argument("--sentence", required=True, help="space-separated lemma_POS tokens")
    p.add_argument("--target", type=int, required=True, help="1-based target token index")
    _add_engine_flags(p)
    p.set_defaults(func=cmd_neighbors)

    p = sub.add_parser("disambiguate", help="pick a sense for every polysemous content word")
    p.add_argument("--corpus", required=True, help="dependency-annotated corpus (TSV)")
    p.add_argument("--inventory", required=True, help="sense inventory (JSON lines)")
    p.add_argument(
        "--lesk",
        choices=tuple(_LESK),
        default="extended",
        help="gloss overlap scorer (default extended)",
    )
    p.add_argument(
        "--pos-strict",
        action="store_true",
        help="match gloss tokens on lemma and POS instead of lemma only",
    )
    p.add_argument("--threads", type=int, default=1, help="worker threads (default 1)")
    p.add_argument("--out", help="predictions file (default stdout)")
    _add_engine_flags(p)
    p.set_defaults(func=cmd_disambiguate)

    p = sub.add_parser("evaluate", help="score predictions against gold annotations")
    p.add_argument("--predictions", required=True, help="predictions TSV")
    p.add_argument("--gold", required=True, help="gold annotations TSV")
    p.add_argument("--corpus", required=True, help="corpus the predictions were made on")
    p.add_argument("--inventory", required=True, help="sense inventory (JSON lines)")
    p.add_argument("--label", default="run", help="column label for the report")
    p.add_argument("--json", help="also write the report as JSON to this file")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("combinations", help="count sense combinations per sentence")
    p.add_argument("--inventory", required=True, help="sense inventory (JSON lines)")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--sentence", help="space-separated lemma_POS tokens")
    group.add_argument("--corpus", help="dependency-annotated corpus (TSV)")
    p.set_defaults(func=cmd_combinations)

    p = sub.add_parser("sweep", help="evaluate a grid of configurations")
    p.add_argument("--corpus", required=True, help="dependency-annotated corpus (TSV)")
    p.add_argument("--gold", required=True, help="gold annotations TSV")
    p.add_argument("--inventory", required=True, help="sense inventory (JSON lines)")
    p.add_argument("--index", help="triple index file")
    p.add_argument("--vectors", help="word vectors in text format")
    p.add_argument(
        "--k-range",
        default="2:7",
        help="neighbourhood sizes, inclusive range lo:hi or comma list (default 2:7)",
    )
    p.add_argument(
        "--strategies",
        default="dist-lin,linear",
        help=f"comma list from: {', '.join(_SWEEP_STRATEGIES)}",
    )
    p.add_argument(
        "--lesk",
        default="extended",
        help=f"comma list from: {', '.join(_LESK)}",
    )
    p.add_argument("--threads", type=int, default=1, help="worker threads (default 1)")
    p.add_argument(
        "--most-connected",
        action="store_true",
        help="also score the most-connected-sense baseline",
    )
    p.add_argument("--csv", help="write accuracy-vs-k series to this CSV file")
    p.add_argument("--json", help="write the full reports as JSON to this file")
    p.set_defaults(func=cmd_sweep)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except DistwsdError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
