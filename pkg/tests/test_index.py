import io
import math
import random

import pytest
from hypothesis import given, strategies as st

from distwsd.corpus import DepTriple, WordKey, parse_corpus
from distwsd.index import (
    AS_DEPENDENT,
    AS_GOVERNOR,
    CorruptIndex,
    SyntacticFeature,
    TripleIndex,
    UnknownFeature,
    build_index,
)
from conftest import LIN_CORPUS


def _triple(gov, rel, dep):
    return DepTriple(WordKey(*gov), rel, WordKey(*dep))


def test_add_triple_records_both_directions():
    ix = TripleIndex()
    ix.add_triple(_triple(("chase", "V"), "sbj", ("cat", "N")))
    assert ix.triple_total == 1
    assert ix.features_of(WordKey("cat", "N")) == {
        SyntacticFeature("sbj", AS_DEPENDENT, WordKey("chase", "V"))
    }
    assert ix.features_of(WordKey("chase", "V")) == {
        SyntacticFeature("sbj", AS_GOVERNOR, WordKey("cat", "N"))
    }


def test_add_dependent_feature_records_one_direction():
    ix = TripleIndex()
    ix.add_dependent_feature(_triple(("chase", "V"), "sbj", ("cat", "N")))
    assert ix.features_of(WordKey("cat", "N"))
    assert not ix.features_of(WordKey("chase", "V"))


def test_repeated_triple_counts_once_per_word():
    ix = TripleIndex()
    t = _triple(("chase", "V"), "sbj", ("cat", "N"))
    ix.add_triple(t)
    ix.add_triple(t)
    assert ix.triple_total == 2  # occurrences counted
    assert len(ix.features_of(WordKey("cat", "N"))) == 1  # feature sets deduplicate


def test_feature_render_marks_governor_role():
    f_dep = SyntacticFeature("sbj", AS_DEPENDENT, WordKey("chase", "V"))
    f_gov = SyntacticFeature("sbj", AS_GOVERNOR, WordKey("cat", "N"))
    assert f_dep.render() == "sbj(chase_V)"
    assert f_gov.render() == "sbj~(cat_N)"


def test_feature_probability_counts_carrier_words(lin_index):
    sbj_chase = SyntacticFeature("sbj", AS_DEPENDENT, WordKey("chase", "V"))
    obj_feed = SyntacticFeature("obj", AS_DEPENDENT, WordKey("feed", "V"))
    # Nouns: cat, dog, car, law.  cat and dog carry sbj(chase).
    assert lin_index.pos_vocab_size["N"] == 4
    assert lin_index.feature_probability(sbj_chase, "N") == pytest.approx(0.5)
    assert lin_index.feature_probability(obj_feed, "N") == pytest.approx(0.25)


def test_feature_probability_is_per_pos_class(lin_index):
    sbj_chase = SyntacticFeature("sbj", AS_DEPENDENT, WordKey("chase", "V"))
    with pytest.raises(UnknownFeature):
        lin_index.feature_probability(sbj_chase, "V")


def test_feature_probability_unknown_feature(lin_index):
    ghost = SyntacticFeature("obj", AS_DEPENDENT, WordKey("ghost", "V"))
    with pytest.raises(UnknownFeature):
        lin_index.feature_probability(ghost, "N")


def test_information_of_known_sets(lin_index):
    cat = lin_index.features_of(WordKey("cat", "N"))
    # P(sbj(chase)) = 1/2 and P(obj(feed)) = 1/4: I = ln 2 + ln 4 = 3 ln 2.
    assert lin_index.information(cat, "N") == pytest.approx(3 * math.log(2), abs=1e-12)
    assert lin_index.information([], "N") == 0.0


def test_information_is_additive_over_disjoint_sets(lin_index):
    feats = sorted(lin_index.features_of(WordKey("cat", "N")))
    a, b = [feats[0]], [feats[1]]
    whole = lin_index.information(feats, "N")
    assert whole == pytest.approx(
        lin_index.information(a, "N") + lin_index.information(b, "N"), abs=1e-12
    )


def test_information_never_decreases_when_features_are_added(lin_index):
    feats = sorted(lin_index.features_of(WordKey("cat", "N")))
    partial = lin_index.information(feats[:1], "N")
    assert lin_index.information(feats, "N") >= partial


def test_information_ignores_input_ordering(lin_index):
    feats = list(lin_index.features_of(WordKey("cat", "N")))
    assert lin_index.information(feats, "N") == lin_index.information(
        list(reversed(feats)), "N"
    )


def test_probability_of_universal_feature_is_one():
    ix = TripleIndex()
    for noun in ("cat", "dog"):
        ix.add_triple(_triple(("chase", "V"), "sbj", (noun, "N")))
    f = SyntacticFeature("sbj", AS_DEPENDENT, WordKey("chase", "V"))
    assert ix.feature_probability(f, "N") == 1.0
    assert ix.information([f], "N") == 0.0


def test_merge_unions_feature_sets():
    a = TripleIndex()
    a.add_triple(_triple(("chase", "V"), "sbj", ("cat", "N")))
    b = TripleIndex()
    b.add_triple(_triple(("feed", "V"), "obj", ("cat", "N")))
    b.add_triple(_triple(("chase", "V"), "sbj", ("cat", "N")))
    a.merge(b)
    assert a.triple_total == 3
    assert len(a.features_of(WordKey("cat", "N"))) == 2
    assert a.pos_vocab_size["N"] == 1


def test_build_index_over_corpus(lin_index, lin_sentences):
    assert lin_index.triple_total == 6
    assert sorted(w.render() for w in lin_index.words()) == [
        "bark_V", "car_N", "cat_N", "chase_V", "dog_N", "drive_V",
        "feed_V", "law_N", "pass_V",
    ]


def test_build_index_is_order_invariant(lin_sentences):
    shuffled = list(lin_sentences)
    random.Random(7).shuffle(shuffled)
    a, b = build_index(lin_sentences), build_index(shuffled)
    assert a.feature_sets == b.feature_sets
    assert a.triple_total == b.triple_total
    sink_a, sink_b = io.StringIO(), io.StringIO()
    a.save(sink_a)
    b.save(sink_b)
    assert sink_a.getvalue() == sink_b.getvalue()


def test_build_index_relation_stoplist(lin_sentences):
    ix = build_index(lin_sentences, frozenset({"sbj"}))
    assert ix.features_of(WordKey("cat", "N")) == {
        SyntacticFeature("obj", AS_DEPENDENT, WordKey("feed", "V"))
    }
    assert ix.triple_total == 3


def test_build_index_keeps_punctuation_by_default():
    text = "1\thi\thi\tUH\t2\tdiscourse\n2\tgo\tgo\tVB\t0\troot\n3\t!\t!\t.\t2\tpunct\n"
    ix = build_index(parse_corpus(io.StringIO(text)))
    feats = {f.render() for f in ix.features_of(WordKey("go", "V"))}
    assert "punct~(!_.)" in feats


def test_build_index_dependent_only(lin_sentences):
    ix = build_index(lin_sentences, dependent_only=True)
    assert not ix.features_of(WordKey("chase", "V"))
    assert ix.features_of(WordKey("cat", "N"))


def test_save_load_round_trip(lin_index):
    sink = io.StringIO()
    lin_index.save(sink)
    loaded = TripleIndex.load(io.StringIO(sink.getvalue()))
    assert loaded.feature_sets == lin_index.feature_sets
    assert loaded.triple_total == lin_index.triple_total
    assert loaded.pos_feature_carriers == lin_index.pos_feature_carriers
    assert loaded.pos_vocab_size == lin_index.pos_vocab_size


def test_save_is_deterministic_across_insertion_orders():
    rows = [
        _triple(("chase", "V"), "sbj", ("cat", "N")),
        _triple(("feed", "V"), "obj", ("cat", "N")),
        _triple(("chase", "V"), "sbj", ("dog", "N")),
    ]
    outputs = set()
    for seed in range(4):
        shuffled = rows[:]
        random.Random(seed).shuffle(shuffled)
        ix = TripleIndex()
        for t in shuffled:
            ix.add_triple(t)
        sink = io.StringIO()
        ix.save(sink)
        outputs.add(sink.getvalue())
    assert len(outputs) == 1


def test_save_starts_with_magic_and_checksum(lin_index):
    sink = io.StringIO()
    lin_index.save(sink)
    first, second = sink.getvalue().split("\n")[:2]
    assert first == "LXDI\t1"
    assert second.startswith("sha256\t")


def test_load_rejects_bad_magic():
    with pytest.raises(CorruptIndex):
        TripleIndex.load(io.StringIO("NOPE\t1\nsha256\tdeadbeef\nbody\n"))


def test_load_rejects_wrong_version(lin_index):
    sink = io.StringIO()
    lin_index.save(sink)
    text = sink.getvalue().replace("LXDI\t1", "LXDI\t9", 1)
    with pytest.raises(CorruptIndex):
        TripleIndex.load(io.StringIO(text))


def test_load_rejects_tampered_body(lin_index):
    sink = io.StringIO()
    lin_index.save(sink)
    text = sink.getvalue().replace("cat", "bat")
    with pytest.raises(CorruptIndex):
        TripleIndex.load(io.StringIO(text))


def test_load_rejects_truncation(lin_index):
    sink = io.StringIO()
    lin_index.save(sink)
    text = sink.getvalue()
    with pytest.raises(CorruptIndex):
        TripleIndex.load(io.StringIO(text[: len(text) // 2]))


def test_load_rejects_empty():
    with pytest.raises(CorruptIndex):
        TripleIndex.load(io.StringIO(""))


_WORDS = st.tuples(st.text(alphabet="abcd", min_size=1, max_size=3), st.sampled_from(["N", "V"]))
_TRIPLES = st.lists(
    st.tuples(_WORDS, st.sampled_from(["sbj", "obj", "mod"]), _WORDS),
    min_size=0,
    max_size=20,
)


@given(_TRIPLES)
def test_save_load_save_identity_property(raw):
    ix = TripleIndex()
    for gov, rel, dep in raw:
        ix.add_triple(DepTriple(WordKey(*gov), rel, WordKey(*dep)))
    sink = io.StringIO()
    ix.save(sink)
    first = sink.getvalue()
    loaded = TripleIndex.load(io.StringIO(first))
    sink2 = io.StringIO()
    loaded.save(sink2)
    assert sink2.getvalue() == first
    assert loaded.feature_sets == ix.feature_sets


@given(_TRIPLES)
def test_carrier_counts_match_feature_sets(raw):
    ix = TripleIndex()
    for gov, rel, dep in raw:
        ix.add_triple(DepTriple(WordKey(*gov), rel, WordKey(*dep)))
    carriers = ix.pos_feature_carriers
    for (pos, feature), count in carriers.items():
        manual = sum(
            1
            for word, feats in ix.feature_sets.items()
            if word.pos == pos and feature in feats
        )
        assert manual == count
    for pos, size in ix.pos_vocab_size.items():
        assert size == sum(1 for w in ix.feature_sets if w.pos == pos)
