import io

import pytest
from hypothesis import given, strategies as st

from distwsd.corpus import (
    ADJ,
    ADV,
    CONTENT_POS,
    NOUN,
    VERB,
    CorpusError,
    DepTriple,
    HeadOutOfRange,
    MalformedLine,
    NonContiguousIds,
    Sentence,
    Token,
    WordKey,
    coarse_pos,
    content_tokens,
    extract_triples,
    iter_sentences,
    parse_corpus,
    parse_word_key,
    serialize_corpus,
)
from util import corpus_from, make_sentence


def test_coarse_pos_prefix_mapping():
    assert coarse_pos("NN") == NOUN
    assert coarse_pos("NNS") == NOUN
    assert coarse_pos("VBD") == VERB
    assert coarse_pos("JJ") == ADJ
    assert coarse_pos("RB") == ADV
    assert coarse_pos("ADJ") == ADJ
    assert coarse_pos("ADV") == ADV
    assert coarse_pos("adj") == ADJ
    assert coarse_pos("n") == NOUN


def test_coarse_pos_keeps_function_tags_verbatim():
    for tag in ("DT", "IN", "PRP", ".", "CC", "TO"):
        assert coarse_pos(tag) == tag
        assert coarse_pos(tag) not in CONTENT_POS


def test_parse_word_key_splits_on_last_underscore():
    assert parse_word_key("short_Adj") == WordKey("short", "Adj")
    assert parse_word_key("in_IN") == WordKey("in", "IN")
    assert parse_word_key("a_few_Adj") == WordKey("a_few", "Adj")
    assert parse_word_key("Cat_NN") == WordKey("cat", "N")


@pytest.mark.parametrize("bad", ["", "word", "_N", "word_"])
def test_parse_word_key_rejects_malformed(bad):
    with pytest.raises(CorpusError):
        parse_word_key(bad)


def test_word_key_render_and_content_flag():
    assert WordKey("place", "V").render() == "place_V"
    assert WordKey("place", "V").is_content
    assert not WordKey("of", "IN").is_content


SIMPLE = """\
1\tThe\tthe\tDT\t2\tdet
2\tcat\tcat\tNN\t3\tsbj
3\tsleeps\tsleep\tVBZ\t0\troot
"""


def test_parse_corpus_basic():
    sents = corpus_from(SIMPLE)
    assert len(sents) == 1
    (s,) = sents
    assert s.doc_id == "d0"
    assert s.sentence_index == 0
    assert [t.key.render() for t in s.tokens] == ["the_DT", "cat_N", "sleep_V"]
    assert [t.surface for t in s.tokens] == ["The", "cat", "sleeps"]
    assert [t.head for t in s.tokens] == [2, 3, 0]


def test_parse_corpus_doc_markers_reset_sentence_index():
    text = (
        "# doc alpha\n" + SIMPLE + "\n" + SIMPLE + "\n# doc beta\n" + SIMPLE
    )
    sents = corpus_from(text)
    assert [(s.doc_id, s.sentence_index) for s in sents] == [
        ("alpha", 0),
        ("alpha", 1),
        ("beta", 0),
    ]


def test_doc_marker_without_blank_line_still_splits():
    text = SIMPLE + "# doc later\n" + SIMPLE
    sents = corpus_from(text)
    assert [(s.doc_id, s.sentence_index) for s in sents] == [("d0", 0), ("later", 0)]


def test_comments_and_extra_blank_lines_are_ignored():
    text = "# a comment\n\n\n" + SIMPLE + "\n# trailing\n\n"
    assert len(corpus_from(text)) == 1


def test_parse_corpus_reports_line_numbers():
    text = SIMPLE + "\n1\tonly\tfive\tcolumns\there\n"
    with pytest.raises(MalformedLine) as err:
        corpus_from(text)
    assert err.value.line_no == 5
    assert "5" in str(err.value)


@pytest.mark.parametrize(
    "row",
    [
        "1\tx\tx\tN\t0",  # five columns
        "1\tx\tx\tN\t0\t\t",  # seven columns
        "1\tx\t\tN\t0\troot",  # empty column
        "one\tx\tx\tN\t0\troot",  # non-integer id
        "1\tx\tx\tN\tzero\troot",  # non-integer head
    ],
)
def test_parse_corpus_rejects_malformed_rows(row):
    with pytest.raises(MalformedLine):
        corpus_from(row + "\n")


def test_parse_corpus_rejects_gapped_ids():
    text = "1\ta\ta\tN\t0\troot\n3\tb\tb\tN\t1\tdep\n"
    with pytest.raises(NonContiguousIds):
        corpus_from(text)


def test_parse_corpus_rejects_head_out_of_range():
    with pytest.raises(HeadOutOfRange):
        corpus_from("1\ta\ta\tN\t2\tdep\n")


def test_parse_corpus_rejects_self_headed_token():
    with pytest.raises(HeadOutOfRange):
        corpus_from("1\ta\ta\tN\t1\tdep\n")


def test_sentence_constructor_validates_like_the_parser():
    t = Token(index=2, surface="a", key=WordKey("a", "N"), head=0, deprel="_")
    with pytest.raises(NonContiguousIds):
        Sentence(tokens=(t,))
    t = Token(index=1, surface="a", key=WordKey("a", "N"), head=5, deprel="_")
    with pytest.raises(HeadOutOfRange):
        Sentence(tokens=(t,))


def test_iter_sentences_is_lazy_and_matches_parse():
    stream = io.StringIO(SIMPLE + "\n" + SIMPLE)
    it = iter_sentences(stream)
    first = next(it)
    assert first.sentence_index == 0
    assert list(it) == corpus_from(SIMPLE + "\n" + SIMPLE)[1:]


CLAUSE = """\
1\twe\twe\tPRP\t3\tsbj
2\t've\thave\tVBP\t3\taux
3\tmoved\tmove\tVBN\t0\troot
4\ton\ton\tRB\t3\tadvmod
5\t.\t.\t.\t3\tpunct
"""


def test_extract_triples_clause_with_auxiliary():
    (s,) = corpus_from(CLAUSE)
    move = WordKey("move", "V")
    assert extract_triples(s) == [
        DepTriple(move, "sbj", WordKey("we", "PRP")),
        DepTriple(move, "aux", WordKey("have", "V")),
        DepTriple(move, "advmod", WordKey("on", "Adv")),
        DepTriple(move, "punct", WordKey(".", ".")),
    ]


def test_extract_triples_skips_root_only():
    (s,) = corpus_from(SIMPLE)
    triples = extract_triples(s)
    assert len(triples) == 2
    assert all(t.governor for t in triples)
    assert WordKey("sleep", "V") not in [t.dependent for t in triples]


def test_content_tokens_filters_by_pos():
    (s,) = corpus_from(CLAUSE)
    assert [t.key.render() for t in content_tokens(s)] == ["have_V", "move_V", "on_Adv"]


def test_serialize_round_trips_sentences():
    text = "# doc alpha\n" + SIMPLE + "\n# doc beta\n" + CLAUSE
    sents = corpus_from(text)
    rendered = serialize_corpus(sents)
    assert parse_corpus(io.StringIO(rendered)) == sents
    assert serialize_corpus(parse_corpus(io.StringIO(rendered))) == rendered


def test_serialize_empty_is_empty():
    assert serialize_corpus([]) == ""


_LEMMAS = st.text(alphabet="abcdef", min_size=1, max_size=6)
_POS = st.sampled_from(["N", "V", "Adj", "Adv", "DT", "IN"])


@st.composite
def _sentences(draw):
    n = draw(st.integers(min_value=1, max_value=8))
    doc = draw(st.sampled_from(["d0", "docA", "docB"]))
    tokens = []
    for i in range(1, n + 1):
        key = WordKey(draw(_LEMMAS), draw(_POS))
        head = draw(st.integers(min_value=0, max_value=n).filter(lambda h: h != i))
        deprel = draw(st.sampled_from(["sbj", "obj", "det", "mod"]))
        tokens.append(Token(index=i, surface=key.lemma, key=key, head=head, deprel=deprel))
    return Sentence(tokens=tuple(tokens), doc_id=doc, sentence_index=0)


@given(st.lists(_sentences(), min_size=1, max_size=5))
def test_serialize_parse_round_trip_property(sents):
    # Docs must appear in contiguous runs with indexes counting up for the
    # rendered text to parse back identically; renumber accordingly.
    sents = sorted(sents, key=lambda s: s.doc_id)
    renumbered = []
    counters: dict[str, int] = {}
    for s in sents:
        idx = counters.get(s.doc_id, 0)
        counters[s.doc_id] = idx + 1
        renumbered.append(Sentence(tokens=s.tokens, doc_id=s.doc_id, sentence_index=idx))
    rendered = serialize_corpus(renumbered)
    assert parse_corpus(io.StringIO(rendered)) == renumbered


def test_make_sentence_helper_builds_valid_sentences():
    s = make_sentence("cat_N chase_V dog_N")
    assert [t.key.render() for t in s.tokens] == ["cat_N", "chase_V", "dog_N"]
    assert len(s) == 3
