import io

import pytest

from distwsd.corpus import parse_corpus
from distwsd.index import build_index

# Four nouns with hand-checkable feature sets.  Nouns: cat, dog, car, law
# (vocabulary size 4).  cat and dog share sbj(chase); their remaining
# feature each has probability 1/4, so sim(cat, dog) = 2*ln2 / (6*ln2) = 1/3.
# car and law share nothing.
LIN_CORPUS = """\
1\tcat\tcat\tN\t2\tsbj
2\tchase\tchase\tV\t0\troot

1\tfeed\tfeed\tV\t0\troot
2\tcat\tcat\tN\t1\tobj

1\tdog\tdog\tN\t2\tsbj
2\tchase\tchase\tV\t0\troot

1\tdog\tdog\tN\t2\tsbj
2\tbark\tbark\tV\t0\troot

1\tdrive\tdrive\tV\t0\troot
2\tcar\tcar\tN\t1\tobj

1\tpass\tpass\tV\t0\troot
2\tlaw\tlaw\tN\t1\tobj
"""


@pytest.fixture(scope="session")
def lin_sentences():
    return parse_corpus(io.StringIO(LIN_CORPUS))


@pytest.fixture(scope="session")
def lin_index(lin_sentences):
    return build_index(lin_sentences)


# Training text for an ambiguity fixture: bass, trout and salmon occur in
# identical fishing contexts, chord and melody in playing contexts, so
# bass is distributionally close to the fish nouns and unrelated to the
# music nouns.
FIELD_TRAIN = """\
1\tcatch\tcatch\tV\t0\troot
2\tbass\tbass\tN\t1\tobj

1\tbass\tbass\tN\t2\tsbj
2\tswim\tswim\tV\t0\troot

1\tcatch\tcatch\tV\t0\troot
2\ttrout\ttrout\tN\t1\tobj

1\ttrout\ttrout\tN\t2\tsbj
2\tswim\tswim\tV\t0\troot

1\tcatch\tcatch\tV\t0\troot
2\tsalmon\tsalmon\tN\t1\tobj

1\tsalmon\tsalmon\tN\t2\tsbj
2\tswim\tswim\tV\t0\troot

1\tplay\tplay\tV\t0\troot
2\tchord\tchord\tN\t1\tobj

1\tplay\tplay\tV\t0\troot
2\tmelody\tmelody\tN\t1\tobj
"""

# Evaluation sentences put the misleading music nouns at the end, where
# positional selection looks first, and the fish nouns at the start.
FIELD_EVAL_SENTENCE = """\
1\ttrout\ttrout\tN\t3\tdep
2\tsalmon\tsalmon\tN\t3\tdep
3\tbass\tbass\tN\t0\troot
4\tchord\tchord\tN\t3\tdep
5\tmelody\tmelody\tN\t3\tdep
"""

FIELD_INVENTORY = [
    {"id": "bass%fish", "lemmas": ["bass_N"], "gloss": "freshwater fish with a fin",
     "relations": [{"type": "hypernym", "target": "trout%1"}]},
    {"id": "bass%music", "lemmas": ["bass_N"], "gloss": "low musical tone with deep pitch",
     "relations": [{"type": "hypernym", "target": "chord%1"}]},
    {"id": "trout%1", "lemmas": ["trout_N"], "gloss": "freshwater fish with a fin"},
    {"id": "salmon%1", "lemmas": ["salmon_N"], "gloss": "pink fish that swims upstream"},
    {"id": "chord%1", "lemmas": ["chord_N"], "gloss": "combination of musical tone"},
    {"id": "melody%1", "lemmas": ["melody_N"], "gloss": "sequence of musical tone with pitch"},
]


@pytest.fixture(scope="session")
def field_index():
    return build_index(parse_corpus(io.StringIO(FIELD_TRAIN)))


@pytest.fixture(scope="session")
def field_inventory():
    import json

    from distwsd.inventory import load_inventory

    lines = "\n".join(json.dumps(r) for r in FIELD_INVENTORY)
    return load_inventory(io.StringIO(lines))


@pytest.fixture()
def field_sentence():
    (s,) = parse_corpus(io.StringIO(FIELD_EVAL_SENTENCE))
    return s


def pytest_terminal_summary(terminalreporter):
    """Print one line per acceptance criterion after the run."""
    import sys

    module = sys.modules.get("test_acceptance")
    results = getattr(module, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for line in results:
            terminalreporter.write_line(line)
