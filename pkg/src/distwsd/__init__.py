"""Knowledge-based word sense disambiguation with distributional neighbour selection.

The pipeline: a dependency-annotated corpus is turned into a triple
index; the index (or a word2vec vector file) supplies word similarities;
for each polysemous word the most similar context words are selected and
a gloss overlap scorer picks the sense that best matches theirs.
"""

from .corpus import (
    Sentence,
    Token,
    WordKey,
    extract_triples,
    parse_corpus,
    parse_word_key,
    serialize_corpus,
)
from .distsim import Measure, VectorSpace, load_vectors
from .engine import (
    DISTRIBUTIONAL,
    LINEAR,
    Disambiguation,
    EngineConfig,
    Strategy,
    combination_count,
    disambiguate_corpus,
    disambiguate_word,
    select_neighbors,
)
from .errors import DistwsdError
from .evaluate import EvalReport, load_gold, render_report, score, sweep
from .index import TripleIndex, build_index
from .inventory import Sense, SenseInventory, load_inventory
from .lesk import LeskAlgorithm

__version__ = "0.1.0"

__all__ = [
    "DISTRIBUTIONAL",
    "LINEAR",
    "Disambiguation",
    "DistwsdError",
    "EngineConfig",
    "EvalReport",
    "LeskAlgorithm",
    "Measure",
    "Sense",
    "SenseInventory",
    "Sentence",
    "Strategy",
    "Token",
    "TripleIndex",
    "VectorSpace",
    "WordKey",
    "__version__",
    "build_index",
    "combination_count",
    "disambiguate_corpus",
    "disambiguate_word",
    "extract_triples",
    "load_gold",
    "load_inventory",
    "load_vectors",
    "parse_corpus",
    "parse_word_key",
    "render_report",
    "score",
    "select_neighbors",
    "serialize_corpus",
    "sweep",
]
