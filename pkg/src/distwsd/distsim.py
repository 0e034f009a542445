"""Distributional similarity measures: Lin feature overlap, vector cosine, combined.

The Lin measure compares two same-POS words by the information content of
their shared syntactic features relative to the information content of each
word's full feature set.  The cosine measure compares dense word vectors
and carries no POS constraint.  The combined measure is the arithmetic mean
of the two on same-POS pairs.
"""

from __future__ import annotations

import enum
import math
import weakref
from typing import IO, Iterable

import numpy as np

from . import _kernels
from .corpus import WordKey, coarse_pos
from .errors import DistwsdError
from .index import TripleIndex


class Measure(enum.Enum):
    LIN = "lin"
    W2V = "w2v"
    ALL = "all"


class PosMismatch(DistwsdError):
    pass


class BothFeatureless(DistwsdError):
    """Raised when the Lin denominator I(F(w1)) + I(F(w2)) is zero."""


class MissingVector(DistwsdError):
    def __init__(self, word: WordKey):
        super().__init__(f"no vector for {word.render()}")
        self.word = word


class VectorsError(DistwsdError):
    """Base for vector-file parsing failures."""


class BadHeader(VectorsError):
    pass


class DimensionMismatch(VectorsError):
    def __init__(self, line_no: int, reason: str):
        super().__init__(f"line {line_no}: {reason}")
        self.line_no = line_no


class ZeroVector(VectorsError):
    def __init__(self, line_no: int):
        super().__init__(f"line {line_no}: zero vector rejected")
        self.line_no = line_no


class VectorSpace:
    """Dense word vectors with precomputed norms for cosine queries."""

    def __init__(self, dimension: int, matrix: np.ndarray, rows: dict[WordKey, int], duplicates: int = 0):
        self.dimension = dimension
        self.matrix = matrix
        self.rows = rows
        self.norms = np.sqrt((matrix * matrix).sum(axis=1)) if matrix.size else np.zeros(len(matrix))
        self.duplicates = duplicates  # tokens that appeared more than once (last won)

    def __contains__(self, word: WordKey) -> bool:
        return word in self.rows

    def __len__(self) -> int:
        return len(self.rows)

    def vector(self, word: WordKey) -> np.ndarray:
        try:
            return self.matrix[self.rows[word]]
        except KeyError:
            raise MissingVector(word) from None

    def norm(self, word: WordKey) -> float:
        try:
            return float(self.norms[self.rows[word]])
        except KeyError:
            raise MissingVector(word) from None


def load_vectors(source: IO[str] | Iterable[str]) -> VectorSpace:
    """Parse word2vec text format: a ``<count> <dim>`` header then one
    ``token v1 .. vdim`` row per line, tokens rendered ``lemma_POS``.

    Duplicate tokens keep the last row and bump ``duplicates``.  Rows whose
    token has no underscore are kept under an empty POS code; they are
    harmless and simply never match corpus words.
    """
    lines = iter(source)
    try:
        header = next(lines)
    except StopIteration:
        raise BadHeader("empty vector file") from None
    parts = header.split()
    if len(parts) != 2:
        raise BadHeader(f"expected '<count> <dimension>', got {header.strip()!r}")
    try:
        declared, dim = int(parts[0]), int(parts[1])
    except ValueError:
        raise BadHeader(f"non-integer header {header.strip()!r}") from None
    if declared < 0 or dim < 1:
        raise BadHeader(f"bad header values {declared} {dim}")

    rows: dict[WordKey, int] = {}
    vectors: list[np.ndarray] = []
    duplicates = 0
    seen = 0
    for line_no, raw in enumerate(lines, start=2):
        line = raw.strip()
        if not line:
            continue
        fields = line.split()
        token, values = fields[0], fields[1:]
        if len(values) != dim:
            raise DimensionMismatch(line_no, f"expected {dim} values, got {len(values)}")
        try:
            vec = np.array([float(v) for v in values], dtype=np.float64)
        except ValueError:
            raise DimensionMismatch(line_no, "non-numeric vector value") from None
        if not np.any(vec):
            raise ZeroVector(line_no)
        lemma, sep, pos = token.rpartition("_")
        key = WordKey(lemma.lower(), coarse_pos(pos)) if sep and lemma else WordKey(token.lower(), "")
        seen += 1
        if key in rows:
            vectors[rows[key]] = vec
            duplicates += 1
        else:
            rows[key] = len(vectors)
            vectors.append(vec)
    if seen != declared:
        raise BadHeader(f"header declared {declared} rows, found {seen}")
    matrix = np.vstack(vectors) if vectors else np.zeros((0, dim))
    return VectorSpace(dim, matrix, rows, duplicates)


# -- Lin similarity --------------------------------------------------------

class _LinPack:
    """Per-index numeric view: sorted feature-id arrays with aligned
    information values, one row per indexed word."""

    def __init__(self, ix: TripleIndex):
        all_features = sorted({f for feats in ix.feature_sets.values() for f in feats})
        feature_id = {f: i for i, f in enumerate(all_features)}
        self.rows: dict[WordKey, int] = {}
        self.ids: list[np.ndarray] = []
        self.info: list[np.ndarray] = []
        self.totals: list[float] = []
        carriers = ix.pos_feature_carriers
        vocab = ix.pos_vocab_size
        for word in sorted(ix.feature_sets):
            feats = sorted(ix.feature_sets[word])
            ids = np.array([feature_id[f] for f in feats], dtype=np.int64)
            info = np.empty(len(feats), dtype=np.float64)
            for k, f in enumerate(feats):
                p = carriers[(word.pos, f)] / vocab[word.pos]
                info[k] = 0.0 if p == 1.0 else -math.log(p)
            self.rows[word] = len(self.ids)
            self.ids.append(ids)
            self.info.append(info)
            # Total computed with the active kernel so identical feature
            # sets compare to exactly 1.0.
            self.totals.append(float(_kernels.shared_information(ids, info, ids)))

    _EMPTY_IDS = np.empty(0, dtype=np.int64)
    _EMPTY_INFO = np.empty(0, dtype=np.float64)

    def row(self, word: WordKey) -> tuple[np.ndarray, np.ndarray, float]:
        i = self.rows.get(word)
        if i is None:
            return self._EMPTY_IDS, self._EMPTY_INFO, 0.0
        return self.ids[i], self.info[i], self.totals[i]


_pack_cache: "weakref.WeakKeyDictionary[TripleIndex, _LinPack]" = weakref.WeakKeyDictionary()


def _lin_pack(ix: TripleIndex) -> _LinPack:
    pack = _pack_cache.get(ix)
    if pack is None:
        pack = _LinPack(ix)
        _pack_cache[ix] = pack
    return pack


def lin_similarity(ix: TripleIndex, w1: WordKey, w2: WordKey) -> float:
    """2 * I(shared features) / (I(F(w1)) + I(F(w2))), in [0, 1].

    Words absent from the index have an empty feature set and score 0
    against any featured word; if the denominator is zero the pair is
    unmeasurable and :class:`BothFeatureless` is raised.
    """
    if w1.pos != w2.pos:
        raise PosMismatch(f"{w1.render()} vs {w2.render()}")
    pack = _lin_pack(ix)
    ids1, info1, total1 = pack.row(w1)
    ids2, _, total2 = pack.row(w2)
    denom = total1 + total2
    if denom == 0.0:
        raise BothFeatureless(f"{w1.render()} and {w2.render()} carry no informative features")
    shared = _kernels.shared_information(ids1, info1, ids2)
    return 2.0 * shared / denom


def cosine_similarity(vs: VectorSpace, w1: WordKey, w2: WordKey) -> float:
    """Plain vector cosine; raises :class:`MissingVector` for unknown words."""
    v1 = vs.vector(w1)
    v2 = vs.vector(w2)
    return float(np.dot(v1, v2) / (vs.norm(w1) * vs.norm(w2)))


def combined_similarity(ix: TripleIndex, vs: VectorSpace, w1: WordKey, w2: WordKey) -> float:
    """Arithmetic mean of the Lin and cosine measures, same-POS pairs only."""
    if w1.pos != w2.pos:
        raise PosMismatch(f"{w1.render()} vs {w2.render()}")
    return (lin_similarity(ix, w1, w2) + cosine_similarity(vs, w1, w2)) / 2.0


def similarity(
    measure: Measure,
    ix: TripleIndex | None,
    vs: VectorSpace | None,
    w1: WordKey,
    w2: WordKey,
) -> float:
    """Dispatch to the chosen measure, checking required resources."""
    if measure is Measure.LIN:
        if ix is None:
            raise DistwsdError("measure lin requires a triple index")
        return lin_similarity(ix, w1, w2)
    if measure is Measure.W2V:
        if vs is None:
            raise DistwsdError("measure w2v requires word vectors")
        return cosine_similarity(vs, w1, w2)
    if ix is None or vs is None:
        raise DistwsdError("measure all requires both a triple index and word vectors")
    return combined_similarity(ix, vs, w1, w2)


def similarity_or_none(
    measure: Measure,
    ix: TripleIndex | None,
    vs: VectorSpace | None,
    w1: WordKey,
    w2: WordKey,
) -> float | None:
    """Ranking-friendly wrapper: unmeasurable pairs yield None instead of
    raising, so neighbor selection can skip them."""
    try:
        return similarity(measure, ix, vs, w1, w2)
    except (PosMismatch, BothFeatureless, MissingVector):
        return None


def rank_by_cosine(vs: VectorSpace, target: WordKey, candidates: list[WordKey]) -> list[float | None]:
    """Cosine of target against each candidate; None where no vector exists.

    Uses the batch kernel over the candidate rows present in the space.
    """
    if target not in vs:
        return [None] * len(candidates)
    present = [i for i, c in enumerate(candidates) if c in vs]
    out: list[float | None] = [None] * len(candidates)
    if not present:
        return out
    rows = np.array([vs.rows[candidates[i]] for i in present], dtype=np.intp)
    matrix = vs.matrix[rows]
    norms = vs.norms[rows]
    scores = _kernels.cosine_many(matrix, norms, vs.vector(target), vs.norm(target))
    for i, s in zip(present, scores):
        out[i] = float(s)
    return out
