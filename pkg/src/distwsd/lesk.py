"""Gloss-overlap scorers.

Three flavours: the basic overlap between two senses' gloss bags, the
variant that compares a sense against the target's sentence context, and
the simplified extended form that first widens each gloss bag with the
glosses of directly related senses.  All overlaps are word-level set
intersections; word order never matters.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .corpus import Sentence, Token, content_tokens
from .inventory import Sense, SenseInventory, gloss_bag


class LeskAlgorithm(enum.Enum):
    BASIC = "basic"
    VARIANT = "variant"
    EXTENDED = "extended"


@dataclass(frozen=True)
class ContextBag:
    """Content lemmas of the target's sentence, minus the target's own lemma."""

    lemmas: frozenset[str]

    @classmethod
    def from_sentence(cls, sentence: Sentence, target: Token, *, with_pos: bool = False) -> "ContextBag":
        items = set()
        for tok in content_tokens(sentence):
            if tok.key.lemma == target.key.lemma:
                continue
            items.add(tok.key.render() if with_pos else tok.key.lemma)
        return cls(lemmas=frozenset(items))


def lesk_basic(s1: Sense, s2: Sense, *, pos_strict: bool = False) -> int:
    """Number of content lemmas the two gloss bags share."""
    return len(gloss_bag(s1, with_pos=pos_strict) & gloss_bag(s2, with_pos=pos_strict))


def lesk_variant(ctx: ContextBag, sense: Sense, *, pos_strict: bool = False) -> int:
    """Number of context lemmas found in the sense's gloss bag."""
    return len(ctx.lemmas & gloss_bag(sense, with_pos=pos_strict))


def expanded_bag(inv: SenseInventory, sense: Sense, *, pos_strict: bool = False) -> frozenset[str]:
    """Gloss bag of the sense united with the bags of its related senses
    (one relation hop, all relation types)."""
    bag = set(gloss_bag(sense, with_pos=pos_strict))
    for related in inv.related_senses(sense):
        bag |= gloss_bag(related, with_pos=pos_strict)
    return frozenset(bag)


def lesk_extended_simplified(inv: SenseInventory, s1: Sense, s2: Sense, *, pos_strict: bool = False) -> int:
    """Overlap of the relation-expanded gloss bags."""
    return len(expanded_bag(inv, s1, pos_strict=pos_strict) & expanded_bag(inv, s2, pos_strict=pos_strict))


def sense_pair_score(
    alg: LeskAlgorithm,
    inv: SenseInventory,
    ctx: ContextBag,
    s1: Sense,
    s2: Sense,
    *,
    pos_strict: bool = False,
) -> int:
    """Score a candidate sense s1 against a neighbor sense s2.

    The variant algorithm has no second sense: it scores s1 against the
    context bag and ignores s2 entirely.
    """
    if alg is LeskAlgorithm.BASIC:
        return lesk_basic(s1, s2, pos_strict=pos_strict)
    if alg is LeskAlgorithm.VARIANT:
        return lesk_variant(ctx, s1, pos_strict=pos_strict)
    return lesk_extended_simplified(inv, s1, s2, pos_strict=pos_strict)
