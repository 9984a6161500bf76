"""Word-closure construction and classification.

A closure groups the input tokens of both sentences with the translation
tokens reachable from them through the two alignments and the input map.
Construction grows one closure per unmarked input token, source sentence
first, so closure numbering is reproducible.
"""

from __future__ import annotations

from typing import Iterable

from closurecheck.model import (
    CWC,
    MWC,
    UWC,
    AlignmentMap,
    InputMap,
    TestCasePair,
    TransformationMeta,
    WordClosure,
)


def _image(m: AlignmentMap, indices: Iterable[int], inverse: bool = False) -> set[int]:
    out: set[int] = set()
    for idx in indices:
        out |= m.aligned_inputs(idx) if inverse else m.aligned_outputs(idx)
    return out


def _grow(seed_side: str, seed: int, m_i: InputMap,
          m_s: AlignmentMap, m_f: AlignmentMap) -> WordClosure:
    sent_s: set[int] = {seed} if seed_side == "s" else set()
    sent_f: set[int] = {seed} if seed_side == "f" else set()
    tran_s: set[int] = set()
    tran_f: set[int] = set()
    while True:
        before = (len(sent_s), len(tran_s), len(sent_f), len(tran_f))
        sent_f |= {j for i in sent_s if (j := m_i.followup_of(i)) is not None}
        tran_s |= _image(m_s, sent_s)
        tran_f |= _image(m_f, sent_f)
        sent_f |= _image(m_f, tran_f, inverse=True)
        sent_s |= {i for j in sent_f if (i := m_i.source_of(j)) is not None}
        sent_s |= _image(m_s, tran_s, inverse=True)
        if (len(sent_s), len(tran_s), len(sent_f), len(tran_f)) == before:
            return WordClosure(frozenset(sent_s), frozenset(tran_s),
                               frozenset(sent_f), frozenset(tran_f))


def build_closures(pair: TestCasePair) -> list[WordClosure]:
    """One closure per connected group of input tokens, in seed order.

    Requires pair.input_map to be populated (see align-refine build step).
    Translation tokens aligned to nothing end up in no closure.
    """
    if pair.input_map is None:
        raise ValueError(f"pair {pair.id}: input_map must be built before closures")
    m_i, m_s, m_f = pair.input_map, pair.alignment_source, pair.alignment_followup
    marked_s: set[int] = set()
    marked_f: set[int] = set()
    closures: list[WordClosure] = []

    seeds = [("s", i) for i in range(len(pair.source_input))] + \
            [("f", i) for i in range(len(pair.followup_input))]
    for side, idx in seeds:
        if idx in (marked_s if side == "s" else marked_f):
            continue
        c = _grow(side, idx, m_i, m_s, m_f)
        marked_s |= c.sent_s
        marked_f |= c.sent_f
        closures.append(c)
    return closures


def classify_closure(c: WordClosure, t: TransformationMeta) -> str:
    # Mutation contamination dominates: a closure touching any mutated input
    # token is MWC even if it also holds unmutated tokens.
    if c.sent_s & t.mutated_source or c.sent_f & t.mutated_followup:
        return MWC
    if c.sent_s and c.sent_f and c.tran_s and c.tran_f:
        return CWC
    return UWC


def classify_all(closures: Iterable[WordClosure], t: TransformationMeta) -> list[WordClosure]:
    return [WordClosure(c.sent_s, c.tran_s, c.sent_f, c.tran_f, classify_closure(c, t))
            for c in closures]


def stopword_only(c: WordClosure, pair: TestCasePair, stopwords: frozenset[str] | set[str]) -> bool:
    """True when the closure carries no comparable content on either translation side."""
    surfaces = [pair.source_translation.tokens[i] for i in c.tran_s]
    surfaces += [pair.followup_translation.tokens[j] for j in c.tran_f]
    return all(s in stopwords for s in surfaces)
