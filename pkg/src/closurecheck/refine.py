"""Input-map construction and the two alignment-refinement passes.

Pass 1 uses the translation's constituency tree: an unaligned translation
token inside a (non-verb) phrase inherits the alignments of its neighbors in
that phrase. Pass 2 forces agreement on tokens that occur exactly once in both
translations. Both passes only ever add edges.
"""

from __future__ import annotations

import dataclasses
import logging
from typing import Optional

from closurecheck import treebank
from closurecheck.model import (
    IT3,
    IT4,
    REPLACEMENT_KINDS,
    AlignmentMap,
    InputMap,
    TestCasePair,
    TokenizedText,
)

logger = logging.getLogger("closurecheck.refine")


def build_input_map(pair: TestCasePair) -> InputMap:
    """Map unmutated source-input tokens to their follow-up copies.

    Replacement transformations keep positions; insertion shifts the tail;
    extraction has no derivable shape, so the record must carry the map.
    """
    if pair.input_map is not None:
        return pair.input_map
    t = pair.transformation
    n = len(pair.source_input)
    if t.kind in REPLACEMENT_KINDS:
        return InputMap(frozenset(
            (i, i) for i in range(n)
            if i not in t.mutated_source and i not in t.mutated_followup))
    if t.kind == IT4:
        start = min(t.mutated_followup)
        span = len(t.mutated_followup)
        return InputMap(frozenset(
            (i, i if i < start else i + span) for i in range(n)))
    if t.kind == IT3:
        raise ValueError(
            f"pair {pair.id}: IT-3 requires an explicit input_map in the record")
    raise ValueError(f"pair {pair.id}: unknown transformation kind {t.kind!r}")


def refine_phrase_alignment(source: TokenizedText, translation: TokenizedText,
                            tree: Optional[treebank.ConstituencyTree],
                            m: AlignmentMap) -> AlignmentMap:
    """Tree-guided pass: returns a superset of `m`, never touches verb phrases."""
    if tree is None:
        return m
    table = treebank.label_table_for(translation.language)
    unaligned = [j for j in range(len(translation)) if not m.aligned_inputs(j)]
    for j in unaligned:
        subtree = treebank.smallest_covering_subtree(tree, j)
        if treebank.classify_label(subtree.label or "", table) != treebank.PHRASE:
            continue
        new_edges = set()
        for neighbor in treebank.adjacent_leaves(subtree, j):
            # Reads the current map: earlier additions in this pass count.
            for i in m.aligned_inputs(neighbor):
                new_edges.add((i, j))
        if new_edges:
            m = m.with_edges(new_edges)
    return m


def _surfaces(text: TokenizedText, indices) -> frozenset[str]:
    return frozenset(text.tokens[i] for i in indices)


def _unique_positions(text: TokenizedText) -> dict[str, int]:
    counts: dict[str, int] = {}
    position: dict[str, int] = {}
    for i, tok in enumerate(text.tokens):
        counts[tok] = counts.get(tok, 0) + 1
        position[tok] = i
    return {tok: position[tok] for tok, c in counts.items() if c == 1}


def refine_shared_unique_tokens(pair: TestCasePair, m_s: AlignmentMap,
                                m_f: AlignmentMap) -> tuple[AlignmentMap, AlignmentMap]:
    """Agreement pass over tokens unique to each translation.

    When the two occurrences of such a token are aligned to different input
    words (by surface), both sides gain edges to every input token carrying a
    surface from the union of the two sets.
    """
    unique_s = _unique_positions(pair.source_translation)
    unique_f = _unique_positions(pair.followup_translation)
    add_s: set[tuple[int, int]] = set()
    add_f: set[tuple[int, int]] = set()
    for token in (t for t in unique_s if t in unique_f):
        j_s, j_f = unique_s[token], unique_f[token]
        surf_s = _surfaces(pair.source_input, m_s.aligned_inputs(j_s))
        surf_f = _surfaces(pair.followup_input, m_f.aligned_inputs(j_f))
        if surf_s == surf_f:
            continue
        union = surf_s | surf_f
        add_s.update((i, j_s) for i, tok in enumerate(pair.source_input.tokens)
                     if tok in union)
        add_f.update((i, j_f) for i, tok in enumerate(pair.followup_input.tokens)
                     if tok in union)
    return m_s.with_edges(add_s), m_f.with_edges(add_f)


def _parse_tree(pair_id: str, which: str, text: Optional[str]) -> Optional[treebank.ConstituencyTree]:
    if text is None:
        logger.debug("pair %s: no %s tree, phrase refinement skipped", pair_id, which)
        return None
    return treebank.parse_bracket(text)


def refine(pair: TestCasePair) -> TestCasePair:
    """Both passes, both sides; result carries superset alignments."""
    tree_s = _parse_tree(pair.id, "source", pair.tree_source_translation)
    tree_f = _parse_tree(pair.id, "followup", pair.tree_followup_translation)
    m_s = refine_phrase_alignment(pair.source_input, pair.source_translation,
                                  tree_s, pair.alignment_source)
    m_f = refine_phrase_alignment(pair.followup_input, pair.followup_translation,
                                  tree_f, pair.alignment_followup)
    m_s, m_f = refine_shared_unique_tokens(pair, m_s, m_f)
    return dataclasses.replace(pair, alignment_source=m_s, alignment_followup=m_f)
