"""The output-relation check: per-closure comparison, mutated-word pooling,
leftover matching, and verdict assembly.

Failure modes map one-to-one onto closure kinds: a common-word closure fails
when its two translation fragments are dissimilar; mutated-word closures fail
(IT-5 only) when the replaced words translate too similarly; translation
tokens outside any matched closure fail when no counterpart absorbs them.
"""

from __future__ import annotations

import dataclasses
from typing import Iterable, Optional, Sequence

from closurecheck import closure as closure_mod
from closurecheck import refine as refine_mod
from closurecheck.model import (
    CWC,
    CWC_DISSIMILAR,
    FOLLOWUP,
    IT5,
    LEFTOVER_UNMATCHED,
    MWC,
    MWC_SIMILAR,
    SOURCE,
    UWC,
    FailingClosure,
    FineGrainedViolation,
    TestCasePair,
    Verdict,
    WordClosure,
)
from closurecheck.similarity import SimilarityProvider, TokenRef


def _refs(pair: TestCasePair, side: str, indices: Iterable[int]) -> list[TokenRef]:
    text = pair.source_translation if side == SOURCE else pair.followup_translation
    return [TokenRef(text.tokens[i], side, i) for i in sorted(indices)]


def _non_stopword(pair: TestCasePair, side: str, indices: Iterable[int],
                  stopwords: frozenset[str]) -> frozenset[int]:
    text = pair.source_translation if side == SOURCE else pair.followup_translation
    return frozenset(i for i in indices if text.tokens[i] not in stopwords)


def compare_cwc(pair: TestCasePair, c: WordClosure, provider: SimilarityProvider) -> bool:
    """True = the two translation fragments agree."""
    return provider.similar(_refs(pair, SOURCE, c.tran_s),
                            _refs(pair, FOLLOWUP, c.tran_f),
                            pair.contextual_vectors)


def compare_mwc_pool(pair: TestCasePair, mwcs: Sequence[WordClosure],
                     provider: SimilarityProvider,
                     stopwords: frozenset[str]) -> bool:
    """IT-5 only: mutated words must NOT translate similarly. True = pass.

    Pools the translations of all mutated-word closures (stopword-only ones
    excluded like everywhere else); an empty pool on either side passes
    vacuously, since absence of a translation proves nothing here.
    """
    pooled = [c for c in mwcs if not closure_mod.stopword_only(c, pair, stopwords)]
    pool_s = [r for c in pooled for r in _refs(pair, SOURCE, c.tran_s)]
    pool_f = [r for c in pooled for r in _refs(pair, FOLLOWUP, c.tran_f)]
    if not pool_s or not pool_f:
        return True
    return not provider.similar(pool_s, pool_f, pair.contextual_vectors)


def _match_score(provider: SimilarityProvider, a: TokenRef, b: TokenRef,
                 contextual) -> tuple[bool, float]:
    if a.surface == b.surface:
        return True, 1.0
    if provider.synonym_hit([a], [b]):
        return True, 1.0
    score = provider.score([a], [b], contextual)
    if not isinstance(score, float):  # ABSTAIN or no vector channel
        return False, 0.0
    return score >= provider.threshold, score


def compare_leftovers(pair: TestCasePair, closures: Sequence[WordClosure],
                      stopwords: frozenset[str],
                      provider: SimilarityProvider) -> tuple[frozenset[int], frozenset[int]]:
    """Greedy one-to-one matching of orphan translation tokens.

    Orphans are non-stopword tokens inside unmatched-word closures or inside
    no closure at all. Mutated-word closures never contribute. Candidate pairs
    are taken best-score-first; ties break on the lower (source index,
    follow-up index). Returns the tokens left unmatched, per side.
    """
    covered_s = {i for c in closures for i in c.tran_s}
    covered_f = {j for c in closures for j in c.tran_f}
    uwc_s = {i for c in closures if c.kind == UWC for i in c.tran_s}
    uwc_f = {j for c in closures if c.kind == UWC for j in c.tran_f}
    n_s = len(pair.source_translation)
    n_f = len(pair.followup_translation)
    o_s = _non_stopword(pair, SOURCE, uwc_s | (set(range(n_s)) - covered_s), stopwords)
    o_f = _non_stopword(pair, FOLLOWUP, uwc_f | (set(range(n_f)) - covered_f), stopwords)

    candidates = []
    for a in _refs(pair, SOURCE, o_s):
        for b in _refs(pair, FOLLOWUP, o_f):
            ok, score = _match_score(provider, a, b, pair.contextual_vectors)
            if ok:
                candidates.append((score, a.index, b.index))
    candidates.sort(key=lambda t: (-t[0], t[1], t[2]))
    matched_s: set[int] = set()
    matched_f: set[int] = set()
    for _, a_idx, b_idx in candidates:
        if a_idx not in matched_s and b_idx not in matched_f:
            matched_s.add(a_idx)
            matched_f.add(b_idx)
    return o_s - matched_s, o_f - matched_f


def check_pair(pair: TestCasePair, provider: SimilarityProvider,
               stopwords: frozenset[str],
               closures: Optional[Sequence[WordClosure]] = None) -> Verdict:
    """Verdict over already-refined alignments; builds closures when not given."""
    if closures is None:
        closures = closure_mod.classify_all(
            closure_mod.build_closures(pair), pair.transformation)
    failing: list[FailingClosure] = []
    fine_s: set[int] = set()
    fine_f: set[int] = set()

    for c in closures:
        if c.kind != CWC or closure_mod.stopword_only(c, pair, stopwords):
            continue
        if not compare_cwc(pair, c, provider):
            failing.append(FailingClosure(c, CWC_DISSIMILAR))
            fine_s |= _non_stopword(pair, SOURCE, c.tran_s, stopwords)
            fine_f |= _non_stopword(pair, FOLLOWUP, c.tran_f, stopwords)

    mwcs = [c for c in closures if c.kind == MWC]
    if pair.transformation.kind == IT5 and mwcs:
        if not compare_mwc_pool(pair, mwcs, provider, stopwords):
            flag_s: set[int] = set()
            flag_f: set[int] = set()
            for c in mwcs:
                flag_s |= _non_stopword(pair, SOURCE, c.tran_s, stopwords)
                flag_f |= _non_stopword(pair, FOLLOWUP, c.tran_f, stopwords)
            # A failure that flags nothing (all-stopword pool) cannot be
            # reported consistently; it downgrades to a pass.
            if flag_s or flag_f:
                failing.extend(FailingClosure(c, MWC_SIMILAR) for c in mwcs)
                fine_s |= flag_s
                fine_f |= flag_f

    unmatched_s, unmatched_f = compare_leftovers(pair, closures, stopwords, provider)
    if unmatched_s or unmatched_f:
        fine_s |= unmatched_s
        fine_f |= unmatched_f
        stray_s, stray_f = set(unmatched_s), set(unmatched_f)
        for c in closures:
            if c.kind == UWC and (c.tran_s & unmatched_s or c.tran_f & unmatched_f):
                failing.append(FailingClosure(c, LEFTOVER_UNMATCHED))
                stray_s -= c.tran_s
                stray_f -= c.tran_f
        if stray_s or stray_f:
            # Tokens outside every closure get one synthetic entry.
            failing.append(FailingClosure(
                WordClosure(frozenset(), frozenset(stray_s), frozenset(), frozenset(stray_f)),
                LEFTOVER_UNMATCHED))

    return Verdict(
        pair_id=pair.id,
        violation=bool(failing),
        fine_grained=FineGrainedViolation(frozenset(fine_s), frozenset(fine_f)),
        failing_closures=tuple(failing),
    )


def run_pair(pair: TestCasePair, provider: SimilarityProvider,
             stopwords: frozenset[str]) -> tuple[TestCasePair, list[WordClosure], Verdict]:
    """Full per-pair pipeline: input map, refinement, closures, verdict."""
    if pair.input_map is None:
        pair = dataclasses.replace(pair, input_map=refine_mod.build_input_map(pair))
    pair = refine_mod.refine(pair)
    closures = closure_mod.classify_all(closure_mod.build_closures(pair),
                                        pair.transformation)
    verdict = check_pair(pair, provider, stopwords, closures)
    return pair, closures, verdict
