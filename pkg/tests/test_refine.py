"""Input-map derivation and the two alignment-refinement passes."""

import pytest

from closurecheck.model import (
    IT1,
    IT2,
    IT3,
    IT4,
    IT5,
    AlignmentMap,
    InputMap,
    TestCasePair,
    TokenizedText,
    TransformationMeta,
)
from closurecheck.refine import (
    build_input_map,
    refine,
    refine_phrase_alignment,
    refine_shared_unique_tokens,
)
from closurecheck import treebank


def make_pair(ss, ts, sf, tf, m_s=(), m_f=(), kind=IT2, ms=(), mf=(),
              input_map=None, tree_s=None, tree_f=None):
    return TestCasePair(
        id="unit",
        source_input=TokenizedText(tuple(ss), "en"),
        followup_input=TokenizedText(tuple(sf), "en"),
        source_translation=TokenizedText(tuple(ts), "zh"),
        followup_translation=TokenizedText(tuple(tf), "zh"),
        alignment_source=AlignmentMap.from_pairs(m_s),
        alignment_followup=AlignmentMap.from_pairs(m_f),
        transformation=TransformationMeta.make(kind, ms, mf),
        input_map=input_map,
        tree_source_translation=tree_s,
        tree_followup_translation=tree_f,
    )


# ---- input map ----

def test_replacement_maps_identity_except_mutated():
    pair = make_pair(list("abcd"), ["x"], list("abed"), ["x"], kind=IT1, ms=[2], mf=[2])
    m = build_input_map(pair)
    assert m.edges == {(0, 0), (1, 1), (3, 3)}


def test_all_replacement_kinds_share_the_identity_shape():
    for kind in (IT1, IT2, IT5):
        pair = make_pair(list("ab"), ["x"], list("aB"), ["x"], kind=kind, ms=[1], mf=[1])
        assert build_input_map(pair).edges == {(0, 0)}


def test_insertion_shifts_indices_at_and_after_the_span():
    pair = make_pair(list("abc"), ["x"], list("aZZbc"), ["x"], kind=IT4, mf=[1, 2])
    m = build_input_map(pair)
    assert m.edges == {(0, 0), (1, 3), (2, 4)}


def test_insertion_at_front_shifts_everything():
    pair = make_pair(list("ab"), ["x"], list("Zab"), ["x"], kind=IT4, mf=[0])
    assert build_input_map(pair).edges == {(0, 1), (1, 2)}


def test_extraction_requires_an_explicit_map():
    pair = make_pair(list("abc"), ["x"], list("b"), ["x"], kind=IT3, ms=[0, 2])
    with pytest.raises(ValueError, match="explicit input_map"):
        build_input_map(pair)


def test_existing_map_is_returned_unchanged():
    given = InputMap(frozenset({(1, 0)}))
    pair = make_pair(list("abc"), ["x"], list("b"), ["x"], kind=IT3, ms=[0, 2],
                     input_map=given)
    assert build_input_map(pair) is given


# ---- pass 1: tree-guided ----

def test_phrase_pass_copies_neighbor_alignments():
    # y is unaligned and sits in an NP next to x
    tree = treebank.parse_bracket("(IP (NP (NN x) (NN y)) (VP (VV z)))")
    m = AlignmentMap.from_pairs([(0, 0), (1, 2)])
    out = refine_phrase_alignment(TokenizedText(("a", "b"), "en"),
                                  TokenizedText(("x", "y", "z"), "zh"), tree, m)
    assert out.edges == m.edges | {(0, 1)}


def test_phrase_pass_skips_verb_phrases():
    tree = treebank.parse_bracket("(IP (NP (NN x)) (VP (VV y) (VV z)))")
    m = AlignmentMap.from_pairs([(0, 0), (1, 2)])
    out = refine_phrase_alignment(TokenizedText(("a", "b"), "en"),
                                  TokenizedText(("x", "y", "z"), "zh"), tree, m)
    assert out.edges == m.edges


def test_phrase_pass_skips_clause_level_tokens():
    # the only node covering y is the IP itself
    tree = treebank.parse_bracket("(IP (NP (NN x)) (PU y))")
    m = AlignmentMap.from_pairs([(0, 0)])
    out = refine_phrase_alignment(TokenizedText(("a",), "en"),
                                  TokenizedText(("x", "y"), "zh"), tree, m)
    assert out.edges == m.edges


def test_phrase_pass_reads_its_own_additions():
    # x aligned; y and z unaligned inside one NP. y inherits from x, then z from y.
    tree = treebank.parse_bracket("(NP (NN x) (NN y) (NN z))")
    m = AlignmentMap.from_pairs([(0, 0)])
    out = refine_phrase_alignment(TokenizedText(("a",), "en"),
                                  TokenizedText(("x", "y", "z"), "zh"), tree, m)
    assert out.edges == {(0, 0), (0, 1), (0, 2)}


def test_phrase_pass_without_tree_is_identity():
    m = AlignmentMap.from_pairs([(0, 0)])
    out = refine_phrase_alignment(TokenizedText(("a",), "en"),
                                  TokenizedText(("x", "y"), "zh"), None, m)
    assert out is m


def test_phrase_pass_ignores_already_aligned_tokens():
    tree = treebank.parse_bracket("(NP (NN x) (NN y))")
    m = AlignmentMap.from_pairs([(0, 0), (1, 1)])
    out = refine_phrase_alignment(TokenizedText(("a", "b"), "en"),
                                  TokenizedText(("x", "y"), "zh"), tree, m)
    assert out.edges == m.edges


# ---- pass 2: shared unique tokens ----

def test_agreement_pass_unions_disagreeing_surfaces():
    pair = make_pair(["big", "cat"], ["大", "猫"], ["big", "dog"], ["大", "狗"],
                     m_s=[(0, 0), (1, 1)], m_f=[(1, 0), (1, 1)], ms=[1], mf=[1])
    # 大 is unique on both sides: aligned to {big} on source, {dog} on follow-up.
    # The union {big, dog} realizes as big→大 on the follow-up side only;
    # "dog" never occurs in the source input, so that side gains nothing.
    m_s, m_f = refine_shared_unique_tokens(pair, pair.alignment_source,
                                           pair.alignment_followup)
    assert m_s.edges == pair.alignment_source.edges
    assert m_f.edges - pair.alignment_followup.edges == {(0, 0)}


def test_agreement_pass_noop_when_sides_agree():
    pair = make_pair(["a", "b"], ["x", "y"], ["a", "c"], ["x", "z"],
                     m_s=[(0, 0), (1, 1)], m_f=[(0, 0), (1, 1)], ms=[1], mf=[1])
    m_s, m_f = refine_shared_unique_tokens(pair, pair.alignment_source,
                                           pair.alignment_followup)
    assert m_s.edges == pair.alignment_source.edges
    assert m_f.edges == pair.alignment_followup.edges


def test_agreement_pass_skips_repeated_tokens():
    # x occurs twice in the source translation, so it is not unique there
    pair = make_pair(["a", "b"], ["x", "x"], ["a", "c"], ["x", "z"],
                     m_s=[(0, 0), (1, 1)], m_f=[(1, 0), (1, 1)], ms=[1], mf=[1])
    m_s, m_f = refine_shared_unique_tokens(pair, pair.alignment_source,
                                           pair.alignment_followup)
    assert m_s.edges == pair.alignment_source.edges
    assert m_f.edges == pair.alignment_followup.edges


def test_agreement_pass_is_idempotent_on_fixtures(fixture_pairs):
    for pair in fixture_pairs:
        once = refine(pair)
        twice = refine(once)
        assert once.alignment_source.edges == twice.alignment_source.edges, pair.id
        assert once.alignment_followup.edges == twice.alignment_followup.edges, pair.id


# ---- full refinement on the frozen fixtures ----

def test_policy_fixture_gains_exactly_two_source_edges(pair_by_id):
    pair = pair_by_id["patinv-fn"]
    refined = refine(pair)
    assert refined.alignment_source.edges - pair.alignment_source.edges == \
        {(1, 2), (14, 8)}
    assert refined.alignment_followup.edges == pair.alignment_followup.edges


def test_insertion_fixture_gains_one_edge_per_side(pair_by_id):
    pair = pair_by_id["cit-fn"]
    refined = refine(pair)
    assert refined.alignment_source.edges - pair.alignment_source.edges == {(5, 3)}
    assert refined.alignment_followup.edges - pair.alignment_followup.edges == {(6, 4)}


def test_treeless_fixtures_are_untouched(pair_by_id):
    for pid in ("sit-fn", "cat-fp", "purity-fp", "clean-1"):
        pair = pair_by_id[pid]
        refined = refine(pair)
        assert refined.alignment_source.edges == pair.alignment_source.edges, pid
        assert refined.alignment_followup.edges == pair.alignment_followup.edges, pid


def test_refinement_only_adds_edges(fixture_pairs):
    for pair in fixture_pairs:
        refined = refine(pair)
        assert refined.alignment_source.edges >= pair.alignment_source.edges
        assert refined.alignment_followup.edges >= pair.alignment_followup.edges
