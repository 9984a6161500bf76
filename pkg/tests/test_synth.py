"""Synthetic-pair generators and the independent closure oracle."""

import pytest

from closurecheck.comparator import run_pair
from closurecheck.model import IT1, IT2, IT3, IT4, IT5, validate_pair
from closurecheck.refine import build_input_map
from closurecheck.similarity import CONFIG1, SimilarityProvider, SynonymTable
from closurecheck.synth import (
    INJECTION_KINDS,
    SynthConfig,
    closure_oracle,
    gen_labeled_pair,
    gen_random_pair,
)

EXACT = SimilarityProvider(CONFIG1, 0.0, synonyms=SynonymTable())


def test_generation_is_reproducible():
    a = gen_random_pair(SynthConfig(seed=7))
    b = gen_random_pair(SynthConfig(seed=7))
    assert a == b
    assert a != gen_random_pair(SynthConfig(seed=8))


def test_generated_pairs_are_structurally_valid():
    for kind in (IT1, IT2, IT3, IT4, IT5):
        for seed in range(10):
            pair = gen_random_pair(SynthConfig(seed=seed, mutation_kind=kind))
            assert validate_pair(pair) == [], (kind, seed)


def test_density_zero_means_no_alignment_edges():
    pair = gen_random_pair(SynthConfig(seed=3, edge_density=0.0))
    assert not pair.alignment_source.edges
    assert not pair.alignment_followup.edges


def test_density_one_means_complete_bipartite():
    pair = gen_random_pair(SynthConfig(seed=3, edge_density=1.0))
    expected = len(pair.source_input) * len(pair.source_translation)
    assert len(pair.alignment_source.edges) == expected


def test_oracle_on_edgeless_pair_gives_singletons():
    import dataclasses
    pair = gen_random_pair(SynthConfig(seed=1, edge_density=0.0))
    if pair.input_map is None:
        pair = dataclasses.replace(pair, input_map=build_input_map(pair))
    # with no edges and no input map links, every input token stands alone —
    # except replacement pairs keep identity positions in the map
    closures = closure_oracle(pair)
    for sent_s, tran_s, sent_f, tran_f in closures:
        assert not tran_s and not tran_f
        assert len(sent_s) <= 1 and len(sent_f) <= 1


def test_oracle_without_input_map_never_bridges_the_sentences():
    import dataclasses
    pair = dataclasses.replace(gen_random_pair(SynthConfig(seed=2)), input_map=None)
    for sent_s, _, sent_f, _ in closure_oracle(pair):
        assert not (sent_s and sent_f)


@pytest.mark.parametrize("injection", INJECTION_KINDS)
def test_labeled_pairs_carry_exact_gold(injection):
    for seed in range(8):
        pair = gen_labeled_pair(SynthConfig(seed=seed, injection=injection))
        assert validate_pair(pair) == [], (injection, seed)
        assert pair.gold is not None
        _, _, verdict = run_pair(pair, EXACT, frozenset())
        assert verdict.violation == pair.gold.violation, (injection, seed)
        if pair.gold.violation:
            assert verdict.fine_grained == pair.gold.fine_grained, (injection, seed)


def test_clean_labeled_pair_has_no_violation():
    pair = gen_labeled_pair(SynthConfig(seed=11, injection="none"))
    assert pair.gold.violation is False
    assert not run_pair(pair, EXACT, frozenset())[2].violation
