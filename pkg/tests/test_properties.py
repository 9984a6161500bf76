"""Property-based checks over randomly generated pairs, tables, and trees."""

import dataclasses
import io
import json
import random

from hypothesis import given, settings
from hypothesis import strategies as st

from closurecheck import corpus_io, treebank
from closurecheck.closure import build_closures
from closurecheck.metrics import fine_confusion
from closurecheck.model import (
    IT1,
    IT2,
    IT3,
    IT4,
    IT5,
    AlignmentMap,
    FineGrainedViolation,
    Verdict,
    validate_pair,
)
from closurecheck.refine import (
    build_input_map,
    refine,
    refine_phrase_alignment,
    refine_shared_unique_tokens,
)
from closurecheck.similarity import (
    CONFIG4,
    SimilarityProvider,
    SynonymTable,
    VectorTable,
)
from closurecheck.synth import SynthConfig, closure_oracle, gen_random_pair

KINDS = st.sampled_from([IT1, IT2, IT3, IT4, IT5])
DENSITIES = st.sampled_from([0.0, 0.1, 0.3, 1.0])
SEEDS = st.integers(min_value=0, max_value=10 ** 6)


def synth_pair(seed, density, kind, with_map=True):
    pair = gen_random_pair(SynthConfig(seed=seed, edge_density=density,
                                       mutation_kind=kind))
    if with_map and pair.input_map is None:
        pair = dataclasses.replace(pair, input_map=build_input_map(pair))
    return pair


# ---- structural validation ----

@given(seed=SEEDS, density=DENSITIES, kind=KINDS)
@settings(max_examples=60, deadline=None)
def test_generated_pairs_validate_clean(seed, density, kind):
    assert validate_pair(synth_pair(seed, density, kind, with_map=False)) == []


@given(seed=SEEDS, kind=KINDS)
@settings(max_examples=40, deadline=None)
def test_out_of_bounds_edge_is_always_caught(seed, kind):
    pair = synth_pair(seed, 0.3, kind, with_map=False)
    n_out = len(pair.source_translation)
    broken = dataclasses.replace(
        pair, alignment_source=pair.alignment_source.with_edges([(0, n_out + 3)]))
    assert any("out of bounds" in f for f in validate_pair(broken))


# ---- closures ----

@given(seed=SEEDS, density=DENSITIES, kind=KINDS)
@settings(max_examples=80, deadline=None)
def test_builder_matches_oracle(seed, density, kind):
    pair = refine(synth_pair(seed, density, kind))
    built = [c.as_aggregate() for c in build_closures(pair)]
    assert built == closure_oracle(pair)


@given(seed=SEEDS, density=DENSITIES, kind=KINDS)
@settings(max_examples=60, deadline=None)
def test_closures_partition_the_input_tokens(seed, density, kind):
    pair = synth_pair(seed, density, kind)
    closures = build_closures(pair)
    got_s = sorted(i for c in closures for i in c.sent_s)
    got_f = sorted(i for c in closures for i in c.sent_f)
    assert got_s == list(range(len(pair.source_input)))
    assert got_f == list(range(len(pair.followup_input)))


@given(seed=SEEDS, density=DENSITIES, kind=KINDS)
@settings(max_examples=60, deadline=None)
def test_closures_never_share_translation_tokens(seed, density, kind):
    pair = synth_pair(seed, density, kind)
    closures = build_closures(pair)
    for attr in ("tran_s", "tran_f"):
        seen = [i for c in closures for i in getattr(c, attr)]
        assert len(seen) == len(set(seen))


# ---- refinement ----

@given(seed=SEEDS, density=DENSITIES, kind=KINDS)
@settings(max_examples=60, deadline=None)
def test_refine_is_monotone_and_idempotent_without_trees(seed, density, kind):
    pair = synth_pair(seed, density, kind)
    once = refine(pair)
    assert once.alignment_source.edges >= pair.alignment_source.edges
    assert once.alignment_followup.edges >= pair.alignment_followup.edges
    twice = refine(once)
    assert twice.alignment_source.edges == once.alignment_source.edges
    assert twice.alignment_followup.edges == once.alignment_followup.edges


@given(seed=SEEDS, density=DENSITIES, kind=KINDS)
@settings(max_examples=60, deadline=None)
def test_shared_unique_pass_is_idempotent(seed, density, kind):
    pair = synth_pair(seed, density, kind)
    m_s, m_f = refine_shared_unique_tokens(pair, pair.alignment_source,
                                           pair.alignment_followup)
    again_s, again_f = refine_shared_unique_tokens(pair, m_s, m_f)
    assert again_s.edges == m_s.edges
    assert again_f.edges == m_f.edges


def random_tree_text(rng: random.Random, tokens) -> str:
    """Random bracketing over the tokens with a mixed label inventory."""
    preterminals = ["NN", "VV", "PU"]
    internals = ["NP", "VP", "IP", "PP", "QP", "FRAG"]

    def build(lo: int, hi: int) -> str:
        if hi - lo == 1:
            return f"({rng.choice(preterminals)} {tokens[lo]})"
        mid = rng.randint(lo + 1, hi - 1)
        return f"({rng.choice(internals)} {build(lo, mid)} {build(mid, hi)})"

    return build(0, len(tokens))


@given(seed=SEEDS, density=DENSITIES)
@settings(max_examples=60, deadline=None)
def test_phrase_pass_is_monotone_and_guarded(seed, density):
    pair = synth_pair(seed, density, IT2)
    rng = random.Random(seed ^ 0x5F5F)
    tree = treebank.parse_bracket(random_tree_text(rng, pair.source_translation.tokens))
    table = treebank.label_table_for(pair.source_translation.language)
    before = pair.alignment_source
    after = refine_phrase_alignment(pair.source_input, pair.source_translation,
                                    tree, before)
    assert after.edges >= before.edges
    for _, j in after.edges - before.edges:
        subtree = treebank.smallest_covering_subtree(tree, j)
        assert treebank.classify_label(subtree.label or "", table) == treebank.PHRASE
        assert not before.aligned_inputs(j)


# ---- similarity ----

WORDS = st.sampled_from(["a", "b", "c", "d"])
GROUPS = st.lists(WORDS, min_size=1, max_size=3)
FINITE = st.floats(min_value=-1.0, max_value=1.0, allow_nan=False)


@st.composite
def providers(draw):
    vocab = ["a", "b", "c", "d"]
    entries = {w: (draw(FINITE), draw(FINITE)) for w in vocab
               if draw(st.booleans())}
    table = VectorTable(entries, dim=2) if entries else None
    syn_pairs = draw(st.lists(st.tuples(WORDS, WORDS), max_size=3))
    synonyms: dict[str, frozenset[str]] = {}
    for x, y in syn_pairs:
        synonyms[x] = synonyms.get(x, frozenset()) | {y}
        synonyms[y] = synonyms.get(y, frozenset()) | {x}
    kind = CONFIG4 if table is not None else "CONFIG5"
    threshold = draw(st.floats(min_value=-1.0, max_value=1.0, allow_nan=False))
    return SimilarityProvider(kind, threshold, SynonymTable(synonyms), table)


@given(provider=providers(), a=GROUPS, b=GROUPS)
@settings(max_examples=120, deadline=None)
def test_similar_is_symmetric(provider, a, b):
    assert provider.similar(a, b) == provider.similar(b, a)


@given(provider=providers(), a=GROUPS)
@settings(max_examples=60, deadline=None)
def test_similar_is_reflexive(provider, a):
    assert provider.similar(a, a)


@given(provider=providers(), a=GROUPS, b=GROUPS,
       lower=st.floats(min_value=-1.0, max_value=1.0, allow_nan=False))
@settings(max_examples=120, deadline=None)
def test_loosening_the_threshold_never_flips_to_dissimilar(provider, a, b, lower):
    if lower > provider.threshold:
        lower, provider = provider.threshold, dataclasses.replace(provider,
                                                                  threshold=lower)
    loose = dataclasses.replace(provider, threshold=lower)
    if provider.similar(a, b):
        assert loose.similar(a, b)


# ---- metrics ----

INDEX_SETS = st.frozensets(st.integers(min_value=0, max_value=9), max_size=4)


@given(st.lists(st.tuples(INDEX_SETS, INDEX_SETS, INDEX_SETS, INDEX_SETS), max_size=8))
@settings(max_examples=80, deadline=None)
def test_fine_confusion_identities(rows):
    pairs = [(FineGrainedViolation(ps, pf), FineGrainedViolation(gs, gf))
             for ps, pf, gs, gf in rows]
    fc = fine_confusion(pairs)
    assert fc.tp_fine + fc.fp_fine == sum(
        len(p.source_indices) + len(p.followup_indices) for p, _ in pairs)
    assert fc.tp_fine + fc.fn_fine == sum(
        len(g.source_indices) + len(g.followup_indices) for _, g in pairs)
    assert min(fc.tp_fine, fc.fp_fine, fc.fn_fine) >= 0


# ---- serialization ----

@given(seed=SEEDS, density=DENSITIES, kind=KINDS)
@settings(max_examples=60, deadline=None)
def test_jsonl_round_trip(seed, density, kind):
    pair = synth_pair(seed, density, kind, with_map=False)
    record = corpus_io.record_from_pair(pair)
    clone = corpus_io.pair_from_record(json.loads(json.dumps(record)))
    assert corpus_io.record_from_pair(clone) == record


@given(st.lists(st.tuples(st.booleans(), INDEX_SETS, INDEX_SETS), max_size=6))
@settings(max_examples=40, deadline=None)
def test_report_bytes_are_deterministic(rows):
    verdicts = [
        Verdict(f"p{n}", flag or bool(src or fol),
                FineGrainedViolation(src, fol))
        for n, (flag, src, fol) in enumerate(rows)
    ]
    a, b = io.StringIO(), io.StringIO()
    for buf in (a, b):
        corpus_io.write_report(verdicts, buf, configuration={"config": "CONFIG4"})
    assert a.getvalue() == b.getvalue()
