"""Synthetic pair generation and the brute-force closure oracle.

The oracle is deliberately naive: closures must equal the connected components
of the undirected token graph over M_s, M_f and M_i, keeping only components
that touch at least one input token. The production builder is tested against
this everywhere.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from closurecheck.model import (
    IT2,
    IT3,
    IT4,
    REPLACEMENT_KINDS,
    AlignmentMap,
    FineGrainedViolation,
    GoldLabel,
    InputMap,
    TestCasePair,
    TokenizedText,
    TransformationMeta,
)

INJECTION_KINDS = ("none", "drop-translation", "swap-meaning", "add-redundant")

# Node tags for the four token populations.
_SS, _TS, _SF, _TF = "ss", "ts", "sf", "tf"


class _UnionFind:
    def __init__(self) -> None:
        self.parent: dict[tuple[str, int], tuple[str, int]] = {}

    def find(self, x: tuple[str, int]) -> tuple[str, int]:
        self.parent.setdefault(x, x)
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:  # path compression
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: tuple[str, int], b: tuple[str, int]) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra


def closure_oracle(pair: TestCasePair) -> list[tuple[frozenset[int], frozenset[int], frozenset[int], frozenset[int]]]:
    """Connected components of the token graph, projected onto the four sides.

    Components with no input token (translation tokens nobody aligns to) are
    dropped, mirroring the seed rule of the production builder.
    """
    uf = _UnionFind()
    for i in range(len(pair.source_input)):
        uf.find((_SS, i))
    for i in range(len(pair.followup_input)):
        uf.find((_SF, i))
    for i, j in pair.alignment_source.edges:
        uf.union((_SS, i), (_TS, j))
    for i, j in pair.alignment_followup.edges:
        uf.union((_SF, i), (_TF, j))
    if pair.input_map is not None:
        for i, j in pair.input_map.edges:
            uf.union((_SS, i), (_SF, j))

    groups: dict[tuple[str, int], dict[str, set[int]]] = {}
    for node in list(uf.parent):
        side, idx = node
        root = uf.find(node)
        groups.setdefault(root, {_SS: set(), _TS: set(), _SF: set(), _TF: set()})[side].add(idx)

    aggregates = []
    for sides in groups.values():
        if not sides[_SS] and not sides[_SF]:
            continue
        aggregates.append((frozenset(sides[_SS]), frozenset(sides[_TS]),
                           frozenset(sides[_SF]), frozenset(sides[_TF])))
    # Stable order: by smallest source-side seed, then follow-up seed.
    aggregates.sort(key=lambda agg: (min(agg[0]) if agg[0] else len(pair.source_input),
                                     min(agg[2]) if agg[2] else len(pair.followup_input)))
    return aggregates


@dataclass(frozen=True)
class SynthConfig:
    input_len: int = 8
    translation_len: int = 8
    edge_density: float = 0.3
    mutation_kind: str = IT2
    injection: str = "none"
    seed: int = 0
    vocab: int = 6  # small on purpose so duplicate surfaces occur


def _random_edges(rng: random.Random, n_in: int, n_out: int, density: float) -> frozenset[tuple[int, int]]:
    return frozenset((i, j) for i in range(n_in) for j in range(n_out)
                     if rng.random() < density)


def gen_random_pair(cfg: SynthConfig) -> TestCasePair:
    """Schema-valid random pair; same config (incl. seed) → identical pair."""
    if not 0.0 <= cfg.edge_density <= 1.0:
        raise ValueError(f"edge density {cfg.edge_density} outside [0, 1]")
    if cfg.injection not in INJECTION_KINDS:
        raise ValueError(f"unknown injection kind {cfg.injection!r}")
    rng = random.Random(cfg.seed)
    n = max(1, cfg.input_len)
    m = max(1, cfg.translation_len)

    s_s = [f"w{rng.randrange(cfg.vocab)}" for _ in range(n)]
    if cfg.mutation_kind in REPLACEMENT_KINDS:
        mut = rng.randrange(n)
        s_f = list(s_s)
        s_f[mut] = f"w{cfg.vocab + rng.randrange(cfg.vocab)}"
        meta = TransformationMeta.make(cfg.mutation_kind, [mut], [mut])
        input_map = None
    elif cfg.mutation_kind == IT4:
        span = 1 + rng.randrange(3)
        start = rng.randrange(n + 1)
        s_f = s_s[:start] + [f"x{k}" for k in range(span)] + s_s[start:]
        meta = TransformationMeta.make(IT4, [], range(start, start + span))
        input_map = None
    elif cfg.mutation_kind == IT3:
        lo = rng.randrange(n)
        hi = rng.randrange(lo, n) + 1
        s_f = s_s[lo:hi]
        # Removed context words count as mutated on the source side.
        meta = TransformationMeta.make(IT3, list(range(0, lo)) + list(range(hi, n)), [])
        input_map = InputMap.from_pairs((lo + k, k) for k in range(hi - lo))
    else:
        raise ValueError(f"unknown mutation kind {cfg.mutation_kind!r}")

    t_s = [f"t{rng.randrange(cfg.vocab)}" for _ in range(m)]
    t_f = [f"t{rng.randrange(cfg.vocab)}" for _ in range(m)]
    m_s = _random_edges(rng, len(s_s), len(t_s), cfg.edge_density)
    m_f = _random_edges(rng, len(s_f), len(t_f), cfg.edge_density)

    return TestCasePair(
        id=f"synth-{cfg.mutation_kind}-{cfg.seed}",
        source_input=TokenizedText(tuple(s_s), "xx"),
        followup_input=TokenizedText(tuple(s_f), "xx"),
        source_translation=TokenizedText(tuple(t_s), "yy"),
        followup_translation=TokenizedText(tuple(t_f), "yy"),
        alignment_source=AlignmentMap(m_s),
        alignment_followup=AlignmentMap(m_f),
        transformation=meta,
        input_map=input_map,
    )


def gen_labeled_pair(cfg: SynthConfig) -> TestCasePair:
    """Diagonal 1:1 pair whose gold label is exact by construction.

    Layout: n distinct input words, each aligned to one distinct translation
    word at the same index; one IT-2 style replacement. The injection then
    breaks exactly one known thing, so the expected verdict needs no oracle.
    """
    rng = random.Random(cfg.seed)
    n = max(3, cfg.input_len)
    uid = rng.randrange(10 ** 6)
    s_s = [f"in{uid}_{k}" for k in range(n)]
    t_s = [f"out{uid}_{k}" for k in range(n)]
    mut = rng.randrange(n)
    s_f = list(s_s)
    s_f[mut] = f"in{uid}_mut"
    t_f = list(t_s)
    t_f[mut] = f"out{uid}_mut"
    edges = frozenset((k, k) for k in range(n))
    m_f = edges

    gold = GoldLabel(False, FineGrainedViolation())
    if cfg.injection == "swap-meaning":
        victim = rng.choice([k for k in range(n) if k != mut])
        t_f[victim] = f"out{uid}_wrong"
        gold = GoldLabel(True, FineGrainedViolation.make([victim], [victim]))
    elif cfg.injection == "drop-translation":
        victim = rng.choice([k for k in range(n) if k != mut])
        del t_f[victim]
        m_f = frozenset((k, k if k < victim else k - 1) for k in range(n) if k != victim)
        gold = GoldLabel(True, FineGrainedViolation.make([victim], []))
    elif cfg.injection == "add-redundant":
        t_f.append(f"out{uid}_extra")
        gold = GoldLabel(True, FineGrainedViolation.make([], [n]))

    return TestCasePair(
        id=f"labeled-{cfg.injection}-{cfg.seed}",
        source_input=TokenizedText(tuple(s_s), "xx"),
        followup_input=TokenizedText(tuple(s_f), "xx"),
        source_translation=TokenizedText(tuple(t_s), "yy"),
        followup_translation=TokenizedText(tuple(t_f), "yy"),
        alignment_source=AlignmentMap(edges),
        alignment_followup=AlignmentMap(m_f),
        transformation=TransformationMeta.make(IT2, [mut], [mut]),
        gold=gold,
    )
