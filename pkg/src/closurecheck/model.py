"""Shared domain types for the whole pipeline.

Token identity is positional everywhere: a token is (side, index), never its
surface string, so equal surfaces at different positions stay distinct objects.
All types are immutable after construction and safe to share across workers.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional

SOURCE = "source"
FOLLOWUP = "followup"

IT1 = "IT-1"
IT2 = "IT-2"
IT3 = "IT-3"
IT4 = "IT-4"
IT5 = "IT-5"
TRANSFORMATION_KINDS = (IT1, IT2, IT3, IT4, IT5)

# Replacement-style transformations: one word swapped, sentence length kept.
REPLACEMENT_KINDS = (IT1, IT2, IT5)

CWC = "CWC"  # common-word closure: shared input words, translated on both sides
MWC = "MWC"  # mutated-word closure: touches a mutated input word
UWC = "UWC"  # unmatched-word closure: shared input words missing a translation side

CWC_DISSIMILAR = "CWC_DISSIMILAR"
MWC_SIMILAR = "MWC_SIMILAR"
LEFTOVER_UNMATCHED = "LEFTOVER_UNMATCHED"


@dataclass(frozen=True)
class TokenizedText:
    """An ordered, pre-tokenized sentence plus its language tag."""

    tokens: tuple[str, ...]
    language: str = ""

    def __len__(self) -> int:
        return len(self.tokens)


@dataclass(frozen=True)
class AlignmentMap:
    """Many-to-many token correspondence between an input text and its translation.

    Edges are (input_index, output_index) pairs. Lookup is symmetric: the
    forward and backward indexes are built once and always agree with `edges`.
    """

    edges: frozenset[tuple[int, int]]

    def __post_init__(self) -> None:
        forward: dict[int, frozenset[int]] = {}
        backward: dict[int, frozenset[int]] = {}
        fwd: dict[int, set[int]] = {}
        bwd: dict[int, set[int]] = {}
        for i, j in self.edges:
            fwd.setdefault(i, set()).add(j)
            bwd.setdefault(j, set()).add(i)
        forward.update({k: frozenset(v) for k, v in fwd.items()})
        backward.update({k: frozenset(v) for k, v in bwd.items()})
        object.__setattr__(self, "_forward", forward)
        object.__setattr__(self, "_backward", backward)

    @classmethod
    def from_pairs(cls, pairs: Iterable[Iterable[int]]) -> "AlignmentMap":
        return cls(frozenset((int(i), int(j)) for i, j in pairs))

    def aligned_outputs(self, input_index: int) -> frozenset[int]:
        return self._forward.get(input_index, frozenset())  # type: ignore[attr-defined]

    def aligned_inputs(self, output_index: int) -> frozenset[int]:
        return self._backward.get(output_index, frozenset())  # type: ignore[attr-defined]

    def with_edges(self, extra: Iterable[tuple[int, int]]) -> "AlignmentMap":
        return AlignmentMap(self.edges | frozenset(extra))


@dataclass(frozen=True)
class InputMap:
    """1:1 correspondence between the unmutated tokens of the two input sentences."""

    edges: frozenset[tuple[int, int]]

    def __post_init__(self) -> None:
        s_to_f = {i: j for i, j in self.edges}
        f_to_s = {j: i for i, j in self.edges}
        object.__setattr__(self, "_s_to_f", s_to_f)
        object.__setattr__(self, "_f_to_s", f_to_s)

    @classmethod
    def from_pairs(cls, pairs: Iterable[Iterable[int]]) -> "InputMap":
        return cls(frozenset((int(i), int(j)) for i, j in pairs))

    def followup_of(self, s_index: int) -> Optional[int]:
        return self._s_to_f.get(s_index)  # type: ignore[attr-defined]

    def source_of(self, f_index: int) -> Optional[int]:
        return self._f_to_s.get(f_index)  # type: ignore[attr-defined]


@dataclass(frozen=True)
class TransformationMeta:
    """How the follow-up input was produced from the source input."""

    kind: str
    mutated_source: frozenset[int]
    mutated_followup: frozenset[int]

    @classmethod
    def make(cls, kind: str, mutated_source: Iterable[int] = (),
             mutated_followup: Iterable[int] = ()) -> "TransformationMeta":
        return cls(kind, frozenset(mutated_source), frozenset(mutated_followup))


@dataclass(frozen=True)
class FineGrainedViolation:
    """Translation token indices flagged as wrong, per side."""

    source_indices: frozenset[int] = frozenset()
    followup_indices: frozenset[int] = frozenset()

    def __bool__(self) -> bool:
        return bool(self.source_indices or self.followup_indices)

    @classmethod
    def make(cls, source: Iterable[int] = (), followup: Iterable[int] = ()) -> "FineGrainedViolation":
        return cls(frozenset(source), frozenset(followup))


@dataclass(frozen=True)
class GoldLabel:
    violation: bool
    fine_grained: Optional[FineGrainedViolation] = None


@dataclass(frozen=True)
class WordClosure:
    """Four index sets linked by the alignment graph: S_s, T_s, S_f, T_f slices.

    `kind` is None until classification assigns CWC/MWC/UWC.
    """

    sent_s: frozenset[int]
    tran_s: frozenset[int]
    sent_f: frozenset[int]
    tran_f: frozenset[int]
    kind: Optional[str] = None

    def as_aggregate(self) -> tuple[frozenset[int], frozenset[int], frozenset[int], frozenset[int]]:
        return (self.sent_s, self.tran_s, self.sent_f, self.tran_f)


@dataclass(frozen=True)
class FailingClosure:
    closure: WordClosure
    reason: str


@dataclass(frozen=True)
class Verdict:
    pair_id: str
    violation: bool
    fine_grained: FineGrainedViolation
    failing_closures: tuple[FailingClosure, ...] = ()


@dataclass(frozen=True)
class TestCasePair:
    """One metamorphic test case: two input sentences, their translations, and wiring."""

    __test__ = False  # keep pytest from collecting this as a test class

    id: str
    source_input: TokenizedText
    followup_input: TokenizedText
    source_translation: TokenizedText
    followup_translation: TokenizedText
    alignment_source: AlignmentMap
    alignment_followup: AlignmentMap
    transformation: TransformationMeta
    input_map: Optional[InputMap] = None
    tree_source_translation: Optional[str] = None
    tree_followup_translation: Optional[str] = None
    # Per-pair token vectors: {"source"|"followup": {token_index: (floats...)}}
    contextual_vectors: Optional[Mapping[str, Mapping[int, tuple[float, ...]]]] = None
    gold: Optional[GoldLabel] = None
    # Unknown JSONL fields, preserved for round-tripping.
    extra: Mapping[str, object] = field(default_factory=dict)


def _check_edge_bounds(findings: list[str], name: str, edges: Iterable[tuple[int, int]],
                       n_in: int, n_out: int) -> None:
    for i, j in sorted(edges):
        if not (0 <= i < n_in):
            findings.append(f"{name}: input index {i} out of bounds (size {n_in})")
        if not (0 <= j < n_out):
            findings.append(f"{name}: output index {j} out of bounds (size {n_out})")


def _is_subsequence(sub: tuple[str, ...], full: tuple[str, ...]) -> bool:
    it = iter(full)
    return all(tok in it for tok in sub)


def validate_pair(pair: TestCasePair) -> list[str]:
    """Check every structural invariant; returns one finding per breach, [] when clean.

    Findings are data, not exceptions: readers decide whether to skip or abort.
    """
    findings: list[str] = []
    n_ss = len(pair.source_input)
    n_sf = len(pair.followup_input)
    n_ts = len(pair.source_translation)
    n_tf = len(pair.followup_translation)

    for name, text in (("source_input", pair.source_input),
                       ("followup_input", pair.followup_input),
                       ("source_translation", pair.source_translation),
                       ("followup_translation", pair.followup_translation)):
        if len(text) == 0:
            findings.append(f"{name}: empty token list")

    _check_edge_bounds(findings, "alignment_source", pair.alignment_source.edges, n_ss, n_ts)
    _check_edge_bounds(findings, "alignment_followup", pair.alignment_followup.edges, n_sf, n_tf)

    t = pair.transformation
    if t.kind not in TRANSFORMATION_KINDS:
        findings.append(f"transformation: unknown kind {t.kind!r}")
    for idx in sorted(t.mutated_source):
        if not (0 <= idx < n_ss):
            findings.append(f"transformation: mutated source index {idx} out of bounds")
    for idx in sorted(t.mutated_followup):
        if not (0 <= idx < n_sf):
            findings.append(f"transformation: mutated follow-up index {idx} out of bounds")

    if t.kind in REPLACEMENT_KINDS:
        if len(t.mutated_source) != 1 or len(t.mutated_followup) != 1:
            findings.append(
                f"transformation: {t.kind} must mutate exactly one token per side "
                f"(got {len(t.mutated_source)}/{len(t.mutated_followup)})")
        if n_ss != n_sf:
            findings.append(
                f"transformation: {t.kind} replacement form requires equal input "
                f"lengths (got {n_ss} vs {n_sf})")
    elif t.kind == IT4:
        if t.mutated_source:
            findings.append("transformation: IT-4 must not mutate the source side")
        span = sorted(t.mutated_followup)
        if not span:
            findings.append("transformation: IT-4 requires a non-empty inserted span")
        elif span != list(range(span[0], span[-1] + 1)):
            findings.append("transformation: IT-4 inserted span must be contiguous")
        elif n_sf != n_ss + len(span):
            findings.append(
                f"transformation: IT-4 length mismatch ({n_sf} != {n_ss} + {len(span)})")
    elif t.kind == IT3:
        if t.mutated_followup:
            findings.append("transformation: IT-3 must not mutate the follow-up side")
        if not _is_subsequence(pair.followup_input.tokens, pair.source_input.tokens):
            findings.append("transformation: IT-3 follow-up must be a subsequence of the source")

    if pair.input_map is not None:
        m = pair.input_map
        _check_edge_bounds(findings, "input_map", m.edges, n_ss, n_sf)
        s_seen: set[int] = set()
        f_seen: set[int] = set()
        for i, j in sorted(m.edges):
            if i in s_seen:
                findings.append(f"input_map: source index {i} appears in more than one edge")
            if j in f_seen:
                findings.append(f"input_map: follow-up index {j} appears in more than one edge")
            s_seen.add(i)
            f_seen.add(j)
            if i in t.mutated_source:
                findings.append(f"input_map: mutated source index {i} must not be mapped")
            if j in t.mutated_followup:
                findings.append(f"input_map: mutated follow-up index {j} must not be mapped")

    for name, tree_text, tokens in (
            ("tree_source_translation", pair.tree_source_translation, pair.source_translation.tokens),
            ("tree_followup_translation", pair.tree_followup_translation, pair.followup_translation.tokens)):
        if tree_text is None:
            continue
        from closurecheck import treebank  # local import keeps the base module dependency-free

        try:
            tree = treebank.parse_bracket(tree_text)
        except treebank.BracketParseError as exc:
            findings.append(f"{name}: unparseable tree ({exc})")
            continue
        leaves = tuple(tok for tok, _ in tree.leaves)
        if leaves != tokens:
            findings.append(f"{name}: leaf sequence does not match the translation tokens")

    if pair.contextual_vectors is not None:
        dims: set[int] = set()
        for side, size in ((SOURCE, n_ts), (FOLLOWUP, n_tf)):
            for idx, vec in sorted(pair.contextual_vectors.get(side, {}).items()):
                if not (0 <= idx < size):
                    findings.append(f"contextual_vectors/{side}: index {idx} out of bounds")
                dims.add(len(vec))
        if len(dims) > 1:
            findings.append(f"contextual_vectors: inconsistent dimensions {sorted(dims)}")

    if pair.gold is not None and pair.gold.fine_grained is not None:
        fg = pair.gold.fine_grained
        for idx in sorted(fg.source_indices):
            if not (0 <= idx < n_ts):
                findings.append(f"gold fine_grained: source index {idx} out of bounds")
        for idx in sorted(fg.followup_indices):
            if not (0 <= idx < n_tf):
                findings.append(f"gold fine_grained: follow-up index {idx} out of bounds")
        if pair.gold.violation and not fg:
            findings.append("gold: violation marked but fine_grained is empty")

    return findings
