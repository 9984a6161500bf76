"""Semantic-similarity providers.

Five configurations: synonym-subset only (1), static word-vector cosine (2),
contextual-vector cosine (3), and the or-combinations of synonyms with each
vector flavor (4, 5). Contextual vectors come from a per-pair sidecar keyed by
(side, token index); static vectors from a loaded table keyed by surface.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Optional, Sequence, Union

import numpy as np

from closurecheck.model import IT1, IT2, IT3, IT4, IT5

CONFIG1, CONFIG2, CONFIG3, CONFIG4, CONFIG5 = "CONFIG1", "CONFIG2", "CONFIG3", "CONFIG4", "CONFIG5"
CONFIG_KINDS = (CONFIG1, CONFIG2, CONFIG3, CONFIG4, CONFIG5)

# Tuned per (language pair, transformation); single --threshold overrides all.
DEFAULT_THRESHOLDS = {
    "en-zh": {IT1: 0.75, IT2: 0.77, IT3: 0.63, IT4: 0.77, IT5: 0.75},
    "zh-en": {IT1: 0.65, IT2: 0.65, IT3: 0.49, IT4: 0.66, IT5: 0.60},
}


class _Abstain:
    """Sentinel: no vector evidence available for this comparison."""

    def __repr__(self) -> str:
        return "ABSTAIN"


ABSTAIN = _Abstain()


class ConfigurationError(ValueError):
    pass


@dataclass(frozen=True)
class TokenRef:
    """A translation token with enough identity to fetch its contextual vector."""

    surface: str
    side: str = ""  # SOURCE or FOLLOWUP when contextual lookup should apply
    index: int = -1


Token = Union[str, TokenRef]
ContextualVectors = Mapping[str, Mapping[int, Sequence[float]]]


def _surface(tok: Token) -> str:
    return tok.surface if isinstance(tok, TokenRef) else tok


def _multiset(tokens: Iterable[Token]) -> tuple[str, ...]:
    return tuple(sorted(_surface(t) for t in tokens))


@dataclass(frozen=True)
class SynonymTable:
    entries: Mapping[str, frozenset[str]] = field(default_factory=dict)

    def synonyms_of(self, word: str) -> frozenset[str]:
        # Every word is its own synonym; unknown words have no others.
        return self.entries.get(word, frozenset()) | {word}


@dataclass(frozen=True)
class VectorTable:
    entries: Mapping[str, tuple[float, ...]]
    dim: int

    def __post_init__(self) -> None:
        if self.dim <= 0:
            raise ConfigurationError(f"vector dimension must be positive, got {self.dim}")
        for word, vec in self.entries.items():
            if len(vec) != self.dim:
                raise ConfigurationError(
                    f"vector for {word!r} has dimension {len(vec)}, expected {self.dim}")


def synonym_similar(w_i: Iterable[Token], w_j: Iterable[Token], table: SynonymTable) -> bool:
    s_i: frozenset[str] = frozenset()
    s_j: frozenset[str] = frozenset()
    for t in w_i:
        s_i |= table.synonyms_of(_surface(t))
    for t in w_j:
        s_j |= table.synonyms_of(_surface(t))
    return s_i <= s_j or s_j <= s_i


def _mean_vector(tokens: Sequence[Token], table: Optional[VectorTable],
                 contextual: Optional[ContextualVectors],
                 use_contextual: bool) -> Optional[np.ndarray]:
    vecs = []
    for t in tokens:
        vec = None
        if use_contextual and contextual is not None and isinstance(t, TokenRef):
            vec = contextual.get(t.side, {}).get(t.index)
        if vec is None and table is not None:
            vec = table.entries.get(_surface(t))
        if vec is not None:
            vecs.append(np.asarray(vec, dtype=float))
    if not vecs:
        return None
    return np.mean(np.vstack(vecs), axis=0)


def _cosine(a: np.ndarray, b: np.ndarray) -> Union[float, _Abstain]:
    na, nb = np.linalg.norm(a), np.linalg.norm(b)
    if na == 0.0 or nb == 0.0:
        return ABSTAIN
    return float(np.dot(a, b) / (na * nb))


def vector_score(w_i: Sequence[Token], w_j: Sequence[Token],
                 table: Optional[VectorTable],
                 contextual: Optional[ContextualVectors] = None,
                 use_contextual: bool = False) -> Union[float, _Abstain]:
    """Cosine of mean vectors; out-of-vocabulary tokens are dropped, a side
    with no vector at all abstains rather than inventing a score."""
    mean_i = _mean_vector(w_i, table, contextual, use_contextual)
    mean_j = _mean_vector(w_j, table, contextual, use_contextual)
    if mean_i is None or mean_j is None:
        return ABSTAIN
    return _cosine(mean_i, mean_j)


@dataclass(frozen=True)
class SimilarityProvider:
    kind: str
    threshold: float
    synonyms: Optional[SynonymTable] = None
    vectors: Optional[VectorTable] = None

    def __post_init__(self) -> None:
        if self.kind not in CONFIG_KINDS:
            raise ConfigurationError(f"unknown configuration {self.kind!r}")
        if not -1.0 <= self.threshold <= 1.0:
            raise ConfigurationError(f"threshold {self.threshold} outside [-1, 1]")
        if self.uses_synonyms and self.synonyms is None:
            raise ConfigurationError(f"{self.kind} requires a synonym table")
        # Static vectors are mandatory for config 2/4; configs 3/5 may run on
        # contextual sidecars alone.
        if self.kind in (CONFIG2, CONFIG4) and self.vectors is None:
            raise ConfigurationError(f"{self.kind} requires a vector table")

    @property
    def uses_synonyms(self) -> bool:
        return self.kind in (CONFIG1, CONFIG4, CONFIG5)

    @property
    def uses_vectors(self) -> bool:
        return self.kind in (CONFIG2, CONFIG3, CONFIG4, CONFIG5)

    @property
    def uses_contextual(self) -> bool:
        return self.kind in (CONFIG3, CONFIG5)

    def synonym_hit(self, w_i: Iterable[Token], w_j: Iterable[Token]) -> bool:
        if not self.uses_synonyms:
            return False
        return synonym_similar(w_i, w_j, self.synonyms)  # type: ignore[arg-type]

    def score(self, w_i: Sequence[Token], w_j: Sequence[Token],
              contextual: Optional[ContextualVectors] = None) -> Union[float, _Abstain]:
        if not self.uses_vectors:
            return ABSTAIN
        return vector_score(w_i, w_j, self.vectors, contextual, self.uses_contextual)

    def similar(self, w_i: Sequence[Token], w_j: Sequence[Token],
                contextual: Optional[ContextualVectors] = None) -> bool:
        if _multiset(w_i) == _multiset(w_j):
            return True
        if self.synonym_hit(w_i, w_j):
            return True
        if self.uses_vectors:
            score = self.score(w_i, w_j, contextual)
            if isinstance(score, _Abstain):
                # No vector evidence and (for 2/3) no synonym channel: only
                # surface-identical sets count as similar, already handled.
                return False
            return score >= self.threshold
        return False


def similar(w_i: Sequence[Token], w_j: Sequence[Token], provider: SimilarityProvider,
            contextual: Optional[ContextualVectors] = None) -> bool:
    return provider.similar(w_i, w_j, contextual)


def default_threshold(lang_pair: str, transformation_kind: str) -> float:
    try:
        return DEFAULT_THRESHOLDS[lang_pair][transformation_kind]
    except KeyError:
        raise ConfigurationError(
            f"no default threshold for {lang_pair!r} / {transformation_kind!r}") from None


def load_stopwords(path: Union[str, Path]) -> frozenset[str]:
    """One surface form per line, UTF-8; blank lines ignored."""
    words = set()
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if line:
            words.add(line)
    return frozenset(words)
