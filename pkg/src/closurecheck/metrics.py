"""Evaluation arithmetic: coarse and fine-grained confusion tallies, the
derived accuracy/precision/recall/F1 ratios, and the F1-vs-threshold sweep.

Ratios live in [0, 1]; `percent` renders them the way the result tables do
(one decimal, half-up). Undefined ratios are 0.0 plus an `undefined` marker,
never NaN.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from typing import Callable, Sequence

from closurecheck import closure as closure_mod
from closurecheck import comparator, refine
from closurecheck.model import FineGrainedViolation, GoldLabel, TestCasePair, Verdict
from closurecheck.similarity import SimilarityProvider


@dataclass(frozen=True)
class Confusion:
    tp: int = 0
    fp: int = 0
    fn: int = 0
    tn: int = 0

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.fn + self.tn


@dataclass(frozen=True)
class FineConfusion:
    tp_fine: int = 0
    fp_fine: int = 0
    fn_fine: int = 0


@dataclass(frozen=True)
class PrfResult:
    accuracy: float
    precision: float
    recall: float
    f1: float
    undefined: frozenset[str] = frozenset()


def percent(ratio: float) -> float:
    """Ratio → percentage with one half-up decimal (87.4 style)."""
    return float(Decimal(str(ratio * 100.0)).quantize(Decimal("0.1"), rounding=ROUND_HALF_UP))


def _ratio(num: int, den: int, name: str, undefined: set[str]) -> float:
    if den == 0:
        undefined.add(name)
        return 0.0
    return num / den


def confusion(verdicts: Sequence[Verdict], golds: Sequence[GoldLabel]) -> Confusion:
    if len(verdicts) != len(golds):
        raise ValueError(f"{len(verdicts)} verdicts vs {len(golds)} gold labels")
    tp = fp = fn = tn = 0
    for v, g in zip(verdicts, golds):
        if v.violation and g.violation:
            tp += 1
        elif v.violation:
            fp += 1
        elif g.violation:
            fn += 1
        else:
            tn += 1
    return Confusion(tp, fp, fn, tn)


def prf(c: Confusion) -> PrfResult:
    undefined: set[str] = set()
    accuracy = _ratio(c.tp + c.tn, c.total, "accuracy", undefined)
    precision = _ratio(c.tp, c.tp + c.fp, "precision", undefined)
    recall = _ratio(c.tp, c.tp + c.fn, "recall", undefined)
    if precision + recall > 0:
        f1 = 2 * precision * recall / (precision + recall)
    else:
        undefined.add("f1")
        f1 = 0.0
    return PrfResult(accuracy, precision, recall, f1, frozenset(undefined))


def match_fine(v_y: FineGrainedViolation, v_x: FineGrainedViolation) -> int:
    """Side-tagged overlap: a source index only matches a source index."""
    return len(v_y.source_indices & v_x.source_indices) + \
        len(v_y.followup_indices & v_x.followup_indices)


def _size(v: FineGrainedViolation) -> int:
    return len(v.source_indices) + len(v.followup_indices)


def fine_confusion(pairs: Sequence[tuple[FineGrainedViolation, FineGrainedViolation]]) -> FineConfusion:
    """Input: (predicted, labeled) per pair. Tallies Σ overlap and remainders."""
    tp = sum(match_fine(v_y, v_x) for v_y, v_x in pairs)
    fp = sum(_size(v_y) for v_y, _ in pairs) - tp
    fn = sum(_size(v_x) for _, v_x in pairs) - tp
    return FineConfusion(tp, fp, fn)


def fine_prf(fc: FineConfusion) -> PrfResult:
    undefined: set[str] = set()
    precision = _ratio(fc.tp_fine, fc.tp_fine + fc.fp_fine, "precision", undefined)
    recall = _ratio(fc.tp_fine, fc.tp_fine + fc.fn_fine, "recall", undefined)
    if precision + recall > 0:
        f1 = 2 * precision * recall / (precision + recall)
    else:
        undefined.add("f1")
        f1 = 0.0
    # Accuracy has no fine-grained analogue; carried as 0/undefined.
    undefined.add("accuracy")
    return PrfResult(0.0, precision, recall, f1, frozenset(undefined))


@dataclass(frozen=True)
class SweepResult:
    curve: tuple[tuple[float, float], ...]  # (threshold, f1 ratio)
    best_threshold: float
    best_f1: float


def threshold_sweep(pairs: Sequence[TestCasePair],
                    make_provider: Callable[[float], SimilarityProvider],
                    stopwords: frozenset[str],
                    theta_min: float = 0.0,
                    theta_max: float = 1.0,
                    step: float = 0.01) -> SweepResult:
    """F1 at every threshold on the grid; argmax ties go to the smaller θ.

    Closure construction does not depend on θ, so refinement and closures are
    computed once per pair and only the comparison reruns per grid point.
    """
    if not pairs:
        raise ValueError("threshold sweep needs a non-empty labeled corpus")
    if step <= 0:
        raise ValueError(f"step must be positive, got {step}")
    for pair in pairs:
        if pair.gold is None:
            raise ValueError(f"pair {pair.id}: threshold sweep requires gold labels")

    prepared = []
    for pair in pairs:
        if pair.input_map is None:
            pair = dataclasses.replace(pair, input_map=refine.build_input_map(pair))
        pair = refine.refine(pair)
        closures = closure_mod.classify_all(closure_mod.build_closures(pair),
                                            pair.transformation)
        prepared.append((pair, closures))

    golds = [pair.gold for pair, _ in prepared]
    curve = []
    best_theta = None
    best_f1 = -1.0
    k = 0
    while True:
        theta = round(theta_min + k * step, 10)
        if theta > theta_max + 1e-12:
            break
        provider = make_provider(theta)
        verdicts = [comparator.check_pair(pair, provider, stopwords, closures)
                    for pair, closures in prepared]
        f1 = prf(confusion(verdicts, golds)).f1
        curve.append((theta, f1))
        if f1 > best_f1:
            best_theta, best_f1 = theta, f1
        k += 1
    return SweepResult(tuple(curve), best_theta, best_f1)
