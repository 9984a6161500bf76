"""On-disk formats: pair-record JSONL, vector/synonym tables, verdict reports.

Alignments serialize as index-pair arrays, never surface-string maps, because
token identity is positional. Report JSON is key-sorted and newline-terminated
so identical inputs produce identical bytes.
"""

from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import IO, Iterable, Iterator, Optional, Union

from closurecheck.model import (
    AlignmentMap,
    FineGrainedViolation,
    GoldLabel,
    InputMap,
    TestCasePair,
    TokenizedText,
    TransformationMeta,
    Verdict,
    WordClosure,
    validate_pair,
)
from closurecheck.metrics import Confusion, FineConfusion, PrfResult, percent
from closurecheck.similarity import SynonymTable, VectorTable

logger = logging.getLogger("closurecheck.io")

_REQUIRED_KEYS = (
    "id", "transformation", "source_input", "followup_input",
    "source_translation", "followup_translation",
    "alignment_source", "alignment_followup",
)
_KNOWN_KEYS = _REQUIRED_KEYS + (
    "tree_source_translation", "tree_followup_translation",
    "contextual_vectors", "gold",
)


class CorpusError(ValueError):
    pass


def _tokens(obj: dict, key: str, language: str) -> TokenizedText:
    value = obj[key]
    if not isinstance(value, list) or not all(isinstance(t, str) for t in value):
        raise CorpusError(f"{key} must be an array of strings")
    return TokenizedText(tuple(value), language)


def _edge_list(value, key: str) -> list[tuple[int, int]]:
    edges = []
    for entry in value:
        if not isinstance(entry, (list, tuple)) or len(entry) != 2:
            raise CorpusError(f"{key} entries must be [input_index, output_index]")
        edges.append((int(entry[0]), int(entry[1])))
    return edges


def pair_from_record(obj: dict, input_language: str = "",
                     output_language: str = "") -> TestCasePair:
    """One parsed JSONL object → TestCasePair. Schema errors raise CorpusError."""
    if not isinstance(obj, dict):
        raise CorpusError("record must be a JSON object")
    missing = [k for k in _REQUIRED_KEYS if k not in obj]
    if missing:
        raise CorpusError(f"missing required keys: {', '.join(missing)}")

    t = obj["transformation"]
    if not isinstance(t, dict) or "kind" not in t:
        raise CorpusError("transformation must be an object with a kind")
    meta = TransformationMeta.make(
        t["kind"],
        (int(i) for i in t.get("mutated_source_indices", [])),
        (int(i) for i in t.get("mutated_followup_indices", [])),
    )
    input_map = None
    if t.get("input_map") is not None:
        input_map = InputMap.from_pairs(_edge_list(t["input_map"], "input_map"))

    contextual = None
    if obj.get("contextual_vectors") is not None:
        raw = obj["contextual_vectors"]
        contextual = {
            side: {int(idx): tuple(float(x) for x in vec)
                   for idx, vec in raw.get(side, {}).items()}
            for side in ("source", "followup")
        }

    gold = None
    if obj.get("gold") is not None:
        g = obj["gold"]
        fine = None
        if g.get("fine_grained") is not None:
            fine = FineGrainedViolation.make(
                (int(i) for i in g["fine_grained"].get("source", [])),
                (int(i) for i in g["fine_grained"].get("followup", [])),
            )
        gold = GoldLabel(bool(g["violation"]), fine)

    return TestCasePair(
        id=str(obj["id"]),
        source_input=_tokens(obj, "source_input", input_language),
        followup_input=_tokens(obj, "followup_input", input_language),
        source_translation=_tokens(obj, "source_translation", output_language),
        followup_translation=_tokens(obj, "followup_translation", output_language),
        alignment_source=AlignmentMap.from_pairs(
            _edge_list(obj["alignment_source"], "alignment_source")),
        alignment_followup=AlignmentMap.from_pairs(
            _edge_list(obj["alignment_followup"], "alignment_followup")),
        transformation=meta,
        input_map=input_map,
        tree_source_translation=obj.get("tree_source_translation"),
        tree_followup_translation=obj.get("tree_followup_translation"),
        contextual_vectors=contextual,
        gold=gold,
        extra={k: v for k, v in obj.items() if k not in _KNOWN_KEYS},
    )


def record_from_pair(pair: TestCasePair) -> dict:
    record: dict = dict(pair.extra)
    record.update({
        "id": pair.id,
        "transformation": {
            "kind": pair.transformation.kind,
            "mutated_source_indices": sorted(pair.transformation.mutated_source),
            "mutated_followup_indices": sorted(pair.transformation.mutated_followup),
        },
        "source_input": list(pair.source_input.tokens),
        "followup_input": list(pair.followup_input.tokens),
        "source_translation": list(pair.source_translation.tokens),
        "followup_translation": list(pair.followup_translation.tokens),
        "alignment_source": [list(e) for e in sorted(pair.alignment_source.edges)],
        "alignment_followup": [list(e) for e in sorted(pair.alignment_followup.edges)],
    })
    if pair.input_map is not None:
        record["transformation"]["input_map"] = [list(e) for e in sorted(pair.input_map.edges)]
    if pair.tree_source_translation is not None:
        record["tree_source_translation"] = pair.tree_source_translation
    if pair.tree_followup_translation is not None:
        record["tree_followup_translation"] = pair.tree_followup_translation
    if pair.contextual_vectors is not None:
        record["contextual_vectors"] = {
            side: {str(idx): list(vec) for idx, vec in sorted(table.items())}
            for side, table in pair.contextual_vectors.items()
        }
    if pair.gold is not None:
        gold: dict = {"violation": pair.gold.violation}
        if pair.gold.fine_grained is not None:
            gold["fine_grained"] = {
                "source": sorted(pair.gold.fine_grained.source_indices),
                "followup": sorted(pair.gold.fine_grained.followup_indices),
            }
        record["gold"] = gold
    return record


def read_pairs(path: Union[str, Path], strict: bool = False,
               input_language: str = "", output_language: str = "") -> Iterator[TestCasePair]:
    """Yield validated pairs in file order.

    Lenient mode logs a diagnostic per bad record and keeps going; strict mode
    raises on the first one, naming the line.
    """
    with open(path, encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
                pair = pair_from_record(obj, input_language, output_language)
                findings = validate_pair(pair)
                if findings:
                    raise CorpusError("; ".join(findings))
            except (json.JSONDecodeError, CorpusError, ValueError) as exc:
                message = f"{path}: line {lineno}: {exc}"
                if strict:
                    raise CorpusError(message) from exc
                logger.warning("skipping invalid record: %s", message)
                continue
            yield pair


def write_pairs(pairs: Iterable[TestCasePair], path: Union[str, Path]) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        for pair in pairs:
            handle.write(json.dumps(record_from_pair(pair), ensure_ascii=False,
                                    sort_keys=True) + "\n")


def closure_to_json(c: WordClosure) -> dict:
    return {
        "kind": c.kind,
        "sent_s": sorted(c.sent_s),
        "tran_s": sorted(c.tran_s),
        "sent_f": sorted(c.sent_f),
        "tran_f": sorted(c.tran_f),
    }


def verdict_to_json(v: Verdict) -> dict:
    return {
        "id": v.pair_id,
        "violation": v.violation,
        "fine_grained": {
            "source": sorted(v.fine_grained.source_indices),
            "followup": sorted(v.fine_grained.followup_indices),
        },
        "failing_closures": [
            {"reason": fc.reason, "closure": closure_to_json(fc.closure)}
            for fc in v.failing_closures
        ],
    }


def prf_to_json(result: PrfResult, with_accuracy: bool = True) -> dict:
    block = {
        "precision_percent": percent(result.precision),
        "recall_percent": percent(result.recall),
        "f1_percent": percent(result.f1),
        "undefined": sorted(result.undefined),
    }
    if with_accuracy:
        block["accuracy_percent"] = percent(result.accuracy)
    return block


def metrics_to_json(c: Confusion, result: PrfResult,
                    fine: Optional[FineConfusion] = None,
                    fine_result: Optional[PrfResult] = None) -> dict:
    block = {
        "confusion": {"tp": c.tp, "fp": c.fp, "fn": c.fn, "tn": c.tn},
        "prf": prf_to_json(result),
    }
    if fine is not None and fine_result is not None:
        block["fine_confusion"] = {
            "tp_fine": fine.tp_fine, "fp_fine": fine.fp_fine, "fn_fine": fine.fn_fine,
        }
        block["fine_prf"] = prf_to_json(fine_result, with_accuracy=False)
    return block


def write_report(verdicts: Iterable[Verdict], destination: Union[str, Path, IO[str]],
                 configuration: Optional[dict] = None,
                 metrics_block: Optional[dict] = None) -> None:
    """Deterministic report: sorted keys, two-space indent, trailing newline."""
    verdict_list = list(verdicts)
    report: dict = {
        "configuration": configuration or {},
        "pairs": [verdict_to_json(v) for v in verdict_list],
        "summary": {
            "pairs": len(verdict_list),
            "violations": sum(1 for v in verdict_list if v.violation),
        },
    }
    if metrics_block is not None:
        report["metrics"] = metrics_block
    text = json.dumps(report, ensure_ascii=False, indent=2, sort_keys=True) + "\n"
    if hasattr(destination, "write"):
        destination.write(text)  # type: ignore[union-attr]
    else:
        Path(destination).write_text(text, encoding="utf-8")  # type: ignore[arg-type]


def load_vectors(path: Union[str, Path]) -> VectorTable:
    """Text format: header `count dim`, then `word v1 … vd` per line."""
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    body = [(n, ln) for n, ln in enumerate(lines, start=1) if ln.strip()]
    if not body:
        raise CorpusError(f"{path}: empty vector file")
    header_no, header = body[0]
    parts = header.split()
    if len(parts) != 2:
        raise CorpusError(f"{path}: line {header_no}: header must be 'count dim'")
    try:
        count, dim = int(parts[0]), int(parts[1])
    except ValueError:
        raise CorpusError(f"{path}: line {header_no}: header must be 'count dim'") from None
    entries: dict[str, tuple[float, ...]] = {}
    for lineno, line in body[1:]:
        fields = line.split()
        word, values = fields[0], fields[1:]
        if len(values) != dim:
            raise CorpusError(
                f"{path}: line {lineno}: expected {dim} values for {word!r}, got {len(values)}")
        try:
            vec = tuple(float(x) for x in values)
        except ValueError:
            raise CorpusError(f"{path}: line {lineno}: non-numeric value") from None
        if word in entries:
            logger.warning("%s: line %d: duplicate vector for %r, last wins", path, lineno, word)
        entries[word] = vec
    if count != len(entries):
        logger.warning("%s: header claims %d entries, found %d", path, count, len(entries))
    return VectorTable(entries, dim)


def load_synonyms(path: Union[str, Path]) -> SynonymTable:
    """TSV: `word<TAB>syn1,syn2,...`; a line with no tab lists no synonyms."""
    entries: dict[str, frozenset[str]] = {}
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        if not line.strip():
            continue
        word, _, rest = line.partition("\t")
        word = word.strip()
        if not word:
            raise CorpusError(f"{path}: line {lineno}: missing head word")
        synonyms = frozenset(s.strip() for s in rest.split(",") if s.strip())
        if word in entries:
            logger.warning("%s: line %d: duplicate entry for %r, last wins", path, lineno, word)
        entries[word] = synonyms
    return SynonymTable(entries)
