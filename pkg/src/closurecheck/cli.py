"""Command-line surface.

Subcommands: `check` (verdicts), `evaluate` (verdicts + metrics against gold),
`closures` (closure dump), `sweep` (F1-vs-threshold), `gen` (synthetic JSONL).
Exit codes: 0 success, 1 violations found under --fail-on-violation, 2 on
configuration or I/O problems. Diagnostics go to stderr, reports to --output.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Optional

import click

from closurecheck import comparator, corpus_io, metrics, synth
from closurecheck.model import TRANSFORMATION_KINDS, TestCasePair, Verdict
from closurecheck.similarity import (
    ConfigurationError,
    SimilarityProvider,
    SynonymTable,
    VectorTable,
    default_threshold,
    load_stopwords,
)

logger = logging.getLogger("closurecheck.cli")

_RESOURCE_ERRORS = (ConfigurationError, corpus_io.CorpusError, OSError, ValueError)


def _configure_logging(verbose: int) -> None:
    level = logging.WARNING
    if verbose == 1:
        level = logging.INFO
    elif verbose >= 2:
        level = logging.DEBUG
    logging.basicConfig(stream=sys.stderr, level=level,
                        format="%(levelname)s %(name)s: %(message)s")


@click.group()
@click.option("-v", "--verbose", count=True, help="More diagnostics on stderr.")
def main(verbose: int) -> None:
    _configure_logging(verbose)


def _io_options(fn):
    fn = click.option("--input", "input_path", required=True,
                      type=click.Path(exists=True, dir_okay=False),
                      help="Pair-record JSONL.")(fn)
    fn = click.option("--output", "output_path", default="-", show_default=True,
                      help="Report destination ('-' for stdout).")(fn)
    fn = click.option("--strict", is_flag=True,
                      help="Abort on the first invalid record.")(fn)
    return fn


def _provider_options(fn):
    fn = click.option("--config", "config_num", type=click.IntRange(1, 5), default=4,
                      show_default=True, help="Similarity configuration.")(fn)
    fn = click.option("--synonyms", "synonyms_path", type=click.Path(exists=True, dir_okay=False),
                      default=None, help="Synonym TSV.")(fn)
    fn = click.option("--vectors", "vectors_path", type=click.Path(exists=True, dir_okay=False),
                      default=None, help="Word-vector table.")(fn)
    fn = click.option("--stopwords", "stopwords_path", type=click.Path(exists=True, dir_okay=False),
                      default=None, help="Stopword list, one per line.")(fn)
    fn = click.option("--threshold", type=float, default=None,
                      help="Override every per-transformation threshold.")(fn)
    fn = click.option("--lang", "lang_pair", type=click.Choice(["en-zh", "zh-en"]),
                      default="en-zh", show_default=True, help="Language pair.")(fn)
    return fn


def _languages(lang_pair: str) -> tuple[str, str]:
    src, dst = lang_pair.split("-", 1)
    return src, dst


def _file_digest(path: Optional[str]) -> Optional[str]:
    if path is None:
        return None
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()[:12]


@dataclasses.dataclass(frozen=True)
class _RunSetup:
    providers: dict[str, SimilarityProvider]
    stopwords: frozenset[str]
    configuration: dict
    synonyms: Optional[SynonymTable]
    vectors: Optional[VectorTable]


def _build_setup(config_num: int, synonyms_path: Optional[str], vectors_path: Optional[str],
                 stopwords_path: Optional[str], threshold: Optional[float],
                 lang_pair: str, strict: bool) -> _RunSetup:
    synonyms = corpus_io.load_synonyms(synonyms_path) if synonyms_path else None
    vectors = corpus_io.load_vectors(vectors_path) if vectors_path else None
    stopwords = load_stopwords(stopwords_path) if stopwords_path else frozenset()
    kind = f"CONFIG{config_num}"
    thresholds = {
        t: threshold if threshold is not None else default_threshold(lang_pair, t)
        for t in TRANSFORMATION_KINDS
    }
    providers = {t: SimilarityProvider(kind, theta, synonyms, vectors)
                 for t, theta in thresholds.items()}
    configuration = {
        "config": kind,
        "lang": lang_pair,
        "thresholds": thresholds,
        "strict": strict,
        "stopwords_sha256": _file_digest(stopwords_path),
        "synonyms_sha256": _file_digest(synonyms_path),
        "vectors_sha256": _file_digest(vectors_path),
    }
    return _RunSetup(providers, stopwords, configuration, synonyms, vectors)


# Worker-side state, installed once per process by the pool initializer.
_WORKER_STATE: dict = {}


def _init_worker(providers: dict[str, SimilarityProvider], stopwords: frozenset[str]) -> None:
    _WORKER_STATE["providers"] = providers
    _WORKER_STATE["stopwords"] = stopwords


def _check_task(pair: TestCasePair) -> Verdict:
    provider = _WORKER_STATE["providers"][pair.transformation.kind]
    _, _, verdict = comparator.run_pair(pair, provider, _WORKER_STATE["stopwords"])
    return verdict


def _run_verdicts(pairs: list[TestCasePair], setup: _RunSetup, workers: int) -> list[Verdict]:
    if workers <= 1:
        _init_worker(setup.providers, setup.stopwords)
        return [_check_task(pair) for pair in pairs]
    with ProcessPoolExecutor(max_workers=workers, initializer=_init_worker,
                             initargs=(setup.providers, setup.stopwords)) as pool:
        # map() preserves input order, so merged output is worker-count
        # independent by construction.
        return list(pool.map(_check_task, pairs))


def _write_json(payload: dict, output_path: str) -> None:
    text = json.dumps(payload, ensure_ascii=False, indent=2, sort_keys=True) + "\n"
    if output_path == "-":
        sys.stdout.write(text)
    else:
        Path(output_path).write_text(text, encoding="utf-8")


def _emit_report(verdicts: list[Verdict], setup: _RunSetup, output_path: str,
                 metrics_block: Optional[dict] = None) -> None:
    if output_path == "-":
        corpus_io.write_report(verdicts, sys.stdout, setup.configuration, metrics_block)
    else:
        corpus_io.write_report(verdicts, output_path, setup.configuration, metrics_block)


@main.command()
@_io_options
@_provider_options
@click.option("--workers", type=int, default=1, show_default=True,
              help="Worker processes; results are identical for any count.")
@click.option("--fail-on-violation", is_flag=True,
              help="Exit 1 when at least one pair violates the relation.")
def check(input_path, output_path, strict, config_num, synonyms_path, vectors_path,
          stopwords_path, threshold, lang_pair, workers, fail_on_violation) -> None:
    """Run the closure-based output-relation check over a corpus."""
    try:
        setup = _build_setup(config_num, synonyms_path, vectors_path, stopwords_path,
                             threshold, lang_pair, strict)
        in_lang, out_lang = _languages(lang_pair)
        pairs = list(corpus_io.read_pairs(input_path, strict, in_lang, out_lang))
        verdicts = _run_verdicts(pairs, setup, workers)
        _emit_report(verdicts, setup, output_path)
    except _RESOURCE_ERRORS as exc:
        click.echo(f"error: {exc}", err=True)
        raise SystemExit(2)
    if fail_on_violation and any(v.violation for v in verdicts):
        raise SystemExit(1)
    raise SystemExit(0)


@main.command()
@_io_options
@_provider_options
@click.option("--workers", type=int, default=1, show_default=True)
@click.option("--fail-on-violation", is_flag=True)
def evaluate(input_path, output_path, strict, config_num, synonyms_path, vectors_path,
             stopwords_path, threshold, lang_pair, workers, fail_on_violation) -> None:
    """Check a gold-labeled corpus and report confusion counts and PRF."""
    try:
        setup = _build_setup(config_num, synonyms_path, vectors_path, stopwords_path,
                             threshold, lang_pair, strict)
        in_lang, out_lang = _languages(lang_pair)
        pairs = list(corpus_io.read_pairs(input_path, strict, in_lang, out_lang))
        for pair in pairs:
            if pair.gold is None:
                raise ConfigurationError(f"pair {pair.id}: evaluate requires gold labels")
        verdicts = _run_verdicts(pairs, setup, workers)

        golds = [pair.gold for pair in pairs]
        coarse = metrics.confusion(verdicts, golds)
        result = metrics.prf(coarse)
        fine = fine_result = None
        if pairs and all(g.fine_grained is not None for g in golds):
            fine = metrics.fine_confusion(
                [(v.fine_grained, g.fine_grained) for v, g in zip(verdicts, golds)])
            fine_result = metrics.fine_prf(fine)
        block = corpus_io.metrics_to_json(coarse, result, fine, fine_result)
        _emit_report(verdicts, setup, output_path, block)
    except _RESOURCE_ERRORS as exc:
        click.echo(f"error: {exc}", err=True)
        raise SystemExit(2)
    if fail_on_violation and any(v.violation for v in verdicts):
        raise SystemExit(1)
    raise SystemExit(0)


@main.command()
@_io_options
@click.option("--lang", "lang_pair", type=click.Choice(["en-zh", "zh-en"]),
              default="en-zh", show_default=True)
def closures(input_path, output_path, strict, lang_pair) -> None:
    """Dump each pair's refined word closures with their kinds."""
    try:
        in_lang, out_lang = _languages(lang_pair)
        pairs = list(corpus_io.read_pairs(input_path, strict, in_lang, out_lang))
        dump = []
        for pair in pairs:
            refined, closure_list, _ = comparator.run_pair(
                pair, _NULL_PROVIDER, frozenset())
            dump.append({
                "id": refined.id,
                "closures": [corpus_io.closure_to_json(c) for c in closure_list],
            })
        _write_json({"pairs": dump}, output_path)
    except _RESOURCE_ERRORS as exc:
        click.echo(f"error: {exc}", err=True)
        raise SystemExit(2)
    raise SystemExit(0)


# Closure construction is similarity-free; this provider only feeds the unused
# verdict leg of run_pair inside `closures`.
_NULL_PROVIDER = SimilarityProvider("CONFIG3", 1.0)


@main.command()
@_io_options
@_provider_options
@click.option("--theta-min", type=float, default=0.0, show_default=True)
@click.option("--theta-max", type=float, default=1.0, show_default=True)
@click.option("--step", type=float, default=0.01, show_default=True)
def sweep(input_path, output_path, strict, config_num, synonyms_path, vectors_path,
          stopwords_path, threshold, lang_pair, theta_min, theta_max, step) -> None:
    """Sweep the similarity threshold and report F1 per grid point."""
    try:
        setup = _build_setup(config_num, synonyms_path, vectors_path, stopwords_path,
                             threshold, lang_pair, strict)
        in_lang, out_lang = _languages(lang_pair)
        pairs = list(corpus_io.read_pairs(input_path, strict, in_lang, out_lang))
        base = setup.providers[TRANSFORMATION_KINDS[0]]

        def make_provider(theta: float) -> SimilarityProvider:
            return dataclasses.replace(base, threshold=theta)

        result = metrics.threshold_sweep(pairs, make_provider, setup.stopwords,
                                         theta_min, theta_max, step)
        payload = {
            "configuration": setup.configuration,
            "curve": [{"threshold": t, "f1_percent": metrics.percent(f)}
                      for t, f in result.curve],
            "best_threshold": result.best_threshold,
            "best_f1_percent": metrics.percent(result.best_f1),
        }
        _write_json(payload, output_path)
    except _RESOURCE_ERRORS as exc:
        click.echo(f"error: {exc}", err=True)
        raise SystemExit(2)
    raise SystemExit(0)


@main.command()
@click.option("--output", "output_path", required=True,
              type=click.Path(dir_okay=False), help="Destination JSONL.")
@click.option("--count", type=int, default=100, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--kind", type=click.Choice(list(TRANSFORMATION_KINDS)), default="IT-2",
              show_default=True, help="Transformation kind for random pairs.")
@click.option("--injection", type=click.Choice(["random"] + list(synth.INJECTION_KINDS)),
              default="random", show_default=True,
              help="'random' emits unlabeled structural pairs; anything else "
                   "emits labeled diagonal pairs with that error injected.")
@click.option("--input-len", type=int, default=8, show_default=True)
@click.option("--translation-len", type=int, default=8, show_default=True)
@click.option("--density", type=float, default=0.3, show_default=True)
def gen(output_path, count, seed, kind, injection, input_len, translation_len, density) -> None:
    """Generate synthetic pair records."""
    try:
        pairs = []
        for k in range(count):
            cfg = synth.SynthConfig(input_len=input_len, translation_len=translation_len,
                                    edge_density=density, mutation_kind=kind,
                                    injection=injection if injection != "random" else "none",
                                    seed=seed + k)
            if injection == "random":
                pairs.append(gen_unique(synth.gen_random_pair(cfg), k))
            else:
                pairs.append(gen_unique(synth.gen_labeled_pair(cfg), k))
        corpus_io.write_pairs(pairs, output_path)
    except _RESOURCE_ERRORS as exc:
        click.echo(f"error: {exc}", err=True)
        raise SystemExit(2)
    raise SystemExit(0)


def gen_unique(pair: TestCasePair, k: int) -> TestCasePair:
    return dataclasses.replace(pair, id=f"{pair.id}-{k}")


if __name__ == "__main__":
    main()
