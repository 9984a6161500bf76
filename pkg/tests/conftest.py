"""Shared fixtures: the six worked-example pairs and their resource tables."""

from pathlib import Path

import pytest

from closurecheck import corpus_io, similarity

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def fixture_pairs():
    return list(corpus_io.read_pairs(FIXTURES / "pairs.jsonl", strict=True,
                                     input_language="en", output_language="zh"))


@pytest.fixture(scope="session")
def pair_by_id(fixture_pairs):
    return {p.id: p for p in fixture_pairs}


@pytest.fixture(scope="session")
def synonyms():
    return corpus_io.load_synonyms(FIXTURES / "synonyms.tsv")


@pytest.fixture(scope="session")
def vectors():
    return corpus_io.load_vectors(FIXTURES / "vectors.txt")


@pytest.fixture(scope="session")
def stopwords():
    return similarity.load_stopwords(FIXTURES / "stopwords_zh.txt")


@pytest.fixture(scope="session")
def provider_for(synonyms, vectors):
    """Config-4 provider at the default en→zh threshold for a pair's kind."""

    def build(pair):
        theta = similarity.default_threshold("en-zh", pair.transformation.kind)
        return similarity.SimilarityProvider("CONFIG4", theta, synonyms, vectors)

    return build
