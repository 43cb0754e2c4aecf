"""Shared fixtures: deterministic synthetic corpora and trained models."""

from __future__ import annotations

import dataclasses
import random

import pytest

from petdetect.corpus import Sentence, tokenize
from petdetect.embedding import TrainConfig


def sentences(lines: list[str]) -> list[Sentence]:
    return [tokenize(line) for line in lines]


def two_cluster_lines(
    n_per_cluster: int = 250, seed: int = 11
) -> tuple[list[str], list[str], list[str]]:
    """Sentences drawn from two disjoint vocabularies.

    Returns (lines, cluster_a_words, cluster_b_words). Words co-occur
    only within their own cluster, so embeddings must separate them.
    """
    rng = random.Random(seed)
    cluster_a = [f"red{i}" for i in range(10)]
    cluster_b = [f"sea{i}" for i in range(10)]
    lines = []
    for _ in range(n_per_cluster):
        lines.append(" ".join(rng.choice(cluster_a) for _ in range(8)))
        lines.append(" ".join(rng.choice(cluster_b) for _ in range(8)))
    return lines, cluster_a, cluster_b


def small_train_config(**overrides) -> TrainConfig:
    # Subsampling off: it is tuned for Zipfian text and starves tiny
    # uniform-frequency corpora of training pairs.
    cfg = TrainConfig(
        dim=24, window=3, epochs=3, min_count=2, subsample_threshold=0.0, rng_seed=5
    )
    return dataclasses.replace(cfg, **overrides)


@pytest.fixture(scope="session")
def cluster_corpus():
    lines, a, b = two_cluster_lines()
    return sentences(lines), a, b


@pytest.fixture(scope="session")
def cluster_model(cluster_corpus):
    from petdetect import embedding

    corpus, _, _ = cluster_corpus
    return embedding.train(corpus, small_train_config())


def planted_world_lines(rng_seed: int = 23) -> list[str]:
    """Training corpus with a planted phrase and a neutral distractor.

    "gentle exit" always sits between host-cluster words (ha*), which a
    constructed sentiment lexicon marks maximally offensive; "blue
    kettle" lives among neutral hb* words.
    """
    rng = random.Random(rng_seed)
    ha = [f"ha{i}" for i in range(6)]
    hb = [f"hb{i}" for i in range(6)]
    lines = []
    for _ in range(120):
        lines.append(
            " ".join(rng.sample(ha, 3) + ["gentle", "exit"] + rng.sample(ha, 3))
        )
        lines.append(
            " ".join(rng.sample(hb, 3) + ["blue", "kettle"] + rng.sample(hb, 3))
        )
    rng.shuffle(lines)
    return lines


@pytest.fixture(scope="session")
def planted_world(tmp_path_factory):
    """A trained pipeline over the planted corpus, with all data on disk."""
    from petdetect.corpus import FileCorpus
    from petdetect.pipeline import Pipeline, PipelineConfig, train_models

    root = tmp_path_factory.mktemp("planted")
    corpus_path = root / "corpus.txt"
    corpus_path.write_text("\n".join(planted_world_lines()) + "\n")

    topics_path = root / "topics.tsv"
    topics_path.write_text("planted\tgentle_exit\ndistract\tblue_kettle\n")

    sentiment_path = root / "sentiment.tsv"
    sentiment_path.write_text(
        "".join(f"ha{i}\t-1.0\t1.0\n" for i in range(6))
    )

    config = PipelineConfig(
        phraser_min_count=5,
        phraser_threshold=0.05,
        embedding=small_train_config(min_count=5),
        topic_lexicon_path=str(topics_path),
        sentiment_lexicon_path=str(sentiment_path),
        quality_threshold=0.8,
        k_neighbors=4,
        rng_seed=7,
    )
    bundle = train_models(FileCorpus(str(corpus_path)), config)
    pipeline = Pipeline(bundle, config)
    return {
        "pipeline": pipeline,
        "bundle": bundle,
        "config": config,
        "corpus_path": str(corpus_path),
        "root": root,
    }
