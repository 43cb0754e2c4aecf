"""Collocation learning: merge statistically associated adjacent words.

A first pass over the corpus learns which adjacent pairs score above a
threshold and joins them with underscores; applying a second,
independently trained pass on the rewritten corpus extends merges to
three-word expressions.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .corpus import PHRASE_JOINER, Sentence
from .errors import CorpusError

NEG_INF = float("-inf")


@dataclass
class NgramCounts:
    """Exact unigram and adjacent-bigram counts over a corpus.

    `vocab_size` is the number of distinct unigrams whose count reaches
    the min_count used at counting time; it feeds the scoring formula.
    """

    unigram: dict[str, int] = field(default_factory=dict)
    bigram: dict[tuple[str, str], int] = field(default_factory=dict)
    total_words: int = 0
    vocab_size: int = 0


def count_ngrams(corpus: Iterable[Sentence], min_count: int) -> NgramCounts:
    """Count unigrams and adjacent pairs; pairs never cross sentences."""
    if min_count < 1:
        raise ValueError(f"min_count must be >= 1, got {min_count}")
    unigram: Counter[str] = Counter()
    bigram: Counter[tuple[str, str]] = Counter()
    total = 0
    for sentence in corpus:
        tokens = sentence.tokens
        unigram.update(tokens)
        total += len(tokens)
        bigram.update(zip(tokens, tokens[1:]))
    vocab_size = sum(1 for c in unigram.values() if c >= min_count)
    return NgramCounts(
        unigram=dict(unigram), bigram=dict(bigram), total_words=total, vocab_size=vocab_size
    )


def score_bigram(counts: NgramCounts, a: str, b: str, min_count: int) -> float:
    """Score an adjacent pair: (count(ab) - min_count) * |V| / (count(a) * count(b)).

    Pairs or words below min_count support, and unknown words, get -inf
    so they can never clear any threshold.
    """
    ca = counts.unigram.get(a, 0)
    cb = counts.unigram.get(b, 0)
    cab = counts.bigram.get((a, b), 0)
    if ca < min_count or cb < min_count or cab < min_count:
        return NEG_INF
    return (cab - min_count) * counts.vocab_size / (ca * cb)


@dataclass
class PhraserModel:
    """Learned collocation statistics plus the acceptance threshold.

    Deterministic: the accepted-bigram set is a pure function of the
    counts and parameters.
    """

    counts: NgramCounts
    min_count: int
    threshold: float
    delimiter: str = PHRASE_JOINER

    def score(self, a: str, b: str) -> float:
        return score_bigram(self.counts, a, b, self.min_count)

    def accepts(self, a: str, b: str) -> bool:
        return self.score(a, b) > self.threshold

    def accepted_bigrams(self) -> set[tuple[str, str]]:
        return {pair for pair in self.counts.bigram if self.accepts(*pair)}

    def apply(self, sentence: Sentence) -> Sentence:
        """Greedy left-to-right merge of accepted adjacent pairs.

        After a merge the scan resumes past the merged token, so merges
        never overlap within one pass.
        """
        tokens = sentence.tokens
        out: list[str] = []
        i = 0
        n = len(tokens)
        while i < n:
            if i + 1 < n and self.accepts(tokens[i], tokens[i + 1]):
                out.append(tokens[i] + self.delimiter + tokens[i + 1])
                i += 2
            else:
                out.append(tokens[i])
                i += 1
        return Sentence(tokens=tuple(out), raw=sentence.raw)

    def transform(self, corpus: Iterable[Sentence]) -> Iterator[Sentence]:
        for sentence in corpus:
            yield self.apply(sentence)

    def save(self, path: str) -> None:
        """Persist as TSV. repr() float formatting keeps the round trip bit-exact."""
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(
                "min_count\t%d\tthreshold\t%s\tvocab_size\t%d\ttotal_words\t%d\n"
                % (
                    self.min_count,
                    repr(float(self.threshold)),
                    self.counts.vocab_size,
                    self.counts.total_words,
                )
            )
            for token, count in sorted(self.counts.unigram.items()):
                fh.write(f"u\t{token}\t{count}\n")
            for (a, b), count in sorted(self.counts.bigram.items()):
                fh.write(f"b\t{a}\t{b}\t{count}\n")

    @classmethod
    def load(cls, path: str) -> "PhraserModel":
        try:
            fh = open(path, encoding="utf-8")
        except OSError as exc:
            raise CorpusError(f"cannot read phraser model {path}: {exc}") from exc
        with fh:
            header = fh.readline().rstrip("\n").split("\t")
            if len(header) != 8 or header[0] != "min_count":
                raise CorpusError(f"{path}:1: malformed phraser header")
            min_count = int(header[1])
            threshold = float(header[3])
            vocab_size = int(header[5])
            total_words = int(header[7])
            unigram: dict[str, int] = {}
            bigram: dict[tuple[str, str], int] = {}
            for lineno, line in enumerate(fh, start=2):
                cols = line.rstrip("\n").split("\t")
                if cols[0] == "u" and len(cols) == 3:
                    unigram[cols[1]] = int(cols[2])
                elif cols[0] == "b" and len(cols) == 4:
                    bigram[(cols[1], cols[2])] = int(cols[3])
                else:
                    raise CorpusError(f"{path}:{lineno}: malformed phraser row")
        counts = NgramCounts(
            unigram=unigram, bigram=bigram, total_words=total_words, vocab_size=vocab_size
        )
        return cls(counts=counts, min_count=min_count, threshold=threshold)


def train_phraser(corpus: Iterable[Sentence], min_count: int, threshold: float) -> PhraserModel:
    if threshold <= 0:
        raise ValueError(f"threshold must be > 0, got {threshold}")
    counts = count_ngrams(corpus, min_count)
    return PhraserModel(counts=counts, min_count=min_count, threshold=threshold)


def train_two_pass(
    corpus: Iterable[Sentence], min_count: int, threshold: float
) -> tuple[PhraserModel, PhraserModel]:
    """Train bigram merging twice so merged tokens can pair up again.

    The second model is trained on the corpus rewritten by the first, so
    its accepted pairs may contain one already-merged token, yielding
    three-word expressions. The corpus must be re-iterable.
    """
    first = train_phraser(corpus, min_count, threshold)
    second = train_phraser(first.transform(corpus), min_count, threshold)
    return first, second


class PhrasedCorpus:
    """Re-iterable corpus view with one or more phraser passes applied."""

    def __init__(self, base: Iterable[Sentence], *models: PhraserModel):
        self.base = base
        self.models = models

    def __iter__(self) -> Iterator[Sentence]:
        for sentence in self.base:
            for model in self.models:
                sentence = model.apply(sentence)
            yield sentence
