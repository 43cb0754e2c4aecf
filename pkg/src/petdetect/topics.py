"""Topic filtering: keep phrases distributionally close to sensitive topics.

A candidate survives when the sum of its cosine similarities to the
topic seed words clears a threshold; survivors are the "quality
phrases" that move on to paraphrasing.
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources

from .collocation import NEG_INF
from .corpus import Sentence, StopwordList, display_form
from .embedding import EmbeddingModel
from .errors import CorpusError


@dataclass
class TopicLexicon:
    """Named topics, each with a non-empty list of seed words."""

    topics: dict[str, list[str]]

    def __post_init__(self) -> None:
        for name, seeds in self.topics.items():
            if not seeds:
                raise ValueError(f"topic {name!r} has no seed words")

    def seed_tokens(self) -> list[str]:
        """All seeds across all topics, deduplicated, in file order."""
        seen: dict[str, None] = {}
        for seeds in self.topics.values():
            for seed in seeds:
                seen.setdefault(seed)
        return list(seen)

    @classmethod
    def load(cls, path: str) -> "TopicLexicon":
        topics: dict[str, list[str]] = {}
        try:
            fh = open(path, encoding="utf-8")
        except OSError as exc:
            raise CorpusError(f"cannot read topic lexicon {path}: {exc}") from exc
        with fh:
            for lineno, line in enumerate(fh, start=1):
                line = line.rstrip("\n")
                if not line.strip() or line.startswith("#"):
                    continue
                name, sep, seeds = line.partition("\t")
                if not sep or not seeds.strip():
                    raise CorpusError(f"{path}:{lineno}: expected 'topic<TAB>seed1 seed2 ...'")
                name = name.strip()
                if name in topics:
                    raise CorpusError(f"{path}:{lineno}: duplicate topic {name!r}")
                topics[name] = [s.lower() for s in seeds.split()]
        return cls(topics=topics)

    @classmethod
    def default(cls) -> "TopicLexicon":
        # One stand-in seed per sensitive topic; override via config for
        # anything serious.
        text = resources.files("petdetect.data").joinpath("topics.tsv").read_text("utf-8")
        topics: dict[str, list[str]] = {}
        for line in text.splitlines():
            if not line.strip() or line.startswith("#"):
                continue
            name, _, seeds = line.partition("\t")
            topics[name.strip()] = seeds.split()
        return cls(topics=topics)


@dataclass(frozen=True)
class QualityPhrase:
    """A candidate that cleared the topic filter.

    `sentence_position` indexes the phrase-merged sentence so later
    stages can substitute exactly this occurrence.
    """

    token: str
    display: str
    quality_score: float
    sentence_position: int


def quality_score(model: EmbeddingModel, phrase: str, lex: TopicLexicon) -> float:
    """Summed cosine similarity of `phrase` to every seed word.

    Out-of-vocabulary phrases get -inf (filtered out); seeds missing
    from the vocabulary contribute 0.
    """
    if phrase not in model:
        return NEG_INF
    total = 0.0
    for seed in lex.seed_tokens():
        if seed in model:
            total += model.cosine(phrase, seed)
    return total


def filter_sentence(
    model: EmbeddingModel,
    sentence: Sentence,
    lex: TopicLexicon,
    stop: StopwordList,
    threshold: float,
) -> list[QualityPhrase]:
    """Quality phrases of a phrase-merged sentence, in sentence order.

    Stopword-covered tokens are dropped first; repeated tokens keep only
    their first position; survivors must score strictly above the
    threshold.
    """
    out: list[QualityPhrase] = []
    seen: set[str] = set()
    for position, token in enumerate(sentence.tokens):
        if stop.covers(token):
            continue
        if token in seen:
            continue
        seen.add(token)
        score = quality_score(model, token, lex)
        if score > threshold:
            out.append(
                QualityPhrase(
                    token=token,
                    display=display_form(token),
                    quality_score=score,
                    sentence_position=position,
                )
            )
    return out
