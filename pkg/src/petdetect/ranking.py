"""Rank candidates by the sentiment shifts their replacements induce.

For each candidate, every replacement is substituted into the sentence
and scored; only score increases count, offensiveness dimensions carry
extra weight, and the per-replacement contributions combine into one
aggregate. The top-scoring candidates are the detected terms.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .corpus import Sentence
from .paraphrase import ReplacementSet, substitute
from .sentiment import Scorer
from .topics import QualityPhrase

_ZERO_TOL = 1e-6

AGGREGATORS = ("sum", "mean", "max")


@dataclass(frozen=True)
class ShiftVector:
    """Componentwise score difference, substituted minus original.

    Order matches SentimentVector: [negative, neutral, positive,
    non-offensive, offensive]. Each simplex's differences sum to zero.
    """

    d_neg: float
    d_neu: float
    d_pos: float
    d_non_off: float
    d_off: float

    def __post_init__(self) -> None:
        for name, value in self.__dict__.items():
            if not -1.0 <= value <= 1.0:
                raise ValueError(f"{name}={value} outside [-1, 1]")
        if abs(self.d_neg + self.d_neu + self.d_pos) > _ZERO_TOL:
            raise ValueError("sentiment shift components do not sum to 0")
        if abs(self.d_non_off + self.d_off) > _ZERO_TOL:
            raise ValueError("offensiveness shift components do not sum to 0")

    def as_list(self) -> list[float]:
        return [self.d_neg, self.d_neu, self.d_pos, self.d_non_off, self.d_off]


ZERO_SHIFT = ShiftVector(0.0, 0.0, 0.0, 0.0, 0.0)


@dataclass(frozen=True)
class Weights:
    """Per-dimension aggregation weights; offensiveness emphasized by default."""

    w_neg: float = 1.0
    w_neu: float = 1.0
    w_pos: float = 1.0
    w_non_off: float = 2.0
    w_off: float = 2.0

    def __post_init__(self) -> None:
        for name, value in self.__dict__.items():
            if value < 0:
                raise ValueError(f"{name}={value} must be >= 0")

    def as_list(self) -> list[float]:
        return [self.w_neg, self.w_neu, self.w_pos, self.w_non_off, self.w_off]


def shift(scorer: Scorer, original_text: str, substituted_text: str) -> ShiftVector:
    before = scorer.score(original_text).as_list()
    after = scorer.score(substituted_text).as_list()
    deltas = [a - b for a, b in zip(after, before)]
    return ShiftVector(*deltas)


def weighted_increase(sv: ShiftVector, w: Weights) -> float:
    """Weighted sum of the positive shift components only."""
    return sum(
        weight * max(0.0, delta) for weight, delta in zip(w.as_list(), sv.as_list())
    )


def aggregate(shifts: list[ShiftVector], w: Weights, aggregator: str = "sum") -> float:
    """Combine per-replacement increases into one candidate score.

    An empty shift list scores 0 (a candidate with no usable
    replacements ranks last rather than disappearing).
    """
    if aggregator not in AGGREGATORS:
        raise ValueError(f"aggregator must be one of {AGGREGATORS}, got {aggregator!r}")
    if not shifts:
        return 0.0
    per_replacement = [weighted_increase(sv, w) for sv in shifts]
    if aggregator == "sum":
        return sum(per_replacement)
    if aggregator == "mean":
        return sum(per_replacement) / len(per_replacement)
    return max(per_replacement)


@dataclass(frozen=True)
class RankedCandidate:
    phrase: QualityPhrase
    aggregate: float
    per_replacement: tuple[tuple[str, ShiftVector], ...] = field(default_factory=tuple)


@dataclass(frozen=True)
class DetectionResult:
    """Candidates of one sentence sorted by aggregate, top slice marked."""

    sentence: Sentence
    ranked: tuple[RankedCandidate, ...]
    pets: tuple[RankedCandidate, ...]


def rank_sentence(
    scorer: Scorer,
    sentence: Sentence,
    quality_phrases: list[QualityPhrase],
    replacement_sets: list[ReplacementSet],
    w: Weights,
    aggregator: str = "sum",
    top_n: int = 2,
) -> DetectionResult:
    """Score and order a sentence's candidates; keep shift detail for reports.

    Sorting is by aggregate descending with earlier sentence position
    winning ties, which makes the output deterministic.
    """
    if len(quality_phrases) != len(replacement_sets):
        raise ValueError("quality_phrases and replacement_sets must align")
    original_text = sentence.display_text()
    scored: list[RankedCandidate] = []
    for qp, rset in zip(quality_phrases, replacement_sets):
        if rset.candidate.token != qp.token:
            raise ValueError(
                f"replacement set for {rset.candidate.token!r} paired with {qp.token!r}"
            )
        per_replacement = []
        for replacement, _similarity in rset.replacements:
            substituted = substitute(sentence, qp, replacement)
            per_replacement.append((replacement, shift(scorer, original_text, substituted)))
        score = aggregate([sv for _, sv in per_replacement], w, aggregator)
        scored.append(
            RankedCandidate(
                phrase=qp, aggregate=score, per_replacement=tuple(per_replacement)
            )
        )
    ranked = tuple(
        sorted(scored, key=lambda rc: (-rc.aggregate, rc.phrase.sentence_position))
    )
    return DetectionResult(sentence=sentence, ranked=ranked, pets=ranked[: max(0, top_n)])
