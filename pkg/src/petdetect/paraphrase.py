"""Distributional paraphrasing: neighbor lookup plus in-sentence substitution.

Embedding neighbors stand in for literal interpretations of a candidate.
Neighbors that contain the candidate (or are contained by it) are not
distinct alternatives and are excluded.
"""

from __future__ import annotations

from dataclasses import dataclass

from .corpus import Sentence, display_form
from .embedding import EmbeddingModel
from .topics import QualityPhrase


@dataclass(frozen=True)
class ReplacementSet:
    """Up to k replacement strings for one candidate, best first."""

    candidate: QualityPhrase
    replacements: tuple[tuple[str, float], ...]


def is_excluded(candidate_display: str, replacement_display: str, reverse: bool = True) -> bool:
    """Whole-string containment test on display forms, case-insensitive.

    With `reverse` enabled the check also rejects replacements contained
    IN the candidate (degenerate truncations like "armed" for "armed
    conflict").
    """
    cand = candidate_display.lower()
    repl = replacement_display.lower()
    if cand in repl:
        return True
    return reverse and repl in cand


def build_replacements(
    model: EmbeddingModel,
    qp: QualityPhrase,
    k: int,
    exclude_reverse: bool = True,
) -> ReplacementSet:
    """Collect up to k surviving neighbors of the candidate.

    The neighbor query widens by the number of rejects until k survive
    or the vocabulary is exhausted; fewer than k survivors is fine.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    limit = len(model) - 1
    survivors: list[tuple[str, float]] = []
    want = k
    while True:
        want = min(want, limit)
        if want <= 0:
            break
        neighbors = model.most_similar(qp.token, want)
        survivors = []
        rejected = 0
        for token, similarity in neighbors:
            text = display_form(token)
            if is_excluded(qp.display, text, reverse=exclude_reverse):
                rejected += 1
            else:
                survivors.append((text, similarity))
        if len(survivors) >= k or want >= limit:
            break
        want = k + rejected
    return ReplacementSet(candidate=qp, replacements=tuple(survivors[:k]))


def substitute(sentence: Sentence, qp: QualityPhrase, replacement: str) -> str:
    """Rebuild the sentence text with one token replaced.

    Only the occurrence at the candidate's recorded position changes;
    all other tokens render with phrase joiners as spaces. A bad
    position means the pipeline mishandled its bookkeeping.
    """
    if not 0 <= qp.sentence_position < len(sentence.tokens):
        raise IndexError(
            f"candidate position {qp.sentence_position} out of range "
            f"for sentence of {len(sentence.tokens)} tokens"
        )
    parts = [display_form(t) for t in sentence.tokens]
    parts[qp.sentence_position] = replacement
    return " ".join(parts)
