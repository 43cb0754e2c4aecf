"""Text ingestion and normalization.

Everything downstream works on lowercase whitespace-free tokens. The
underscore is reserved as the phrase joiner, so it never survives
tokenization; intra-word hyphens and apostrophes do (tokens like
"pro-life" and "don't" stay whole).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from importlib import resources
from typing import Iterable, Iterator

from .errors import CorpusError

PHRASE_JOINER = "_"

# Word runs of letters/digits, optionally chained by internal hyphens or
# apostrophes. Underscore is excluded everywhere.
_TOKEN_RE = re.compile(r"[^\W_]+(?:['’-][^\W_]+)*")


def display_form(token: str) -> str:
    """Human-readable form of a token: phrase joiners become spaces."""
    return token.replace(PHRASE_JOINER, " ")


@dataclass(frozen=True)
class Sentence:
    """An ordered token sequence plus the string it came from."""

    tokens: tuple[str, ...]
    raw: str

    def display_text(self) -> str:
        """Normalized text with phrase joiners rendered as spaces."""
        return " ".join(display_form(t) for t in self.tokens)

    def __len__(self) -> int:
        return len(self.tokens)


@dataclass(frozen=True)
class AnnotatedSentence:
    sentence: Sentence
    target_pet: str


def tokenize(raw: str) -> Sentence:
    """Lowercase `raw`, strip punctuation, and split into tokens.

    Underscores in the input are treated as spaces so that raw text can
    never collide with the phrase joiner. Empty input yields an empty
    sentence.
    """
    lowered = raw.lower().replace(PHRASE_JOINER, " ")
    return Sentence(tokens=tuple(_TOKEN_RE.findall(lowered)), raw=raw)


@dataclass(frozen=True)
class StopwordList:
    words: frozenset[str] = field(default_factory=frozenset)

    def __contains__(self, token: str) -> bool:
        return token in self.words

    def covers(self, token: str) -> bool:
        """True if every component word of `token` is a stopword.

        A merged phrase token is only considered covered when all of its
        underscore-separated parts are stopwords; "can_not" survives a
        list that lacks either word.
        """
        return all(part in self.words for part in token.split(PHRASE_JOINER))

    @classmethod
    def from_words(cls, words: Iterable[str]) -> "StopwordList":
        return cls(words=frozenset(w.lower() for w in words))

    @classmethod
    def load(cls, path: str) -> "StopwordList":
        words = []
        try:
            with open(path, encoding="utf-8") as fh:
                for line in fh:
                    word = line.strip().lower()
                    if word and not word.startswith("#"):
                        words.append(word)
        except OSError as exc:
            raise CorpusError(f"cannot read stopword list {path}: {exc}") from exc
        return cls.from_words(words)

    @classmethod
    def default(cls) -> "StopwordList":
        text = resources.files("petdetect.data").joinpath("stopwords.txt").read_text("utf-8")
        words = [w.strip() for w in text.splitlines()]
        return cls.from_words(w for w in words if w and not w.startswith("#"))


def remove_stopwords(tokens: Iterable[str], stop: StopwordList) -> list[str]:
    """Drop tokens fully covered by the stopword list, preserving order."""
    return [t for t in tokens if not stop.covers(t)]


def load_corpus(path: str) -> Iterator[Sentence]:
    """Stream sentences from a one-sentence-per-line UTF-8 file.

    Blank lines are skipped. Decoding problems are reported with the
    offending line number.
    """
    try:
        fh = open(path, "rb")
    except OSError as exc:
        raise CorpusError(f"cannot read corpus {path}: {exc}") from exc
    with fh:
        for lineno, raw_line in enumerate(fh, start=1):
            try:
                text = raw_line.decode("utf-8")
            except UnicodeDecodeError as exc:
                raise CorpusError(f"{path}:{lineno}: invalid UTF-8") from exc
            if text.strip():
                yield tokenize(text.strip())


class FileCorpus:
    """Re-iterable view over a corpus file, for multi-pass training."""

    def __init__(self, path: str):
        self.path = path

    def __iter__(self) -> Iterator[Sentence]:
        return load_corpus(self.path)


_ANNOTATED_HEADER = "sentence\ttarget"


def load_annotated(path: str) -> list[AnnotatedSentence]:
    """Load a two-column TSV of (sentence, target term) rows.

    A literal "sentence<TAB>target" header row is optional. Targets are
    lowercased; rows without exactly two non-empty columns are rejected
    with their line number.
    """
    try:
        fh = open(path, "rb")
    except OSError as exc:
        raise CorpusError(f"cannot read annotated corpus {path}: {exc}") from exc
    rows: list[AnnotatedSentence] = []
    with fh:
        for lineno, raw_line in enumerate(fh, start=1):
            try:
                line = raw_line.decode("utf-8")
            except UnicodeDecodeError as exc:
                raise CorpusError(f"{path}:{lineno}: invalid UTF-8") from exc
            line = line.rstrip("\n").rstrip("\r")
            if not line.strip():
                continue
            if lineno == 1 and line.strip().lower() == _ANNOTATED_HEADER:
                continue
            cols = line.split("\t")
            if len(cols) != 2:
                raise CorpusError(
                    f"{path}:{lineno}: expected 2 tab-separated columns, got {len(cols)}"
                )
            text, target = cols[0].strip(), cols[1].strip().lower()
            if not target:
                raise CorpusError(f"{path}:{lineno}: empty target term")
            rows.append(AnnotatedSentence(sentence=tokenize(text), target_pet=target))
    return rows
