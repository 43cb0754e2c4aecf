"""Five-score sentiment/offensiveness scoring behind a pluggable backend.

Scores form two probability simplexes: {negative, neutral, positive}
and {non-offensive, offensive}. The built-in lexicon scorer is fully
deterministic so the whole pipeline runs offline; the remote backend
speaks a small JSON-over-HTTP protocol to a model server.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from importlib import resources

import requests

from .corpus import tokenize
from .errors import CorpusError, ProtocolError, ScorerUnavailable

_SIMPLEX_TOL = 1e-6
_REMOTE_TOL = 1e-3


@dataclass(frozen=True)
class SentimentVector:
    neg: float
    neu: float
    pos: float
    non_off: float
    off: float

    def __post_init__(self) -> None:
        for name, value in self.__dict__.items():
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name}={value} outside [0, 1]")
        if abs(self.neg + self.neu + self.pos - 1.0) > _SIMPLEX_TOL:
            raise ValueError("sentiment triple does not sum to 1")
        if abs(self.non_off + self.off - 1.0) > _SIMPLEX_TOL:
            raise ValueError("offensiveness pair does not sum to 1")

    def as_list(self) -> list[float]:
        """Fixed score order: [negative, neutral, positive, non-offensive, offensive]."""
        return [self.neg, self.neu, self.pos, self.non_off, self.off]


NEUTRAL = SentimentVector(neg=0.0, neu=1.0, pos=0.0, non_off=1.0, off=0.0)


@dataclass
class SentimentLexicon:
    """Per-word valence in [-1, 1] and offensiveness in [0, 1]."""

    entries: dict[str, tuple[float, float]]

    def __post_init__(self) -> None:
        for word, (valence, offensiveness) in self.entries.items():
            if not -1.0 <= valence <= 1.0:
                raise ValueError(f"{word!r}: valence {valence} outside [-1, 1]")
            if not 0.0 <= offensiveness <= 1.0:
                raise ValueError(f"{word!r}: offensiveness {offensiveness} outside [0, 1]")

    @classmethod
    def load(cls, path: str) -> "SentimentLexicon":
        entries: dict[str, tuple[float, float]] = {}
        try:
            fh = open(path, encoding="utf-8")
        except OSError as exc:
            raise CorpusError(f"cannot read sentiment lexicon {path}: {exc}") from exc
        with fh:
            for lineno, line in enumerate(fh, start=1):
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                cols = line.split("\t")
                if len(cols) != 3:
                    raise CorpusError(
                        f"{path}:{lineno}: expected 'word<TAB>valence<TAB>offensiveness'"
                    )
                try:
                    entries[cols[0].lower()] = (float(cols[1]), float(cols[2]))
                except ValueError as exc:
                    raise CorpusError(f"{path}:{lineno}: malformed number") from exc
        return cls(entries=entries)

    @classmethod
    def default(cls) -> "SentimentLexicon":
        text = (
            resources.files("petdetect.data")
            .joinpath("sentiment_lexicon.tsv")
            .read_text("utf-8")
        )
        entries: dict[str, tuple[float, float]] = {}
        for line in text.splitlines():
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            word, valence, offensiveness = line.split("\t")
            entries[word] = (float(valence), float(offensiveness))
        return cls(entries=entries)


def score_lexicon(lex: SentimentLexicon, text: str) -> SentimentVector:
    """Mean-based deterministic scoring.

    Texts with no lexicon words are perfectly neutral. Otherwise the
    mean valence v splits into pos=max(0,v), neg=max(0,-v), neu=1-|v|,
    and mean offensiveness fills the second simplex.
    """
    matched = [lex.entries[t] for t in tokenize(text).tokens if t in lex.entries]
    if not matched:
        return NEUTRAL
    valence = sum(v for v, _ in matched) / len(matched)
    offensiveness = sum(o for _, o in matched) / len(matched)
    return SentimentVector(
        neg=max(0.0, -valence),
        neu=1.0 - abs(valence),
        pos=max(0.0, valence),
        non_off=1.0 - offensiveness,
        off=offensiveness,
    )


def _normalize_simplex(values: list[float], what: str) -> list[float]:
    """Validate a near-simplex from the wire; renormalize tiny drift only."""
    if any(v < -_REMOTE_TOL or v > 1.0 + _REMOTE_TOL for v in values):
        raise ProtocolError(f"{what} component outside [0, 1]: {values}")
    total = sum(values)
    if abs(total - 1.0) > _REMOTE_TOL:
        raise ProtocolError(f"{what} sums to {total}, expected 1")
    clipped = [min(1.0, max(0.0, v)) for v in values]
    norm = sum(clipped)
    return [v / norm for v in clipped]


def parse_score_payload(payload: dict) -> SentimentVector:
    """Turn one wire-format result object into a validated vector."""
    try:
        sentiment = payload["sentiment"]
        offense = payload["offense"]
    except (TypeError, KeyError) as exc:
        raise ProtocolError(f"missing field in scorer response: {exc}") from exc
    if not isinstance(sentiment, list) or len(sentiment) != 3:
        raise ProtocolError(f"sentiment must be a 3-list, got {sentiment!r}")
    if not isinstance(offense, list) or len(offense) != 2:
        raise ProtocolError(f"offense must be a 2-list, got {offense!r}")
    try:
        sentiment = [float(v) for v in sentiment]
        offense = [float(v) for v in offense]
    except (TypeError, ValueError) as exc:
        raise ProtocolError(f"non-numeric score in response: {exc}") from exc
    neg, neu, pos = _normalize_simplex(sentiment, "sentiment")
    non_off, off = _normalize_simplex(offense, "offense")
    return SentimentVector(neg=neg, neu=neu, pos=pos, non_off=non_off, off=off)


def score_remote(
    endpoint: str,
    text: str,
    timeout: float = 10.0,
    retries: int = 2,
    session: requests.Session | None = None,
) -> SentimentVector:
    """Score one text against a model server; retry transient failures.

    Connection problems and timeouts are retried up to `retries` extra
    attempts; anything wrong with the response itself is a protocol
    error and is not retried.
    """
    http = session or requests
    url = endpoint.rstrip("/") + "/score"
    last_exc: Exception | None = None
    for _ in range(retries + 1):
        try:
            response = http.post(url, json={"texts": [text]}, timeout=timeout)
        except (requests.ConnectionError, requests.Timeout) as exc:
            last_exc = exc
            continue
        if response.status_code != 200:
            raise ProtocolError(
                f"scorer returned HTTP {response.status_code}: {response.text[:200]}"
            )
        try:
            results = response.json()["results"]
        except (ValueError, KeyError) as exc:
            raise ProtocolError(f"malformed scorer response: {exc}") from exc
        if not isinstance(results, list) or len(results) != 1:
            raise ProtocolError(f"expected 1 result, got {len(results)!r}")
        return parse_score_payload(results[0])
    raise ScorerUnavailable(f"scorer at {endpoint} unreachable: {last_exc}")


def probe_health(
    endpoint: str, timeout: float = 5.0, session: requests.Session | None = None
) -> dict:
    """GET the scorer's health endpoint; returns its JSON body when ready."""
    http = session or requests
    url = endpoint.rstrip("/") + "/health"
    try:
        response = http.get(url, timeout=timeout)
    except (requests.ConnectionError, requests.Timeout) as exc:
        raise ScorerUnavailable(f"scorer at {endpoint} unreachable: {exc}") from exc
    if response.status_code != 200:
        raise ScorerUnavailable(
            f"scorer at {endpoint} not ready: HTTP {response.status_code}"
        )
    try:
        body = response.json()
    except ValueError:
        body = {}
    return body if isinstance(body, dict) else {}


class Scorer:
    """Dispatching scorer with a per-run memo cache.

    Exactly one backend is configured. The cache is keyed by the exact
    text and is safe to share across threads; `backend_calls` counts
    cache misses.
    """

    def __init__(
        self,
        kind: str,
        lexicon: SentimentLexicon | None = None,
        endpoint: str | None = None,
        timeout: float = 10.0,
        retries: int = 2,
    ):
        if kind == "lexicon":
            if lexicon is None or endpoint is not None:
                raise ValueError("lexicon scorer needs a lexicon and no endpoint")
        elif kind == "remote":
            if endpoint is None or lexicon is not None:
                raise ValueError("remote scorer needs an endpoint and no lexicon")
        else:
            raise ValueError(f"unknown scorer kind {kind!r}")
        self.kind = kind
        self.lexicon = lexicon
        self.endpoint = endpoint
        self.timeout = timeout
        self.retries = retries
        self.backend_calls = 0
        self._cache: dict[str, SentimentVector] = {}
        self._lock = threading.Lock()
        self._session = requests.Session() if kind == "remote" else None

    @classmethod
    def from_lexicon(cls, lexicon: SentimentLexicon) -> "Scorer":
        return cls(kind="lexicon", lexicon=lexicon)

    @classmethod
    def from_remote(cls, endpoint: str, timeout: float = 10.0, retries: int = 2) -> "Scorer":
        return cls(kind="remote", endpoint=endpoint, timeout=timeout, retries=retries)

    def _call_backend(self, text: str) -> SentimentVector:
        if self.kind == "lexicon":
            assert self.lexicon is not None
            return score_lexicon(self.lexicon, text)
        assert self.endpoint is not None
        return score_remote(
            self.endpoint,
            text,
            timeout=self.timeout,
            retries=self.retries,
            session=self._session,
        )

    def score(self, text: str) -> SentimentVector:
        with self._lock:
            cached = self._cache.get(text)
        if cached is not None:
            return cached
        result = self._call_backend(text)
        with self._lock:
            self._cache.setdefault(text, result)
            self.backend_calls += 1
        return result
