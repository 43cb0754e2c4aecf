"""Skip-gram word embeddings with negative sampling, trained by SGD.

Vocabulary order (count-descending, then lexicographic) and a single
seeded generator make single-worker training fully deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .corpus import Sentence
from .errors import CorpusError, NotInVocabulary, TrainingError


@dataclass
class TrainConfig:
    dim: int = 100
    window: int = 5
    epochs: int = 5
    negative_samples: int = 5
    min_count: int = 5
    subsample_threshold: float = 1e-3
    initial_lr: float = 0.025
    final_lr: float = 1e-4
    rng_seed: int = 1

    def __post_init__(self) -> None:
        if self.dim < 1:
            raise ValueError(f"dim must be >= 1, got {self.dim}")
        if self.window < 1:
            raise ValueError(f"window must be >= 1, got {self.window}")
        if not 0 < self.final_lr <= self.initial_lr:
            raise ValueError(
                f"need 0 < final_lr <= initial_lr, got {self.final_lr} / {self.initial_lr}"
            )


def _sigmoid(x: np.ndarray) -> np.ndarray:
    out = np.empty_like(x, dtype=np.float64)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out


def _log_sigmoid(x: np.ndarray) -> np.ndarray:
    out = np.empty_like(x, dtype=np.float64)
    pos = x >= 0
    out[pos] = -np.log1p(np.exp(-x[pos]))
    out[~pos] = x[~pos] - np.log1p(np.exp(x[~pos]))
    return out


def sgns_loss(v_in: np.ndarray, u_target: np.ndarray, u_negatives: np.ndarray) -> float:
    """Negative-sampling loss for one (context, target, negatives) step.

    -log s(v.u_t) - sum_k log s(-v.u_k), with s the logistic function.
    """
    pos = float(_log_sigmoid(np.atleast_1d(np.dot(v_in, u_target)))[0])
    neg = float(np.sum(_log_sigmoid(-(u_negatives @ v_in))))
    return -(pos + neg)


def sgns_grads(
    v_in: np.ndarray, u_target: np.ndarray, u_negatives: np.ndarray
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Analytic gradients of `sgns_loss` w.r.t. all three arguments."""
    f_pos = float(_sigmoid(np.atleast_1d(np.dot(v_in, u_target)))[0])
    f_neg = _sigmoid(u_negatives @ v_in)
    g_in = (f_pos - 1.0) * u_target + f_neg @ u_negatives
    g_target = (f_pos - 1.0) * v_in
    g_negatives = np.outer(f_neg, v_in)
    return g_in, g_target, g_negatives


class EmbeddingModel:
    """Vocabulary plus one dense vector per token, with cosine queries."""

    def __init__(self, vocab: dict[str, int], vectors: np.ndarray, trained: bool = True):
        if vectors.ndim != 2 or vectors.shape[0] != len(vocab):
            raise ValueError("vectors must be a |vocab| x dim matrix")
        self.vocab = vocab
        self.vectors = vectors
        self.dim = int(vectors.shape[1])
        self.trained_flag = trained
        self.index_to_token = [""] * len(vocab)
        for token, idx in vocab.items():
            self.index_to_token[idx] = token
        self._unit: np.ndarray | None = None

    def __contains__(self, token: str) -> bool:
        return token in self.vocab

    def __len__(self) -> int:
        return len(self.vocab)

    def _unit_vectors(self) -> np.ndarray:
        if self._unit is None:
            norms = np.linalg.norm(self.vectors, axis=1, keepdims=True)
            norms[norms == 0] = 1.0
            self._unit = self.vectors / norms
        return self._unit

    def vector(self, token: str) -> np.ndarray:
        try:
            return self.vectors[self.vocab[token]]
        except KeyError:
            raise NotInVocabulary(token) from None

    def cosine(self, a: str, b: str) -> float:
        unit = self._unit_vectors()
        try:
            ia, ib = self.vocab[a], self.vocab[b]
        except KeyError as exc:
            raise NotInVocabulary(exc.args[0]) from None
        return float(np.dot(unit[ia], unit[ib]))

    def most_similar(self, token: str, k: int) -> list[tuple[str, float]]:
        """The k nearest tokens by cosine, excluding `token` itself.

        Ties broken lexicographically so results are reproducible.
        """
        if k < 1:
            raise ValueError(f"k must be >= 1, got {k}")
        try:
            idx = self.vocab[token]
        except KeyError:
            raise NotInVocabulary(token) from None
        unit = self._unit_vectors()
        scores = unit @ unit[idx]
        order = sorted(
            (i for i in range(len(self.index_to_token)) if i != idx),
            key=lambda i: (-scores[i], self.index_to_token[i]),
        )
        return [(self.index_to_token[i], float(scores[i])) for i in order[:k]]

    def save(self, path: str) -> None:
        """Write "count dim" header then one "token v1 .. vdim" line per word."""
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(f"{len(self.vocab)} {self.dim}\n")
            for idx, token in enumerate(self.index_to_token):
                values = " ".join(repr(float(x)) for x in self.vectors[idx])
                fh.write(f"{token} {values}\n")

    @classmethod
    def load(cls, path: str) -> "EmbeddingModel":
        try:
            fh = open(path, encoding="utf-8")
        except OSError as exc:
            raise CorpusError(f"cannot read embeddings {path}: {exc}") from exc
        with fh:
            header = fh.readline().split()
            if len(header) != 2:
                raise CorpusError(f"{path}:1: expected 'count dim' header")
            try:
                count, dim = int(header[0]), int(header[1])
            except ValueError as exc:
                raise CorpusError(f"{path}:1: expected 'count dim' header") from exc
            vocab: dict[str, int] = {}
            vectors = np.empty((count, dim), dtype=np.float64)
            lineno = 1
            for lineno, line in enumerate(fh, start=2):
                idx = lineno - 2
                if idx >= count:
                    raise CorpusError(f"{path}:{lineno}: more rows than header declares")
                parts = line.rstrip("\n").split(" ")
                if len(parts) != dim + 1:
                    raise CorpusError(
                        f"{path}:{lineno}: expected {dim + 1} fields, got {len(parts)}"
                    )
                token = parts[0]
                if token in vocab:
                    raise CorpusError(f"{path}:{lineno}: duplicate token {token!r}")
                try:
                    vectors[idx] = [float(x) for x in parts[1:]]
                except ValueError as exc:
                    raise CorpusError(f"{path}:{lineno}: malformed vector value") from exc
                vocab[token] = idx
            if len(vocab) != count:
                raise CorpusError(
                    f"{path}:{lineno}: header declares {count} rows, found {len(vocab)}"
                )
        return cls(vocab=vocab, vectors=vectors, trained=True)


def _build_vocab(
    corpus: Iterable[Sentence], min_count: int
) -> tuple[dict[str, int], np.ndarray, int]:
    counts: dict[str, int] = {}
    for sentence in corpus:
        for token in sentence.tokens:
            counts[token] = counts.get(token, 0) + 1
    kept = sorted(
        ((t, c) for t, c in counts.items() if c >= min_count),
        key=lambda item: (-item[1], item[0]),
    )
    vocab = {token: idx for idx, (token, _) in enumerate(kept)}
    freq = np.array([c for _, c in kept], dtype=np.float64)
    total_in_vocab = int(freq.sum())
    return vocab, freq, total_in_vocab


def train(corpus: Iterable[Sentence], cfg: TrainConfig) -> EmbeddingModel:
    """Train skip-gram vectors over a re-iterable corpus.

    The input corpus is iterated once to build the vocabulary and then
    once per epoch, so it must be a restartable iterable (a list or a
    corpus view, not a bare generator).
    """
    vocab, freq, total_in_vocab = _build_vocab(corpus, cfg.min_count)
    if not vocab:
        raise TrainingError(
            f"empty vocabulary: no token reaches min_count={cfg.min_count}"
        )
    rng = np.random.default_rng(cfg.rng_seed)
    n = len(vocab)
    vec_in = rng.uniform(-0.5 / cfg.dim, 0.5 / cfg.dim, size=(n, cfg.dim))
    vec_out = np.zeros((n, cfg.dim), dtype=np.float64)

    # Noise distribution for negatives: unigram counts ^ 0.75.
    cum_noise = np.cumsum(freq**0.75)
    noise_total = cum_noise[-1]

    if cfg.subsample_threshold > 0:
        ratio = (cfg.subsample_threshold * total_in_vocab) / freq
        keep_prob = np.minimum(1.0, np.sqrt(ratio) + ratio)
    else:
        keep_prob = np.ones(n)

    negatives = cfg.negative_samples
    total_scheduled = max(1, cfg.epochs * total_in_vocab)
    lr_span = cfg.initial_lr - cfg.final_lr
    processed = 0

    for _ in range(cfg.epochs):
        for sentence in corpus:
            ids = [vocab[t] for t in sentence.tokens if t in vocab]
            processed += len(ids)
            alpha = cfg.initial_lr - lr_span * min(1.0, processed / total_scheduled)
            alpha = max(alpha, cfg.final_lr)
            kept = [i for i in ids if keep_prob[i] >= 1.0 or rng.random() < keep_prob[i]]
            for pos, center in enumerate(kept):
                span = int(rng.integers(1, cfg.window + 1))
                start = max(0, pos - span)
                for ctx_pos in range(start, min(len(kept), pos + span + 1)):
                    if ctx_pos == pos:
                        continue
                    ctx = kept[ctx_pos]
                    # Draws equal to the center are dropped, not redrawn:
                    # redrawing never terminates on a one-word vocabulary.
                    neg_ids = [
                        draw
                        for draw in (
                            int(np.searchsorted(cum_noise, rng.random() * noise_total))
                            for _ in range(negatives)
                        )
                        if draw != center
                    ]
                    g_in, g_target, g_negs = sgns_grads(
                        vec_in[ctx], vec_out[center], vec_out[neg_ids]
                    )
                    vec_in[ctx] -= alpha * g_in
                    vec_out[center] -= alpha * g_target
                    np.add.at(vec_out, neg_ids, -alpha * g_negs)

    if not np.all(np.isfinite(vec_in)):
        raise TrainingError("training diverged: non-finite vector entries")
    return EmbeddingModel(vocab=vocab, vectors=vec_in, trained=True)
