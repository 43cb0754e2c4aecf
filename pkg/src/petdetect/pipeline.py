"""End-to-end orchestration: train models, detect terms, evaluate corpora.

Holds the run configuration (with every stage's constants), the trained
model bundle, and the stage/evaluation reports produced over an
annotated corpus.
"""

from __future__ import annotations

import dataclasses
import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable

from . import collocation, embedding, paraphrase, ranking, topics
from .corpus import AnnotatedSentence, Sentence, StopwordList, display_form, tokenize
from .embedding import EmbeddingModel, TrainConfig
from .errors import CorpusError, TrainingError
from .paraphrase import ReplacementSet
from .ranking import DetectionResult, Weights
from .sentiment import Scorer, SentimentLexicon
from .topics import QualityPhrase, TopicLexicon


@dataclass
class PipelineConfig:
    """All tunables in one serializable bag.

    `rng_seed` is the master seed: training copies it into the embedding
    config so one flag controls the whole run.
    """

    phraser_min_count: int = 5
    phraser_threshold: float = 10.0
    embedding: TrainConfig = field(default_factory=TrainConfig)
    stopword_path: str | None = None
    topic_lexicon_path: str | None = None
    sentiment_lexicon_path: str | None = None
    quality_threshold: float = 1.5
    k_neighbors: int = 25
    weights: Weights = field(default_factory=Weights)
    aggregator: str = "sum"
    scorer: str = "lexicon"
    endpoint: str = "http://localhost:8571"
    top_n: int = 2
    rng_seed: int = 1
    exclude_reverse_substring: bool = True

    def __post_init__(self) -> None:
        if self.aggregator not in ranking.AGGREGATORS:
            raise ValueError(f"aggregator must be one of {ranking.AGGREGATORS}")
        if self.scorer not in ("lexicon", "remote"):
            raise ValueError("scorer must be 'lexicon' or 'remote'")
        if self.top_n < 1:
            raise ValueError("top_n must be >= 1")

    def to_dict(self) -> dict:
        data = dataclasses.asdict(self)
        return data

    @classmethod
    def from_dict(cls, data: dict) -> "PipelineConfig":
        data = dict(data)
        if "embedding" in data and isinstance(data["embedding"], dict):
            data["embedding"] = TrainConfig(**data["embedding"])
        if "weights" in data and isinstance(data["weights"], dict):
            data["weights"] = Weights(**data["weights"])
        return cls(**data)

    def save(self, path: str) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_dict(), fh, indent=2, sort_keys=True)
            fh.write("\n")

    @classmethod
    def load(cls, path: str) -> "PipelineConfig":
        try:
            with open(path, encoding="utf-8") as fh:
                data = json.load(fh)
        except OSError as exc:
            raise CorpusError(f"cannot read config {path}: {exc}") from exc
        except ValueError as exc:
            raise CorpusError(f"malformed config {path}: {exc}") from exc
        return cls.from_dict(data)


PHRASER_FIRST = "phraser1.tsv"
PHRASER_SECOND = "phraser2.tsv"
EMBEDDINGS = "embeddings.txt"
CONFIG_SNAPSHOT = "config.json"


@dataclass
class ModelBundle:
    phraser_first: collocation.PhraserModel
    phraser_second: collocation.PhraserModel
    embedding: EmbeddingModel

    def save(self, models_dir: str) -> None:
        os.makedirs(models_dir, exist_ok=True)
        self.phraser_first.save(os.path.join(models_dir, PHRASER_FIRST))
        self.phraser_second.save(os.path.join(models_dir, PHRASER_SECOND))
        self.embedding.save(os.path.join(models_dir, EMBEDDINGS))

    @classmethod
    def load(cls, models_dir: str) -> "ModelBundle":
        return cls(
            phraser_first=collocation.PhraserModel.load(
                os.path.join(models_dir, PHRASER_FIRST)
            ),
            phraser_second=collocation.PhraserModel.load(
                os.path.join(models_dir, PHRASER_SECOND)
            ),
            embedding=EmbeddingModel.load(os.path.join(models_dir, EMBEDDINGS)),
        )


def train_models(corpus: Iterable[Sentence], config: PipelineConfig) -> ModelBundle:
    """Two collocation passes, then embeddings over the rewritten corpus."""
    first, second = collocation.train_two_pass(
        corpus, config.phraser_min_count, config.phraser_threshold
    )
    phrased = collocation.PhrasedCorpus(corpus, first, second)
    train_cfg = dataclasses.replace(config.embedding, rng_seed=config.rng_seed)
    try:
        model = embedding.train(phrased, train_cfg)
    except TrainingError as exc:
        raise TrainingError(f"embedding stage failed: {exc}") from exc
    return ModelBundle(phraser_first=first, phraser_second=second, embedding=model)


def build_scorer(config: PipelineConfig) -> Scorer:
    if config.scorer == "remote":
        return Scorer.from_remote(config.endpoint)
    if config.sentiment_lexicon_path:
        lexicon = SentimentLexicon.load(config.sentiment_lexicon_path)
    else:
        lexicon = SentimentLexicon.default()
    return Scorer.from_lexicon(lexicon)


@dataclass(frozen=True)
class SentenceDetection:
    """Everything the pipeline derived from one input sentence."""

    raw: str
    merged: Sentence
    quality: tuple[QualityPhrase, ...]
    replacement_sets: tuple[ReplacementSet, ...]
    result: DetectionResult

    def to_dict(self, shift_report: bool = False) -> dict:
        data = {
            "sentence": self.raw,
            "extracted_phrases": list(self.merged.tokens),
            "quality_phrases": [qp.token for qp in self.quality],
            "ranked_phrases": [
                [rc.phrase.display, rc.aggregate] for rc in self.result.ranked
            ],
            "pets": [rc.phrase.display for rc in self.result.pets],
        }
        if shift_report:
            data["shift_report"] = [
                {
                    "candidate": rc.phrase.display,
                    "aggregate": rc.aggregate,
                    "replacements": [
                        {"text": text, "shift": sv.as_list()}
                        for text, sv in rc.per_replacement
                    ],
                }
                for rc in self.result.ranked
            ]
        return data


class Pipeline:
    """Detector bound to a trained model bundle and a scorer."""

    def __init__(
        self,
        bundle: ModelBundle,
        config: PipelineConfig,
        scorer: Scorer | None = None,
        stopwords: StopwordList | None = None,
        topic_lexicon: TopicLexicon | None = None,
    ):
        self.bundle = bundle
        self.config = config
        self.scorer = scorer or build_scorer(config)
        if stopwords is not None:
            self.stopwords = stopwords
        elif config.stopword_path:
            self.stopwords = StopwordList.load(config.stopword_path)
        else:
            self.stopwords = StopwordList.default()
        if topic_lexicon is not None:
            self.topic_lexicon = topic_lexicon
        elif config.topic_lexicon_path:
            self.topic_lexicon = TopicLexicon.load(config.topic_lexicon_path)
        else:
            self.topic_lexicon = TopicLexicon.default()

    def merge_phrases(self, sentence: Sentence) -> Sentence:
        return self.bundle.phraser_second.apply(self.bundle.phraser_first.apply(sentence))

    def detect_sentence(self, sentence: Sentence) -> SentenceDetection:
        merged = self.merge_phrases(sentence)
        quality = topics.filter_sentence(
            self.bundle.embedding,
            merged,
            self.topic_lexicon,
            self.stopwords,
            self.config.quality_threshold,
        )
        replacement_sets = [
            paraphrase.build_replacements(
                self.bundle.embedding,
                qp,
                self.config.k_neighbors,
                exclude_reverse=self.config.exclude_reverse_substring,
            )
            for qp in quality
        ]
        result = ranking.rank_sentence(
            self.scorer,
            merged,
            quality,
            replacement_sets,
            self.config.weights,
            aggregator=self.config.aggregator,
            top_n=self.config.top_n,
        )
        return SentenceDetection(
            raw=sentence.raw,
            merged=merged,
            quality=tuple(quality),
            replacement_sets=tuple(replacement_sets),
            result=result,
        )

    def detect(self, raw: str) -> SentenceDetection:
        return self.detect_sentence(tokenize(raw))

    def detect_many(
        self, sentences: Iterable[Sentence], max_workers: int | None = None
    ) -> list[SentenceDetection]:
        """Detect across sentences in parallel, results in input order."""
        sentences = list(sentences)
        if max_workers is None:
            max_workers = min(8, os.cpu_count() or 1)
        if max_workers <= 1 or len(sentences) <= 1:
            return [self.detect_sentence(s) for s in sentences]
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            return list(pool.map(self.detect_sentence, sentences))


@dataclass
class StageReport:
    """Candidate and target-retention counts per pipeline stage.

    Paraphrasing never prunes, so its row repeats the filtering row.
    """

    candidates_extraction: int = 0
    candidates_filtering: int = 0
    candidates_ranking: int = 0
    targets_extraction: int = 0
    targets_filtering: int = 0
    targets_ranking: int = 0

    @property
    def candidates_paraphrasing(self) -> int:
        return self.candidates_filtering

    @property
    def targets_paraphrasing(self) -> int:
        return self.targets_filtering

    def to_dict(self) -> dict:
        return {
            "extraction": {
                "candidates": self.candidates_extraction,
                "targets_retained": self.targets_extraction,
            },
            "filtering": {
                "candidates": self.candidates_filtering,
                "targets_retained": self.targets_filtering,
            },
            "paraphrasing": {
                "candidates": self.candidates_paraphrasing,
                "targets_retained": self.targets_paraphrasing,
            },
            "ranking": {
                "candidates": self.candidates_ranking,
                "targets_retained": self.targets_ranking,
            },
        }

    def rows(self) -> list[tuple[str, int, int]]:
        return [
            ("extraction", self.candidates_extraction, self.targets_extraction),
            ("filtering", self.candidates_filtering, self.targets_filtering),
            ("paraphrasing", self.candidates_paraphrasing, self.targets_paraphrasing),
            ("ranking", self.candidates_ranking, self.targets_ranking),
        ]


@dataclass
class EvalReport:
    n_sentences: int
    hits_rank1: int
    hits_rank2: int
    success_rate: float
    avg_candidates: float
    random_baseline: float
    top_n: int

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


def random_baseline(avg_candidates: float, top_n: int) -> float:
    """Chance of a random pick landing in the top slice: top_n * (1/avg)."""
    if avg_candidates <= 0:
        return 0.0
    return top_n * (1.0 / avg_candidates)


@dataclass(frozen=True)
class SentenceEvaluation:
    detection: SentenceDetection
    target: str
    target_rank: int | None
    retained_extraction: bool
    retained_filtering: bool
    retained_ranking: bool


def _matches(target: str, display: str, fuzzy: bool) -> bool:
    if target == display:
        return True
    return fuzzy and (target in display or display in target)


def _rank_of_target(result: DetectionResult, target: str, fuzzy: bool) -> int | None:
    for rank, rc in enumerate(result.ranked, start=1):
        if _matches(target, rc.phrase.display, fuzzy):
            return rank
    return None


@dataclass
class EvaluationOutcome:
    stage: StageReport
    report: EvalReport
    sentences: list[SentenceEvaluation]
    fuzzy_stage: StageReport | None = None
    fuzzy_report: EvalReport | None = None


def _evaluate_pass(
    detections: list[tuple[SentenceDetection, str]], top_n: int, fuzzy: bool
) -> tuple[StageReport, EvalReport, list[SentenceEvaluation]]:
    stage = StageReport()
    hits_rank1 = 0
    hits_rank2 = 0
    rows: list[SentenceEvaluation] = []
    for detection, target in detections:
        extracted_displays = [display_form(t) for t in detection.merged.tokens]
        quality_displays = [qp.display for qp in detection.quality]
        pet_displays = [rc.phrase.display for rc in detection.result.pets]

        stage.candidates_extraction += len(detection.merged.tokens)
        stage.candidates_filtering += len(detection.quality)
        stage.candidates_ranking += len(detection.result.pets)

        retained_extraction = any(_matches(target, d, fuzzy) for d in extracted_displays)
        retained_filtering = any(_matches(target, d, fuzzy) for d in quality_displays)
        retained_ranking = any(_matches(target, d, fuzzy) for d in pet_displays)
        stage.targets_extraction += retained_extraction
        stage.targets_filtering += retained_filtering
        stage.targets_ranking += retained_ranking

        rank = _rank_of_target(detection.result, target, fuzzy)
        if rank == 1:
            hits_rank1 += 1
        elif rank == 2:
            hits_rank2 += 1
        rows.append(
            SentenceEvaluation(
                detection=detection,
                target=target,
                target_rank=rank,
                retained_extraction=retained_extraction,
                retained_filtering=retained_filtering,
                retained_ranking=retained_ranking,
            )
        )
    n = len(detections)
    avg = stage.candidates_filtering / n if n else 0.0
    top_hits = sum(1 for row in rows if row.target_rank is not None and row.target_rank <= top_n)
    report = EvalReport(
        n_sentences=n,
        hits_rank1=hits_rank1,
        hits_rank2=hits_rank2,
        success_rate=top_hits / n if n else 0.0,
        avg_candidates=avg,
        random_baseline=random_baseline(avg, top_n),
        top_n=top_n,
    )
    return stage, report, rows


def evaluate(
    pipeline: Pipeline, annotated: list[AnnotatedSentence], fuzzy: bool = False
) -> EvaluationOutcome:
    """Run detection over an annotated corpus and tally retention/success.

    A target counts as retained at a stage when its space-joined form
    exactly equals some candidate's display string. With `fuzzy`, an
    extra analysis pass also accepts substring matches either way; the
    headline numbers stay exact-match.
    """
    results = pipeline.detect_many(row.sentence for row in annotated)
    detections = [
        (detection, row.target_pet) for detection, row in zip(results, annotated)
    ]
    top_n = pipeline.config.top_n
    stage, report, rows = _evaluate_pass(detections, top_n, fuzzy=False)
    outcome = EvaluationOutcome(stage=stage, report=report, sentences=rows)
    if fuzzy:
        fuzzy_stage, fuzzy_report, _ = _evaluate_pass(detections, top_n, fuzzy=True)
        outcome.fuzzy_stage = fuzzy_stage
        outcome.fuzzy_report = fuzzy_report
    return outcome
