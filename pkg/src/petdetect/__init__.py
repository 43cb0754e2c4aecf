"""Detection of potentially euphemistic terms in sentences.

Pipeline: extract collocated phrases, keep those close to sensitive
topics in embedding space, substitute distributional neighbors, and rank
candidates by the sentiment/offensiveness shift the substitutions cause.
"""

from .corpus import Sentence, StopwordList, tokenize
from .embedding import EmbeddingModel, TrainConfig
from .errors import (
    CorpusError,
    NotInVocabulary,
    PetDetectError,
    ProtocolError,
    ScorerUnavailable,
    TrainingError,
)
from .pipeline import (
    EvalReport,
    ModelBundle,
    Pipeline,
    PipelineConfig,
    StageReport,
    evaluate,
    train_models,
)
from .ranking import DetectionResult, ShiftVector, Weights
from .sentiment import Scorer, SentimentLexicon, SentimentVector

__version__ = "0.1.0"

__all__ = [
    "CorpusError",
    "DetectionResult",
    "EmbeddingModel",
    "EvalReport",
    "ModelBundle",
    "NotInVocabulary",
    "PetDetectError",
    "Pipeline",
    "PipelineConfig",
    "ProtocolError",
    "Scorer",
    "ScorerUnavailable",
    "Sentence",
    "SentimentLexicon",
    "SentimentVector",
    "ShiftVector",
    "StageReport",
    "StopwordList",
    "TrainConfig",
    "TrainingError",
    "Weights",
    "evaluate",
    "tokenize",
    "train_models",
    "__version__",
]
