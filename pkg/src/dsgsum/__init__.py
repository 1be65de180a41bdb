"""Aspect-model word embeddings trained by EM, with translation-based
sentence scoring for extractive summarization."""

from .baselines import DenseEmbedding, GloveConfig, cosine, mean_embedding, train_glove, train_sg
from .corpus import (
    CooccurrenceTable,
    Document,
    Sentence,
    TokenizeConfig,
    Vocabulary,
    build_vocab,
    count_cooccurrences,
    read_corpus,
    tokenize,
)
from .dsg import DsgModel, TrainReport, train, translation_distribution
from .errors import FileFormatError, ValidationError
from .rouge import RougeScore, lcs_length, rouge_l, rouge_n
from .summarizer import SummaryConfig, SummaryResult, select_summary, tblm_log_prob, ulm_log_prob

__version__ = "0.1.0"

__all__ = [
    "CooccurrenceTable",
    "DenseEmbedding",
    "Document",
    "DsgModel",
    "FileFormatError",
    "GloveConfig",
    "RougeScore",
    "Sentence",
    "SummaryConfig",
    "SummaryResult",
    "TokenizeConfig",
    "TrainReport",
    "ValidationError",
    "Vocabulary",
    "build_vocab",
    "cosine",
    "count_cooccurrences",
    "lcs_length",
    "mean_embedding",
    "read_corpus",
    "rouge_l",
    "rouge_n",
    "select_summary",
    "tblm_log_prob",
    "tokenize",
    "train",
    "train_glove",
    "train_sg",
    "translation_distribution",
    "ulm_log_prob",
]
