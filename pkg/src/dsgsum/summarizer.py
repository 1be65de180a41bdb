"""Extractive summarization by sentence-level generative scoring.

Each sentence is treated as a generator of its document: either through its
own unigram distribution, through a translation layer that lets a sentence
word produce semantically related document words, or through cosine
similarity of mean embeddings. A greedy pass then admits the best-scoring
sentences, vetoing candidates too similar to anything already selected,
until a length budget is exhausted.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Callable, Mapping, Sequence

import numpy as np

from .baselines import DenseEmbedding, cosine, mean_embedding
from .corpus import Document, Sentence
from .dsg import DsgModel, translation_distribution
from .errors import ValidationError

PROB_FLOOR = 1e-300

SCORERS = ("tblm", "cosine", "ulm")
BUDGET_UNITS = ("words", "sentences")

# Redundancy-threshold defaults when the config leaves it unset.
DEFAULT_THRESHOLDS = {"tblm": 0.5, "ulm": 0.5, "cosine": 0.6}


@dataclass(frozen=True)
class SentenceLM:
    """Maximum-likelihood unigram distribution over a sentence's words."""

    probs: dict[int, float]


@dataclass(frozen=True)
class IdentityTranslation:
    """Translation table that maps every word only to itself."""

    V: int

    def translation_distribution(self, word_id: int) -> np.ndarray:
        if not 0 <= word_id < self.V:
            raise ValidationError(f"word id {word_id} out of range for V={self.V}")
        vec = np.zeros(self.V)
        vec[word_id] = 1.0
        return vec


def ulm(sentence: Sentence) -> SentenceLM:
    """Relative frequencies of the sentence's in-vocabulary tokens."""
    tokens = sentence.in_vocab_tokens()
    if not tokens:
        raise ValidationError("sentence has no in-vocabulary tokens")
    counts = Counter(tokens)
    total = len(tokens)
    return SentenceLM({w: c / total for w, c in counts.items()})


def word_bag(sentences: Sequence[Sentence]) -> dict[int, int]:
    """In-vocabulary token counts pooled over sentences."""
    bag: Counter[int] = Counter()
    for s in sentences:
        bag.update(s.in_vocab_tokens())
    return dict(bag)


def _check_mixture_args(bag: Mapping[int, int], lam: float, background) -> None:
    if not bag:
        raise ValidationError("document bag is empty")
    if not 0.0 <= lam <= 1.0:
        raise ValidationError("smoothing lambda must be in [0, 1]")
    if lam > 0.0 and background is None:
        raise ValidationError("smoothing requires a background distribution")


def _translation_row(translation: DsgModel | IdentityTranslation, word_id: int) -> np.ndarray:
    if isinstance(translation, DsgModel):
        return translation_distribution(translation, word_id)
    return translation.translation_distribution(word_id)


def ulm_log_prob(
    bag: Mapping[int, int],
    sentence: Sentence,
    lam: float = 0.0,
    background: np.ndarray | None = None,
) -> float:
    """Log probability of generating the bag straight from the sentence unigrams."""
    _check_mixture_args(bag, lam, background)
    lm = ulm(sentence)
    total = 0.0
    for j, n in bag.items():
        p = (1.0 - lam) * lm.probs.get(j, 0.0)
        if lam > 0.0:
            p += lam * background[j]
        total += n * math.log(max(p, PROB_FLOOR))
    return total


def tblm_log_prob(
    bag: Mapping[int, int],
    sentence: Sentence,
    translation: DsgModel | IdentityTranslation,
    lam: float = 0.0,
    background: np.ndarray | None = None,
) -> float:
    """Log probability of the bag under translation from the sentence.

    Each document word draws probability sum_i P(word | w_i) * P(w_i | S)
    over the sentence's words, so a sentence scores on semantically related
    document words rather than exact matches only. The mixture is floored
    before the log; with lam > 0 a background unigram is interpolated in.
    """
    _check_mixture_args(bag, lam, background)
    lm = ulm(sentence)
    mix = np.zeros(translation.V)
    for i, p_i in lm.probs.items():
        mix += p_i * _translation_row(translation, i)
    total = 0.0
    for j, n in bag.items():
        p = (1.0 - lam) * mix[j]
        if lam > 0.0:
            p += lam * background[j]
        total += n * math.log(max(p, PROB_FLOOR))
    return total


def cosine_score(document: Document, sentence: Sentence, source) -> float:
    """Cosine between the document's and the sentence's mean embedding."""
    doc_tokens = [t for s in document.sentences for t in s.in_vocab_tokens()]
    return cosine(
        mean_embedding(source, doc_tokens),
        mean_embedding(source, sentence.in_vocab_tokens()),
    )


@dataclass(frozen=True)
class SummaryConfig:
    ratio: float = 0.10
    budget_unit: str = "words"
    redundancy_threshold: float | None = None
    scorer: str = "tblm"
    smoothing_lambda: float = 0.0
    normalize_scores: bool = False

    def validate(self) -> None:
        if not 0.0 < self.ratio <= 1.0:
            raise ValidationError("ratio must be in (0, 1]")
        if self.budget_unit not in BUDGET_UNITS:
            raise ValidationError(f"unknown budget unit {self.budget_unit!r}")
        if self.scorer not in SCORERS:
            raise ValidationError(f"unknown scorer {self.scorer!r}")
        if not 0.0 <= self.smoothing_lambda <= 1.0:
            raise ValidationError("smoothing lambda must be in [0, 1]")

    def resolved_threshold(self) -> float:
        if self.redundancy_threshold is not None:
            return self.redundancy_threshold
        return DEFAULT_THRESHOLDS[self.scorer]


@dataclass(frozen=True)
class SummaryResult:
    selected: tuple[tuple[int, float], ...]  # (sentence index, score), document order
    budget_used: int
    budget_limit: int


def greedy_select(
    ranked: Sequence[tuple[int, float]],
    costs: Mapping[int, int],
    budget_limit: int,
    redundancy: Callable[[int, int], float],
    threshold: float,
) -> list[int]:
    """Admit candidates in rank order under a redundancy veto and budget stop.

    A candidate is skipped if its redundancy against any admitted sentence
    exceeds the threshold; otherwise the pass stops as soon as admitting it
    would exceed the budget. The first admission always goes through, even
    if it alone exceeds the budget.
    """
    selected: list[int] = []
    used = 0
    for idx, _ in ranked:
        if selected:
            if any(redundancy(idx, prev) > threshold for prev in selected):
                continue
            if used + costs[idx] > budget_limit:
                break
        selected.append(idx)
        used += costs[idx]
    return selected


def select_summary(
    document: Document,
    config: SummaryConfig,
    model: DsgModel | None = None,
    embedding: DenseEmbedding | None = None,
    background: np.ndarray | None = None,
) -> SummaryResult:
    """Score every sentence against its document and pick a summary greedily.

    Ranking is by descending score with ties broken toward earlier sentences.
    Redundancy between two sentences is the per-word geometric mean of the
    generative probability of one given the other for the language-model
    scorers, and plain cosine of mean embeddings for the cosine scorer.
    """
    config.validate()
    lam = config.smoothing_lambda
    sentences = document.sentences

    if config.scorer == "cosine":
        source = embedding if embedding is not None else model
        if source is None:
            raise ValidationError("cosine scorer needs an embedding or a model")
        candidates = list(range(len(sentences)))
        relevance = {i: cosine_score(document, sentences[i], source) for i in candidates}
        sent_means = {i: mean_embedding(source, sentences[i].in_vocab_tokens()) for i in candidates}

        def redundancy(a: int, b: int) -> float:
            return cosine(sent_means[a], sent_means[b])

    else:
        if config.scorer == "tblm":
            if model is None:
                raise ValidationError("tblm scorer needs a trained model")
            translation = model
        else:
            translation = None
        candidates = [i for i, s in enumerate(sentences) if s.length > 0]
        if not candidates:
            raise ValidationError("no scorable sentence")
        doc_bag = word_bag(sentences)
        bags = {i: word_bag([sentences[i]]) for i in candidates}

        def log_score(bag: Mapping[int, int], target: Sentence) -> float:
            if translation is None:
                return ulm_log_prob(bag, target, lam, background)
            return tblm_log_prob(bag, target, translation, lam, background)

        relevance = {i: log_score(doc_bag, sentences[i]) for i in candidates}
        if config.normalize_scores:
            relevance = {i: v / sentences[i].length for i, v in relevance.items()}

        def redundancy(a: int, b: int) -> float:
            ll = log_score(bags[a], sentences[b])
            return math.exp(ll / sentences[a].length)

    if not candidates:
        raise ValidationError("no scorable sentence")

    ranked = sorted(((i, relevance[i]) for i in candidates), key=lambda t: (-t[1], t[0]))
    if config.budget_unit == "words":
        total = document.word_count()
        costs = {i: sentences[i].length for i in candidates}
    else:
        total = len(sentences)
        costs = {i: 1 for i in candidates}
    budget_limit = math.ceil(config.ratio * total)

    chosen = greedy_select(ranked, costs, budget_limit, redundancy, config.resolved_threshold())
    chosen.sort()
    return SummaryResult(
        selected=tuple((i, relevance[i]) for i in chosen),
        budget_used=sum(costs[i] for i in chosen),
        budget_limit=budget_limit,
    )
