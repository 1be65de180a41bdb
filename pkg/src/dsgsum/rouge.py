"""Self-contained ROUGE-2 and ROUGE-L scoring against multiple references.

Scores operate on token sequences as-is (no stemming or stopword removal);
multi-reference aggregation takes the reference with the best F1.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Sequence

from .errors import ValidationError


@dataclass(frozen=True)
class RougeScore:
    precision: float
    recall: float
    f1: float


def _f1(p: float, r: float) -> float:
    return 2.0 * p * r / (p + r) if p + r > 0 else 0.0


def _ngram_counts(tokens: Sequence[str], n: int) -> Counter:
    return Counter(tuple(tokens[k : k + n]) for k in range(len(tokens) - n + 1))


def _best(scores: list[RougeScore]) -> RougeScore:
    best = scores[0]
    for s in scores[1:]:
        if s.f1 > best.f1:
            best = s
    return best


def rouge_n(
    candidate: Sequence[str], references: Sequence[Sequence[str]], n: int = 2
) -> RougeScore:
    """Clipped n-gram overlap F-score, maximized over references."""
    if n < 1:
        raise ValidationError("n must be >= 1")
    if not references:
        raise ValidationError("at least one reference is required")
    cand = _ngram_counts(candidate, n)
    cand_total = sum(cand.values())
    scores = []
    for ref_tokens in references:
        ref = _ngram_counts(ref_tokens, n)
        ref_total = sum(ref.values())
        if cand_total == 0 or ref_total == 0:
            scores.append(RougeScore(0.0, 0.0, 0.0))
            continue
        overlap = sum(min(c, ref[g]) for g, c in cand.items())
        p = overlap / cand_total
        r = overlap / ref_total
        scores.append(RougeScore(p, r, _f1(p, r)))
    return _best(scores)


def lcs_length(a: Sequence[str], b: Sequence[str]) -> int:
    """Longest common subsequence length, standard rolling-row dynamic program."""
    if not a or not b:
        return 0
    if len(b) > len(a):
        a, b = b, a
    prev = [0] * (len(b) + 1)
    for x in a:
        curr = [0] * (len(b) + 1)
        for k, y in enumerate(b, start=1):
            curr[k] = prev[k - 1] + 1 if x == y else max(prev[k], curr[k - 1])
        prev = curr
    return prev[-1]


def rouge_l(candidate: Sequence[str], references: Sequence[Sequence[str]]) -> RougeScore:
    """LCS-based F-score, maximized over references."""
    if not references:
        raise ValidationError("at least one reference is required")
    scores = []
    for ref_tokens in references:
        if not candidate or not ref_tokens:
            scores.append(RougeScore(0.0, 0.0, 0.0))
            continue
        lcs = lcs_length(candidate, ref_tokens)
        p = lcs / len(candidate)
        r = lcs / len(ref_tokens)
        scores.append(RougeScore(p, r, _f1(p, r)))
    return _best(scores)
