"""Desk-scale SG and GloVe trainers, plus the dense-embedding utilities the
cosine summarizer shares (mean vectors, cosine similarity, file round trips).

SG here uses the exact softmax over the vocabulary rather than negative
sampling; that matches the training objective being optimized literally and
keeps gradients checkable against finite differences, at the price of an
enforced vocabulary bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .corpus import OOV_ID, Document, Vocabulary
from .dsg import DsgModel
from .errors import FileFormatError, ValidationError

EMBEDDING_KINDS = ("SG_input", "SG_context", "GloVe")

# Exact-softmax SG walks the whole vocabulary per update.
MAX_EXACT_SOFTMAX_V = 20000


@dataclass(frozen=True)
class DenseEmbedding:
    kind: str
    vectors: np.ndarray  # (V, H)
    biases: np.ndarray | None = None  # (V,), GloVe only

    def __post_init__(self):
        if self.kind not in EMBEDDING_KINDS:
            raise ValidationError(f"unknown embedding kind {self.kind!r}")
        vecs = np.ascontiguousarray(self.vectors, dtype=np.float64)
        if vecs.ndim != 2:
            raise ValidationError("vectors must be a (V, H) matrix")
        if not np.all(np.isfinite(vecs)):
            raise ValidationError("non-finite embedding entries")
        object.__setattr__(self, "vectors", vecs)
        if self.biases is not None:
            b = np.ascontiguousarray(self.biases, dtype=np.float64)
            if b.shape != (vecs.shape[0],) or not np.all(np.isfinite(b)):
                raise ValidationError("biases must be a finite length-V vector")
            object.__setattr__(self, "biases", b)

    @property
    def V(self) -> int:
        return self.vectors.shape[0]

    @property
    def H(self) -> int:
        return self.vectors.shape[1]


@dataclass(frozen=True)
class GloveConfig:
    x_max: float = 100.0
    alpha: float = 0.75
    learning_rate: float = 0.05
    epochs: int = 50
    seed: int = 0

    def validate(self) -> None:
        if self.x_max <= 0:
            raise ValidationError("x_max must be > 0")
        if not 0 < self.alpha <= 1:
            raise ValidationError("alpha must be in (0, 1]")
        if self.learning_rate <= 0:
            raise ValidationError("learning_rate must be > 0")
        if self.epochs < 0:
            raise ValidationError("epochs must be >= 0")


def _softmax(scores: np.ndarray) -> np.ndarray:
    e = np.exp(scores - scores.max())
    return e / e.sum()


def sg_softmax_prob(
    emb_in: DenseEmbedding, emb_ctx: DenseEmbedding, center: int, context: int
) -> float:
    """Exact softmax probability of one context word given a center word."""
    if emb_in.V != emb_ctx.V or emb_in.H != emb_ctx.H:
        raise ValidationError("input and context tables must share V and H")
    if not (0 <= center < emb_in.V and 0 <= context < emb_in.V):
        raise ValidationError("word id out of range")
    probs = _softmax(emb_ctx.vectors @ emb_in.vectors[center])
    return float(probs[context])


def sg_pair_gradients(
    in_vecs: np.ndarray, ctx_vecs: np.ndarray, center: int, context: int
) -> tuple[float, np.ndarray, np.ndarray]:
    """Log softmax probability of one (center, context) pair and its gradients.

    Returns (log prob, d/d in_vecs, d/d ctx_vecs) as full-table arrays; only
    the center row of the input table carries a nonzero gradient.
    """
    scores = ctx_vecs @ in_vecs[center]
    shift = scores - scores.max()
    log_norm = math.log(np.exp(shift).sum())
    probs = np.exp(shift - log_norm)
    log_prob = float(shift[context] - log_norm)
    grad_in = np.zeros_like(in_vecs)
    grad_in[center] = ctx_vecs[context] - probs @ ctx_vecs
    grad_ctx = -probs[:, None] * in_vecs[center]
    grad_ctx[context] += in_vecs[center]
    return log_prob, grad_in, grad_ctx


def _iter_pairs(documents: Iterable[Document], c: int):
    """(center id, context id) pairs in corpus order; OOV keeps its slot."""
    for doc in documents:
        for sent in doc.sentences:
            toks = sent.tokens
            n = len(toks)
            for t, center in enumerate(toks):
                if center == OOV_ID:
                    continue
                for u in range(max(0, t - c), min(n, t + c + 1)):
                    if u != t and toks[u] != OOV_ID:
                        yield center, toks[u]


def sg_corpus_log_prob(
    in_vecs: np.ndarray, ctx_vecs: np.ndarray, documents: Sequence[Document], c: int
) -> float:
    """Sum of log softmax probabilities over every (center, context) pair."""
    total = 0.0
    for doc in documents:
        for sent in doc.sentences:
            toks = sent.tokens
            n = len(toks)
            for t, center in enumerate(toks):
                if center == OOV_ID:
                    continue
                scores = ctx_vecs @ in_vecs[center]
                shift = scores - scores.max()
                log_norm = math.log(np.exp(shift).sum())
                for u in range(max(0, t - c), min(n, t + c + 1)):
                    if u != t and toks[u] != OOV_ID:
                        total += float(shift[toks[u]] - log_norm)
    return total


def train_sg(
    documents: Sequence[Document],
    vocab: Vocabulary,
    H: int,
    c: int,
    epochs: int,
    learning_rate: float,
    seed: int,
    return_context: bool = False,
):
    """SGD ascent on the exact-softmax skip-gram objective.

    Pairs are visited in corpus order each epoch with a learning rate that
    decays linearly to zero over all updates; the only randomness is the
    seeded initialization. Returns the input-vector table, plus the context
    table when return_context is set.
    """
    if vocab.V > MAX_EXACT_SOFTMAX_V:
        raise ValidationError(f"V={vocab.V} exceeds exact-softmax bound {MAX_EXACT_SOFTMAX_V}")
    if H < 1:
        raise ValidationError("H must be >= 1")
    if c < 1:
        raise ValidationError("window size must be >= 1")
    if epochs < 0:
        raise ValidationError("epochs must be >= 0")
    if learning_rate <= 0:
        raise ValidationError("learning_rate must be > 0")
    rng = np.random.default_rng(seed)
    bound = 0.5 / H
    in_vecs = rng.uniform(-bound, bound, size=(vocab.V, H))
    ctx_vecs = rng.uniform(-bound, bound, size=(vocab.V, H))

    pairs = list(_iter_pairs(documents, c))
    if not pairs:
        raise ValidationError("no training pairs in corpus")
    total_steps = epochs * len(pairs)
    step = 0
    for _ in range(epochs):
        for center, context in pairs:
            lr = learning_rate * (1.0 - step / total_steps)
            step += 1
            center_vec = in_vecs[center].copy()
            probs = _softmax(ctx_vecs @ center_vec)
            in_vecs[center] += lr * (ctx_vecs[context] - probs @ ctx_vecs)
            ctx_vecs -= lr * probs[:, None] * center_vec
            ctx_vecs[context] += lr * center_vec
    emb_in = DenseEmbedding("SG_input", in_vecs)
    if return_context:
        return emb_in, DenseEmbedding("SG_context", ctx_vecs)
    return emb_in


def glove_weight(x: float, x_max: float, alpha: float) -> float:
    """Capped power smoothing weight: (x / x_max) ** alpha below x_max, else 1."""
    return (x / x_max) ** alpha if x < x_max else 1.0


def glove_term_gradient(
    v_main: np.ndarray,
    v_ctx: np.ndarray,
    b_main: float,
    b_ctx: float,
    x: float,
    x_max: float,
    alpha: float,
) -> tuple[float, np.ndarray, np.ndarray, float, float]:
    """One weighted squared-residual term and its gradients.

    The term is f(x) * (v_main . v_ctx + b_main + b_ctx - log x)^2; returns
    (value, d/d v_main, d/d v_ctx, d/d b_main, d/d b_ctx).
    """
    if x <= 0:
        raise ValidationError("co-occurrence count must be > 0 to take its log")
    f = glove_weight(x, x_max, alpha)
    d = float(v_main @ v_ctx + b_main + b_ctx - math.log(x))
    g = 2.0 * f * d
    return f * d * d, g * v_ctx, g * v_main, g, g


def glove_objective(
    main: np.ndarray,
    ctx: np.ndarray,
    b_main: np.ndarray,
    b_ctx: np.ndarray,
    i: np.ndarray,
    j: np.ndarray,
    fw: np.ndarray,
    logx: np.ndarray,
) -> float:
    d = np.einsum("eh,eh->e", main[i], ctx[j]) + b_main[i] + b_ctx[j] - logx
    return float(np.dot(fw, d * d))


def train_glove(cooc, H: int, config: GloveConfig, return_trace: bool = False):
    """Weighted least squares on log counts via per-entry AdaGrad updates.

    Entries are visited in a freshly shuffled order each epoch (seeded, so
    runs are reproducible). The returned embedding is the sum of the main
    and context tables, with the two bias vectors summed alongside.
    """
    config.validate()
    if H < 1:
        raise ValidationError("H must be >= 1")
    if cooc.num_entries == 0:
        raise ValidationError("empty co-occurrence table")
    i_arr, j_arr, x_arr = cooc.arrays()
    if np.any(x_arr <= 0):
        raise ValidationError("co-occurrence count must be > 0 to take its log")
    logx = np.log(x_arr)
    fw = np.array([glove_weight(x, config.x_max, config.alpha) for x in x_arr])

    rng = np.random.default_rng(config.seed)
    v = cooc.V
    bound = 0.5 / H
    main = rng.uniform(-bound, bound, size=(v, H))
    ctx = rng.uniform(-bound, bound, size=(v, H))
    b_main = rng.uniform(-bound, bound, size=v)
    b_ctx = rng.uniform(-bound, bound, size=v)
    gsq_main = np.ones((v, H))
    gsq_ctx = np.ones((v, H))
    gsq_bmain = np.ones(v)
    gsq_bctx = np.ones(v)

    lr = config.learning_rate
    trace = [glove_objective(main, ctx, b_main, b_ctx, i_arr, j_arr, fw, logx)]
    for _ in range(config.epochs):
        for e in rng.permutation(len(x_arr)):
            i, j = i_arr[e], j_arr[e]
            d = main[i] @ ctx[j] + b_main[i] + b_ctx[j] - logx[e]
            g = 2.0 * fw[e] * d
            grad_main = g * ctx[j]
            grad_ctx = g * main[i]
            main[i] -= lr * grad_main / np.sqrt(gsq_main[i])
            gsq_main[i] += grad_main * grad_main
            ctx[j] -= lr * grad_ctx / np.sqrt(gsq_ctx[j])
            gsq_ctx[j] += grad_ctx * grad_ctx
            b_main[i] -= lr * g / math.sqrt(gsq_bmain[i])
            gsq_bmain[i] += g * g
            b_ctx[j] -= lr * g / math.sqrt(gsq_bctx[j])
            gsq_bctx[j] += g * g
        trace.append(glove_objective(main, ctx, b_main, b_ctx, i_arr, j_arr, fw, logx))
    emb = DenseEmbedding("GloVe", main + ctx, biases=b_main + b_ctx)
    if return_trace:
        return emb, trace
    return emb


def mean_embedding(source: DenseEmbedding | DsgModel, token_ids: Iterable[int]) -> np.ndarray:
    """Arithmetic mean of per-token vectors; OOV markers are skipped.

    For an aspect model the per-word vector is its dimension-weight column.
    Empty input yields the zero vector.
    """
    ids = [t for t in token_ids if t >= 0]
    if isinstance(source, DsgModel):
        h = source.H
        rows = [source.dim_given_word[:, t] for t in ids]
    else:
        h = source.H
        rows = [source.vectors[t] for t in ids]
    if not rows:
        return np.zeros(h)
    return np.mean(rows, axis=0)


def cosine(u: np.ndarray, v: np.ndarray) -> float:
    """Cosine similarity with the zero-vector convention cosine(0, v) = 0."""
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if u.shape != v.shape:
        raise ValidationError("vector lengths disagree")
    # Scale each vector by its largest component first so norms of very
    # small or very large vectors neither underflow nor overflow.
    su, sv = np.max(np.abs(u)), np.max(np.abs(v))
    if su == 0.0 or sv == 0.0:
        return 0.0
    u = u / su
    v = v / sv
    return float(np.clip(np.dot(u, v) / (np.linalg.norm(u) * np.linalg.norm(v)), -1.0, 1.0))


def save_embedding(emb: DenseEmbedding, words: Sequence[str], path: str | Path) -> None:
    if len(words) != emb.V:
        raise ValidationError("word list length does not match embedding V")
    has_bias = emb.biases is not None
    header = f"EMB {emb.kind} {emb.V} {emb.H}" + (" BIAS" if has_bias else "")
    lines = [header]
    for idx, (w, vec) in enumerate(zip(words, emb.vectors)):
        parts = [w] + [f"{x:.17g}" for x in vec]
        if has_bias:
            parts.append(f"{emb.biases[idx]:.17g}")
        lines.append(" ".join(parts))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_embedding(path: str | Path) -> tuple[DenseEmbedding, list[str]]:
    path = Path(path)
    lines = path.read_text(encoding="utf-8").splitlines()
    if not lines:
        raise FileFormatError(f"{path}: empty embedding file")
    header = lines[0].split()
    if len(header) not in (4, 5) or header[0] != "EMB":
        raise FileFormatError(f"{path}: expected header 'EMB <kind> <V> <H> [BIAS]'")
    kind = header[1]
    if kind not in EMBEDDING_KINDS:
        raise FileFormatError(f"{path}: unknown embedding kind {kind!r}")
    try:
        v, h = int(header[2]), int(header[3])
    except ValueError as exc:
        raise FileFormatError(f"{path}: bad header values") from exc
    has_bias = len(header) == 5
    if has_bias and header[4] != "BIAS":
        raise FileFormatError(f"{path}: unexpected header flag {header[4]!r}")
    body = [ln for ln in lines[1:] if ln.strip()]
    if len(body) != v:
        raise FileFormatError(f"{path}: header claims {v} words, found {len(body)}")
    width = 1 + h + (1 if has_bias else 0)
    words: list[str] = []
    vectors = np.zeros((v, h))
    biases = np.zeros(v) if has_bias else None
    for row, ln in enumerate(body):
        parts = ln.split()
        if len(parts) != width:
            raise FileFormatError(f"{path}: bad embedding line {row + 2}")
        words.append(parts[0])
        try:
            values = [float(x) for x in parts[1:]]
        except ValueError as exc:
            raise FileFormatError(f"{path}: bad value on line {row + 2}") from exc
        vectors[row] = values[:h]
        if has_bias:
            biases[row] = values[h]
    if len(set(words)) != len(words):
        raise FileFormatError(f"{path}: duplicate words")
    return DenseEmbedding(kind, vectors, biases), words
