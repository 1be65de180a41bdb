"""Probabilistic word embeddings trained with EM.

The model is an aspect model over windowed co-occurrence counts: a pair of
stochastic matrices of shape (H, V), where H is the latent dimension count
and V the vocabulary size.

  word_given_dim[h, j]  -- probability of word j under latent dimension h;
                           every row is a distribution over the vocabulary.
  dim_given_word[h, j]  -- weight of dimension h in the embedding of word j;
                           every column is a distribution over dimensions.

For a co-occurrence entry (i, j) the model assigns probability
P(i | j) = sum_h word_given_dim[h, i] * dim_given_word[h, j], and training
maximizes the count-weighted log of that mixture. Because both factors are
stochastic the implied translation distribution over contexts sums to one
for every word, which is what makes the learned dimensions directly
interpretable as word distributions.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .corpus import CooccurrenceTable
from .errors import FileFormatError, ValidationError

# Inner products can underflow for rare pairs; floor before taking logs.
PROB_FLOOR = 1e-300

STOCHASTIC_TOL = 1e-6


@dataclass(frozen=True)
class DsgModel:
    word_given_dim: np.ndarray  # (H, V), rows sum to 1
    dim_given_word: np.ndarray  # (H, V), columns sum to 1

    def __post_init__(self):
        for name in ("word_given_dim", "dim_given_word"):
            arr = np.ascontiguousarray(getattr(self, name), dtype=np.float64)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        if self.word_given_dim.shape != self.dim_given_word.shape:
            raise ValidationError("matrix shapes disagree")
        if self.word_given_dim.ndim != 2:
            raise ValidationError("expected 2-d matrices")

    @property
    def H(self) -> int:
        return self.word_given_dim.shape[0]

    @property
    def V(self) -> int:
        return self.word_given_dim.shape[1]

    def validate(self, tol: float = STOCHASTIC_TOL) -> None:
        """Check non-negativity and the row/column stochastic constraints."""
        if np.any(self.word_given_dim < 0) or np.any(self.dim_given_word < 0):
            raise ValidationError("negative probability entries")
        row_sums = self.word_given_dim.sum(axis=1)
        if np.any(np.abs(row_sums - 1.0) > tol):
            raise ValidationError("rows of the per-dimension word matrix must sum to 1")
        col_sums = self.dim_given_word.sum(axis=0)
        if np.any(np.abs(col_sums - 1.0) > tol):
            raise ValidationError("columns of the per-word dimension matrix must sum to 1")


@dataclass(frozen=True)
class TrainReport:
    iterations_run: int
    loglik_trace: tuple[float, ...]
    converged: bool
    seed: int


def init_model(V: int, H: int, seed: int) -> DsgModel:
    """Seeded random initialization: uniform(0, 1) entries, then normalized.

    Strictly positive random starts avoid the saddle at exact uniformity that
    EM cannot leave.
    """
    if V < 1 or H < 1:
        raise ValidationError("V and H must be >= 1")
    rng = np.random.default_rng(seed)
    w = rng.uniform(size=(H, V))
    w /= w.sum(axis=1, keepdims=True)
    m = rng.uniform(size=(H, V))
    m /= m.sum(axis=0, keepdims=True)
    return DsgModel(w, m)


def _check_dims(model: DsgModel, cooc: CooccurrenceTable) -> None:
    if model.V != cooc.V:
        raise ValidationError(f"model V={model.V} does not match table V={cooc.V}")


def log_likelihood(model: DsgModel, cooc: CooccurrenceTable) -> float:
    """Count-weighted log mixture probability summed over stored entries."""
    _check_dims(model, cooc)
    ctx, cen, n = cooc.arrays()
    if len(n) == 0:
        return 0.0
    inner = np.einsum(
        "he,he->e", model.word_given_dim[:, ctx], model.dim_given_word[:, cen]
    )
    return float(np.dot(n, np.log(np.maximum(inner, PROB_FLOOR))))


def em_step(model: DsgModel, cooc: CooccurrenceTable) -> tuple[DsgModel, float]:
    """One EM iteration; returns the new model and its objective.

    E-step: per stored entry (i, j), the responsibility of dimension h is
    word_given_dim[h, i] * dim_given_word[h, j] renormalized over h.
    M-step: rows of word_given_dim collect count-weighted responsibilities
    over their context word and renormalize per row; columns of
    dim_given_word collect them over their center word and renormalize per
    column. A row or column that receives no mass (word never co-occurs) is
    kept from the input model and a warning is recorded.
    """
    _check_dims(model, cooc)
    H, V = model.H, model.V
    ctx, cen, n = cooc.arrays()

    w_acc = np.zeros((H, V))
    m_acc = np.zeros((H, V))
    if len(n) > 0:
        resp = model.word_given_dim[:, ctx] * model.dim_given_word[:, cen]
        resp /= np.maximum(resp.sum(axis=0, keepdims=True), PROB_FLOOR)
        resp *= n
        for h in range(H):
            w_acc[h] = np.bincount(ctx, weights=resp[h], minlength=V)
            m_acc[h] = np.bincount(cen, weights=resp[h], minlength=V)

    row_mass = w_acc.sum(axis=1)
    dead_rows = row_mass <= 0.0
    w_new = np.where(
        dead_rows[:, None], model.word_given_dim, w_acc / np.maximum(row_mass[:, None], PROB_FLOOR)
    )
    col_mass = m_acc.sum(axis=0)
    dead_cols = col_mass <= 0.0
    m_new = np.where(
        dead_cols[None, :], model.dim_given_word, m_acc / np.maximum(col_mass[None, :], PROB_FLOOR)
    )
    if dead_rows.any() or dead_cols.any():
        warnings.warn(
            f"EM step left {int(dead_rows.sum())} dimension row(s) and "
            f"{int(dead_cols.sum())} word column(s) unchanged: zero co-occurrence mass",
            RuntimeWarning,
            stacklevel=2,
        )

    new_model = DsgModel(w_new, m_new)
    return new_model, log_likelihood(new_model, cooc)


def train(
    cooc: CooccurrenceTable,
    H: int,
    max_iters: int = 200,
    rel_tol: float = 1e-6,
    seed: int = 0,
) -> tuple[DsgModel, TrainReport]:
    """Batch EM from a seeded random start.

    Stops when the relative objective change |delta| / (|value| + 1) falls
    below rel_tol, or after max_iters iterations. The trace holds one
    objective value per completed iteration.
    """
    if max_iters < 1:
        raise ValidationError("max_iters must be >= 1")
    if rel_tol <= 0:
        raise ValidationError("rel_tol must be > 0")
    model = init_model(cooc.V, H, seed)
    prev = log_likelihood(model, cooc)
    trace: list[float] = []
    converged = False
    for _ in range(max_iters):
        model, ll = em_step(model, cooc)
        trace.append(ll)
        if abs(ll - prev) / (abs(ll) + 1.0) < rel_tol:
            converged = True
            break
        prev = ll
    report = TrainReport(len(trace), tuple(trace), converged, seed)
    return model, report


def translation_distribution(model: DsgModel, word_id: int) -> np.ndarray:
    """Distribution over target words reachable from word_id.

    Entry j is sum_h word_given_dim[h, j] * dim_given_word[h, word_id]; the
    vector sums to one because both factors are stochastic.
    """
    if not 0 <= word_id < model.V:
        raise ValidationError(f"word id {word_id} out of range for V={model.V}")
    return model.dim_given_word[:, word_id] @ model.word_given_dim


def top_words_per_dim(model: DsgModel, h: int, k: int) -> list[tuple[int, float]]:
    """The k most probable words of dimension h, ties broken by ascending id."""
    if not 0 <= h < model.H:
        raise ValidationError(f"dimension {h} out of range for H={model.H}")
    if k < 1:
        raise ValidationError("k must be >= 1")
    row = model.word_given_dim[h]
    order = sorted(range(model.V), key=lambda i: (-row[i], i))
    return [(i, float(row[i])) for i in order[:k]]


def save_model(model: DsgModel, path: str | Path) -> None:
    """Text format: header, H per-dimension rows, then V per-word columns."""
    lines = [f"DSG {model.V} {model.H}"]
    for h in range(model.H):
        values = " ".join(f"{x:.17g}" for x in model.word_given_dim[h])
        lines.append(f"W {h} {values}")
    for j in range(model.V):
        values = " ".join(f"{x:.17g}" for x in model.dim_given_word[:, j])
        lines.append(f"M {j} {values}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_model(path: str | Path) -> DsgModel:
    path = Path(path)
    lines = path.read_text(encoding="utf-8").splitlines()
    if not lines:
        raise FileFormatError(f"{path}: empty model file")
    header = lines[0].split()
    if len(header) != 3 or header[0] != "DSG":
        raise FileFormatError(f"{path}: expected header 'DSG <V> <H>'")
    try:
        v, h = int(header[1]), int(header[2])
    except ValueError as exc:
        raise FileFormatError(f"{path}: bad header values") from exc
    body = [ln for ln in lines[1:] if ln.strip()]
    if len(body) != h + v:
        raise FileFormatError(f"{path}: expected {h} W lines and {v} M lines, found {len(body)}")
    w = np.zeros((h, v))
    m = np.zeros((h, v))
    for idx, ln in enumerate(body):
        parts = ln.split()
        tag, expect_tag = ("W", idx) if idx < h else ("M", idx - h)
        width = v if tag == "W" else h
        if len(parts) != 2 + width or parts[0] != tag or parts[1] != str(expect_tag):
            raise FileFormatError(f"{path}: malformed line {idx + 2}: {ln[:60]!r}")
        try:
            values = np.array([float(x) for x in parts[2:]])
        except ValueError as exc:
            raise FileFormatError(f"{path}: bad value on line {idx + 2}") from exc
        if tag == "W":
            w[expect_tag] = values
        else:
            m[:, expect_tag] = values
    model = DsgModel(w, m)
    model.validate(STOCHASTIC_TOL)
    return model
