"""Corpus ingestion: whitespace tokenization, vocabulary construction, and
sliding-window co-occurrence counting over sentence-segmented documents.

Input text is expected to be pre-segmented (one sentence per line in plain
files, or JSON lines with explicit sentence lists); no tokenizer smarter than
a whitespace split lives here.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import FileFormatError, ValidationError

# Marker used inside Sentence.tokens for words missing from the vocabulary.
# OOV tokens keep their position (window offsets are positional) but are
# excluded from every count and probability.
OOV_ID = -1

WEIGHTINGS = ("uniform", "inverse-distance")


@dataclass(frozen=True)
class TokenizeConfig:
    lowercase: bool = True


def tokenize(raw_text: str, config: TokenizeConfig = TokenizeConfig()) -> list[str]:
    """Split pre-segmented text on whitespace, lowercasing if configured."""
    if config.lowercase:
        raw_text = raw_text.lower()
    return raw_text.split()


@dataclass(frozen=True)
class Vocabulary:
    """Bidirectional word/id mapping with corpus frequencies.

    Ids are assigned by descending frequency with a lexicographic tie-break,
    which makes every downstream artifact byte-reproducible.
    """

    words: tuple[str, ...]
    freqs: tuple[int, ...]
    lowercase: bool = True

    @cached_property
    def ids(self) -> dict[str, int]:
        return {w: i for i, w in enumerate(self.words)}

    @property
    def V(self) -> int:
        return len(self.words)

    def id_of(self, token: str) -> int:
        return self.ids.get(token, OOV_ID)

    def encode(self, tokens: Iterable[str]) -> tuple[int, ...]:
        return tuple(self.ids.get(t, OOV_ID) for t in tokens)

    def unigram_distribution(self) -> np.ndarray:
        freqs = np.asarray(self.freqs, dtype=np.float64)
        return freqs / freqs.sum()


def build_vocab(
    token_streams: Iterable[Iterable[str]],
    min_count: int = 1,
    lowercase: bool = True,
) -> Vocabulary:
    """Count tokens across streams and keep those seen at least min_count times."""
    if min_count < 1:
        raise ValidationError("min_count must be >= 1")
    counts: Counter[str] = Counter()
    for stream in token_streams:
        counts.update(stream)
    kept = sorted(
        (w for w, f in counts.items() if f >= min_count),
        key=lambda w: (-counts[w], w),
    )
    if not kept:
        raise ValidationError("empty vocabulary")
    return Vocabulary(tuple(kept), tuple(counts[w] for w in kept), lowercase)


@dataclass(frozen=True)
class Sentence:
    tokens: tuple[int, ...]
    raw_text: str

    @property
    def length(self) -> int:
        """Number of in-vocabulary tokens."""
        return sum(1 for t in self.tokens if t != OOV_ID)

    def in_vocab_tokens(self) -> list[int]:
        return [t for t in self.tokens if t != OOV_ID]


@dataclass(frozen=True)
class Document:
    id: str
    sentences: tuple[Sentence, ...]

    def word_count(self) -> int:
        return sum(s.length for s in self.sentences)


def encode_document(doc_id: str, sentence_texts: Sequence[str], vocab: Vocabulary) -> Document:
    """Map raw sentence strings to id sequences against the vocabulary."""
    if not sentence_texts:
        raise ValidationError(f"document {doc_id!r} has no sentences")
    config = TokenizeConfig(lowercase=vocab.lowercase)
    sentences = tuple(
        Sentence(vocab.encode(tokenize(text, config)), text) for text in sentence_texts
    )
    return Document(doc_id, sentences)


def encode_corpus(raw_docs: Sequence[tuple[str, list[str]]], vocab: Vocabulary) -> list[Document]:
    return [encode_document(doc_id, texts, vocab) for doc_id, texts in raw_docs]


def _read_plain_file(path: Path) -> list[tuple[str, list[str]]]:
    # One sentence per line; a blank line starts a new document.
    blocks: list[list[str]] = []
    current: list[str] = []
    for line in path.read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if line:
            current.append(line)
        elif current:
            blocks.append(current)
            current = []
    if current:
        blocks.append(current)
    if len(blocks) == 1:
        return [(path.stem, blocks[0])]
    return [(f"{path.stem}#{k}", block) for k, block in enumerate(blocks)]


def _read_jsonl_file(path: Path) -> list[tuple[str, list[str]]]:
    docs = []
    for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise FileFormatError(f"{path}:{lineno}: invalid JSON: {exc}") from exc
        if not isinstance(obj, dict) or "id" not in obj or "sentences" not in obj:
            raise FileFormatError(f'{path}:{lineno}: expected fields "id" and "sentences"')
        doc_id, sentences = obj["id"], obj["sentences"]
        if not isinstance(doc_id, str) or not isinstance(sentences, list):
            raise FileFormatError(f"{path}:{lineno}: id must be a string, sentences a list")
        if not all(isinstance(s, str) for s in sentences) or not sentences:
            raise FileFormatError(f"{path}:{lineno}: sentences must be a non-empty list of strings")
        docs.append((doc_id, sentences))
    return docs


def read_corpus(path: str | Path, fmt: str = "auto") -> list[tuple[str, list[str]]]:
    """Read (document id, sentence strings) pairs in deterministic order.

    `path` may be a single file or a directory (files visited in sorted
    order). Formats: "plain" (sentence per line, blank line separates
    documents), "jsonl" (one {"id", "sentences"} object per line), or "auto"
    (by .jsonl/.ndjson extension).
    """
    if fmt not in ("auto", "plain", "jsonl"):
        raise ValidationError(f"unknown corpus format {fmt!r}")
    path = Path(path)
    files = sorted(p for p in path.iterdir() if p.is_file()) if path.is_dir() else [path]
    if not files:
        raise ValidationError(f"no corpus files under {path}")
    docs: list[tuple[str, list[str]]] = []
    for f in files:
        use = fmt
        if use == "auto":
            use = "jsonl" if f.suffix in (".jsonl", ".ndjson") else "plain"
        docs.extend(_read_jsonl_file(f) if use == "jsonl" else _read_plain_file(f))
    seen: set[str] = set()
    for doc_id, _ in docs:
        if doc_id in seen:
            raise ValidationError(f"duplicate document id {doc_id!r}")
        seen.add(doc_id)
    if not docs:
        raise ValidationError(f"no documents found under {path}")
    return docs


@dataclass(frozen=True)
class CooccurrenceTable:
    """Sparse windowed co-occurrence counts keyed (context id, center id).

    Counts are reals so uniform and inverse-distance weighting share one
    representation; absent entries mean zero.
    """

    entries: dict[tuple[int, int], float]
    V: int
    window: int
    weighting: str
    total_mass: float

    @property
    def num_entries(self) -> int:
        return len(self.entries)

    def arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Entry arrays (context ids, center ids, counts) sorted by key."""
        if not self.entries:
            empty = np.zeros(0, dtype=np.int64)
            return empty, empty.copy(), np.zeros(0, dtype=np.float64)
        keys = sorted(self.entries)
        i = np.fromiter((k[0] for k in keys), dtype=np.int64, count=len(keys))
        j = np.fromiter((k[1] for k in keys), dtype=np.int64, count=len(keys))
        n = np.fromiter((self.entries[k] for k in keys), dtype=np.float64, count=len(keys))
        return i, j, n


def count_cooccurrences(
    documents: Iterable[Document],
    vocab: Vocabulary,
    c: int,
    weighting: str = "uniform",
) -> CooccurrenceTable:
    """Accumulate (context, center) counts over positional windows [-c, c].

    Windows never cross sentence boundaries. OOV tokens occupy positions but
    contribute nothing, as centers or contexts. Weight is 1 under uniform
    weighting and 1/|offset| under inverse-distance.
    """
    if c < 1:
        raise ValidationError("window size must be >= 1")
    if weighting not in WEIGHTINGS:
        raise ValidationError(f"unknown weighting {weighting!r}")
    uniform = weighting == "uniform"
    entries: dict[tuple[int, int], float] = {}
    for doc in documents:
        for sent in doc.sentences:
            toks = sent.tokens
            n = len(toks)
            for t, center in enumerate(toks):
                if center == OOV_ID:
                    continue
                for u in range(max(0, t - c), min(n, t + c + 1)):
                    if u == t:
                        continue
                    ctx = toks[u]
                    if ctx == OOV_ID:
                        continue
                    w = 1.0 if uniform else 1.0 / abs(u - t)
                    key = (ctx, center)
                    entries[key] = entries.get(key, 0.0) + w
    return CooccurrenceTable(entries, vocab.V, c, weighting, float(sum(entries.values())))


def merge_tables(tables: Sequence[CooccurrenceTable]) -> CooccurrenceTable:
    """Merge per-shard tables; shards must agree on V, window, and weighting."""
    if not tables:
        raise ValidationError("nothing to merge")
    head = tables[0]
    merged: dict[tuple[int, int], float] = {}
    for t in tables:
        if (t.V, t.window, t.weighting) != (head.V, head.window, head.weighting):
            raise ValidationError("cannot merge tables with differing V, window, or weighting")
        for key, val in t.entries.items():
            merged[key] = merged.get(key, 0.0) + val
    return CooccurrenceTable(merged, head.V, head.window, head.weighting, float(sum(merged.values())))


def save_vocab(vocab: Vocabulary, path: str | Path) -> None:
    lines = [f"VOCAB {vocab.V} {int(vocab.lowercase)}"]
    lines.extend(f"{w} {f}" for w, f in zip(vocab.words, vocab.freqs))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_vocab(path: str | Path) -> Vocabulary:
    path = Path(path)
    lines = path.read_text(encoding="utf-8").splitlines()
    if not lines:
        raise FileFormatError(f"{path}: empty vocabulary file")
    header = lines[0].split()
    if len(header) != 3 or header[0] != "VOCAB":
        raise FileFormatError(f"{path}: expected header 'VOCAB <V> <lowercase>'")
    try:
        v, lc = int(header[1]), int(header[2])
    except ValueError as exc:
        raise FileFormatError(f"{path}: bad header values") from exc
    body = [ln for ln in lines[1:] if ln.strip()]
    if len(body) != v:
        raise FileFormatError(f"{path}: header claims {v} words, found {len(body)}")
    words, freqs = [], []
    for ln in body:
        parts = ln.split()
        if len(parts) != 2:
            raise FileFormatError(f"{path}: bad vocabulary line {ln!r}")
        words.append(parts[0])
        try:
            freq = int(parts[1])
        except ValueError as exc:
            raise FileFormatError(f"{path}: bad frequency in {ln!r}") from exc
        if freq < 1:
            raise FileFormatError(f"{path}: non-positive frequency in {ln!r}")
        freqs.append(freq)
    if len(set(words)) != len(words):
        raise FileFormatError(f"{path}: duplicate words")
    order_keys = [(-f, w) for w, f in zip(words, freqs)]
    if order_keys != sorted(order_keys):
        raise FileFormatError(f"{path}: words not ordered by descending frequency")
    return Vocabulary(tuple(words), tuple(freqs), bool(lc))


def save_cooccurrences(table: CooccurrenceTable, path: str | Path) -> None:
    lines = [f"COOC {table.V} {table.window} {table.weighting}"]
    for (i, j), count in sorted(table.entries.items()):
        lines.append(f"{i} {j} {count!r}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_cooccurrences(path: str | Path) -> CooccurrenceTable:
    path = Path(path)
    lines = path.read_text(encoding="utf-8").splitlines()
    if not lines:
        raise FileFormatError(f"{path}: empty co-occurrence file")
    header = lines[0].split()
    if len(header) != 4 or header[0] != "COOC":
        raise FileFormatError(f"{path}: expected header 'COOC <V> <c> <weighting>'")
    try:
        v, c = int(header[1]), int(header[2])
    except ValueError as exc:
        raise FileFormatError(f"{path}: bad header values") from exc
    weighting = header[3]
    if weighting not in WEIGHTINGS:
        raise FileFormatError(f"{path}: unknown weighting {weighting!r}")
    entries: dict[tuple[int, int], float] = {}
    for ln in lines[1:]:
        if not ln.strip():
            continue
        parts = ln.split()
        if len(parts) != 3:
            raise FileFormatError(f"{path}: bad entry line {ln!r}")
        try:
            i, j, count = int(parts[0]), int(parts[1]), float(parts[2])
        except ValueError as exc:
            raise FileFormatError(f"{path}: bad entry line {ln!r}") from exc
        if not (0 <= i < v and 0 <= j < v):
            raise FileFormatError(f"{path}: entry ({i}, {j}) out of range for V={v}")
        if count <= 0:
            raise FileFormatError(f"{path}: non-positive count in {ln!r}")
        if (i, j) in entries:
            raise FileFormatError(f"{path}: duplicate entry ({i}, {j})")
        entries[(i, j)] = count
    return CooccurrenceTable(entries, v, c, weighting, float(sum(entries.values())))
