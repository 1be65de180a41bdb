import numpy as np
import pytest

from dsgsum import corpus


@pytest.fixture
def toy_vocab():
    return corpus.Vocabulary(words=("a", "b", "c"), freqs=(2, 1, 1), lowercase=True)


@pytest.fixture
def toy_doc():
    sent = corpus.Sentence(tokens=(0, 1, 0, 2), raw_text="a b a c")
    return corpus.Document(id="toy", sentences=(sent,))


@pytest.fixture
def toy_table(toy_doc, toy_vocab):
    # Window 1 over [a, b, a, c]: entries {(0,1): 2, (1,0): 2, (0,2): 1, (2,0): 1}.
    return corpus.count_cooccurrences([toy_doc], toy_vocab, 1, "uniform")


def random_documents(rng: np.random.Generator, V: int, n_docs: int, max_sents: int = 4):
    """Documents of random in-vocabulary token ids (plus occasional OOV)."""
    docs = []
    for d in range(n_docs):
        sentences = []
        for _ in range(rng.integers(1, max_sents + 1)):
            length = int(rng.integers(2, 9))
            toks = [int(t) for t in rng.integers(0, V, size=length)]
            if rng.random() < 0.3:
                toks[rng.integers(0, length)] = corpus.OOV_ID
            sentences.append(corpus.Sentence(tuple(toks), " ".join(map(str, toks))))
        docs.append(corpus.Document(f"doc{d}", tuple(sentences)))
    return docs


def random_cooc_table(rng: np.random.Generator, V: int, density: float = 0.5):
    """A synthetic count table with at least one entry per word on each side."""
    entries = {}
    for i in range(V):
        for j in range(V):
            if i != j and rng.random() < density:
                entries[(i, j)] = float(rng.integers(1, 6))
    # Guarantee every word shows up both as context and as center so no
    # row or column is starved of mass.
    for k in range(V):
        entries.setdefault((k, (k + 1) % V), 1.0)
        entries.setdefault(((k + 1) % V, k), 1.0)
    total = float(sum(entries.values()))
    return corpus.CooccurrenceTable(entries, V, 1, "uniform", total)
