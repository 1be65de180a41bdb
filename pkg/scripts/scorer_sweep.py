#!/usr/bin/env python3
"""Grid-sweep summarizer settings on the bundled news corpus.

Varies latent dimensions, window size, smoothing, and budget ratio, and
prints macro ROUGE-2 for the translation scorer next to the unigram
baseline at each point. Useful for seeing how sensitive the comparison is
to hyperparameters at desk scale.

Usage:
    python scripts/scorer_sweep.py [--data data/news_smoke] [--seed 0]
"""

import argparse
import itertools
import json
import sys
from pathlib import Path

from dsgsum import corpus, dsg, rouge, summarizer


def macro_rouge2(raw_docs, refs, selections):
    total = 0.0
    for doc_id, picked in selections.items():
        sentences = dict(raw_docs)[doc_id]
        candidate = []
        for idx in picked:
            candidate.extend(corpus.tokenize(sentences[idx]))
        ref_tokens = [corpus.tokenize(r) for r in refs[doc_id]]
        total += rouge.rouge_n(candidate, ref_tokens, 2).f1
    return total / len(selections)


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--data", default=str(Path(__file__).parent.parent / "data" / "news_smoke"))
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--iters", type=int, default=60)
    args = parser.parse_args(argv)

    data = Path(args.data)
    raw = corpus.read_corpus(data / "docs.jsonl")
    refs = {
        rec["id"]: rec["references"]
        for rec in map(json.loads, (data / "refs.jsonl").read_text().splitlines())
    }
    streams = (corpus.tokenize(text) for _, texts in raw for text in texts)
    vocab = corpus.build_vocab(streams)
    docs = corpus.encode_corpus(raw, vocab)
    background = vocab.unigram_distribution()

    grid = {
        "window": (3, 5),
        "dim": (4, 8, 16, 32),
        "lam": (0.0, 0.1),
        "ratio": (0.15, 0.2),
    }
    print(f"{'window':>6} {'dim':>4} {'lambda':>6} {'ratio':>5}  {'translation':>11} {'unigram':>8}")
    for window, dim, lam, ratio in itertools.product(*grid.values()):
        table = corpus.count_cooccurrences(docs, vocab, window)
        model, _ = dsg.train(table, H=dim, max_iters=args.iters, rel_tol=1e-9, seed=args.seed)
        scores = {}
        for scorer in ("tblm", "ulm"):
            config = summarizer.SummaryConfig(ratio=ratio, scorer=scorer, smoothing_lambda=lam)
            selections = {
                doc.id: [i for i, _ in summarizer.select_summary(
                    doc,
                    config,
                    model=model if scorer == "tblm" else None,
                    background=background if lam > 0 else None,
                ).selected]
                for doc in docs
            }
            scores[scorer] = macro_rouge2(raw, refs, selections)
        marker = "  <-" if scores["tblm"] >= scores["ulm"] else ""
        print(
            f"{window:>6} {dim:>4} {lam:>6.2f} {ratio:>5.2f}  "
            f"{scores['tblm']:>11.4f} {scores['ulm']:>8.4f}{marker}"
        )
    return 0


if __name__ == "__main__":
    sys.exit(main())
