#!/usr/bin/env python3
"""Compare the translation-based scorer against the plain unigram scorer on
the bundled news corpus and report macro ROUGE scores for both.

The expected direction (translation scoring >= unigram scoring) comes from
much larger corpora; at this corpus size the aspect model is data-starved,
so treat the output as a smoke reading, not a benchmark.

Usage:
    python scripts/smoke_news.py [--dim 16] [--window 5] [--iters 40]
                                 [--ratio 0.2] [--smoothing-lambda 0.0]
                                 [--seed 0] [--data data/news_smoke]
"""

import argparse
import json
import sys
from pathlib import Path

from dsgsum import corpus, dsg, rouge, summarizer


def macro_scores(raw_docs, refs, selections, lowercase=True):
    config = corpus.TokenizeConfig(lowercase=lowercase)
    totals = {"rouge_2": 0.0, "rouge_l": 0.0}
    for doc_id, picked in selections.items():
        sentences = dict(raw_docs)[doc_id]
        candidate = []
        for idx in picked:
            candidate.extend(corpus.tokenize(sentences[idx], config))
        ref_tokens = [corpus.tokenize(r, config) for r in refs[doc_id]]
        totals["rouge_2"] += rouge.rouge_n(candidate, ref_tokens, 2).f1
        totals["rouge_l"] += rouge.rouge_l(candidate, ref_tokens).f1
    return {k: v / len(selections) for k, v in totals.items()}


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--dim", type=int, default=16)
    parser.add_argument("--window", type=int, default=5)
    parser.add_argument("--iters", type=int, default=40)
    parser.add_argument("--ratio", type=float, default=0.2)
    parser.add_argument("--smoothing-lambda", type=float, default=0.0)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--data", default=str(Path(__file__).parent.parent / "data" / "news_smoke"))
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
    table = corpus.count_cooccurrences(docs, vocab, args.window)
    print(f"corpus: {len(docs)} docs, V={vocab.V}, {table.num_entries} co-occurrence entries")

    model, report = dsg.train(table, H=args.dim, max_iters=args.iters, rel_tol=1e-9, seed=args.seed)
    print(
        f"aspect model: H={args.dim}, {report.iterations_run} EM iterations, "
        f"final objective {report.loglik_trace[-1]:.3f}, converged={report.converged}"
    )

    lam = args.smoothing_lambda
    background = vocab.unigram_distribution() if lam > 0 else None
    selections = {}
    for scorer in ("tblm", "ulm"):
        config = summarizer.SummaryConfig(ratio=args.ratio, scorer=scorer, smoothing_lambda=lam)
        selections[scorer] = {
            doc.id: [i for i, _ in summarizer.select_summary(
                doc, config, model=model if scorer == "tblm" else None, background=background
            ).selected]
            for doc in docs
        }

    results = {scorer: macro_scores(raw, refs, picked) for scorer, picked in selections.items()}
    for scorer, scores in results.items():
        label = "translation (aspect model)" if scorer == "tblm" else "unigram baseline"
        print(f"{label:>28}: ROUGE-2 {scores['rouge_2']:.4f}  ROUGE-L {scores['rouge_l']:.4f}")
    gap = results["tblm"]["rouge_2"] - results["ulm"]["rouge_2"]
    direction = "matches" if gap >= 0 else "does not match"
    print(f"ROUGE-2 gap (translation - unigram): {gap:+.4f}; expected direction {direction}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
