"""Command-line front end wiring corpus ingestion, training, summarization,
evaluation, and model inspection into reproducible pipelines.

Options resolve in three layers: built-in defaults, then a JSON config file
(--config), then explicit command-line flags. Unknown config keys are
rejected and every run logs its fully resolved configuration to stderr.
Exit codes: 0 success, 1 validation error, 2 I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import baselines, corpus, dsg, rouge, summarizer
from .errors import FileFormatError, ValidationError

DEFAULTS: dict[str, dict] = {
    "build-cooc": {
        "corpus": None,
        "format": "auto",
        "lowercase": True,
        "min-count": 1,
        "window": 5,
        "weighting": "uniform",
        "out": None,
        "seed": 0,
    },
    "train": {
        "cooc": None,
        "corpus": None,
        "format": "auto",
        "vocab": None,
        "dim": 32,
        "window": 5,
        "epochs": None,  # method default: sg 5, glove 50
        "learning-rate": None,  # method default: sg 0.025, glove 0.05
        "max-iters": 200,
        "rel-tol": 1e-6,
        "x-max": 100.0,
        "alpha": 0.75,
        "out": None,
        "seed": 0,
    },
    "summarize": {
        "corpus": None,
        "format": "auto",
        "vocab": None,
        "model": None,
        "emb": None,
        "scorer": "tblm",
        "ratio": 0.10,
        "budget-unit": "words",
        "theta": None,
        "smoothing-lambda": 0.0,
        "normalize-scores": False,
        "out": None,
        "seed": 0,
    },
    "evaluate": {
        "summaries": None,
        "references": None,
        "corpus": None,
        "format": "auto",
        "lowercase": True,
        "out": None,
        "seed": 0,
    },
    "inspect": {
        "model": None,
        "vocab": None,
        "k": 10,
        "word": None,
        "seed": 0,
    },
}

METHOD_DEFAULTS = {
    "sg": {"epochs": 5, "learning-rate": 0.025},
    "glove": {"epochs": 50, "learning-rate": 0.05},
    "dsg": {},
}

OPTION_TYPES: dict[str, type] = {
    "corpus": str,
    "format": str,
    "lowercase": bool,
    "min-count": int,
    "window": int,
    "weighting": str,
    "out": str,
    "cooc": str,
    "vocab": str,
    "dim": int,
    "epochs": int,
    "learning-rate": float,
    "max-iters": int,
    "rel-tol": float,
    "x-max": float,
    "alpha": float,
    "model": str,
    "emb": str,
    "scorer": str,
    "ratio": float,
    "budget-unit": str,
    "theta": float,
    "smoothing-lambda": float,
    "normalize-scores": bool,
    "summaries": str,
    "references": str,
    "k": int,
    "word": str,
    "seed": int,
}


class _Parser(argparse.ArgumentParser):
    # Usage problems are validation errors (exit 1), not argparse's exit 2.
    def error(self, message):
        raise ValidationError(message)


def _load_config_file(path: str) -> dict:
    try:
        obj = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise FileFormatError(f"{path}: invalid JSON: {exc}") from exc
    if not isinstance(obj, dict):
        raise FileFormatError(f"{path}: config must be a JSON object")
    for key, section in obj.items():
        if key == "seed":
            if not isinstance(section, int) or isinstance(section, bool):
                raise ValidationError(f"{path}: seed must be an integer")
            continue
        if key not in DEFAULTS:
            raise ValidationError(f"{path}: unknown config key {key!r}")
        if not isinstance(section, dict):
            raise ValidationError(f"{path}: section {key!r} must be an object")
        for opt, value in section.items():
            if opt not in DEFAULTS[key]:
                raise ValidationError(f"{path}: unknown config key {key}.{opt}")
            _check_type(f"{key}.{opt}", opt, value)
    return obj


def _check_type(label: str, opt: str, value) -> None:
    want = OPTION_TYPES[opt]
    if want is bool:
        ok = isinstance(value, bool)
    elif want is int:
        ok = isinstance(value, int) and not isinstance(value, bool)
    elif want is float:
        ok = isinstance(value, (int, float)) and not isinstance(value, bool)
    else:
        ok = isinstance(value, str)
    if not ok:
        raise ValidationError(f"config value {label} must be of type {want.__name__}")


def _resolve(command: str, args: argparse.Namespace) -> dict:
    config = _load_config_file(args.config) if args.config else {}
    resolved = dict(DEFAULTS[command])
    if "seed" in config:
        resolved["seed"] = config["seed"]
    resolved.update(config.get(command, {}))
    for opt in DEFAULTS[command]:
        cli_value = getattr(args, opt.replace("-", "_"), None)
        if cli_value is not None:
            resolved[opt] = cli_value
    if command == "train":
        resolved["method"] = args.method
        for opt, value in METHOD_DEFAULTS[args.method].items():
            if resolved[opt] is None:
                resolved[opt] = value
    log = {"command": command, **resolved}
    print(f"[config] {json.dumps(log, sort_keys=True)}", file=sys.stderr)
    return resolved


def _require(opts: dict, *keys: str) -> None:
    for key in keys:
        if opts.get(key) is None:
            raise ValidationError(f"missing required option --{key}")


def _read_encoded_corpus(opts: dict, vocab: corpus.Vocabulary) -> list[corpus.Document]:
    raw = corpus.read_corpus(opts["corpus"], opts["format"])
    return corpus.encode_corpus(raw, vocab)


def cmd_build_cooc(opts: dict) -> int:
    _require(opts, "corpus", "out")
    raw = corpus.read_corpus(opts["corpus"], opts["format"])
    tok_config = corpus.TokenizeConfig(lowercase=opts["lowercase"])
    streams = (corpus.tokenize(text, tok_config) for _, texts in raw for text in texts)
    vocab = corpus.build_vocab(streams, opts["min-count"], opts["lowercase"])
    docs = corpus.encode_corpus(raw, vocab)
    table = corpus.count_cooccurrences(docs, vocab, opts["window"], opts["weighting"])
    out = opts["out"]
    corpus.save_vocab(vocab, f"{out}.vocab")
    corpus.save_cooccurrences(table, f"{out}.cooc")
    print(f"V={vocab.V} entries={table.num_entries} total_mass={table.total_mass!r}")
    return 0


def cmd_train(opts: dict) -> int:
    method = opts["method"]
    if method == "dsg":
        _require(opts, "cooc", "out")
        table = corpus.load_cooccurrences(opts["cooc"])
        model, report = dsg.train(
            table, opts["dim"], opts["max-iters"], opts["rel-tol"], opts["seed"]
        )
        for it, value in enumerate(report.loglik_trace, start=1):
            print(f"iter {it} loglik {value!r}")
        print(f"converged={report.converged} iterations={report.iterations_run}")
        trace = report.loglik_trace
        for prev, curr in zip(trace, trace[1:]):
            if curr < prev - 1e-9:
                raise ValidationError(
                    f"objective decreased from {prev!r} to {curr!r}; training is broken"
                )
        dsg.save_model(model, opts["out"])
    elif method == "sg":
        _require(opts, "corpus", "vocab", "out")
        vocab = corpus.load_vocab(opts["vocab"])
        docs = _read_encoded_corpus(opts, vocab)
        emb = baselines.train_sg(
            docs,
            vocab,
            opts["dim"],
            opts["window"],
            opts["epochs"],
            opts["learning-rate"],
            opts["seed"],
        )
        baselines.save_embedding(emb, vocab.words, opts["out"])
    elif method == "glove":
        _require(opts, "cooc", "vocab", "out")
        table = corpus.load_cooccurrences(opts["cooc"])
        vocab = corpus.load_vocab(opts["vocab"])
        if table.V != vocab.V:
            raise ValidationError(
                f"co-occurrence table V={table.V} does not match vocabulary V={vocab.V}"
            )
        config = baselines.GloveConfig(
            x_max=opts["x-max"],
            alpha=opts["alpha"],
            learning_rate=opts["learning-rate"],
            epochs=opts["epochs"],
            seed=opts["seed"],
        )
        emb = baselines.train_glove(table, opts["dim"], config)
        baselines.save_embedding(emb, vocab.words, opts["out"])
    else:
        raise ValidationError(f"unknown training method {method!r}")
    return 0


def cmd_summarize(opts: dict) -> int:
    _require(opts, "corpus", "vocab", "out")
    vocab = corpus.load_vocab(opts["vocab"])
    docs = _read_encoded_corpus(opts, vocab)

    model = None
    embedding = None
    if opts["model"] is not None:
        model = dsg.load_model(opts["model"])
        if model.V != vocab.V:
            raise ValidationError(f"model V={model.V} does not match vocabulary V={vocab.V}")
    if opts["emb"] is not None:
        embedding, words = baselines.load_embedding(opts["emb"])
        if list(words) != list(vocab.words):
            raise ValidationError("embedding words do not match the vocabulary")

    config = summarizer.SummaryConfig(
        ratio=opts["ratio"],
        budget_unit=opts["budget-unit"],
        redundancy_threshold=opts["theta"],
        scorer=opts["scorer"],
        smoothing_lambda=opts["smoothing-lambda"],
        normalize_scores=opts["normalize-scores"],
    )
    config.validate()
    background = vocab.unigram_distribution() if config.smoothing_lambda > 0 else None

    lines = []
    for doc in docs:
        result = summarizer.select_summary(
            doc, config, model=model, embedding=embedding, background=background
        )
        lines.append(
            json.dumps(
                {
                    "id": doc.id,
                    "selected": [i for i, _ in result.selected],
                    "scores": [s for _, s in result.selected],
                    "budget_unit": config.budget_unit,
                    "budget_limit": result.budget_limit,
                }
            )
        )
    Path(opts["out"]).write_text("\n".join(lines) + "\n", encoding="utf-8")
    return 0


def _load_summary_lines(path: str) -> list[dict]:
    records = []
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise FileFormatError(f"{path}:{lineno}: invalid JSON: {exc}") from exc
        if not isinstance(obj, dict) or "id" not in obj or "selected" not in obj:
            raise FileFormatError(f'{path}:{lineno}: expected fields "id" and "selected"')
        records.append(obj)
    if not records:
        raise ValidationError(f"{path}: no summaries to evaluate")
    return records


def _load_references(path: str) -> dict[str, list[str]]:
    refs: dict[str, list[str]] = {}
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise FileFormatError(f"{path}:{lineno}: invalid JSON: {exc}") from exc
        if (
            not isinstance(obj, dict)
            or not isinstance(obj.get("id"), str)
            or not isinstance(obj.get("references"), list)
            or not obj["references"]
            or not all(isinstance(r, str) for r in obj["references"])
        ):
            raise FileFormatError(
                f'{path}:{lineno}: expected fields "id" and non-empty "references"'
            )
        if obj["id"] in refs:
            raise FileFormatError(f"{path}:{lineno}: duplicate reference id {obj['id']!r}")
        refs[obj["id"]] = obj["references"]
    return refs


def _score_block(score: rouge.RougeScore) -> dict:
    return {"p": score.precision, "r": score.recall, "f1": score.f1}


def cmd_evaluate(opts: dict) -> int:
    _require(opts, "summaries", "references", "corpus")
    tok_config = corpus.TokenizeConfig(lowercase=opts["lowercase"])
    raw_docs = dict(corpus.read_corpus(opts["corpus"], opts["format"]))
    summaries = _load_summary_lines(opts["summaries"])
    references = _load_references(opts["references"])

    lines = []
    totals = {"rouge_2": [0.0, 0.0, 0.0], "rouge_l": [0.0, 0.0, 0.0]}
    for record in summaries:
        doc_id = record["id"]
        if doc_id not in raw_docs:
            raise ValidationError(f"summary id {doc_id!r} not found in the corpus")
        if doc_id not in references:
            raise ValidationError(f"missing reference for document id {doc_id!r}")
        sentence_texts = raw_docs[doc_id]
        candidate: list[str] = []
        for idx in record["selected"]:
            if not isinstance(idx, int) or not 0 <= idx < len(sentence_texts):
                raise ValidationError(f"summary for {doc_id!r} selects bad sentence index {idx}")
            candidate.extend(corpus.tokenize(sentence_texts[idx], tok_config))
        ref_tokens = [corpus.tokenize(r, tok_config) for r in references[doc_id]]
        r2 = rouge.rouge_n(candidate, ref_tokens, 2)
        rl = rouge.rouge_l(candidate, ref_tokens)
        for key, score in (("rouge_2", r2), ("rouge_l", rl)):
            totals[key][0] += score.precision
            totals[key][1] += score.recall
            totals[key][2] += score.f1
        lines.append(
            json.dumps({"id": doc_id, "rouge_2": _score_block(r2), "rouge_l": _score_block(rl)})
        )
    n = len(summaries)
    macro = {
        key: {"p": totals[key][0] / n, "r": totals[key][1] / n, "f1": totals[key][2] / n}
        for key in ("rouge_2", "rouge_l")
    }
    lines.append(json.dumps({"macro_average": {**macro, "documents": n}}))
    report = "\n".join(lines) + "\n"
    if opts["out"] is not None:
        Path(opts["out"]).write_text(report, encoding="utf-8")
    else:
        sys.stdout.write(report)
    return 0


def cmd_inspect(opts: dict) -> int:
    _require(opts, "model", "vocab")
    model = dsg.load_model(opts["model"])
    vocab = corpus.load_vocab(opts["vocab"])
    if model.V != vocab.V:
        raise ValidationError(f"model V={model.V} does not match vocabulary V={vocab.V}")
    k = opts["k"]
    for h in range(model.H):
        pairs = dsg.top_words_per_dim(model, h, k)
        listing = " ".join(f"{vocab.words[i]}={p:.10g}" for i, p in pairs)
        print(f"dim {h}: {listing}")
    if opts["word"] is not None:
        word = opts["word"]
        wid = vocab.id_of(word)
        if wid < 0:
            raise ValidationError(f"word {word!r} not in vocabulary")
        dist = dsg.translation_distribution(model, wid)
        order = sorted(range(vocab.V), key=lambda i: (-dist[i], i))[:k]
        listing = " ".join(f"{vocab.words[i]}={dist[i]:.10g}" for i in order)
        print(f"word {word}: {listing}")
    return 0


def build_parser() -> _Parser:
    parser = _Parser(prog="dsgsum", description=__doc__)
    common = _Parser(add_help=False)
    common.add_argument("--config", help="JSON config file")
    common.add_argument("--seed", type=int, help="global random seed")
    sub = parser.add_subparsers(dest="command")

    p = sub.add_parser("build-cooc", parents=[common], help="build vocabulary and co-occurrence table")
    p.add_argument("--corpus")
    p.add_argument("--format", choices=("auto", "plain", "jsonl"))
    p.add_argument("--lowercase", action=argparse.BooleanOptionalAction)
    p.add_argument("--min-count", type=int)
    p.add_argument("--window", type=int)
    p.add_argument("--weighting", choices=corpus.WEIGHTINGS)
    p.add_argument("--out", help="output path prefix (.vocab and .cooc are written)")
    p.set_defaults(func=cmd_build_cooc)

    p = sub.add_parser("train", parents=[common], help="train dsg, sg, or glove")
    p.add_argument("method", choices=("dsg", "sg", "glove"))
    p.add_argument("--cooc")
    p.add_argument("--corpus")
    p.add_argument("--format", choices=("auto", "plain", "jsonl"))
    p.add_argument("--vocab")
    p.add_argument("--dim", type=int)
    p.add_argument("--window", type=int)
    p.add_argument("--epochs", type=int)
    p.add_argument("--learning-rate", type=float)
    p.add_argument("--max-iters", type=int)
    p.add_argument("--rel-tol", type=float)
    p.add_argument("--x-max", type=float)
    p.add_argument("--alpha", type=float)
    p.add_argument("--out")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("summarize", parents=[common], help="write extractive summaries")
    p.add_argument("--corpus")
    p.add_argument("--format", choices=("auto", "plain", "jsonl"))
    p.add_argument("--vocab")
    p.add_argument("--model", help="aspect model file (tblm or cosine scorer)")
    p.add_argument("--emb", help="dense embedding file (cosine scorer)")
    p.add_argument("--scorer", choices=summarizer.SCORERS)
    p.add_argument("--ratio", type=float)
    p.add_argument("--budget-unit", choices=summarizer.BUDGET_UNITS)
    p.add_argument("--theta", type=float, help="redundancy threshold")
    p.add_argument("--smoothing-lambda", type=float)
    p.add_argument("--normalize-scores", action=argparse.BooleanOptionalAction)
    p.add_argument("--out")
    p.set_defaults(func=cmd_summarize)

    p = sub.add_parser("evaluate", parents=[common], help="score summaries against references")
    p.add_argument("--summaries")
    p.add_argument("--references")
    p.add_argument("--corpus")
    p.add_argument("--format", choices=("auto", "plain", "jsonl"))
    p.add_argument("--lowercase", action=argparse.BooleanOptionalAction)
    p.add_argument("--out")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("inspect", parents=[common], help="print dimension and translation views")
    p.add_argument("--model")
    p.add_argument("--vocab")
    p.add_argument("-k", type=int)
    p.add_argument("--word")
    p.set_defaults(func=cmd_inspect)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if getattr(args, "command", None) is None:
            parser.print_usage(sys.stderr)
            return 1
        opts = _resolve(args.command, args)
        return args.func(opts)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
