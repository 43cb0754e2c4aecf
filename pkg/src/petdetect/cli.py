"""Command-line entry point.

Subcommands: train, detect, evaluate, score-server-check. Configuration
precedence, lowest to highest: built-in defaults, `config.json` saved in
the models directory, a `--config` file, then explicit flags.

Exit codes: 0 success, 1 usage error, 2 I/O or data error, 3 scorer
protocol error.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys

from . import report as report_mod
from . import sentiment
from .corpus import FileCorpus, load_annotated, load_corpus, tokenize
from .errors import CorpusError, ProtocolError, TrainingError
from .pipeline import (
    CONFIG_SNAPSHOT,
    EvaluationOutcome,
    ModelBundle,
    Pipeline,
    PipelineConfig,
    evaluate,
    train_models,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_IO = 2
EXIT_PROTOCOL = 3


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on usage errors; remap to this tool's code 1."""

    def error(self, message: str) -> "argparse.NoReturn":  # type: ignore[name-defined]
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_common_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="JSON config file")
    parser.add_argument("--models-dir", help="directory of trained model files")
    parser.add_argument(
        "--scorer", choices=("lexicon", "remote"), help="sentiment backend"
    )
    parser.add_argument("--endpoint", help="remote scorer base URL")
    parser.add_argument("--seed", type=int, help="master RNG seed")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="petdetect", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p_train = sub.add_parser("train", help="train phrase and embedding models")
    _add_common_flags(p_train)
    p_train.add_argument("--corpus", required=True, help="plain-text corpus, one sentence per line")

    p_detect = sub.add_parser("detect", help="detect terms, one JSON object per sentence")
    _add_common_flags(p_detect)
    group = p_detect.add_mutually_exclusive_group(required=True)
    group.add_argument("--sentence", help="score a single sentence")
    group.add_argument("--corpus", help="file of sentences, one per line")
    p_detect.add_argument(
        "--shift-report",
        action="store_true",
        help="include per-replacement shift vectors in the output",
    )
    p_detect.add_argument("--out", help="write JSON lines here instead of stdout")

    p_eval = sub.add_parser("evaluate", help="score detection against an annotated corpus")
    _add_common_flags(p_eval)
    p_eval.add_argument("--corpus", required=True, help="annotated TSV: sentence<TAB>target")
    p_eval.add_argument(
        "--fuzzy",
        action="store_true",
        help="also report substring-match numbers (analysis only)",
    )
    p_eval.add_argument("--out-dir", help="write JSON/TSV/figure artifacts here")

    p_check = sub.add_parser("score-server-check", help="ping the remote scorer")
    p_check.add_argument("--config", help="JSON config file")
    p_check.add_argument("--models-dir", help="directory holding a saved config")
    p_check.add_argument("--endpoint", help="remote scorer base URL")

    return parser


def _read_config_file(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise CorpusError(f"cannot read config {path}: {exc}") from exc
    except ValueError as exc:
        raise CorpusError(f"malformed config {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise CorpusError(f"config {path} must be a JSON object")
    return data


def effective_config(args: argparse.Namespace) -> PipelineConfig:
    data: dict = {}
    models_dir = getattr(args, "models_dir", None)
    if models_dir:
        snapshot = os.path.join(models_dir, CONFIG_SNAPSHOT)
        if os.path.exists(snapshot):
            data.update(_read_config_file(snapshot))
    if getattr(args, "config", None):
        data.update(_read_config_file(args.config))
    try:
        cfg = PipelineConfig.from_dict(data) if data else PipelineConfig()
    except (TypeError, ValueError) as exc:
        raise CorpusError(f"invalid config: {exc}") from exc
    overrides: dict = {}
    if getattr(args, "scorer", None):
        overrides["scorer"] = args.scorer
    if getattr(args, "endpoint", None):
        overrides["endpoint"] = args.endpoint
    if getattr(args, "seed", None) is not None:
        overrides["rng_seed"] = args.seed
    if overrides:
        cfg = dataclasses.replace(cfg, **overrides)
    return cfg


def _require_models_dir(args: argparse.Namespace, parser: argparse.ArgumentParser) -> str:
    if not args.models_dir:
        parser.error("--models-dir is required")
    return args.models_dir


def cmd_train(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    models_dir = _require_models_dir(args, parser)
    cfg = effective_config(args)
    corpus = FileCorpus(args.corpus)
    bundle = train_models(corpus, cfg)
    bundle.save(models_dir)
    cfg.save(os.path.join(models_dir, CONFIG_SNAPSHOT))
    n_phrases = len(bundle.phraser_first.accepted_bigrams()) + len(
        bundle.phraser_second.accepted_bigrams()
    )
    print(
        f"trained: {len(bundle.embedding.vocab)} embedding vocab, "
        f"{n_phrases} accepted bigrams -> {models_dir}"
    )
    return EXIT_OK


def _emit_jsonl(records: list[dict], out_path: str | None) -> None:
    lines = [
        json.dumps(record, sort_keys=True, separators=(",", ":")) for record in records
    ]
    text = "".join(line + "\n" for line in lines)
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_detect(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    models_dir = _require_models_dir(args, parser)
    cfg = effective_config(args)
    pipeline = Pipeline(ModelBundle.load(models_dir), cfg)
    if args.sentence is not None:
        sentences = [tokenize(args.sentence)]
    else:
        sentences = list(load_corpus(args.corpus))
    detections = pipeline.detect_many(sentences)
    records = [d.to_dict(shift_report=args.shift_report) for d in detections]
    _emit_jsonl(records, args.out)
    return EXIT_OK


def _format_eval_table(outcome: EvaluationOutcome) -> str:
    lines = [f"{'stage':<14}{'candidates':>12}{'targets_retained':>18}"]
    for name, candidates, targets in outcome.stage.rows():
        lines.append(f"{name:<14}{candidates:>12}{targets:>18}")
    rep = outcome.report
    lines.append("")
    lines.append(
        f"sentences: {rep.n_sentences}   hits@1: {rep.hits_rank1}   "
        f"hits@2: {rep.hits_rank2}"
    )
    lines.append(
        f"success_rate: {rep.success_rate:.1%}   "
        f"avg_candidates: {rep.avg_candidates:.2f}   "
        f"random_baseline: {rep.random_baseline:.1%}"
    )
    if outcome.fuzzy_report is not None:
        frep = outcome.fuzzy_report
        lines.append(
            f"fuzzy (analysis only): success_rate {frep.success_rate:.1%}, "
            f"hits@1 {frep.hits_rank1}, hits@2 {frep.hits_rank2}"
        )
    return "\n".join(lines)


def cmd_evaluate(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    models_dir = _require_models_dir(args, parser)
    cfg = effective_config(args)
    pipeline = Pipeline(ModelBundle.load(models_dir), cfg)
    annotated = load_annotated(args.corpus)
    outcome = evaluate(pipeline, annotated, fuzzy=args.fuzzy)
    print(_format_eval_table(outcome))
    if args.out_dir:
        written = report_mod.write_report(outcome, args.out_dir)
        print(f"\nwrote {len(written)} report files to {args.out_dir}")
    return EXIT_OK


def cmd_server_check(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    cfg = effective_config(args)
    endpoint = args.endpoint or cfg.endpoint
    body = sentiment.probe_health(endpoint)
    model = body.get("model", "unknown")
    print(f"scorer at {endpoint} healthy (model: {model})")
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "train": cmd_train,
        "detect": cmd_detect,
        "evaluate": cmd_evaluate,
        "score-server-check": cmd_server_check,
    }
    try:
        return handlers[args.command](args, parser)
    except (CorpusError, TrainingError) as exc:
        print(f"petdetect: error: {exc}", file=sys.stderr)
        return EXIT_IO
    except OSError as exc:
        print(f"petdetect: error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ProtocolError as exc:
        print(f"petdetect: scorer error: {exc}", file=sys.stderr)
        return EXIT_PROTOCOL


if __name__ == "__main__":
    sys.exit(main())
