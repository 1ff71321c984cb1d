"""``infotypes`` command-line interface."""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys

from ..corpus.agreement import cohen_kappa
from ..corpus.dataset import filter_for_training
from ..corpus.io import dumps_thread, import_labeled_csv, load_corpus, loads_thread, save_corpus
from ..corpus.types import InfoType
from ..errors import DataError, ValidationError
from ..eval.configs import ExperimentConfig
from ..eval.experiment import run_experiment, train_final_model
from ..models.persistence import EXTENSION, load_model, save_model
from ..preprocess import resources
from ..preprocess.pipeline import segment_thread
from .classify import classify_thread
from .report import gold_labels, render_report

logger = logging.getLogger("infotypes")

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_RUNTIME = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}\n{self.format_usage()}")


def _load_threads(path):
    if str(path).lower().endswith(".csv"):
        return import_labeled_csv(path)
    return load_corpus(path)


def _load_thread(path):
    """A single thread stored as one JSON object or as a one-line JSONL corpus."""
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    try:
        json.loads(text)
    except json.JSONDecodeError:
        threads = load_corpus(path)
        if len(threads) != 1:
            raise ValidationError(f"{path}: expected one thread, found {len(threads)}") from None
        return threads[0]
    return loads_thread(text)


def _write(text: str, out) -> None:
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


def _read_labels(path) -> list:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    if text.lstrip().startswith("["):
        try:
            values = [str(v) for v in json.loads(text)]
        except json.JSONDecodeError as exc:
            raise ValidationError(f"{path}: invalid JSON ({exc.msg})") from None
    else:
        values = [line.strip() for line in text.splitlines() if line.strip()]
    try:
        return [InfoType.parse(v) for v in values]
    except ValidationError:
        return values


def cmd_ingest(args) -> int:
    from ..corpus.github import fetch_thread

    token = os.environ.get(args.token_env) if args.token_env else None
    thread = fetch_thread(args.owner, args.repo, args.issue, auth_token=token)
    _write(dumps_thread(thread) + "\n", args.out)
    return EXIT_OK


def cmd_preprocess(args) -> int:
    threads = [segment_thread(t) for t in _load_threads(args.corpus)]
    if args.out in (None, "-"):
        sys.stdout.write("".join(dumps_thread(t) + "\n" for t in threads))
    else:
        save_corpus(threads, args.out)
    logger.info("segmented %d threads into %d sentences", len(threads), sum(t.n_sentences for t in threads))
    return EXIT_OK


def cmd_train(args) -> int:
    config = ExperimentConfig.parse(args.config)
    dataset = filter_for_training(segment_thread(t) for t in _load_threads(args.corpus))
    bundle = train_final_model(dataset, config, seed=args.seed, n_jobs=args.n_jobs)
    out = args.out_model
    if not out.endswith(EXTENSION):
        logger.warning("model file %s does not end in %s", out, EXTENSION)
    save_model(bundle, None, None, out)
    logger.info("trained %s with %s on %d sentences", config.id, bundle.hyperparameters, len(dataset))
    return EXIT_OK


def cmd_evaluate(args) -> int:
    dataset = filter_for_training(segment_thread(t) for t in _load_threads(args.corpus))
    config = None if args.all else ExperimentConfig.parse(args.config)
    result = run_experiment(dataset, args.scenario, config, seed=args.seed, n_jobs=args.n_jobs)
    results = {config.id: result} if config is not None else result
    failed = [cid for cid, r in results.items() if isinstance(r, str)]
    if args.json:
        payload = {cid: ({"error": r} if isinstance(r, str) else r.to_dict()) for cid, r in results.items()}
        _write(json.dumps(payload, indent=2, sort_keys=True) + "\n", args.out)
    else:
        blocks = [f"{cid}: FAILED ({r})" if isinstance(r, str) else r.format_table() for cid, r in results.items()]
        _write("\n\n".join(blocks) + "\n", args.out)
    return EXIT_RUNTIME if failed and len(failed) == len(results) else EXIT_OK


def _label_name(label) -> str:
    return label.name if isinstance(label, InfoType) else str(label)


def cmd_predict(args) -> int:
    bundle = load_model(args.model)
    thread = segment_thread(_load_thread(args.thread))
    texts = {s.id: s.text_raw for _, s in thread.sentences()}
    rows = [
        {
            "id": sid,
            "text": texts[sid],
            "label": _label_name(label),
            "scores": {_label_name(k): v for k, v in scores.items()},
        }
        for sid, label, scores in classify_thread(bundle, thread)
    ]
    _write(json.dumps({"thread": thread.key, "predictions": rows}, indent=2, ensure_ascii=False) + "\n", args.out)
    return EXIT_OK


def cmd_report(args) -> int:
    thread = _load_thread(args.thread)
    if args.model:
        thread = segment_thread(thread)
        labels = {sid: label for sid, label, _ in classify_thread(load_model(args.model), thread)}
    else:
        if not thread.is_segmented:
            raise ValidationError("gold labels need an annotated, segmented thread")
        labels = gold_labels(thread)
    render_report(thread, labels, args.out)
    return EXIT_OK


def cmd_kappa(args) -> int:
    a, b = _read_labels(args.a), _read_labels(args.b)
    if len(a) != len(b):
        raise ValidationError(f"label files differ in length ({len(a)} vs {len(b)})")
    try:
        kappa = cohen_kappa(a, b)
    except ValueError as exc:
        raise ValidationError(str(exc)) from None
    _write(f"{kappa:.4f}\n", args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    def shared(top: bool) -> argparse.ArgumentParser:
        # subcommands suppress defaults so options given before the command survive
        def default(value):
            return value if top else argparse.SUPPRESS

        p = _Parser(add_help=False)
        p.add_argument("--seed", type=int, default=default(42), help="master random seed (default 42)")
        p.add_argument("--abbreviations", default=default(None),
                       help="file of abbreviations that do not end a sentence")
        p.add_argument("--contractions", default=default(None), help="tab-separated contraction expansions")
        p.add_argument("-v", "--verbose", action="count", default=default(0), help="more logging on stderr")
        return p

    common = shared(top=False)
    parser = _Parser(prog="infotypes", description="Information type detection in issue threads.",
                     parents=[shared(top=True)])
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("ingest", parents=[common], help="download a GitHub issue thread")
    p.add_argument("--owner", required=True)
    p.add_argument("--repo", required=True)
    p.add_argument("--issue", type=int, required=True)
    p.add_argument("--token-env", default="GITHUB_TOKEN", help="environment variable holding the API token")
    p.add_argument("--out")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("preprocess", parents=[common], help="segment and tokenize a corpus")
    p.add_argument("--corpus", required=True, help="JSONL corpus or labeled CSV")
    p.add_argument("--out")
    p.set_defaults(func=cmd_preprocess)

    p = sub.add_parser("train", parents=[common], help="tune and train a model bundle")
    p.add_argument("--corpus", required=True)
    p.add_argument("--config", required=True, help="configuration id such as LTC or RCS")
    p.add_argument("--out-model", required=True)
    p.add_argument("--n-jobs", type=int, default=1)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("evaluate", parents=[common], help="nested cross-validation experiment")
    p.add_argument("--corpus", required=True)
    p.add_argument("--scenario", type=int, choices=(1, 2), required=True)
    which = p.add_mutually_exclusive_group(required=True)
    which.add_argument("--config")
    which.add_argument("--all", action="store_true")
    fmt = p.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true")
    fmt.add_argument("--table", action="store_true")
    p.add_argument("--n-jobs", type=int, default=1)
    p.add_argument("--out")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("predict", parents=[common], help="label every sentence of a thread")
    p.add_argument("--model", required=True)
    p.add_argument("--thread", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("report", parents=[common], help="render a thread as static HTML")
    p.add_argument("--thread", required=True)
    source = p.add_mutually_exclusive_group(required=True)
    source.add_argument("--labels", choices=("gold",))
    source.add_argument("--model")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("kappa", parents=[common], help="Cohen's kappa between two label files")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_kappa)
    return parser


def run_cli(argv=None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError(parser.format_help())
    except UsageError as exc:
        sys.stderr.write(str(exc))
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    logging.basicConfig(
        level=logging.WARNING - 10 * min(args.verbose, 2),
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    resources.configure(args.abbreviations, args.contractions)
    try:
        return args.func(args)
    except (DataError, OSError) as exc:
        logger.error("%s", exc)
        return EXIT_DATA
    except Exception as exc:  # anything else is a runtime failure
        logger.error("%s: %s", type(exc).__name__, exc)
        logger.debug("traceback", exc_info=True)
        return EXIT_RUNTIME
    finally:
        resources.reset()


def main() -> None:
    sys.exit(run_cli())
