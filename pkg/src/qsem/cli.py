"""Command-line workbench over the library.

Every subcommand is a thin wrapper: it parses arguments, calls the library
and prints the result as TSV/CSV on stdout, with diagnostics on stderr.
Outputs are deterministic for identical inputs.

Exit codes: 0 success, 2 usage or configuration error, 3 data error
(unknown term, malformed query, corrupt file), 4 numeric failure.  All
errors print one line ``ERROR <code>: <message>`` to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import compose, corpus, harmonics, qlm, retrieval
from .density import DensityMatrix, hyponymy_grade
from .errors import (
    ConfigError,
    DataFormatError,
    ParseError,
    QsemError,
    UnknownTermError,
)

__all__ = ["run", "main"]

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DATA = 3
EXIT_NUMERIC = 4

CONFIG_DEFAULTS = {
    "weighting": "count",
    "min_df": 1,
    "smoothing": 0.5,
    "seed": 0,
    "top_k": 10,
    "tolerances": {"numeric": 1e-10, "convergence": 1e-9},
}


class UsageError(QsemError, ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    """ArgumentParser that raises instead of exiting, for uniform errors."""

    def error(self, message):
        raise UsageError(message)


def _fmt(x) -> str:
    if isinstance(x, complex) or np.iscomplexobj(x):
        return repr(complex(x))
    return repr(float(x))


def load_config(path: str | None) -> dict:
    """Built-in defaults, overridden by the JSON config file if given."""
    cfg = {k: (dict(v) if isinstance(v, dict) else v)
           for k, v in CONFIG_DEFAULTS.items()}
    if path is None:
        return cfg
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config file: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError("config must be a JSON object")
    for key, value in data.items():
        if key not in CONFIG_DEFAULTS:
            raise ConfigError(f"unknown config key {key!r}")
        if key == "tolerances":
            if not isinstance(value, dict):
                raise ConfigError("tolerances must be an object")
            for tkey, tval in value.items():
                if tkey not in CONFIG_DEFAULTS["tolerances"]:
                    raise ConfigError(f"unknown tolerance key {tkey!r}")
                tval = float(tval)
                if tval <= 0:
                    raise ConfigError(f"tolerance {tkey!r} must be positive")
                cfg["tolerances"][tkey] = tval
        else:
            cfg[key] = value
    if cfg["weighting"] not in corpus.WEIGHTINGS:
        raise ConfigError(f"weighting must be one of {corpus.WEIGHTINGS}")
    if not isinstance(cfg["min_df"], int) or cfg["min_df"] < 1:
        raise ConfigError("min_df must be an integer >= 1")
    if not 0.0 <= float(cfg["smoothing"]) <= 1.0:
        raise ConfigError("smoothing must lie in [0, 1]")
    if not isinstance(cfg["seed"], int) or cfg["seed"] < 0:
        raise ConfigError("seed must be a non-negative integer")
    if not isinstance(cfg["top_k"], int) or cfg["top_k"] < 1:
        raise ConfigError("top_k must be an integer >= 1")
    return cfg


def _build_parser() -> _Parser:
    parser = _Parser(prog="qsem", description=__doc__)
    parser.add_argument("--config", help="JSON config file (defaults < config < flags)")
    sub = parser.add_subparsers(dest="command", required=True)

    p_index = sub.add_parser("index", help="index management")
    index_sub = p_index.add_subparsers(dest="index_command", required=True)
    p_build = index_sub.add_parser("build", help="build an index from a corpus")
    p_build.add_argument("--corpus", required=True)
    p_build.add_argument("--format", choices=("dir", "tsv"), default="tsv")
    p_build.add_argument("--weighting", choices=corpus.WEIGHTINGS)
    p_build.add_argument("--min-df", type=int, dest="min_df")
    p_build.add_argument("--out", required=True)

    p_search = sub.add_parser("search", help="ranked retrieval with optional NOT")
    p_search.add_argument("--index", required=True)
    p_search.add_argument("--query", required=True)
    p_search.add_argument("--top-k", type=int, dest="top_k")
    p_search.add_argument("--run-id", default="q1")

    p_eval = sub.add_parser("eval", help="evaluation")
    eval_sub = p_eval.add_subparsers(dest="eval_command", required=True)
    p_map = eval_sub.add_parser("map", help="mean average precision of a run")
    p_map.add_argument("--run", required=True)
    p_map.add_argument("--qrels", required=True)

    p_qlm = sub.add_parser("qlm", help="density language models")
    qlm_sub = p_qlm.add_subparsers(dest="qlm_command", required=True)
    p_train = qlm_sub.add_parser("train", help="estimate a model")
    p_train.add_argument("--index", required=True)
    src = p_train.add_mutually_exclusive_group(required=True)
    src.add_argument("--doc", help="document id in the index")
    src.add_argument("--text", help="raw text to model instead of a document")
    p_train.add_argument("--phrases", help="phrases file (one phrase per line)")
    p_train.add_argument("--max-iters", type=int, default=500, dest="max_iters")
    p_train.add_argument("--tol", type=float)
    p_train.add_argument("--out", required=True)
    p_rank = qlm_sub.add_parser("rank", help="rank document models by divergence")
    p_rank.add_argument("--query-model", required=True, dest="query_model")
    p_rank.add_argument("--doc-models", required=True, nargs="+", dest="doc_models")
    p_rank.add_argument("--smoothing", type=float)

    p_hyp = sub.add_parser("hyponymy", help="graded containment of densities")
    p_hyp.add_argument("--densities", required=True)
    p_hyp.add_argument("--a", required=True)
    p_hyp.add_argument("--b", required=True)

    p_compose = sub.add_parser("compose", help="tensor composition")
    compose_sub = p_compose.add_subparsers(dest="compose_command", required=True)
    p_verb = compose_sub.add_parser("verb", help="verb tensor from triples")
    p_verb.add_argument("--triples", required=True)
    p_verb.add_argument("--vectors", required=True)
    p_verb.add_argument("--verb", required=True)
    p_sentence = compose_sub.add_parser("sentence", help="compose a sentence tensor")
    p_sentence.add_argument("--triples", required=True)
    p_sentence.add_argument("--vectors", required=True)
    p_sentence.add_argument("--subj", required=True)
    p_sentence.add_argument("--verb", required=True)
    p_sentence.add_argument("--obj", required=True)

    for name in ("bind", "unbind"):
        p_bind = sub.add_parser(name, help=f"{name} vectors")
        p_bind.add_argument("--vectors", required=True)
        p_bind.add_argument("--mode", choices=("conv", "phase"), default="conv")
        if name == "bind":
            p_bind.add_argument("--a", required=True)
            p_bind.add_argument("--b", required=True)
        else:
            p_bind.add_argument("--c", required=True)
            p_bind.add_argument("--a", required=True)

    p_fourier = sub.add_parser("fourier", help="harmonic decomposition demo")
    p_fourier.add_argument("--wave", choices=("square", "sine", "cosine", "constant"),
                           default="square")
    p_fourier.add_argument("--harmonics", type=int, required=True)
    p_fourier.add_argument("--samples", type=int, default=256)
    p_fourier.add_argument("--quad-points", type=int, default=2 ** 14,
                           dest="quad_points")
    p_fourier.add_argument("--order", type=int, default=1)
    p_fourier.add_argument("--value", type=float, default=1.0)
    p_fourier.add_argument("--out", default="-")
    return parser


def _read_vectors_file(path: str) -> dict[str, np.ndarray]:
    """Lines ``name<TAB>c1,c2,...``; coordinates parse as float or complex."""
    vectors: dict[str, np.ndarray] = {}
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise DataFormatError(f"cannot read vectors file: {exc}") from exc
    for lineno, line in enumerate(lines, start=1):
        if not line:
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise DataFormatError(f"vectors line {lineno}: expected 'name<TAB>coords'")
        name, coords = parts
        if name in vectors:
            raise DataFormatError(f"vectors line {lineno}: duplicate name {name!r}")
        values = []
        for chunk in coords.split(","):
            chunk = chunk.strip()
            try:
                values.append(complex(chunk) if "j" in chunk else float(chunk))
            except ValueError as exc:
                raise DataFormatError(
                    f"vectors line {lineno}: bad coordinate {chunk!r}") from exc
        vectors[name] = np.asarray(values)
    return vectors


def _read_triples_file(path: str) -> list[tuple[str, str, str]]:
    """Lines ``subject<TAB>verb<TAB>object``."""
    triples = []
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise DataFormatError(f"cannot read triples file: {exc}") from exc
    for lineno, line in enumerate(lines, start=1):
        if not line:
            continue
        parts = line.split("\t")
        if len(parts) != 3:
            raise DataFormatError(
                f"triples line {lineno}: expected 'subject<TAB>verb<TAB>object'")
        triples.append((parts[0], parts[1], parts[2]))
    return triples


def _read_phrases_file(path: str) -> list[list[tuple[str, float]]]:
    """One phrase per line; tokens are ``term`` or ``term:weight``."""
    phrases = []
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise DataFormatError(f"cannot read phrases file: {exc}") from exc
    for line in lines:
        tokens = line.split()
        if not tokens:
            continue
        pairs = []
        for token in tokens:
            if ":" in token:
                term, _, raw = token.rpartition(":")
                try:
                    weight = float(raw)
                except ValueError:
                    term, weight = token, 1.0
            else:
                term, weight = token, 1.0
            pairs.append((term.lower(), weight))
        phrases.append(pairs)
    return phrases


def _read_densities_file(path: str) -> dict[str, DensityMatrix]:
    """JSON object mapping names to square row-major matrices."""
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise DataFormatError(f"cannot read densities file: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise DataFormatError(f"densities file is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise DataFormatError("densities file must be a JSON object")
    out = {}
    for name, rows in data.items():
        try:
            out[name] = DensityMatrix(np.asarray(rows, dtype=float))
        except (QsemError, ValueError) as exc:
            raise DataFormatError(f"density {name!r} is invalid: {exc}") from exc
    return out


def _cmd_index_build(args, cfg) -> int:
    weighting = args.weighting or cfg["weighting"]
    min_df = args.min_df if args.min_df is not None else cfg["min_df"]
    if min_df < 1:
        raise UsageError("--min-df must be >= 1")
    c = corpus.ingest(args.corpus, args.format)
    ix = corpus.build_index(c, weighting=weighting, min_df=min_df)
    corpus.save_index(ix, args.out)
    sys.stdout.write(f"{args.out}\t{len(ix.vocab)}\t{len(ix.doc_ids)}\n")
    return EXIT_OK


def _cmd_search(args, cfg) -> int:
    top_k = args.top_k if args.top_k is not None else cfg["top_k"]
    if top_k < 1:
        raise UsageError("--top-k must be >= 1")
    ix = corpus.load_index(args.index)
    ast = retrieval.parse_query(args.query)
    ranking = retrieval.search(ix, ast, top_k)
    sys.stdout.write(retrieval.format_run(args.run_id, ranking))
    return EXIT_OK


def _cmd_eval_map(args, cfg) -> int:
    run = retrieval.read_run(args.run)
    qrels = retrieval.read_qrels(args.qrels)
    pairs = []
    for qid, ranking in run.items():
        if qid not in qrels:
            raise DataFormatError(f"no relevance judgments for query {qid!r}")
        pairs.append((ranking, qrels[qid]))
    sys.stdout.write(f"{_fmt(retrieval.map_eval(pairs))}\n")
    return EXIT_OK


def _training_observations(ix, args) -> list[qlm.TermProjector]:
    vocab = ix.vocab
    if args.doc is not None:
        if ix.weighting != "count":
            raise DataFormatError(
                "qlm train --doc needs a count-weighted index (term frequencies)")
        if args.doc not in ix.doc_ids:
            raise UnknownTermError(f"document not in index: {args.doc!r}")
        d = ix.doc_ids.index(args.doc)
        occurrences = []
        for t, dd, w in ix.entries:
            if dd == d:
                occurrences.extend([vocab[t]] * int(round(w)))
        tokens = sorted(occurrences)
    else:
        tokens = corpus.tokenize(args.text)
    if not tokens:
        raise DataFormatError("no tokens to train on")
    observations = [qlm.phrase_projector([(t, 1.0)], vocab) for t in tokens]
    if args.phrases:
        present = set(tokens)
        for pairs in _read_phrases_file(args.phrases):
            if all(term in present for term, _ in pairs):
                observations.append(qlm.phrase_projector(pairs, vocab))
    return observations


def _cmd_qlm_train(args, cfg) -> int:
    tol = args.tol if args.tol is not None else cfg["tolerances"]["convergence"]
    if args.max_iters < 1:
        raise UsageError("--max-iters must be >= 1")
    ix = corpus.load_index(args.index)
    observations = _training_observations(ix, args)
    model = qlm.estimate_rho(observations, max_iters=args.max_iters, tol=tol)
    qlm.save_model(model, args.out)
    iterations = len(model.log_likelihood_trace) - 1
    final = model.log_likelihood_trace[-1]
    sys.stdout.write(f"{args.out}\t{iterations}\t{_fmt(final)}\n")
    return EXIT_OK


def _cmd_qlm_rank(args, cfg) -> int:
    lam = args.smoothing if args.smoothing is not None else cfg["smoothing"]
    if not 0.0 <= lam <= 1.0:
        raise UsageError("--smoothing must lie in [0, 1]")
    query = qlm.load_model(args.query_model)
    docs = [(path, qlm.load_model(path)) for path in args.doc_models]
    _, embedded = qlm.align_models([query] + [m for _, m in docs])
    rho_q, rho_docs = embedded[0], embedded[1:]
    collection = DensityMatrix(
        np.mean([d.matrix for d in rho_docs], axis=0))
    scored = []
    for (path, _), rho_d in zip(docs, rho_docs):
        smoothed = qlm.smooth(rho_d, collection, lam)
        scored.append((qlm.relative_entropy(rho_q, smoothed), path))
    scored.sort(key=lambda item: (item[0], item[1]))
    for divergence, path in scored:
        sys.stdout.write(f"{path}\t{_fmt(divergence)}\n")
    return EXIT_OK


def _cmd_hyponymy(args, cfg) -> int:
    densities = _read_densities_file(args.densities)
    for name in (args.a, args.b):
        if name not in densities:
            raise UnknownTermError(f"density not in file: {name!r}")
    report = hyponymy_grade(densities[args.a], densities[args.b])
    trace_error = float(np.trace(report.error).real)
    sys.stdout.write(f"{_fmt(report.grade)}\t{_fmt(trace_error)}\n")
    return EXIT_OK


def _write_tensor(t: np.ndarray) -> None:
    for row in t:
        sys.stdout.write("\t".join(_fmt(x) for x in row) + "\n")


def _cmd_compose_verb(args, cfg) -> int:
    vectors = _read_vectors_file(args.vectors)
    triples = _read_triples_file(args.triples)
    pairs = [(s, o) for s, v, o in triples if v == args.verb]
    if not pairs:
        raise DataFormatError(f"no triples for verb {args.verb!r}")
    _write_tensor(compose.verb_tensor(pairs, vectors))
    return EXIT_OK


def _cmd_compose_sentence(args, cfg) -> int:
    vectors = _read_vectors_file(args.vectors)
    triples = _read_triples_file(args.triples)
    pairs = [(s, o) for s, v, o in triples if v == args.verb]
    if not pairs:
        raise DataFormatError(f"no triples for verb {args.verb!r}")
    for name in (args.subj, args.obj):
        if name not in vectors:
            raise UnknownTermError(f"unknown noun: {name!r}")
    verb = compose.verb_tensor(pairs, vectors)
    sentence = compose.compose_sentence(vectors[args.subj], verb, vectors[args.obj])
    _write_tensor(sentence)
    return EXIT_OK


def _cmd_bind(args, cfg, *, invert: bool) -> int:
    vectors = _read_vectors_file(args.vectors)
    mode = compose.BindingMode(args.mode)
    names = (args.c, args.a) if invert else (args.a, args.b)
    for name in names:
        if name not in vectors:
            raise UnknownTermError(f"vector not in file: {name!r}")
    op = compose.unbind if invert else compose.bind
    result = op(vectors[names[0]], vectors[names[1]], mode)
    sys.stdout.write(",".join(_fmt(x) for x in result) + "\n")
    return EXIT_OK


def _cmd_fourier(args, cfg) -> int:
    if args.harmonics < 1:
        raise UsageError("--harmonics must be >= 1")
    if args.samples < 2:
        raise UsageError("--samples must be >= 2")
    if args.wave == "square":
        f = harmonics.SquareWave()
    elif args.wave == "sine":
        f = harmonics.Sine(args.order)
    elif args.wave == "cosine":
        f = harmonics.Cosine(args.order)
    else:
        f = harmonics.Constant(args.value)
    a, b = harmonics.fourier_coeffs(f, args.harmonics, args.quad_points)
    xs = np.linspace(harmonics.DOMAIN[0], harmonics.DOMAIN[1], args.samples)
    fx = np.asarray(f(xs), dtype=float)
    ps = harmonics.partial_sum(a, b, xs)
    out = ["# sine_coeffs," + ",".join(_fmt(x) for x in a),
           "# cosine_coeffs," + ",".join(_fmt(x) for x in b),
           "x,f,partial_sum"]
    out.extend(f"{_fmt(x)},{_fmt(y)},{_fmt(p)}" for x, y, p in zip(xs, fx, ps))
    text = "\n".join(out) + "\n"
    if args.out == "-":
        sys.stdout.write(text)
    else:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    return EXIT_OK


def run(argv=None) -> int:
    """Entry point used by tests and by :func:`main`; returns the exit code."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        cfg = load_config(args.config)
        if args.command == "index":
            return _cmd_index_build(args, cfg)
        if args.command == "search":
            return _cmd_search(args, cfg)
        if args.command == "eval":
            return _cmd_eval_map(args, cfg)
        if args.command == "qlm":
            if args.qlm_command == "train":
                return _cmd_qlm_train(args, cfg)
            return _cmd_qlm_rank(args, cfg)
        if args.command == "hyponymy":
            return _cmd_hyponymy(args, cfg)
        if args.command == "compose":
            if args.compose_command == "verb":
                return _cmd_compose_verb(args, cfg)
            return _cmd_compose_sentence(args, cfg)
        if args.command == "bind":
            return _cmd_bind(args, cfg, invert=False)
        if args.command == "unbind":
            return _cmd_bind(args, cfg, invert=True)
        if args.command == "fourier":
            return _cmd_fourier(args, cfg)
        raise UsageError(f"unknown command {args.command!r}")
    except (UsageError, ConfigError) as exc:
        sys.stderr.write(f"ERROR {EXIT_USAGE}: {exc}\n")
        return EXIT_USAGE
    except (ParseError, UnknownTermError, DataFormatError) as exc:
        sys.stderr.write(f"ERROR {EXIT_DATA}: {exc}\n")
        return EXIT_DATA
    except QsemError as exc:
        sys.stderr.write(f"ERROR {EXIT_NUMERIC}: {exc}\n")
        return EXIT_NUMERIC


def main() -> None:
    sys.exit(run())
