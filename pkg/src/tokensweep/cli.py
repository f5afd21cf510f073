"""Command-line interface: ``tokensweep <subcommand> ...``.

Exit codes: 0 success, 1 usage error, 2 data error.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import __version__
from .classifier import TrainingError, TrainParams, train
from .config import ConfigError, Configuration, parse_flag_fragment, parse_tokenizers
from .corpus import (CorpusError, format_corpus, gen_synthetic, heaps_fit, load_corpus,
                     split_train_test)
from .evaluation import (EvaluationError, Featurizer, cross_validate, evaluate_gold,
                         scores_from_confusion, confusion_matrix)
from .lexicon import LexiconError, data_dir, load_lemmas, load_lexicons
from .sweep import (DEFAULT_KS, SPACES, SPLIT_CV, SPLIT_GOLD, SweepError, expand_combinations,
                    format_topk, load_records, preset, read_config_ids, run_sweep, topk)
from .textnorm import normalize
from .tokenizers import tokenize_multi
from .vectorizer import VocabularyError, build_vocabulary, to_csr, vectorize_all

EXIT_OK, EXIT_USAGE, EXIT_DATA = 0, 1, 2

DATA_ERRORS = (CorpusError, LexiconError, SweepError, TrainingError, EvaluationError,
               VocabularyError, OSError)

MINI_CORPUS = "mini_corpus.tsv"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _default_corpus() -> Path:
    return data_dir() / MINI_CORPUS


def _config_from_args(args) -> Configuration:
    try:
        if getattr(args, "config", None):
            return Configuration.parse(args.config)
        flags = parse_flag_fragment(args.flags or "")
        return Configuration.from_flags(flags, parse_tokenizers(args.tokenizers))
    except ConfigError as exc:
        raise UsageError(str(exc)) from None


def _lexicons(args):
    lex = load_lexicons(args.lexicons)
    lemmas = load_lemmas(args.lemmas) if args.lemmas else load_lemmas()
    return lex, lemmas


def _add_config_args(p, tokenizers=True):
    p.add_argument("--flags", default="",
                   help="comma-separated flags, e.g. 'stem,del-d1,usr=1,neg' (bare name = on)")
    if tokenizers:
        p.add_argument("--tokenizers", default="w1",
                       help="'+'-joined tokenizers from w1,w2,q3..q7 (default: w1)")
        p.add_argument("--config", help="full config id; overrides --flags/--tokenizers")


def _add_lexicon_args(p):
    p.add_argument("--lexicons", help="directory with stopwords_es.txt, emoticons.tsv, "
                                      "abbreviations.tsv and skip_words.txt (default: bundled)")
    p.add_argument("--lemmas", help="form<TAB>lemma file (default: bundled)")


def _add_run_args(p):
    p.add_argument("--seed", type=int, default=42, help="seed for folds, splits and training (default: 42)")
    p.add_argument("--epochs", type=int, default=TrainParams().epochs, help="training epochs (default: 10)")
    p.add_argument("--folds", type=int, default=5, help="cross-validation folds (default: 5)")


def _add_split_args(p):
    p.add_argument("--split", choices=("cv", "gold"), default="cv",
                   help="cv: k-fold on the corpus; gold: train on the corpus, score on --test")
    p.add_argument("--test", help="gold-standard TSV; without it the corpus is split by --train-fraction")
    p.add_argument("--train-fraction", type=float, default=0.10,
                   help="training share when splitting the corpus for --split gold (default: 0.10)")


def _gold_sets(args, docs):
    if args.test:
        return docs, load_corpus(args.test)
    return split_train_test(docs, args.train_fraction, args.seed)


# --- subcommands ----------------------------------------------------------------

def cmd_transform(args) -> int:
    config = _config_from_args(args)
    lex, lemmas = _lexicons(args)
    out = sys.stdout
    for line in sys.stdin:
        out.write(normalize(line.rstrip("\n"), config, lex, lemmas) + "\n")
    return EXIT_OK


def cmd_tokenize(args) -> int:
    config = _config_from_args(args)
    lex, lemmas = _lexicons(args)
    for line in sys.stdin:
        bag = tokenize_multi(normalize(line.rstrip("\n"), config, lex, lemmas), config.tokenizers)
        sys.stdout.write(json.dumps(dict(sorted(bag.items())), ensure_ascii=False) + "\n")
    return EXIT_OK


def cmd_train(args) -> int:
    config = _config_from_args(args)
    lex, lemmas = _lexicons(args)
    docs = load_corpus(args.corpus)
    bags = Featurizer([d.text for d in docs], lex, lemmas).bags(config)
    labels = [d.label for d in docs]
    vocab = build_vocabulary(bags)
    vectors = vectorize_all(bags, vocab, config.tfidf)
    model = train(vectors, labels, len(vocab), TrainParams(epochs=args.epochs, seed=args.seed))
    pred = model.predict_many(to_csr(vectors, len(vocab)))
    acc, f1 = scores_from_confusion(confusion_matrix(labels, pred))
    if args.model:
        Path(args.model).write_text(model.to_json(), encoding="utf-8")
    if args.vocab:
        vocab.dump(args.vocab)
    print(json.dumps({"config_id": config.config_id, "documents": len(docs),
                      "vocabulary": len(vocab), "train_accuracy": acc, "train_macro_f1": f1}))
    return EXIT_OK


def cmd_eval(args) -> int:
    config = _config_from_args(args)
    lex, lemmas = _lexicons(args)
    docs = load_corpus(args.corpus)
    if args.split == "cv":
        res = cross_validate(docs, config, args.folds, args.seed, lex, lemmas, args.epochs)
    else:
        train_docs, test_docs = _gold_sets(args, docs)
        res = evaluate_gold(train_docs, test_docs, config, args.seed, lex, lemmas, args.epochs)
    print(json.dumps({"config_id": config.config_id, **res.to_dict()}))
    return EXIT_OK


def cmd_sweep(args) -> int:
    if args.configs:
        configs = read_config_ids(args.configs)
    else:
        try:
            configs = preset(args.space)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    lex, lemmas = _lexicons(args)
    docs = load_corpus(args.corpus)
    test_docs = None
    split = SPLIT_CV
    if args.split == "gold":
        docs, test_docs = _gold_sets(args, docs)
        split = SPLIT_GOLD

    def progress(done, total, rec):
        if args.verbose:
            print(f"[{done}/{total}] {rec.accuracy:.4f} {rec.config_id}", file=sys.stderr)

    summary = run_sweep(docs, configs, args.out, workers=args.workers, resume=args.resume,
                        split=split, test_docs=test_docs, k=args.folds, seed=args.seed,
                        epochs=args.epochs, lex=lex, lemmas=lemmas, progress=progress)
    print(summary.line())
    return EXIT_OK


def _parse_ks(text: str) -> list[int]:
    try:
        ks = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"--k expects comma-separated integers, got {text!r}") from None
    if not ks or any(k < 1 for k in ks) or ks != sorted(ks):
        raise UsageError("--k values must be positive and ascending")
    return ks


def _records(args):
    records = [r for r in load_records(args.results) if r.split == args.split]
    if not records:
        raise SweepError(f"no {args.split} records in {args.results}")
    return records


def cmd_topk(args) -> int:
    ks = _parse_ks(args.k)
    rows = topk(_records(args), ks, tokenizers=args.tokenizer_columns)
    sys.stdout.write(format_topk(rows, args.digits))
    return EXIT_OK


def cmd_expand(args) -> int:
    if args.top < 1:
        raise UsageError("--top must be >= 1")
    text = "".join(c.config_id + "\n" for c in expand_combinations(_records(args), args.top))
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_heaps(args) -> int:
    if args.interval < 1:
        raise UsageError("--interval must be >= 1")
    if args.text:
        texts = Path(args.text).read_text(encoding="utf-8").splitlines()
    else:
        texts = [d.text for d in load_corpus(args.corpus)]
    fit = heaps_fit(texts, args.interval)
    if args.points:
        Path(args.points).write_text("n\tV\n" + "".join(f"{n}\t{v}\n" for n, v in fit.points),
                                     encoding="utf-8")
    print(json.dumps({**fit.summary(), "points": len(fit.points)}))
    return EXIT_OK


def cmd_gen(args) -> int:
    if args.docs < 4:
        raise UsageError("--docs must be >= 4")
    docs = gen_synthetic(args.docs, vocab_size=args.vocab_size, zipf_s=args.zipf,
                         seed=args.seed, misspell_rate=args.misspell_rate)
    text = format_corpus(docs)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


# --- parser ---------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="tokensweep",
                     description="Text-representation search for Spanish short-text sentiment.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("transform", help="normalize stdin lines with a flag set")
    _add_config_args(p, tokenizers=False)
    _add_lexicon_args(p)
    p.set_defaults(func=cmd_transform, tokenizers="w1", config=None)

    p = sub.add_parser("tokenize", help="normalize and tokenize stdin lines; one JSON bag per line")
    _add_config_args(p)
    _add_lexicon_args(p)
    p.set_defaults(func=cmd_tokenize)

    p = sub.add_parser("train", help="train on a whole corpus and report training scores")
    p.add_argument("--corpus", default=str(_default_corpus()), help="corpus TSV (default: bundled mini-corpus)")
    _add_config_args(p)
    _add_lexicon_args(p)
    _add_run_args(p)
    p.add_argument("--model", help="write the model as JSON here")
    p.add_argument("--vocab", help="write the vocabulary as token<TAB>column<TAB>df here")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("eval", help="score one configuration by k-fold CV or on a gold set")
    p.add_argument("--corpus", default=str(_default_corpus()), help="corpus TSV (default: bundled mini-corpus)")
    _add_config_args(p)
    _add_lexicon_args(p)
    _add_run_args(p)
    _add_split_args(p)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("sweep", help="evaluate a configuration space and write JSON-lines results")
    p.add_argument("--corpus", default=str(_default_corpus()), help="corpus TSV (default: bundled mini-corpus)")
    space = p.add_mutually_exclusive_group()
    space.add_argument("--space", "--preset", dest="space", choices=SPACES, default="fast",
                       help="single: 7 x 2^15; combos: 127 x 2^15; fast: handcrafted flags x 127 "
                            "tokenizer sets; fast16: reduced 16-set family (default: fast)")
    space.add_argument("--configs", help="file with one config id per line (e.g. from 'expand')")
    p.add_argument("--workers", type=int, default=1, help="worker processes (default: 1)")
    p.add_argument("--out", required=True, help="results file (JSON lines)")
    p.add_argument("--resume", action="store_true", help="keep existing records and skip their configurations")
    p.add_argument("--verbose", action="store_true", help="print one progress line per configuration")
    _add_lexicon_args(p)
    _add_run_args(p)
    _add_split_args(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("topk", help="top-k flag-probability table from a results file")
    p.add_argument("--results", required=True, help="results file from 'sweep'")
    p.add_argument("--k", default=",".join(map(str, DEFAULT_KS)), help="ascending k list (default: 1,2,4,...,512)")
    p.add_argument("--split", choices=(SPLIT_CV, SPLIT_GOLD), default=SPLIT_CV,
                   help="which records to rank (default: train-cv)")
    p.add_argument("--tokenizer-columns", action="store_true", help="add one probability column per tokenizer")
    p.add_argument("--digits", type=int, default=4, help="decimals in the table (default: 4)")
    p.set_defaults(func=cmd_topk)

    p = sub.add_parser("expand", help="cross the best configurations with all 127 tokenizer sets")
    p.add_argument("--results", required=True, help="results file from a single-tokenizer sweep")
    p.add_argument("--top", type=int, default=32, help="number of best records to expand (default: 32)")
    p.add_argument("--split", choices=(SPLIT_CV, SPLIT_GOLD), default=SPLIT_CV,
                   help="which records to rank (default: train-cv)")
    p.add_argument("--out", help="write config ids here instead of stdout")
    p.set_defaults(func=cmd_expand)

    p = sub.add_parser("heaps", help="fit Heaps' law V = k n^alpha to a corpus")
    src = p.add_mutually_exclusive_group()
    src.add_argument("--corpus", default=str(_default_corpus()), help="corpus TSV (default: bundled mini-corpus)")
    src.add_argument("--text", help="plain-text file, one message per line")
    p.add_argument("--interval", type=int, default=100, help="tokens between sample points (default: 100)")
    p.add_argument("--points", help="write the (n, V) points as TSV here")
    p.set_defaults(func=cmd_heaps)

    p = sub.add_parser("gen", help="write a synthetic labeled corpus")
    p.add_argument("--docs", type=int, default=400, help="number of documents (default: 400)")
    p.add_argument("--seed", type=int, default=42, help="random seed (default: 42)")
    p.add_argument("--vocab-size", type=int, default=200, help="background vocabulary size (default: 200)")
    p.add_argument("--zipf", type=float, default=1.0, help="Zipf exponent of the background words (default: 1.0)")
    p.add_argument("--misspell-rate", type=float, default=0.0,
                   help="fraction of class keywords given one random typo (default: 0)")
    p.add_argument("--out", help="write here instead of stdout")
    p.set_defaults(func=cmd_gen)
    return parser


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"tokensweep {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DATA_ERRORS as exc:
        print(f"tokensweep {args.command}: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
