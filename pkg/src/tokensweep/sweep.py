"""Configuration-space enumeration, the parallel resumable sweep runner, and
the reports built on its results (top-k flag tables, tokenizer expansion).

Results are JSON lines, one ``SweepRecord`` per line. Wall-clock times go to a
sidecar file ``<results>.timing.tsv`` so the results file itself depends only
on the corpus, the configurations and the seed, never on scheduling.
"""
from __future__ import annotations

import itertools
import json
import multiprocessing
import os
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, Sequence

from .classifier import TrainParams
from .config import FLAGS, TABLE_FLAGS, TOKENIZERS, Configuration
from .corpus import Document
from .evaluation import EvalResult, Featurizer, evaluate_folds, fit_score, stratified_folds
from .lexicon import LexiconSet

SPLIT_CV = "train-cv"
SPLIT_GOLD = "gold"
SPLITS = (SPLIT_CV, SPLIT_GOLD)

DEFAULT_KS = tuple(2 ** i for i in range(10))  # 1, 2, 4, ..., 512

FAST_ON = ("tfidf", "emo", "num", "usr", "lc")
FAST_FLAGS = {f: f in FAST_ON for f in FLAGS}

# reduced family: these two always, plus at least three of the rest
FAST16_ALWAYS = ("w1", "q3")
FAST16_MIN_EXTRA = 3


class SweepError(RuntimeError):
    pass


# --- the configuration space ------------------------------------------------------

def tokenizer_subsets(min_size: int = 1) -> list[tuple[str, ...]]:
    """Non-empty tokenizer subsets, sorted by their ``+``-joined id."""
    subsets = [c for r in range(max(min_size, 1), len(TOKENIZERS) + 1)
               for c in itertools.combinations(TOKENIZERS, r)]
    return sorted(subsets, key="+".join)


def reduced_subsets() -> list[tuple[str, ...]]:
    rest = [t for t in TOKENIZERS if t not in FAST16_ALWAYS]
    out = []
    for r in range(FAST16_MIN_EXTRA, len(rest) + 1):
        for extra in itertools.combinations(rest, r):
            out.append(tuple(t for t in TOKENIZERS if t in FAST16_ALWAYS or t in extra))
    return sorted(out, key="+".join)


def enumerate_space(tokenizer_mode: str = "single") -> Iterator[Configuration]:
    """Every flag assignment crossed with the tokenizer choices, in config-id order.

    ``single`` uses the 7 tokenizers one at a time; ``combos`` uses all 127
    non-empty subsets.
    """
    if tokenizer_mode == "single":
        toks = sorted(((t,) for t in TOKENIZERS), key="+".join)
    elif tokenizer_mode == "combos":
        toks = tokenizer_subsets()
    else:
        raise ValueError(f"tokenizer_mode must be 'single' or 'combos', got {tokenizer_mode!r}")
    for values in itertools.product((False, True), repeat=len(FLAGS)):
        flags = dict(zip(FLAGS, values))
        for t in toks:
            yield Configuration(tokenizers=t, **flags)


def enumerate_ids(tokenizer_mode: str = "single") -> Iterator[str]:
    """Config-id strings of ``enumerate_space`` without building Configuration objects."""
    if tokenizer_mode == "single":
        toks = sorted(TOKENIZERS)
    elif tokenizer_mode == "combos":
        toks = ["+".join(t) for t in tokenizer_subsets()]
    else:
        raise ValueError(f"tokenizer_mode must be 'single' or 'combos', got {tokenizer_mode!r}")
    for values in itertools.product("01", repeat=len(FLAGS)):
        head = ",".join(f"{f}={v}" for f, v in zip(FLAGS, values))
        for t in toks:
            yield f"{head};tok={t}"


def fast_preset(reduced: bool = False) -> list[Configuration]:
    subsets = reduced_subsets() if reduced else tokenizer_subsets()
    return [Configuration.from_flags(FAST_FLAGS, t) for t in subsets]


def preset(name: str) -> Iterable[Configuration]:
    if name == "fast":
        return fast_preset()
    if name == "fast16":
        return fast_preset(reduced=True)
    if name in ("single", "combos"):
        return enumerate_space(name)
    raise ValueError(f"unknown space {name!r} (expected single, combos, fast or fast16)")


SPACES = ("single", "combos", "fast", "fast16")


# --- records ------------------------------------------------------------------

@dataclass
class SweepRecord:
    config_id: str
    accuracy: float
    macro_f1: float
    per_fold: list[tuple[float, float]]
    split: str = SPLIT_CV
    confusion: list[list[int]] = field(default_factory=list)
    wall_time: float | None = None

    @property
    def config(self) -> Configuration:
        return Configuration.parse(self.config_id)

    @property
    def key(self) -> tuple[str, str]:
        return self.config_id, self.split

    def to_json(self) -> str:
        return json.dumps({
            "config_id": self.config_id, "split": self.split,
            "accuracy": self.accuracy, "macro_f1": self.macro_f1,
            "per_fold": [list(p) for p in self.per_fold],
            "confusion": self.confusion,
        }, sort_keys=True)

    @classmethod
    def from_json(cls, line: str) -> "SweepRecord":
        d = json.loads(line)
        rec = cls(d["config_id"], float(d["accuracy"]), float(d["macro_f1"]),
                  [tuple(p) for p in d.get("per_fold", [])], d.get("split", SPLIT_CV),
                  d.get("confusion", []))
        if rec.split not in SPLITS:
            raise ValueError(f"unknown split {rec.split!r}")
        Configuration.parse(rec.config_id)
        return rec


def timing_path(results_path) -> Path:
    p = Path(results_path)
    return p.with_name(p.name + ".timing.tsv")


def load_records(path, with_timing: bool = True) -> list[SweepRecord]:
    """Read a results file. A truncated final line (interrupted run) is ignored."""
    try:
        lines = Path(path).read_text(encoding="utf-8").split("\n")
    except (OSError, UnicodeDecodeError) as exc:
        raise SweepError(f"cannot read results {path}: {exc}") from exc
    records = []
    last = max((i for i, l in enumerate(lines) if l.strip()), default=-1)
    for i, line in enumerate(lines):
        if not line.strip():
            continue
        try:
            records.append(SweepRecord.from_json(line))
        except (ValueError, KeyError, TypeError) as exc:
            if i == last and not lines[i].endswith("}"):
                break
            raise SweepError(f"{path}:{i + 1}: bad record: {exc}") from None
    if with_timing:
        times = read_timing(timing_path(path))
        for r in records:
            r.wall_time = times.get(r.key)
    return records


def read_timing(path) -> dict[tuple[str, str], float]:
    times = {}
    p = Path(path)
    if not p.exists():
        return times
    for line in p.read_text(encoding="utf-8").splitlines():
        parts = line.split("\t")
        if len(parts) == 3:
            try:
                times[(parts[0], parts[1])] = float(parts[2])
            except ValueError:
                continue
    return times


def best_record(records: Sequence[SweepRecord]) -> SweepRecord:
    return sort_records(records)[0]


def sort_records(records: Iterable[SweepRecord]) -> list[SweepRecord]:
    """Accuracy descending, ties by config id ascending."""
    return sorted(records, key=lambda r: (-r.accuracy, r.config_id))


# --- top-k and expansion ------------------------------------------------------------

@dataclass(frozen=True)
class TopKRow:
    k: int
    n: int               # records actually used (< k when truncated)
    accuracy: float      # minimum accuracy among the n records
    macro_f1: float      # macro-F1 of the record attaining that minimum
    flag_probs: dict[str, float]
    tokenizer_probs: dict[str, float] = field(default_factory=dict)

    @property
    def truncated(self) -> bool:
        return self.n < self.k


def topk(records: Sequence[SweepRecord], ks: Sequence[int] = DEFAULT_KS,
         tokenizers: bool = False) -> list[TopKRow]:
    if not records:
        raise SweepError("no records to analyse")
    if any(k < 1 for k in ks) or list(ks) != sorted(ks):
        raise SweepError("ks must be positive and ascending")
    ranked = sort_records(records)
    configs = [r.config for r in ranked]
    rows = []
    for k in ks:
        n = min(k, len(ranked))
        top = configs[:n]
        last = ranked[n - 1]
        flag_probs = {f: sum(getattr(c, f) for c in top) / n for f in TABLE_FLAGS}
        tok_probs = ({t: sum(t in c.tokenizers for c in top) / n for t in TOKENIZERS}
                     if tokenizers else {})
        rows.append(TopKRow(k, n, last.accuracy, last.macro_f1, flag_probs, tok_probs))
    return rows


def format_topk(rows: Sequence[TopKRow], digits: int = 4) -> str:
    toks = list(rows[0].tokenizer_probs) if rows else []
    header = ["k", "accuracy", "macro_f1", *TABLE_FLAGS, *toks, "n", "truncated"]
    lines = ["\t".join(header)]
    for r in rows:
        cells = [str(r.k), f"{r.accuracy:.{digits}f}", f"{r.macro_f1:.{digits}f}"]
        cells += [f"{r.flag_probs[f]:.{digits}f}" for f in TABLE_FLAGS]
        cells += [f"{r.tokenizer_probs[t]:.{digits}f}" for t in toks]
        cells += [str(r.n), str(int(r.truncated))]
        lines.append("\t".join(cells))
    return "\n".join(lines) + "\n"


def expand_combinations(records: Sequence[SweepRecord], m: int = 32) -> Iterator[Configuration]:
    """Cross the flags of the ``m`` best records with all 127 tokenizer subsets."""
    if m < 1:
        raise SweepError("m must be >= 1")
    seen: set[str] = set()
    subsets = tokenizer_subsets()
    for rec in sort_records(records)[:m]:
        flags = rec.config.flags()
        for t in subsets:
            cfg = Configuration.from_flags(flags, t)
            if cfg.config_id not in seen:
                seen.add(cfg.config_id)
                yield cfg


def read_config_ids(path) -> list[Configuration]:
    """One config id per line; blank lines and ``#`` comments skipped."""
    out = []
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        try:
            out.append(Configuration.parse(line))
        except ValueError as exc:
            raise SweepError(f"{path}:{lineno}: {exc}") from None
    return out


# --- running ------------------------------------------------------------------

@dataclass
class SweepSummary:
    evaluated: int
    skipped: int
    total_records: int
    best: SweepRecord | None
    path: Path

    def line(self) -> str:
        s = f"{self.evaluated} evaluated, {self.skipped} skipped, {self.total_records} records"
        if self.best is not None:
            s += f"; best accuracy {self.best.accuracy:.4f} macro-F1 {self.best.macro_f1:.4f} {self.best.config_id}"
        return s


class _Task:
    """Everything a worker needs; built once per process."""

    def __init__(self, docs, test_docs, split, k, seed, epochs, lex, lemmas):
        self.split = split
        self.params = TrainParams(seed=seed) if epochs is None else TrainParams(epochs=epochs, seed=seed)
        all_docs = list(docs) + list(test_docs or [])
        self.n_train = len(docs)
        self.labels = [d.label for d in all_docs]
        self.features = Featurizer([d.text for d in all_docs], lex, lemmas)
        self.folds = stratified_folds(self.labels, k, seed) if split == SPLIT_CV else None

    def run(self, config_id: str) -> tuple[str, dict, float]:
        start = time.perf_counter()
        config = Configuration.parse(config_id)
        data = self.features.matrix(config)
        if self.split == SPLIT_CV:
            res = evaluate_folds(data, self.labels, self.folds, config.tfidf, self.params)
        else:
            n = self.n_train
            conf = fit_score(data, self.labels, list(range(n)), list(range(n, len(self.labels))),
                              config.tfidf, self.params)
            res = EvalResult.from_confusions([conf])
        return config_id, res.to_dict(), time.perf_counter() - start


_worker_task: _Task | None = None


def _init_worker(*args):
    global _worker_task
    _worker_task = _Task(*args)


def _run_in_worker(config_id: str):
    return _worker_task.run(config_id)


def _rewrite_sorted(path: Path, records: dict, times: dict) -> None:
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text("".join(records[key].to_json() + "\n" for key in sorted(records)), encoding="utf-8")
    os.replace(tmp, path)
    tpath = timing_path(path)
    ttmp = tpath.with_name(tpath.name + ".tmp")
    ttmp.write_text("".join(f"{cid}\t{split}\t{times[(cid, split)]:.6f}\n"
                            for cid, split in sorted(times) if (cid, split) in records),
                    encoding="utf-8")
    os.replace(ttmp, tpath)


def run_sweep(docs: Sequence[Document], configs: Iterable[Configuration], out,
              workers: int = 1, resume: bool = False, split: str = SPLIT_CV,
              test_docs: Sequence[Document] | None = None, k: int = 5, seed: int = 42,
              epochs: int | None = None, lex: LexiconSet | None = None,
              lemmas: dict | None = None, progress=None) -> SweepSummary:
    """Evaluate ``configs`` and append one record per configuration to ``out``.

    With ``resume`` the records already in ``out`` are kept and their
    configurations skipped; otherwise ``out`` is started afresh. When the run
    completes the file is rewritten sorted by config id.
    """
    if workers < 1:
        raise SweepError("workers must be >= 1")
    if split not in SPLITS:
        raise SweepError(f"split must be one of {SPLITS}")
    if split == SPLIT_GOLD and not test_docs:
        raise SweepError("gold split needs a non-empty test set")
    path = Path(out)
    existing: dict[tuple[str, str], SweepRecord] = {}
    times: dict[tuple[str, str], float] = {}
    if resume and path.exists():
        for r in load_records(path, with_timing=False):
            existing[r.key] = r
        times = read_timing(timing_path(path))

    pending, seen, skipped = [], set(), 0
    for cfg in configs:
        cid = cfg.config_id
        if cid in seen:
            continue
        seen.add(cid)
        if (cid, split) in existing:
            skipped += 1
        else:
            pending.append(cid)

    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        if not resume or not path.exists():
            path.write_text("", encoding="utf-8")
            timing_path(path).write_text("", encoding="utf-8")
        elif existing:
            # drop a possibly truncated tail before appending
            _rewrite_sorted(path, existing, times)
        sink = open(path, "a", encoding="utf-8")
        tsink = open(timing_path(path), "a", encoding="utf-8")
    except OSError as exc:
        raise SweepError(f"cannot write results to {path}: {exc}") from exc

    init_args = (list(docs), list(test_docs or []), split, k, seed, epochs, lex, lemmas)
    evaluated = 0
    try:
        if workers == 1 or len(pending) <= 1:
            task = _Task(*init_args)
            results = (task.run(cid) for cid in pending)
            pool = None
        else:
            pool = multiprocessing.get_context("fork" if os.name == "posix" else "spawn").Pool(
                workers, initializer=_init_worker, initargs=init_args)
            results = pool.imap(_run_in_worker, pending, chunksize=1)
        try:
            for cid, res, elapsed in results:
                rec = SweepRecord(cid, res["accuracy"], res["macro_f1"],
                                  [tuple(p) for p in res["per_fold"]], split, res["confusion"], elapsed)
                try:
                    sink.write(rec.to_json() + "\n")
                    sink.flush()
                    tsink.write(f"{cid}\t{split}\t{elapsed:.6f}\n")
                    tsink.flush()
                except OSError as exc:
                    raise SweepError(f"writing {path} failed after {evaluated} new records: {exc}") from exc
                existing[rec.key] = rec
                times[rec.key] = elapsed
                evaluated += 1
                if progress is not None:
                    progress(evaluated, len(pending), rec)
        finally:
            if pool is not None:
                pool.terminate()
                pool.join()
    finally:
        sink.close()
        tsink.close()

    try:
        _rewrite_sorted(path, existing, times)
    except OSError as exc:
        raise SweepError(f"cannot finalize {path}: {exc}") from exc
    in_split = [r for r in existing.values() if r.split == split]
    for r in in_split:
        r.wall_time = times.get(r.key)
    return SweepSummary(evaluated, skipped, len(existing),
                        best_record(in_split) if in_split else None, path)
