"""Stratified k-fold cross-validation, train/test evaluation and the two
scores used to rank configurations (accuracy and macro-F1 over the 4 classes).
"""
from __future__ import annotations

import json
from collections import Counter, OrderedDict
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .classifier import CLASSES, TrainParams, train
from .config import Configuration
from .corpus import Document
from .lexicon import LexiconSet, load_lexicons
from .textnorm import normalize
from .tokenizers import tag, tokenize, tokenize_multi
from .vectorizer import BagMatrix, build_vocabulary, to_csr, vectorize_all


class EvaluationError(ValueError):
    pass


def _check_lengths(gold: Sequence, pred: Sequence) -> None:
    if len(gold) != len(pred):
        raise EvaluationError(f"length mismatch: {len(gold)} gold vs {len(pred)} predicted")
    if not gold:
        raise EvaluationError("cannot score an empty prediction list")


def confusion_matrix(gold: Sequence[str], pred: Sequence[str],
                     classes: Sequence[str] = CLASSES) -> np.ndarray:
    """Rows are gold labels, columns predicted labels."""
    pos = {c: i for i, c in enumerate(classes)}
    m = np.zeros((len(classes), len(classes)), dtype=np.int64)
    for g, p in zip(gold, pred):
        m[pos[g], pos[p]] += 1
    return m


def scores_from_confusion(conf: np.ndarray) -> tuple[float, float]:
    total = conf.sum()
    acc = float(np.trace(conf) / total) if total else 0.0
    tp = np.diag(conf).astype(np.float64)
    # F1 = 2tp / (2tp + fp + fn); defined as 0 when the denominator vanishes
    denom = conf.sum(axis=0) + conf.sum(axis=1)
    f1 = np.divide(2 * tp, denom, out=np.zeros_like(tp), where=denom > 0)
    return acc, float(f1.mean())


def accuracy(gold: Sequence[str], pred: Sequence[str]) -> float:
    _check_lengths(gold, pred)
    return sum(g == p for g, p in zip(gold, pred)) / len(gold)


def macro_f1(gold: Sequence[str], pred: Sequence[str], classes: Sequence[str] = CLASSES) -> float:
    _check_lengths(gold, pred)
    unknown = (set(gold) | set(pred)).difference(classes)
    if unknown:
        raise EvaluationError(f"label(s) outside the class set: {', '.join(sorted(map(str, unknown)))}")
    return scores_from_confusion(confusion_matrix(gold, pred, classes))[1]


@dataclass
class EvalResult:
    accuracy: float
    macro_f1: float
    confusion: np.ndarray
    per_fold: list[tuple[float, float]] = field(default_factory=list)

    @classmethod
    def from_confusions(cls, confusions: Sequence[np.ndarray]) -> "EvalResult":
        pooled = np.sum(confusions, axis=0)
        acc, f1 = scores_from_confusion(pooled)
        return cls(acc, f1, pooled, [scores_from_confusion(c) for c in confusions])

    def to_dict(self) -> dict:
        return {"accuracy": self.accuracy, "macro_f1": self.macro_f1,
                "confusion": self.confusion.tolist(),
                "per_fold": [list(p) for p in self.per_fold]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d: Mapping) -> "EvalResult":
        return cls(d["accuracy"], d["macro_f1"], np.array(d["confusion"], dtype=np.int64),
                   [tuple(p) for p in d["per_fold"]])


def stratified_folds(labels: Sequence[str], k: int, seed: int = 42) -> list[list[int]]:
    """Deal each class's shuffled members round-robin over the folds.

    The dealing position carries over from one class to the next, so fold
    sizes differ by at most one overall as well as per class.
    """
    n = len(labels)
    if k < 2:
        raise EvaluationError(f"k must be >= 2, got {k}")
    if k > n:
        raise EvaluationError(f"k = {k} exceeds the number of documents ({n})")
    by_class: dict[str, list[int]] = {}
    for i, lab in enumerate(labels):
        by_class.setdefault(lab, []).append(i)
    order = sorted(by_class, key=lambda c: (CLASSES.index(c) if c in CLASSES else len(CLASSES), str(c)))
    rng = np.random.default_rng(seed)
    folds: list[list[int]] = [[] for _ in range(k)]
    offset = 0
    for c in order:
        members = rng.permutation(by_class[c])
        for j, idx in enumerate(members.tolist()):
            folds[(offset + j) % k].append(idx)
        offset = (offset + len(members)) % k
    return [sorted(f) for f in folds]


class Featurizer:
    """Turns documents into token bags for a configuration, caching the
    normalized text per distinct set of text flags and the bag per tokenizer.

    Only the ``max_keys`` most recently used flag sets are kept.
    """

    def __init__(self, texts: Sequence[str], lex: LexiconSet | None = None,
                 lemmas: Mapping[str, str] | None = None, max_keys: int = 16):
        self.texts = list(texts)
        self.lex = lex if lex is not None else load_lexicons()
        self.lemmas = dict(lemmas) if lemmas else None
        self.max_keys = max_keys
        self._normalized: OrderedDict[tuple, list[str]] = OrderedDict()
        self._bags: dict[tuple, BagMatrix] = {}

    def normalized(self, config: Configuration) -> list[str]:
        key = config.text_key()
        if key in self._normalized:
            self._normalized.move_to_end(key)
            return self._normalized[key]
        while len(self._normalized) >= self.max_keys:
            old, _ = self._normalized.popitem(last=False)
            for bag_key in [b for b in self._bags if b[0] == old]:
                del self._bags[bag_key]
        texts = [normalize(t, config, self.lex, self.lemmas) for t in self.texts]
        self._normalized[key] = texts
        return texts

    def _tokenizer_matrix(self, config: Configuration, name: str) -> BagMatrix:
        key = (config.text_key(), name)
        if key not in self._bags:
            texts = self.normalized(config)
            self._bags[key] = BagMatrix.from_bags([tag(tokenize(t, name), name) for t in texts])
        return self._bags[key]

    def matrix(self, config: Configuration) -> BagMatrix:
        # tagged tokens sort by tag first, so blocks in tag order keep columns sorted
        return BagMatrix.hstack([self._tokenizer_matrix(config, name)
                                 for name in sorted(config.tokenizers)])

    def bags(self, config: Configuration) -> list[Counter]:
        texts = self.normalized(config)
        return [tokenize_multi(t, config.tokenizers) for t in texts]

    def clear(self) -> None:
        self._normalized.clear()
        self._bags.clear()


def fit_predict(train_bags: Sequence[Mapping[str, int]], train_labels: Sequence[str],
                test_bags: Sequence[Mapping[str, int]], use_tfidf: bool,
                params: TrainParams = TrainParams()) -> list[str]:
    vocab = build_vocabulary(train_bags)
    model = train(vectorize_all(train_bags, vocab, use_tfidf), train_labels, len(vocab), params)
    X = to_csr(vectorize_all(test_bags, vocab, use_tfidf), len(vocab))
    return model.predict_many(X)


def evaluate_folds(data: BagMatrix | Sequence[Mapping[str, int]], labels: Sequence[str],
                   folds: Sequence[Sequence[int]], use_tfidf: bool,
                   params: TrainParams = TrainParams()) -> EvalResult:
    """Train on all folds but one, predict the held-out fold, for every fold."""
    if not isinstance(data, BagMatrix):
        data = BagMatrix.from_bags(data)
    confusions = []
    for held in folds:
        held_set = set(held)
        tr = [i for i in range(len(labels)) if i not in held_set]  # ascending order
        confusions.append(fit_score(data, labels, tr, list(held), use_tfidf, params))
    return EvalResult.from_confusions(confusions)


def fit_score(data: BagMatrix, labels, train_rows, test_rows, use_tfidf, params) -> np.ndarray:
    Xtr, Xte, dim = data.fold(train_rows, test_rows, use_tfidf)
    model = train(Xtr, [labels[i] for i in train_rows], dim, params)
    return confusion_matrix([labels[i] for i in test_rows], model.predict_many(Xte))


def cross_validate(corpus: Sequence[Document], config: Configuration, k: int = 5,
                   seed: int = 42, lex: LexiconSet | None = None,
                   lemmas: Mapping[str, str] | None = None, epochs: int | None = None,
                   featurizer: Featurizer | None = None) -> EvalResult:
    labels = [d.label for d in corpus]
    feats = featurizer or Featurizer([d.text for d in corpus], lex, lemmas)
    params = TrainParams(seed=seed) if epochs is None else TrainParams(epochs=epochs, seed=seed)
    return evaluate_folds(feats.matrix(config), labels, stratified_folds(labels, k, seed),
                          config.tfidf, params)


def evaluate_gold(train_docs: Sequence[Document], test_docs: Sequence[Document],
                  config: Configuration, seed: int = 42, lex: LexiconSet | None = None,
                  lemmas: Mapping[str, str] | None = None, epochs: int | None = None,
                  featurizer: Featurizer | None = None) -> EvalResult:
    """Train on ``train_docs`` and score on ``test_docs`` (a single "fold").

    A supplied ``featurizer`` must have been built over train followed by test texts.
    """
    if not test_docs:
        raise EvaluationError("empty test set")
    feats = featurizer or Featurizer([d.text for d in (*train_docs, *test_docs)], lex, lemmas)
    n = len(train_docs)
    labels = [d.label for d in (*train_docs, *test_docs)]
    params = TrainParams(seed=seed) if epochs is None else TrainParams(epochs=epochs, seed=seed)
    conf = fit_score(feats.matrix(config), labels, list(range(n)),
                      list(range(n, len(labels))), config.tfidf, params)
    return EvalResult.from_confusions([conf])
