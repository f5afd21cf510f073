"""Labeled corpora: TSV I/O, stratified train/test split, a synthetic
generator and Heaps'-law vocabulary growth fitting.

Corpus files hold one document per line, ``id<TAB>label<TAB>text``, with tab,
newline, carriage return and backslash in the text escaped as ``\\t``, ``\\n``,
``\\r`` and ``\\\\``.
"""
from __future__ import annotations

import logging
import math
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .classifier import CLASSES

log = logging.getLogger(__name__)

SYNTHETIC_KEYWORDS = {
    "positive": "excelente",
    "neutral": "regular",
    "negative": "horrible",
    "none": "noticia",
}

_ESCAPES = {"\\": "\\\\", "\t": "\\t", "\n": "\\n", "\r": "\\r"}
_UNESCAPES = {"\\": "\\", "t": "\t", "n": "\n", "r": "\r"}
_URL = re.compile(r"(?:https?://|www\.)\S+", re.IGNORECASE)


class CorpusError(ValueError):
    pass


@dataclass(frozen=True)
class Document:
    id: str
    label: str
    text: str

    def __post_init__(self):
        if self.label not in CLASSES:
            raise CorpusError(f"unknown label {self.label!r}")


def escape(text: str) -> str:
    return "".join(_ESCAPES.get(ch, ch) for ch in text)


def unescape(text: str) -> str:
    out = []
    chars = iter(text)
    for ch in chars:
        if ch != "\\":
            out.append(ch)
            continue
        nxt = next(chars, None)
        if nxt not in _UNESCAPES:
            raise CorpusError(f"bad escape sequence \\{nxt or ''}")
        out.append(_UNESCAPES[nxt])
    return "".join(out)


def parse_corpus(text: str, source: str = "<corpus>") -> list[Document]:
    docs = []
    for lineno, line in enumerate(text.split("\n"), 1):
        if not line:
            continue
        parts = line.split("\t")
        if len(parts) != 3:
            raise CorpusError(f"{source}:{lineno}: expected 3 tab-separated fields, got {len(parts)}")
        doc_id, label, body = parts
        if label not in CLASSES:
            raise CorpusError(f"{source}:{lineno}: unknown label {label!r} "
                              f"(expected one of {', '.join(CLASSES)})")
        try:
            docs.append(Document(doc_id, label, unescape(body)))
        except CorpusError as exc:
            raise CorpusError(f"{source}:{lineno}: {exc}") from None
    return docs


def load_corpus(path) -> list[Document]:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise CorpusError(f"cannot read corpus {path}: {exc}") from exc
    return parse_corpus(text, str(path))


def format_corpus(docs: Iterable[Document]) -> str:
    return "".join(f"{d.id}\t{d.label}\t{escape(d.text)}\n" for d in docs)


def save_corpus(docs: Iterable[Document], path) -> None:
    Path(path).write_text(format_corpus(docs), encoding="utf-8")


def _apportion(sizes: dict[str, int], total: int) -> dict[str, int]:
    """Largest-remainder split of ``total`` proportional to ``sizes``."""
    n = sum(sizes.values())
    quotas = {c: total * s / n for c, s in sizes.items()}
    alloc = {c: math.floor(q) for c, q in quotas.items()}
    left = total - sum(alloc.values())
    order = sorted(sizes, key=lambda c: (-(quotas[c] - alloc[c]), CLASSES.index(c)))
    for c in order[:left]:
        alloc[c] += 1
    return alloc


def split_train_test(docs: Sequence[Document], train_fraction: float = 0.10,
                     seed: int = 42) -> tuple[list[Document], list[Document]]:
    """Seeded stratified split. Both parts keep the original document order."""
    if not 0.0 < train_fraction < 1.0:
        raise CorpusError(f"train_fraction must be in (0, 1), got {train_fraction}")
    by_class: dict[str, list[int]] = {}
    for i, d in enumerate(docs):
        by_class.setdefault(d.label, []).append(i)

    train_idx: set[int] = set()
    splittable = {}
    for c in sorted(by_class, key=CLASSES.index):
        if len(by_class[c]) < 2:
            log.warning("class %r has %d document(s); placing it in the training set",
                        c, len(by_class[c]))
            train_idx.update(by_class[c])
        else:
            splittable[c] = len(by_class[c])
    if splittable:
        target = round(train_fraction * sum(splittable.values()))
        alloc = _apportion(splittable, target)
        rng = np.random.default_rng(seed)
        for c in splittable:
            members = np.array(by_class[c])
            # every splittable class keeps at least one document on each side
            take = min(max(alloc[c], 1), len(members) - 1)
            train_idx.update(rng.permutation(members)[:take].tolist())
    train = [d for i, d in enumerate(docs) if i in train_idx]
    test = [d for i, d in enumerate(docs) if i not in train_idx]
    return train, test


# --- Heaps' law ---------------------------------------------------------------

@dataclass(frozen=True)
class HeapsFit:
    alpha: float
    log_k: float
    points: list[tuple[int, int]]

    def summary(self) -> dict:
        return {"alpha": self.alpha, "log_k": self.log_k}


def heaps_tokens(text: str) -> list[str]:
    return _URL.sub(" ", text).lower().split()


def heaps_points(texts: Iterable[str], sample_interval: int) -> list[tuple[int, int]]:
    """(tokens seen, distinct tokens) after every ``sample_interval`` tokens."""
    if sample_interval < 1:
        raise CorpusError("sample_interval must be >= 1")
    seen: set[str] = set()
    n = 0
    points = []
    for text in texts:
        for tok in heaps_tokens(text):
            seen.add(tok)
            n += 1
            if n % sample_interval == 0:
                points.append((n, len(seen)))
    return points


def loglog_fit(points: Sequence[tuple[int, int]]) -> tuple[float, float]:
    """Least-squares line through (ln n, ln V); returns (slope, intercept)."""
    x = np.log(np.array([p[0] for p in points], dtype=np.float64))
    y = np.log(np.array([p[1] for p in points], dtype=np.float64))
    xm, ym = x.mean(), y.mean()
    sxx = np.sum((x - xm) ** 2)
    if sxx == 0.0:
        raise CorpusError("cannot fit Heaps' law: all sample points share the same size")
    slope = float(np.sum((x - xm) * (y - ym)) / sxx)
    return slope, float(ym - slope * xm)


def heaps_fit(texts: Iterable[str], sample_interval: int) -> HeapsFit:
    points = heaps_points(texts, sample_interval)
    if len(points) < 2:
        raise CorpusError(f"need at least 2 sample points for a Heaps fit, got {len(points)}; "
                          "lower the interval or supply more text")
    alpha, log_k = loglog_fit(points)
    if alpha <= 0.0:
        raise CorpusError(f"degenerate vocabulary curve: fitted alpha = {alpha:.6g} <= 0 "
                          f"(vocabulary stays at {points[-1][1]} distinct tokens)")
    if alpha > 1.0 + 1e-9:
        raise CorpusError(f"fitted alpha = {alpha:.6g} exceeds 1")
    return HeapsFit(alpha, log_k, points)


# --- synthetic corpora --------------------------------------------------------

_ONSETS = ("", "b", "c", "d", "f", "g", "l", "m", "n", "p", "r", "s", "t", "v",
           "br", "cr", "pl", "tr", "ch")
_NUCLEI = ("a", "e", "i", "o", "u")
_CODAS = ("", "", "", "n", "s", "r", "l")


def synthetic_vocabulary(size: int, rng: np.random.Generator) -> list[str]:
    """``size`` distinct pseudo-Spanish words built from random syllables."""
    words: list[str] = []
    seen: set[str] = set()
    reserved = set(SYNTHETIC_KEYWORDS.values())
    while len(words) < size:
        n_syll = int(rng.integers(1, 4))
        word = "".join(_ONSETS[rng.integers(len(_ONSETS))] + _NUCLEI[rng.integers(len(_NUCLEI))]
                       + _CODAS[rng.integers(len(_CODAS))] for _ in range(n_syll))
        if len(word) > 1 and word not in seen and word not in reserved:
            seen.add(word)
            words.append(word)
    return words


def zipf_probabilities(size: int, s: float) -> np.ndarray:
    weights = 1.0 / np.arange(1, size + 1, dtype=np.float64) ** s
    return weights / weights.sum()


def misspell(word: str, rng: np.random.Generator) -> str:
    """One random character edit: substitution, deletion, duplication or swap."""
    if len(word) < 2:
        return word + word
    i = int(rng.integers(len(word)))
    op = int(rng.integers(4))
    letters = "abcdefghijklmnopqrstuvwxyz"
    if op == 0:
        return word[:i] + letters[rng.integers(26)] + word[i + 1:]
    if op == 1:
        return word[:i] + word[i + 1:]
    if op == 2:
        return word[:i] + word[i] + word[i:]
    j = min(i + 1, len(word) - 1)
    if j == i:
        i -= 1
    return word[:i] + word[j] + word[i] + word[j + 1:]


def gen_synthetic(n_docs: int, class_keyword_map: dict[str, str] | None = None,
                  vocab_size: int = 200, zipf_s: float = 1.0, seed: int = 42,
                  doc_length: tuple[int, int] = (6, 16),
                  misspell_rate: float = 0.0) -> list[Document]:
    """Balanced corpus where each document carries its class keyword.

    With ``misspell_rate`` > 0 that fraction of keywords gets one random
    character edit, so the word itself is no longer a reliable signal while
    most of its character grams still are.
    """
    keywords = dict(SYNTHETIC_KEYWORDS if class_keyword_map is None else class_keyword_map)
    if n_docs < 4:
        raise CorpusError("n_docs must be >= 4")
    if set(keywords) != set(CLASSES):
        raise CorpusError(f"need exactly one keyword per class: {', '.join(CLASSES)}")
    rng = np.random.default_rng(seed)
    vocab = synthetic_vocabulary(vocab_size, rng)
    probs = zipf_probabilities(vocab_size, zipf_s)
    docs = []
    for i in range(n_docs):
        label = CLASSES[i % len(CLASSES)]
        length = int(rng.integers(doc_length[0], doc_length[1] + 1))
        words = [vocab[j] for j in rng.choice(vocab_size, size=length, p=probs)]
        keyword = keywords[label]
        if misspell_rate > 0 and rng.random() < misspell_rate:
            keyword = misspell(keyword, rng)
        words.insert(int(rng.integers(length + 1)), keyword)
        docs.append(Document(f"s{i:05d}", label, " ".join(words)))
    return docs


def zipf_stream(n_tokens: int, vocab_size: int, s: float, seed: int,
                line_length: int = 20) -> list[str]:
    """Zipf-distributed token stream cut into lines of ``line_length`` tokens."""
    rng = np.random.default_rng(seed)
    words = [f"w{i}" for i in range(vocab_size)]
    ids = rng.choice(vocab_size, size=n_tokens, p=zipf_probabilities(vocab_size, s))
    return [" ".join(words[j] for j in ids[k:k + line_length])
            for k in range(0, n_tokens, line_length)]


def inject_misspellings(texts: Iterable[str], rate: float, seed: int) -> list[str]:
    """Replace a fraction ``rate`` of the tokens by a misspelled variant; token count is kept."""
    rng = np.random.default_rng(seed)
    out = []
    for text in texts:
        toks = text.split()
        hits = rng.random(len(toks)) < rate
        out.append(" ".join(misspell(t, rng) if h else t for t, h in zip(toks, hits)))
    return out
