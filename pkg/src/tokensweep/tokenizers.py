"""Word n-gram and character q-gram tokenizers.

Bags are ``collections.Counter`` objects (token -> count). ``tokenize_multi``
prefixes every token with the tag of the tokenizer that produced it, so a
three-letter word and a 3-gram never share a vocabulary column.
"""
from __future__ import annotations

from collections import Counter
from typing import Iterable

from .config import TOKENIZERS, ConfigError, _canonical_tokenizers

TokenBag = Counter

WORD_SIZES = (1, 2)
QGRAM_SIZES = (3, 4, 5, 6, 7)
SPACE = "_"


def tokenize_words(text: str, n: int) -> TokenBag:
    if n not in WORD_SIZES:
        raise ValueError(f"n must be 1 or 2, got {n!r}")
    words = text.split()
    return Counter(" ".join(words[i:i + n]) for i in range(len(words) - n + 1))


def qgram_text(text: str, pad: bool = False) -> str:
    """Turn every space into ``_``; ``pad`` also marks both ends of the text."""
    text = text.replace(" ", SPACE)
    return f"{SPACE}{text}{SPACE}" if pad and text else text


def tokenize_qgrams(text: str, q: int, pad: bool = False) -> TokenBag:
    if q not in QGRAM_SIZES:
        raise ValueError(f"q must be in 3..7, got {q!r}")
    s = qgram_text(text, pad)
    return Counter(s[i:i + q] for i in range(len(s) - q + 1))


def tokenize(text: str, name: str) -> TokenBag:
    """Bag from a single named tokenizer (``w1``, ``w2``, ``q3`` .. ``q7``), without tags."""
    if name not in TOKENIZERS:
        raise ConfigError(f"unknown tokenizer: {name!r}")
    size = int(name[1:])
    return tokenize_words(text, size) if name[0] == "w" else tokenize_qgrams(text, size)


def tag(bag: TokenBag, name: str) -> TokenBag:
    return Counter({f"{name}:{tok}": c for tok, c in bag.items()})


def tokenize_multi(text: str, tokenizers: Iterable[str]) -> TokenBag:
    bag = Counter()
    for name in _canonical_tokenizers(tokenizers):
        bag.update(tag(tokenize(text, name), name))
    return bag


def jaccard(a: Iterable[str], b: Iterable[str]) -> float:
    """Jaccard coefficient of the distinct tokens of two bags (1.0 when both are empty)."""
    sa, sb = set(a), set(b)
    union = sa | sb
    if not union:
        return 1.0
    return len(sa & sb) / len(union)
