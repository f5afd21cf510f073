"""Word lists and maps used by the text transformations.

File formats (UTF-8, ``#`` starts a comment line):

* ``stopwords_es.txt`` / ``skip_words.txt``: one word per line
* ``emoticons.tsv``: ``emoticon<TAB>polarity`` with polarity ``pos``, ``neg``,
  ``neu`` or free replacement text
* ``abbreviations.tsv``: ``short<TAB>expansion``
* ``lemmas.tsv``: ``form<TAB>lemma``
"""
from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass, field
from functools import cached_property
from importlib import resources
from pathlib import Path

STOPWORDS_FILE = "stopwords_es.txt"
EMOTICONS_FILE = "emoticons.tsv"
ABBREVIATIONS_FILE = "abbreviations.tsv"
SKIP_WORDS_FILE = "skip_words.txt"
LEMMAS_FILE = "lemmas.tsv"

POLARITY_TAGS = {"pos": "_positivo", "neg": "_negativo", "neu": "_neutro"}

_DIACRITICS = str.maketrans("áéíóúüñÁÉÍÓÚÜÑ", "aeiouunAEIOUUN")


class LexiconError(ValueError):
    pass


def fold(word: str) -> str:
    """Lowercase and strip Spanish diacritics; the comparison key for word lists."""
    return word.lower().translate(_DIACRITICS)


def _lines(path: Path):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise LexiconError(f"cannot read lexicon file {path}: {exc}") from exc
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        yield lineno, line


def read_wordlist(path) -> frozenset[str]:
    words = set()
    for lineno, line in _lines(path):
        word = line.strip()
        if any(ch.isspace() for ch in word):
            raise LexiconError(f"{path}:{lineno}: word list entries must not contain whitespace")
        words.add(word)
    return frozenset(words)


def read_pairs(path) -> dict[str, str]:
    pairs = {}
    for lineno, line in _lines(path):
        key, sep, value = line.partition("\t")
        if not sep or not key or not value.strip():
            raise LexiconError(f"{path}:{lineno}: expected two tab-separated columns")
        pairs[key] = value.strip()
    return pairs


def _is_word_char(ch: str) -> bool:
    return ch.isalnum() or ch == "_"


@dataclass(frozen=True, eq=False)
class LexiconSet:
    stopwords: frozenset[str] = frozenset()
    emoticons: dict[str, str] = field(default_factory=dict)
    abbreviations: dict[str, str] = field(default_factory=dict)
    skip_words: frozenset[str] = frozenset()

    def __post_init__(self):
        for name in ("stopwords", "skip_words"):
            words = getattr(self, name)
            if any(any(ch.isspace() for ch in w) for w in words):
                raise LexiconError(f"{name} entries must not contain whitespace")
            object.__setattr__(self, name, frozenset(fold(w) for w in words))
        if any(not e for e in self.emoticons):
            raise LexiconError("emoticon keys must be non-empty")
        object.__setattr__(self, "abbreviations",
                           {k.lower(): v for k, v in self.abbreviations.items()})

    @cached_property
    def emoticon_order(self) -> list[str]:
        """Emoticons sorted for longest-match: length descending, then lexicographic."""
        return sorted(self.emoticons, key=lambda e: (-len(e), e))

    @cached_property
    def emoticon_pattern(self) -> str:
        """Regex alternation over all emoticons (empty string when there are none).

        Emoticons that begin or end with a word character only match at a word
        boundary, so ``xD`` matches in ``jaja xD`` but not inside ``exDirector``.
        """
        parts = []
        for emo in self.emoticon_order:
            pat = re.escape(emo)
            if _is_word_char(emo[0]):
                pat = r"(?<!\w)" + pat
            if _is_word_char(emo[-1]):
                pat = pat + r"(?!\w)"
            parts.append(pat)
        return "|".join(parts)

    @cached_property
    def emoticon_regex(self) -> re.Pattern | None:
        return re.compile(self.emoticon_pattern) if self.emoticons else None

    def emoticon_replacement(self, emoticon: str) -> str:
        polarity = self.emoticons[emoticon]
        return POLARITY_TAGS.get(polarity, polarity)


def data_dir() -> Path:
    return Path(str(resources.files("tokensweep") / "data"))


def load_lexicons(directory=None) -> LexiconSet:
    """Load the four word lists from ``directory`` (the bundled data by default)."""
    base = Path(directory) if directory is not None else data_dir()
    if not base.is_dir():
        raise LexiconError(f"lexicon directory not found: {base}")
    return LexiconSet(
        stopwords=read_wordlist(base / STOPWORDS_FILE),
        emoticons=read_pairs(base / EMOTICONS_FILE),
        abbreviations=read_pairs(base / ABBREVIATIONS_FILE),
        skip_words=read_wordlist(base / SKIP_WORDS_FILE),
    )


def load_lemmas(path=None) -> dict[str, str]:
    return read_pairs(Path(path) if path is not None else data_dir() / LEMMAS_FILE)


def is_punctuation(ch: str) -> bool:
    """Unicode P* characters, except the ones that carry meaning in tweets."""
    return ch not in "_@#" and unicodedata.category(ch).startswith("P")
