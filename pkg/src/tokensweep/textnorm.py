"""Text transformations applied to a message before tokenization.

``normalize`` runs the enabled steps in a fixed order:

    pretokenize -> abbreviations -> emo -> usr -> url -> num -> del_ent -> lc
    -> del_diac -> del_d1 / del_d2 -> del_punc -> neg -> del_sw -> lem -> stem

Pretokenization and abbreviation expansion only run when at least one
text-changing flag is enabled, so a configuration with every flag off returns
the input with whitespace collapsed and nothing else.
"""
from __future__ import annotations

import re
from functools import lru_cache

from .config import Configuration
from .lexicon import LexiconSet, fold, is_punctuation
from .stemmer import stem_word

NEGATION_MARKERS = frozenset({"no", "nunca", "jamás", "jamas", "sin"})
_FOLDED_MARKERS = frozenset(fold(m) for m in NEGATION_MARKERS)
NEGATION_PREFIX = "no_"

USER_TAG = "_user"
URL_TAG = "_url"
NUM_TAG = "_num"

_URL_START = ("http://", "https://", "www.")
_URL = r"(?:https?://|www\.)\S+"
_COARSEN = {
    "usr": (re.compile(r"(?<![\w@])@\w+"), USER_TAG),
    "url": (re.compile(r"(?<!\S)" + _URL), URL_TAG),
    "num": (re.compile(r"(?<!\w)\d+(?:[.,]\d+)?(?!\w)"), NUM_TAG),
}
_RUNS = {
    "d1": (re.compile(r"(.)\1+", re.DOTALL), r"\1"),
    "d2": (re.compile(r"(.)\1{2,}", re.DOTALL), r"\1\1"),
}
_DIACRITICS = str.maketrans("áéíóúüñÁÉÍÓÚÜÑ", "aeiouunAEIOUUN")
_SENTENCE_END = tuple(".!?¡¿")


def whitespace(text: str) -> str:
    return " ".join(text.split())


def is_url(token: str) -> bool:
    return token.lower().startswith(_URL_START)


@lru_cache(maxsize=8)
def _pretoken_regex(lex: LexiconSet) -> re.Pattern:
    parts = [_URL]
    if lex.emoticon_pattern:
        parts.append(lex.emoticon_pattern)
    parts += [r"[@#]\w+", r"\d+(?:[.,]\d+)?(?!\w)", r"\w+", r"(?P<p>[^\w\s])(?P=p)*"]
    return re.compile("|".join(f"(?:{p})" for p in parts))


def pretokenize(text: str, lex: LexiconSet) -> str:
    """Split punctuation away from words, keeping URLs, emoticons, mentions,
    hashtags and decimal numbers in one piece."""
    return " ".join(m.group(0) for m in _pretoken_regex(lex).finditer(text))


def expand_abbreviations(text: str, lex: LexiconSet) -> str:
    if not lex.abbreviations:
        return whitespace(text)
    abbr = lex.abbreviations
    return " ".join(abbr.get(tok.lower(), tok) for tok in text.split())


def map_emoticons(text: str, lex: LexiconSet) -> str:
    regex = lex.emoticon_regex
    if regex is None:
        return whitespace(text)
    repl = lambda m: f" {lex.emoticon_replacement(m.group(0))} "
    out = [tok if is_url(tok) else regex.sub(repl, tok) for tok in text.split()]
    return whitespace(" ".join(out))


def coarsen(text: str, kind: str) -> str:
    try:
        regex, tag = _COARSEN[kind]
    except KeyError:
        raise ValueError(f"unknown coarsening kind: {kind!r}") from None
    return regex.sub(tag, text)


def _is_entity(token: str, sentence_start: bool) -> bool:
    if (token[0] in "@#" and len(token) > 1) or is_url(token):
        return True
    return (not sentence_start and len(token) > 1 and token.isalpha()
            and token[0].isupper() and not token.isupper())


def remove_entities(text: str) -> str:
    """Drop mentions, hashtags, URLs and capitalized words that do not open a
    sentence (a cheap stand-in for proper-noun detection)."""
    out = []
    start = True
    for tok in text.split():
        if not _is_entity(tok, start):
            out.append(tok)
        start = tok.endswith(_SENTENCE_END)
    return " ".join(out)


def remove_diacritics(text: str) -> str:
    return text.translate(_DIACRITICS)


def reduce_runs(text: str, mode: str) -> str:
    try:
        regex, repl = _RUNS[mode]
    except KeyError:
        raise ValueError(f"mode must be 'd1' or 'd2', got {mode!r}") from None
    return regex.sub(repl, text)


def remove_punctuation(text: str, lex: LexiconSet) -> str:
    """Strip punctuation characters; known emoticons survive untouched."""
    out = []
    for tok in text.split():
        if tok not in lex.emoticons:
            tok = "".join(ch for ch in tok if not is_punctuation(ch))
        if tok:
            out.append(tok)
    return " ".join(out)


def _punctuation_only(token: str) -> bool:
    return all(is_punctuation(ch) for ch in token)


def attach_negation(text: str, lex: LexiconSet) -> str:
    tokens = text.split()
    out = []
    i = 0
    while i < len(tokens):
        tok = tokens[i]
        if fold(tok) not in _FOLDED_MARKERS:
            out.append(tok)
            i += 1
            continue
        j = i + 1
        while j < len(tokens) and fold(tokens[j]) in lex.skip_words:
            j += 1
        target = tokens[j] if j < len(tokens) else None
        if target is None or _punctuation_only(target) or fold(target) in _FOLDED_MARKERS:
            # nothing to attach to: keep the marker as it is
            out.append(tok)
            i += 1
            continue
        out.extend(tokens[i + 1:j])
        out.append(NEGATION_PREFIX + target)
        i = j + 1
    return " ".join(out)


def remove_stopwords(text: str, lex: LexiconSet) -> str:
    return " ".join(tok for tok in text.split()
                    if tok.startswith(NEGATION_PREFIX) or fold(tok) not in lex.stopwords)


def _split_prefix(token: str) -> tuple[str, str]:
    """Peel off the negation prefix and tag underscores: ``no__user`` -> (``no__``, ``user``)."""
    head = 0
    while True:
        if token.startswith(NEGATION_PREFIX, head) and len(token) > head + len(NEGATION_PREFIX):
            head += len(NEGATION_PREFIX)
        elif token.startswith("_", head) and len(token) > head + 1:
            head += 1
        else:
            return token[:head], token[head:]


def _stem_token(token: str) -> str:
    prefix, word = _split_prefix(token)
    if not word.isalpha():
        return token
    return prefix + stem_word(word)


def stem(text: str) -> str:
    return " ".join(_stem_token(tok) for tok in text.split())


def lemmatize(text: str, lemmas: dict[str, str]) -> str:
    if not lemmas:
        return whitespace(text)
    out = []
    for tok in text.split():
        prefix, word = _split_prefix(tok)
        lemma = lemmas.get(word)
        if lemma is None:
            lemma = lemmas.get(word.lower(), word)
        out.append(prefix + lemma)
    return " ".join(out)


def normalize(text: str, config: Configuration, lex: LexiconSet,
              lemmas: dict[str, str] | None = None) -> str:
    if not config.any_text_flag():
        return whitespace(text)
    text = pretokenize(text, lex)
    text = expand_abbreviations(text, lex)
    if config.emo:
        text = map_emoticons(text, lex)
    for kind in ("usr", "url", "num"):
        if getattr(config, kind):
            text = coarsen(text, kind)
    if config.del_ent:
        text = remove_entities(text)
    if config.lc:
        text = text.lower()
    if config.del_diac:
        text = remove_diacritics(text)
    if config.del_d1:
        text = reduce_runs(text, "d1")
    elif config.del_d2:
        text = reduce_runs(text, "d2")
    if config.del_punc:
        text = remove_punctuation(text, lex)
    if config.neg:
        text = attach_negation(text, lex)
    if config.del_sw:
        text = remove_stopwords(text, lex)
    if config.lem and lemmas:
        text = lemmatize(text, lemmas)
    if config.stem:
        text = stem(text)
    return whitespace(text)
