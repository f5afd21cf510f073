"""Snowball stemmer for Spanish.

Direct implementation of the published Snowball algorithm for Spanish
(https://snowballstem.org/algorithms/spanish/stemmer.html). Regions RV, R1
and R2 are computed once on the input word and expressed as start offsets;
every suffix test below compares the suffix start against them.
"""
from __future__ import annotations

from functools import lru_cache

VOWELS = frozenset("aeiouáéíóúü")

_UNACCENT = str.maketrans("áéíóú", "aeiou")

_PRONOUNS = ("me", "se", "sela", "selo", "selas", "selos",
             "la", "le", "lo", "las", "les", "los", "nos")

# verb ending that may carry an attached pronoun -> replacement (None: keep)
_PRONOUN_HOSTS = {
    "iéndo": "iendo", "ándo": "ando", "ár": "ar", "ér": "er", "ír": "ir",
    "ando": None, "iendo": None, "ar": None, "er": None, "ir": None,
    "yendo": None,
}

_STD_DELETE = ("anza", "anzas", "ico", "ica", "icos", "icas", "ismo", "ismos",
               "able", "ables", "ible", "ibles", "ista", "istas", "oso", "osa",
               "osos", "osas", "amiento", "amientos", "imiento", "imientos")
_STD_IC = ("adora", "ador", "ación", "acion", "adoras", "adores", "aciones",
           "ante", "antes", "ancia", "ancias")
_STD_LOG = ("logía", "logías")
_STD_U = ("ución", "ucion", "uciones")
_STD_ENTE = ("encia", "encias")
_STD_IDAD = ("idad", "idades")
_STD_IV = ("iva", "ivo", "ivas", "ivos")

_STANDARD = {}
for _group, _kind in ((_STD_DELETE, "delete"), (_STD_IC, "ic"), (_STD_LOG, "log"),
                      (_STD_U, "u"), (_STD_ENTE, "ente"), (_STD_IDAD, "idad"),
                      (_STD_IV, "iv"), (("amente",), "amente"), (("mente",), "mente")):
    for _s in _group:
        _STANDARD[_s] = _kind

_Y_VERB = ("ya", "ye", "yan", "yen", "yeron", "yendo", "yo", "yó", "yas",
           "yes", "yais", "yamos")

_VERB_GU = ("en", "es", "éis", "emos")
_VERB_DELETE = (
    "arían", "arías", "arán", "arás", "aríais", "aría", "aréis", "aríamos",
    "aremos", "ará", "aré", "erían", "erías", "erán", "erás", "eríais", "ería",
    "eréis", "eríamos", "eremos", "erá", "eré", "irían", "irías", "irán", "irás",
    "iríais", "iría", "iréis", "iríamos", "iremos", "irá", "iré", "aba", "ada",
    "ida", "ía", "ara", "iera", "ad", "ed", "id", "ase", "iese", "aste", "iste",
    "an", "aban", "ían", "aran", "ieran", "asen", "iesen", "aron", "ieron",
    "ado", "ido", "ando", "iendo", "ió", "ar", "er", "ir", "as", "abas", "adas",
    "idas", "ías", "aras", "ieras", "ases", "ieses", "ís", "áis", "abais",
    "íais", "arais", "ierais", "aseis", "ieseis", "asteis", "isteis", "ados",
    "idos", "amos", "ábamos", "íamos", "imos", "áramos", "iéramos", "iésemos",
    "ásemos",
)
_VERB = {s: "gu" for s in _VERB_GU} | {s: "delete" for s in _VERB_DELETE}

_RESIDUAL = {"os": "delete", "a": "delete", "o": "delete", "á": "delete",
             "í": "delete", "ó": "delete", "e": "gu", "é": "gu"}


def _longest(word: str, suffixes, limit: int = 0) -> str | None:
    """Longest suffix of ``word`` in ``suffixes`` that starts at or after ``limit``."""
    best = None
    for s in suffixes:
        if word.endswith(s) and len(word) - len(s) >= limit:
            if best is None or len(s) > len(best):
                best = s
    return best


def regions(word: str) -> tuple[int, int, int]:
    """Start offsets of RV, R1 and R2 (``len(word)`` when a region is empty)."""
    n = len(word)
    rv = n
    if n >= 2:
        if word[1] not in VOWELS:
            rv = next((i + 1 for i in range(2, n) if word[i] in VOWELS), n)
        elif word[0] in VOWELS:
            rv = next((i + 1 for i in range(2, n) if word[i] not in VOWELS), n)
        else:
            rv = min(3, n)

    def after_vc(start):
        for i in range(max(start, 1), n):
            if word[i] not in VOWELS and word[i - 1] in VOWELS and i - 1 >= start:
                return i + 1
        return n

    r1 = after_vc(0)
    r2 = after_vc(r1)
    return rv, r1, r2


def _attached_pronoun(word: str, rv: int) -> str:
    pronoun = _longest(word, _PRONOUNS)
    if pronoun is None:
        return word
    head = word[: -len(pronoun)]
    host = _longest(head, _PRONOUN_HOSTS)
    if host is None or len(head) - len(host) < rv:
        return word
    if host == "yendo" and not head[: -len(host)].endswith("u"):
        return word
    replacement = _PRONOUN_HOSTS[host]
    if replacement is not None:
        return head[: -len(host)] + replacement
    return head


def _standard_suffix(word: str, r1: int, r2: int) -> str | None:
    """Returns the shortened word, or None when no rule applies."""
    suffix = _longest(word, _STANDARD)
    if suffix is None:
        return None
    kind = _STANDARD[suffix]
    start = len(word) - len(suffix)

    if kind == "amente":
        if start < r1:
            return None
        word = word[:start]
        for sub in ("iv", "os", "ic", "ad"):
            if word.endswith(sub) and len(word) - 2 >= r2:
                word = word[:-2]
                if sub == "iv" and word.endswith("at") and len(word) - 2 >= r2:
                    word = word[:-2]
                break
        return word

    if start < r2:
        return None
    if kind == "log":
        return word[:start] + "log"
    if kind == "u":
        return word[:start] + "u"
    if kind == "ente":
        return word[:start] + "ente"

    word = word[:start]
    follow = {"ic": ("ic",), "mente": ("ante", "able", "ible"),
              "idad": ("abil", "ic", "iv"), "iv": ("at",)}.get(kind, ())
    sub = _longest(word, follow)
    if sub is not None and len(word) - len(sub) >= r2:
        word = word[: -len(sub)]
    return word


def _y_verb_suffix(word: str, rv: int) -> str | None:
    suffix = _longest(word, _Y_VERB, limit=rv)
    if suffix is None:
        return None
    head = word[: -len(suffix)]
    return head if head.endswith("u") else None


def _verb_suffix(word: str, rv: int) -> str | None:
    suffix = _longest(word, _VERB, limit=rv)
    if suffix is None:
        return None
    head = word[: -len(suffix)]
    if _VERB[suffix] == "gu" and head.endswith("gu"):
        head = head[:-1]
    return head


def _residual_suffix(word: str, rv: int) -> str:
    suffix = _longest(word, _RESIDUAL)
    if suffix is None or len(word) - len(suffix) < rv:
        return word
    head = word[: -len(suffix)]
    if _RESIDUAL[suffix] == "gu" and head.endswith("gu") and len(head) - 1 >= rv:
        head = head[:-1]
    return head


@lru_cache(maxsize=65536)
def stem_word(word: str) -> str:
    """Stem one lowercase Spanish word."""
    word = word.lower()
    rv, r1, r2 = regions(word)
    word = _attached_pronoun(word, rv)
    for step in (lambda w: _standard_suffix(w, r1, r2),
                 lambda w: _y_verb_suffix(w, rv),
                 lambda w: _verb_suffix(w, rv)):
        out = step(word)
        if out is not None:
            word = out
            break
    word = _residual_suffix(word, rv)
    return word.translate(_UNACCENT)
