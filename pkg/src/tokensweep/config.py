"""Configuration points of the search space and their canonical string ids.

A configuration is one assignment of the 15 boolean transformation flags plus
a non-empty set of tokenizers. Its canonical id looks like::

    del_d1=0,del_d2=0,...,usr=1;tok=w1+q3

with flags in alphabetical order and tokenizers in ``TOKENIZERS`` order.
"""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from typing import Iterable, Mapping

TOKENIZERS = ("w1", "w2", "q3", "q4", "q5", "q6", "q7")

# Column order of the top-k tables.
TABLE_FLAGS = (
    "tfidf", "del_sw", "lem", "stem", "del_d1", "del_d2", "del_punc",
    "del_diac", "del_ent", "emo", "num", "url", "usr", "lc", "neg",
)

# Order used inside config ids.
FLAGS = tuple(sorted(TABLE_FLAGS))

# Flags that change the text itself (tfidf only changes the weighting).
TEXT_FLAGS = tuple(f for f in FLAGS if f != "tfidf")


class ConfigError(ValueError):
    pass


def _canonical_tokenizers(tokenizers: Iterable[str]) -> tuple[str, ...]:
    toks = set(tokenizers)
    if not toks:
        raise ConfigError("tokenizer set must be non-empty")
    unknown = toks.difference(TOKENIZERS)
    if unknown:
        raise ConfigError(f"unknown tokenizer(s): {', '.join(sorted(unknown))}")
    return tuple(t for t in TOKENIZERS if t in toks)


@dataclass(frozen=True)
class Configuration:
    tfidf: bool = False
    del_sw: bool = False
    lem: bool = False
    stem: bool = False
    del_punc: bool = False
    del_ent: bool = False
    del_d1: bool = False
    del_d2: bool = False
    del_diac: bool = False
    emo: bool = False
    num: bool = False
    url: bool = False
    usr: bool = False
    lc: bool = False
    neg: bool = False
    tokenizers: tuple[str, ...] = ("w1",)

    def __post_init__(self):
        object.__setattr__(self, "tokenizers", _canonical_tokenizers(self.tokenizers))
        for f in FLAGS:
            object.__setattr__(self, f, bool(getattr(self, f)))

    @property
    def config_id(self) -> str:
        flags = ",".join(f"{f}={int(getattr(self, f))}" for f in FLAGS)
        return f"{flags};tok={'+'.join(self.tokenizers)}"

    def __str__(self):
        return self.config_id

    def flags(self) -> dict[str, bool]:
        return {f: getattr(self, f) for f in FLAGS}

    def text_key(self) -> tuple[bool, ...]:
        """Tuple of the text-changing flags; equal keys normalize text identically."""
        return tuple(getattr(self, f) for f in TEXT_FLAGS)

    def any_text_flag(self) -> bool:
        return any(self.text_key())

    def replace(self, **changes) -> "Configuration":
        return dataclasses.replace(self, **changes)

    @classmethod
    def from_flags(cls, flags: Mapping[str, bool], tokenizers: Iterable[str]) -> "Configuration":
        unknown = set(flags).difference(FLAGS)
        if unknown:
            raise ConfigError(f"unknown flag(s): {', '.join(sorted(unknown))}")
        return cls(tokenizers=tuple(tokenizers), **{k: bool(v) for k, v in flags.items()})

    @classmethod
    def parse(cls, config_id: str) -> "Configuration":
        """Inverse of :attr:`config_id`; all 15 flags and the tokenizer part are required."""
        try:
            flag_part, tok_part = config_id.strip().split(";")
        except ValueError:
            raise ConfigError(f"malformed config id: {config_id!r}") from None
        if not tok_part.startswith("tok="):
            raise ConfigError(f"malformed tokenizer part: {tok_part!r}")
        flags = parse_flag_fragment(flag_part)
        if set(flags) != set(FLAGS):
            missing = sorted(set(FLAGS).difference(flags))
            raise ConfigError(f"config id is missing flag(s): {', '.join(missing)}")
        return cls.from_flags(flags, tok_part[4:].split("+"))


def parse_flag_fragment(fragment: str) -> dict[str, bool]:
    """Parse ``"stem=1,del-d1,usr=0"`` into ``{"stem": True, "del_d1": True, "usr": False}``.

    Bare names mean enabled; hyphens are accepted in place of underscores.
    """
    flags: dict[str, bool] = {}
    for item in fragment.split(","):
        item = item.strip()
        if not item:
            continue
        name, sep, value = item.partition("=")
        name = name.strip().replace("-", "_")
        if name not in FLAGS:
            raise ConfigError(f"unknown flag: {name!r}")
        if not sep:
            flags[name] = True
        elif value.strip() in ("0", "1"):
            flags[name] = value.strip() == "1"
        else:
            raise ConfigError(f"flag {name!r} must be 0 or 1, got {value!r}")
    return flags


def parse_tokenizers(spec: str) -> tuple[str, ...]:
    """Parse a ``+``-joined tokenizer list such as ``w1+q3``."""
    return _canonical_tokenizers(t.strip() for t in spec.split("+") if t.strip())
