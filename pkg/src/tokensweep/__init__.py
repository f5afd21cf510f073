"""Text-representation search for short-text sentiment classification."""
from .config import FLAGS, TABLE_FLAGS, TOKENIZERS, ConfigError, Configuration
from .lexicon import LexiconSet, load_lemmas, load_lexicons
from .textnorm import normalize

__version__ = "0.1.0"

__all__ = [
    "FLAGS", "TABLE_FLAGS", "TOKENIZERS", "ConfigError", "Configuration",
    "LexiconSet", "load_lemmas", "load_lexicons", "normalize",
]
