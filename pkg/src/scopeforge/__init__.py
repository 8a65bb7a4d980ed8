"""Underspecified DRS construction for a German/English scope fragment."""
from .errors import ScopeforgeError
from .lexicon import load_lexicon
from .syntax import parse, tokenize
from .textformat import dumps, loads

__all__ = ["ScopeforgeError", "load_lexicon", "parse", "tokenize", "dumps", "loads"]
__version__ = "0.1.0"
