"""Kannada script codec: symbol inventory, akshara grouping, Unicode generation."""

from .codec import (
    Akshara,
    akshara_unicode,
    combine_parts,
    decompose_letterpress,
    disambiguate,
    fuse_complexes,
    group_aksharas,
    resolve_vowel_sign,
    unicode_to_symbols,
    word_unicode,
)
from .registry import SymbolLabel, SymbolRegistry, load_registry

__all__ = [
    "Akshara",
    "SymbolLabel",
    "SymbolRegistry",
    "akshara_unicode",
    "combine_parts",
    "decompose_letterpress",
    "disambiguate",
    "fuse_complexes",
    "group_aksharas",
    "load_registry",
    "resolve_vowel_sign",
    "unicode_to_symbols",
    "word_unicode",
]
