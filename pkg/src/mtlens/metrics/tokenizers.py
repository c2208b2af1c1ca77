"""Word tokenization schemes used by the overlap metrics.

The default scheme mirrors the international mteval tokenizer: every
punctuation or symbol character becomes its own token, except when a
punctuation mark sits between two digits (decimal and thousands
separators stay attached).  ``whitespace`` splits on whitespace only.
"""

from __future__ import annotations

import functools
import re
import sys
import unicodedata

SCHEMES = ("international", "whitespace")

_ALIASES = {
    "default-international": "international",
    "international": "international",
    "intl": "international",
    "whitespace": "whitespace",
    "none": "whitespace",
}


def _category_chars(prefix: str) -> str:
    return "".join(
        chr(cp)
        for cp in range(sys.maxunicode)
        if unicodedata.category(chr(cp)).startswith(prefix)
    )


@functools.lru_cache(maxsize=1)
def _intl_regexes():
    # Built once per process (~0.3 s): scans the Unicode table for the
    # punctuation (P*) and symbol (S*) categories of the running Python.
    punct = _category_chars("P")
    symbol = _category_chars("S")
    return (
        re.compile(r"([^\d])([" + re.escape(punct) + r"])"),
        re.compile(r"([" + re.escape(punct) + r"])([^\d])"),
        re.compile(r"([" + re.escape(symbol) + r"])"),
    )


def resolve_scheme(scheme: str) -> str:
    key = scheme.strip().lower()
    if key not in _ALIASES:
        raise ValueError(
            f"unknown tokenizer scheme {scheme!r}; expected one of "
            f"{sorted(set(_ALIASES))}"
        )
    return _ALIASES[key]


def tokenize(text: str, scheme: str = "international") -> list[str]:
    """Split ``text`` into tokens under ``scheme``.

    Deterministic; empty text yields an empty list.
    """
    resolved = resolve_scheme(scheme)
    if resolved == "whitespace":
        return text.split()
    nondigit_punct, punct_nondigit, symbol = _intl_regexes()
    out = nondigit_punct.sub(r"\1 \2 ", text)
    out = punct_nondigit.sub(r" \1 \2", out)
    out = symbol.sub(r" \1 ", out)
    return out.split()
