"""Whitespace normalization and tokenization for Sindhi (Arabic-script) text.

The tokenizer is deliberately simple: normalized text is split on single
spaces, special characters are peeled off token edges into punctuation
tokens of their own, and every token records the half-open byte range it
occupies in the UTF-8 encoding of the text it was cut from.  Slicing those
bytes always reproduces the token surface exactly.

Zero-width non-joiner (U+200C) is a word character here: Sindhi compounds
like "اسلام‌آباد" must stay one token.  Tatweel and diacritics also pass
through untouched.

Examples::

    >>> normalize_whitespace("  اويس\\t\\tجمائي ")
    'اويس جمائي'
    >>> [t.surface for t in tokenize("اويس، ويو")]
    ['اويس', '،', 'ويو']
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Tuple

# Characters stripped from token edges into separate punctuation tokens.
# Arabic comma, Urdu full stop, ASCII sentence punctuation, paired
# brackets, Arabic thousands separator, Arabic question mark.
EDGE_SPECIALS = "،۔.,;:!?\"'()[]{}٬؟"

WORD = "word"
NUMBER = "number-literal"
PUNCTUATION = "punctuation"
SYMBOL = "symbol"

# Digits, optionally in runs joined by single internal . / : - separators
# ("05.06.2016", "10:40").  \d covers Arabic-Indic digits too.
_NUMBER_RE = re.compile(r"\d+(?:[./:\-]\d+)*")


@dataclass(frozen=True, slots=True)
class Token:
    """One token: raw surface, byte span, normalized form, and kind.

    ``span`` is a half-open byte range into the UTF-8 encoding of the text
    the token came from.  ``norm`` is the surface with edge specials
    stripped and Latin letters lowercased; punctuation tokens therefore
    normalize to the empty string.
    """

    surface: str
    span: Tuple[int, int]
    norm: str
    kind: str


@dataclass(frozen=True)
class TokenStream:
    """Immutable sequence of tokens plus the exact text they index."""

    tokens: Tuple[Token, ...]
    source: str

    def __len__(self) -> int:
        return len(self.tokens)

    def __iter__(self) -> Iterator[Token]:
        return iter(self.tokens)

    def __getitem__(self, i):
        return self.tokens[i]


def normalize_whitespace(raw: str) -> str:
    """Collapse every run of Unicode whitespace to one space, strip ends.

    Total and idempotent; no character outside whitespace is touched.
    """
    return " ".join(raw.split())


def strip_edge_specials(surface: str, specials: str = EDGE_SPECIALS):
    """Peel special characters off both edges of ``surface``.

    Returns ``(core, stripped)`` where ``stripped`` lists ``(char, side)``
    pairs, start-side chars first in text order, then end-side chars in
    text order.  The core may be empty if the surface was all specials.

    >>> strip_edge_specials("(KTN)")
    ('KTN', [('(', 'start'), (')', 'end')])
    """
    special_set = frozenset(specials)
    lo, hi = 0, len(surface)
    stripped = []
    while lo < hi and surface[lo] in special_set:
        stripped.append((surface[lo], "start"))
        lo += 1
    end_side = []
    while hi > lo and surface[hi - 1] in special_set:
        end_side.append((surface[hi - 1], "end"))
        hi -= 1
    end_side.reverse()
    return surface[lo:hi], stripped + end_side


def _classify(core: str) -> str:
    if _NUMBER_RE.fullmatch(core):
        return NUMBER
    if any(ch.isalpha() for ch in core):
        return WORD
    return SYMBOL


def tokenize(raw: str, specials: str = EDGE_SPECIALS) -> TokenStream:
    """Tokenize whitespace-normalized text.

    Splits on single spaces, then splits edge specials off each chunk into
    punctuation tokens.  Byte spans index ``raw.encode("utf-8")`` and are
    strictly increasing; slicing those bytes reproduces each surface.
    """
    special_set = frozenset(specials)
    toks = []
    offset = 0
    for chunk in raw.split(" "):
        if chunk:
            offset = _chunk_tokens(toks, chunk, offset, special_set)
        offset += 1  # the separating space
    return TokenStream(tokens=tuple(toks), source=raw)


def _chunk_tokens(toks: list, chunk: str, offset: int, special_set) -> int:
    lo, hi = 0, len(chunk)
    while lo < hi and chunk[lo] in special_set:
        lo += 1
    while hi > lo and chunk[hi - 1] in special_set:
        hi -= 1
    for ch in chunk[:lo]:
        blen = len(ch.encode("utf-8"))
        toks.append(Token(ch, (offset, offset + blen), "", PUNCTUATION))
        offset += blen
    core = chunk[lo:hi]
    if core:
        blen = len(core.encode("utf-8"))
        toks.append(Token(core, (offset, offset + blen), core.lower(), _classify(core)))
        offset += blen
    for ch in chunk[hi:]:
        blen = len(ch.encode("utf-8"))
        toks.append(Token(ch, (offset, offset + blen), "", PUNCTUATION))
        offset += blen
    return offset
