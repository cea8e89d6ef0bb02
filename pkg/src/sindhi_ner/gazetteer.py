"""Gazetteer loading, validation, and longest-match lookup.

Data files are UTF-8 TSV, one ``surface<TAB>category`` entry per line.
Blank lines and ``#`` comments are ignored.  Surfaces are one to three
whitespace-separated words and are normalized (edge specials stripped,
Latin lowercased) before being stored, so matching compares normalized
forms only.

The same TSV shape carries the engine's auxiliary word lists under
reserved categories (month names, letter names, stopwords, suffixes);
those are loaded with :func:`load_word_list` / :func:`load_suffix_table`
rather than :func:`load_gazetteer`.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

from .errors import DuplicateEntry, MalformedLine, UnknownCategory
from .text import strip_edge_specials


class Category(enum.Enum):
    PersonFirstName = "PersonFirstName"
    Surname = "Surname"
    Title = "Title"
    Designation = "Designation"
    Location = "Location"
    Organization = "Organization"
    Brand = "Brand"
    Term = "Term"
    Abbreviation = "Abbreviation"
    NumberWord = "NumberWord"
    OrgKeyword = "OrgKeyword"
    AmbiguousName = "AmbiguousName"


# Tie-break order when two categories match at the same length.
_CATEGORY_ORDER = {cat: i for i, cat in enumerate(Category)}

# Reserved categories for auxiliary word-list files (not gazetteer entries).
MONTH_NAME = "MonthName"
LETTER_NAME = "LetterName"
STOPWORD = "Stopword"
LOCATION_SUFFIX = "LocationSuffix"
PERSON_SUFFIX = "PersonSuffix"
TERM_SUFFIX = "TermSuffix"
PERSON_MARKER = "PersonMarker"

SUFFIX_CATEGORIES = (LOCATION_SUFFIX, PERSON_SUFFIX, TERM_SUFFIX, PERSON_MARKER)

MAX_ENTRY_WORDS = 3


@dataclass(frozen=True)
class GazetteerEntry:
    surface: str                # normalized words joined by single spaces
    words: Tuple[str, ...]
    category: Category
    source: str                 # "path:lineno" provenance


class Gazetteer:
    """Immutable store of entries indexed for longest-match lookup."""

    def __init__(self, entries: Iterable[GazetteerEntry]):
        self._entries: Tuple[GazetteerEntry, ...] = tuple(entries)
        by_key: Dict[Tuple[str, ...], Dict[Category, GazetteerEntry]] = {}
        first_max: Dict[str, int] = {}
        for e in self._entries:
            by_key.setdefault(e.words, {})[e.category] = e
            head = e.words[0]
            if len(e.words) > first_max.get(head, 0):
                first_max[head] = len(e.words)
        self._by_key = by_key
        self._first_max = first_max

    def __len__(self) -> int:
        return len(self._entries)

    def entries(self) -> Iterator[GazetteerEntry]:
        return iter(self._entries)

    def contains(self, words: Sequence[str], category: Category) -> bool:
        hit = self._by_key.get(tuple(words))
        return bool(hit) and category in hit

    def single_token_norms(self, category: Category) -> frozenset:
        """All 1-word surfaces stored under ``category``."""
        return frozenset(
            e.words[0] for e in self._entries
            if e.category is category and len(e.words) == 1
        )

    def first_token_norms(self, categories: Iterable[Category]) -> frozenset:
        """First words of every entry in the given categories (scan gate)."""
        cats = frozenset(categories)
        return frozenset(e.words[0] for e in self._entries if e.category in cats)


def lookup_longest(gaz: Gazetteer, tokens, i: int,
                   categories: Optional[Iterable[Category]] = None):
    """Longest entry matching token norms at position ``i``.

    Tries window sizes 3, 2, 1 and returns ``(entry, match_length)`` for
    the first hit, or None.  Never reads past ``tokens[i + 2]``.  Ties at
    the same length across categories resolve in Category order.
    Raises IndexError when ``i`` is outside the stream.
    """
    n = len(tokens)
    if not 0 <= i < n:
        raise IndexError(f"token position {i} out of range 0..{n - 1}")
    head = tokens[i].norm
    max_k = min(gaz._first_max.get(head, 0), n - i)
    cats = None if categories is None else frozenset(categories)
    for k in range(max_k, 0, -1):
        key = tuple(tokens[i + j].norm for j in range(k))
        hit = gaz._by_key.get(key)
        if not hit:
            continue
        matches = [c for c in hit if cats is None or c in cats]
        if matches:
            best = min(matches, key=_CATEGORY_ORDER.__getitem__)
            return hit[best], k
    return None


def gazetteer_stats(gaz: Gazetteer) -> Dict[Category, int]:
    """Entry count per category; every category present, zeros included."""
    counts = {cat: 0 for cat in Category}
    for e in gaz.entries():
        counts[e.category] += 1
    return counts


# --------------------------------------------------------------------------
# TSV parsing
# --------------------------------------------------------------------------

def _iter_tsv(path) -> Iterator[Tuple[int, str, str]]:
    """Yield (lineno, surface, category) for data lines of a TSV file."""
    with open(path, encoding="utf-8-sig") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 2 or not parts[0].strip() or not parts[1].strip():
                raise MalformedLine(path, lineno, "expected SURFACE<TAB>CATEGORY")
            yield lineno, parts[0].strip(), parts[1].strip()


def _normalize_words(path, lineno: int, surface: str) -> Tuple[str, ...]:
    words = []
    for word in surface.split():
        core, _ = strip_edge_specials(word)
        if not core:
            raise MalformedLine(path, lineno, f"surface word is all punctuation: {word!r}")
        words.append(core.lower())
    if not words:
        raise MalformedLine(path, lineno, "empty surface")
    if len(words) > MAX_ENTRY_WORDS:
        raise MalformedLine(
            path, lineno, f"surface has {len(words)} words, maximum is {MAX_ENTRY_WORDS}")
    return tuple(words)


def _parse_category(path, lineno: int, name: str) -> Category:
    try:
        return Category[name]
    except KeyError:
        raise UnknownCategory(path, lineno, f"unknown category {name!r}") from None


def load_gazetteer(paths: Sequence) -> Gazetteer:
    """Load and merge gazetteer files; duplicates across files are errors."""
    entries: List[GazetteerEntry] = []
    seen: Dict[Tuple[Tuple[str, ...], Category], str] = {}
    for path in paths:
        for lineno, surface, cat_name in _iter_tsv(path):
            category = _parse_category(path, lineno, cat_name)
            words = _normalize_words(path, lineno, surface)
            key = (words, category)
            if key in seen:
                raise DuplicateEntry(
                    path, lineno,
                    f"duplicate entry {' '.join(words)!r} / {category.value}"
                    f" (first seen at {seen[key]})")
            seen[key] = f"{path}:{lineno}"
            entries.append(GazetteerEntry(
                surface=" ".join(words), words=words,
                category=category, source=f"{path}:{lineno}"))
    return Gazetteer(entries)


def load_word_list(path, category: str) -> frozenset:
    """Load a single-word-per-entry list stored under a reserved category."""
    words = set()
    for lineno, surface, cat_name in _iter_tsv(path):
        if cat_name != category:
            raise UnknownCategory(
                path, lineno, f"expected category {category!r}, got {cat_name!r}")
        entry = _normalize_words(path, lineno, surface)
        if len(entry) != 1:
            raise MalformedLine(path, lineno, "word-list entries must be single words")
        words.add(entry[0])
    return frozenset(words)


def load_suffix_table(path):
    """Load the suffix table: (suffix -> label name, person-marker set).

    Suffix categories map to tag labels in the rules module; the table file
    keeps label knowledge out of this parser by returning category names.
    """
    suffixes: Dict[str, str] = {}
    markers = set()
    for lineno, surface, cat_name in _iter_tsv(path):
        if cat_name not in SUFFIX_CATEGORIES:
            raise UnknownCategory(
                path, lineno,
                f"expected one of {', '.join(SUFFIX_CATEGORIES)}, got {cat_name!r}")
        entry = _normalize_words(path, lineno, surface)
        if len(entry) != 1:
            raise MalformedLine(path, lineno, "suffix entries must be single words")
        if cat_name == PERSON_MARKER:
            markers.add(entry[0])
        elif entry[0] in suffixes:
            raise DuplicateEntry(path, lineno, f"duplicate suffix {entry[0]!r}")
        else:
            suffixes[entry[0]] = cat_name
    return suffixes, frozenset(markers)


def validate_sources(gazetteer_paths: Sequence, word_lists: Sequence) -> List[str]:
    """Check every configured data file, collecting all problems.

    ``word_lists`` is a sequence of (path, expected-category or None for the
    suffix table).  Unlike the loaders, this does not stop at the first bad
    line; it returns one message per problem so a check command can list
    them all.
    """
    problems: List[str] = []
    seen: Dict[Tuple[Tuple[str, ...], Category], str] = {}

    def check_lines(path, handler):
        try:
            with open(path, encoding="utf-8-sig") as fh:
                lines = fh.readlines()
        except OSError as exc:
            problems.append(f"{path}: {exc}")
            return
        for lineno, raw in enumerate(lines, 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 2 or not parts[0].strip() or not parts[1].strip():
                problems.append(f"{path}:{lineno}: expected SURFACE<TAB>CATEGORY")
                continue
            handler(lineno, parts[0].strip(), parts[1].strip())

    def gaz_handler_for(path):
        def handler(lineno, surface, cat_name):
            try:
                category = _parse_category(path, lineno, cat_name)
                words = _normalize_words(path, lineno, surface)
            except (MalformedLine, UnknownCategory) as exc:
                problems.append(str(exc))
                return
            key = (words, category)
            if key in seen:
                problems.append(
                    f"{path}:{lineno}: duplicate entry {' '.join(words)!r}"
                    f" / {category.value} (first seen at {seen[key]})")
            else:
                seen[key] = f"{path}:{lineno}"
        return handler

    def list_handler_for(path, expected):
        def handler(lineno, surface, cat_name):
            allowed = SUFFIX_CATEGORIES if expected is None else (expected,)
            if cat_name not in allowed:
                problems.append(
                    f"{path}:{lineno}: expected category"
                    f" {' or '.join(allowed)}, got {cat_name!r}")
                return
            try:
                entry = _normalize_words(path, lineno, surface)
            except MalformedLine as exc:
                problems.append(str(exc))
                return
            if len(entry) != 1:
                problems.append(f"{path}:{lineno}: entries must be single words")
        return handler

    for path in gazetteer_paths:
        check_lines(path, gaz_handler_for(path))
    for path, expected in word_lists:
        check_lines(path, list_handler_for(path, expected))
    return problems
