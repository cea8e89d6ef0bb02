"""The tagging rules: one matcher per rule over a token window.

Each matcher is a pure function of (tokens, position) plus the rule data
bound on the RuleSet: gazetteer, month names, letter names, stopwords, and
the suffix table.  Matchers emit Proposals; the pipeline owns scan order,
precondition gating between rules, and conflict resolution.

Cascade summary (priority in parentheses, lower wins):

* gazetteer direct match for unambiguous categories (0)
* date/time patterns (1) and URL/email patterns (1)
* gazetteer person names, longest match up to 3 words (2)
* title/designation, tagging the following name tokens as PERSON (3)
* surname-triggered person spans (4)
* initials + surname person spans (5)
* letter-name runs and gazetteer short forms as abbreviations (6)
* location/person/term word suffixes (7)
* number-word runs (8)
* organization keyword with backward extension (9)
* ambiguous name resolved by the genitive postposition (10)
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, FrozenSet, List, Optional, Tuple

from .gazetteer import (
    Category,
    Gazetteer,
    LOCATION_SUFFIX,
    PERSON_SUFFIX,
    TERM_SUFFIX,
    lookup_longest,
)
from .text import NUMBER, PUNCTUATION, WORD


class TagLabel(enum.Enum):
    PERSON = "PERSON"
    LOCATION = "LOCATION"
    ORGANIZATION = "ORGANIZATION"
    DATE = "DATE"
    TIME = "TIME"
    DESIGNATION = "DESIGNATION"
    TERM = "TERM"
    ABBREVIATION = "ABBREVIATION"
    NUMBER = "NUMBER"
    URL = "URL"
    EMAIL = "EMAIL"
    BRAND = "BRAND"


class RuleId(enum.Enum):
    R1_DateTime = "R1_DateTime"
    R2_Suffix = "R2_Suffix"
    R3_GazetteerName = "R3_GazetteerName"
    R4_SurnameTrigger = "R4_SurnameTrigger"
    R5_TitleDesignation = "R5_TitleDesignation"
    R6_Postposition = "R6_Postposition"
    R7_NumberWords = "R7_NumberWords"
    R8_Initials = "R8_Initials"
    R9_Abbreviation = "R9_Abbreviation"
    R10_OrgKeyword = "R10_OrgKeyword"
    R_UrlEmail = "R_UrlEmail"
    R_GazetteerDirect = "R_GazetteerDirect"


_RULE_ORDER = {rule: i for i, rule in enumerate(RuleId)}

DEFAULT_PRIORITIES: Dict[RuleId, int] = {
    RuleId.R_GazetteerDirect: 0,
    RuleId.R1_DateTime: 1,
    RuleId.R_UrlEmail: 1,
    RuleId.R3_GazetteerName: 2,
    RuleId.R5_TitleDesignation: 3,
    RuleId.R4_SurnameTrigger: 4,
    RuleId.R8_Initials: 5,
    RuleId.R9_Abbreviation: 6,
    RuleId.R2_Suffix: 7,
    RuleId.R7_NumberWords: 8,
    RuleId.R10_OrgKeyword: 9,
    RuleId.R6_Postposition: 10,
}

# Widest span each rule may emit, in tokens.  The initials rule can cover
# three initials plus the surname; the org-keyword rule a keyword plus two
# qualifiers; everything else is capped at three.
SPAN_CAPS: Dict[RuleId, int] = {rule: 3 for rule in RuleId}
SPAN_CAPS[RuleId.R8_Initials] = 4

# Categories tagged directly from the gazetteer, and their labels.
DIRECT_LABELS = {
    Category.Location: TagLabel.LOCATION,
    Category.Organization: TagLabel.ORGANIZATION,
    Category.Brand: TagLabel.BRAND,
    Category.Term: TagLabel.TERM,
    Category.Abbreviation: TagLabel.ABBREVIATION,
}

_SUFFIX_LABELS = {
    LOCATION_SUFFIX: TagLabel.LOCATION,
    PERSON_SUFFIX: TagLabel.PERSON,
    TERM_SUFFIX: TagLabel.TERM,
}

# Genitive postposition that resolves an ambiguous name to PERSON.
POSTPOSITION_CUE = "جي"

# Word that turns a bare year number into a date ("2016 سال").
YEAR_WORD = "سال"

MIN_SUFFIX_STEM = 2

_DAY_RE = re.compile(r"\d{1,2}")
_YEAR_RE = re.compile(r"\d{4}")
_DMY_RE = re.compile(r"\d{1,2}([./])\d{1,2}\1\d{4}")
_TIME_RE = re.compile(r"(\d{1,2}):(\d{2})")
_URL_RE = re.compile(r"[A-Za-z][A-Za-z0-9+.\-]*://\S+")
_WWW_RE = re.compile(r"www\..+", re.IGNORECASE)
_EMAIL_RE = re.compile(r"[^@\s]+@[^@\s]+\.[^@\s]+")


@dataclass(frozen=True, slots=True)
class Proposal:
    """A candidate entity: half-open token range plus label and strength."""

    start: int
    end: int
    label: TagLabel
    rule: RuleId
    priority: int

    def __post_init__(self):
        if not 0 <= self.start < self.end:
            raise ValueError(f"bad proposal range [{self.start}, {self.end})")


def sort_key(p: Proposal):
    """Total order used by conflict resolution: strongest first."""
    return (p.priority, p.start - p.end, p.start, _RULE_ORDER[p.rule], p.label.value)


@dataclass(frozen=True)
class RuleSet:
    """Matchers bound to their data: gazetteer, word lists, suffix table."""

    gaz: Gazetteer
    months: FrozenSet[str]
    letters: FrozenSet[str]
    stopwords: FrozenSet[str]
    suffixes: Dict[str, TagLabel]
    person_markers: FrozenSet[str]
    priorities: Dict[RuleId, int]

    @staticmethod
    def label_for_suffix_category(cat_name: str) -> TagLabel:
        return _SUFFIX_LABELS[cat_name]

    @cached_property
    def number_words(self) -> frozenset:
        return self.gaz.single_token_norms(Category.NumberWord)

    @cached_property
    def org_keywords(self) -> frozenset:
        return self.gaz.single_token_norms(Category.OrgKeyword)

    @cached_property
    def suffix_endings(self) -> tuple:
        return tuple(self.suffixes)

    def _make(self, start: int, end: int, label: TagLabel, rule: RuleId) -> Proposal:
        return Proposal(start, end, label, rule, self.priorities[rule])

    # -- rule 1: dates and times ------------------------------------------

    def match_datetime(self, tokens, i: int) -> Optional[Proposal]:
        """DATE/TIME patterns anchored on a number-literal token.

        Covers D.D.YYYY and D/D/YYYY, "<day> <month> <year>", "<day>
        <month>", "<year> سال", and H:MM / HH:MM with hour <= 23 and
        minute <= 59.
        """
        t = tokens[i]
        if t.kind != NUMBER:
            return None
        s = t.surface
        n = len(tokens)
        if _DAY_RE.fullmatch(s) and i + 1 < n and tokens[i + 1].norm in self.months:
            if (i + 2 < n and tokens[i + 2].kind == NUMBER
                    and _YEAR_RE.fullmatch(tokens[i + 2].surface)):
                return self._make(i, i + 3, TagLabel.DATE, RuleId.R1_DateTime)
            return self._make(i, i + 2, TagLabel.DATE, RuleId.R1_DateTime)
        if (_YEAR_RE.fullmatch(s) and i + 1 < n
                and tokens[i + 1].norm == YEAR_WORD):
            return self._make(i, i + 2, TagLabel.DATE, RuleId.R1_DateTime)
        if _DMY_RE.fullmatch(s):
            return self._make(i, i + 1, TagLabel.DATE, RuleId.R1_DateTime)
        m = _TIME_RE.fullmatch(s)
        if m and int(m.group(1)) <= 23 and int(m.group(2)) <= 59:
            return self._make(i, i + 1, TagLabel.TIME, RuleId.R1_DateTime)
        return None

    # -- URLs and email addresses -----------------------------------------

    def match_url_email(self, tokens, i: int) -> Optional[Proposal]:
        """URL for scheme:// or www. tokens, EMAIL for local@domain.tld."""
        t = tokens[i]
        if t.kind == PUNCTUATION:
            return None
        s = t.surface
        if _URL_RE.fullmatch(s) or _WWW_RE.fullmatch(s):
            return self._make(i, i + 1, TagLabel.URL, RuleId.R_UrlEmail)
        if _EMAIL_RE.fullmatch(s):
            return self._make(i, i + 1, TagLabel.EMAIL, RuleId.R_UrlEmail)
        return None

    # -- rule 2: word suffixes --------------------------------------------

    def match_suffix(self, token) -> Optional[Tuple[TagLabel, str]]:
        """Label a single word by its ending, or by a person-marker surface.

        The stem left after removing the suffix must be at least two
        characters; marker words (whole-surface equality) are exempt.
        Returns (label, suffix-or-marker) rather than a Proposal because
        the caller owns the position.
        """
        if token.kind != WORD:
            return None
        n = token.norm
        if n in self.person_markers:
            return TagLabel.PERSON, n
        best = None
        for suffix, label in self.suffixes.items():
            if (n.endswith(suffix) and len(n) - len(suffix) >= MIN_SUFFIX_STEM
                    and (best is None or len(suffix) > len(best[1]))):
                best = (label, suffix)
        return best

    # -- rule 5: titles and designations ----------------------------------

    def match_title_designation(self, tokens, i: int) -> List[Proposal]:
        """DESIGNATION on a title/designation match, PERSON on what follows.

        The person span covers the next one or two word-kind non-stopword
        tokens; it stops at the first token that fails the test.
        """
        hit = lookup_longest(self.gaz, tokens, i, (Category.Title, Category.Designation))
        if hit is None:
            return []
        k = hit[1]
        props = [self._make(i, i + k, TagLabel.DESIGNATION, RuleId.R5_TitleDesignation)]
        j = i + k
        n = 0
        while (n < 2 and j + n < len(tokens) and tokens[j + n].kind == WORD
               and tokens[j + n].norm not in self.stopwords):
            n += 1
        if n:
            props.append(self._make(j, j + n, TagLabel.PERSON, RuleId.R5_TitleDesignation))
        return props

    # -- rule 4: surname trigger ------------------------------------------

    def match_surname_trigger(self, tokens, i: int) -> Optional[Proposal]:
        """PERSON over surname plus qualifying preceding token.

        The preceding token joins the span when it is word-kind and not a
        stopword.  A letter-name predecessor means an initials context, so
        no proposal is made at all: the initials rule owns that shape.
        """
        hit = lookup_longest(self.gaz, tokens, i, (Category.Surname,))
        if hit is None:
            return None
        end = i + hit[1]
        if i > 0:
            prev = tokens[i - 1]
            if prev.norm in self.letters:
                return None
            if prev.kind == WORD and prev.norm not in self.stopwords:
                return self._make(i - 1, end, TagLabel.PERSON, RuleId.R4_SurnameTrigger)
        return self._make(i, end, TagLabel.PERSON, RuleId.R4_SurnameTrigger)

    # -- rule 6: postposition disambiguation ------------------------------

    def resolve_postposition(self, tokens, i: int) -> Optional[Proposal]:
        """PERSON on a known-but-ambiguous name followed by the genitive جي.

        Covers only the name token itself.  The pipeline additionally
        requires that no rule-1..5 proposal already covers the position.
        """
        n = tokens[i].norm
        if not (self.gaz.contains((n,), Category.AmbiguousName)
                or self.gaz.contains((n,), Category.PersonFirstName)):
            return None
        if i + 1 < len(tokens) and tokens[i + 1].norm == POSTPOSITION_CUE:
            return self._make(i, i + 1, TagLabel.PERSON, RuleId.R6_Postposition)
        return None

    # -- rule 7: number words ----------------------------------------------

    def match_number_words(self, tokens, i: int) -> Optional[Proposal]:
        """NUMBER over a greedy run of number words, at most three."""
        numbers = self.number_words
        if tokens[i].norm not in numbers:
            return None
        k = 1
        while k < 3 and i + k < len(tokens) and tokens[i + k].norm in numbers:
            k += 1
        return self._make(i, i + k, TagLabel.NUMBER, RuleId.R7_NumberWords)

    # -- rule 8: initials before a surname ---------------------------------

    def match_initials(self, tokens, i: int) -> Optional[Proposal]:
        """PERSON over one to three letter-name tokens plus a surname."""
        if tokens[i].norm not in self.letters:
            return None
        run = 1
        while run < 3 and i + run < len(tokens) and tokens[i + run].norm in self.letters:
            run += 1
        j = i + run
        if j >= len(tokens):
            return None
        hit = lookup_longest(self.gaz, tokens, j, (Category.Surname,))
        if hit is None:
            return None
        return self._make(i, j + hit[1], TagLabel.PERSON, RuleId.R8_Initials)

    # -- rule 9: abbreviations ----------------------------------------------

    def match_abbreviation(self, tokens, i: int) -> Optional[Proposal]:
        """ABBREVIATION over a letter-name run or a gazetteer short form.

        A run needs at least two letter names: single letter-name tokens
        double as ordinary Sindhi words (جي is also the genitive
        postposition) and are left to stronger rules.
        """
        if tokens[i].norm in self.letters:
            k = 1
            while k < 3 and i + k < len(tokens) and tokens[i + k].norm in self.letters:
                k += 1
            if k >= 2:
                return self._make(i, i + k, TagLabel.ABBREVIATION, RuleId.R9_Abbreviation)
        hit = lookup_longest(self.gaz, tokens, i, (Category.Abbreviation,))
        if hit is None:
            return None
        return self._make(i, i + hit[1], TagLabel.ABBREVIATION, RuleId.R9_Abbreviation)

    # -- rule 10: organization keywords -------------------------------------

    def match_org_keyword(self, tokens, i: int, covered=frozenset()) -> Optional[Proposal]:
        """ORGANIZATION over a keyword plus up to two preceding qualifiers.

        Extension walks backward over word-kind tokens that are neither
        stopwords nor in ``covered`` (token positions claimed by earlier
        rules), taking at most two.  The keyword itself must be unclaimed.
        """
        if tokens[i].norm not in self.org_keywords or i in covered:
            return None
        start = i
        while start > 0 and i - start < 2:
            prev = tokens[start - 1]
            if (prev.kind != WORD or prev.norm in self.stopwords
                    or start - 1 in covered):
                break
            start -= 1
        return self._make(start, i + 1, TagLabel.ORGANIZATION, RuleId.R10_OrgKeyword)
