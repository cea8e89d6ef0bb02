"""Engine assembly, the tagging cascade, and output rendering.

``build_engine`` loads gazetteers and word lists per an EngineConfig and
returns an immutable Engine.  ``tag_text`` normalizes, tokenizes, collects
rule proposals in cascade order, and resolves overlaps into a
TaggedDocument whose entities and untagged token indices partition the
token stream.

Conflict resolution is greedy: proposals are sorted strongest-first
(priority, then longer span, then leftmost start) and accepted unless they
overlap an already accepted span.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .errors import ConfigError, MissingDataFile, UnknownFormat
from .gazetteer import (
    Category,
    Gazetteer,
    LETTER_NAME,
    MONTH_NAME,
    STOPWORD,
    load_gazetteer,
    load_suffix_table,
    load_word_list,
    lookup_longest,
)
from .rules import (
    DEFAULT_PRIORITIES,
    DIRECT_LABELS,
    Proposal,
    RuleId,
    RuleSet,
    SPAN_CAPS,
    TagLabel,
    sort_key,
)
from .text import EDGE_SPECIALS, NUMBER, TokenStream, WORD, normalize_whitespace, tokenize

DATA_DIR = Path(__file__).resolve().parent / "data"
DEFAULT_CONFIG_PATH = DATA_DIR / "engine.conf"

RENDER_FORMATS = ("inline", "tabular", "jsonl")

# Rules whose proposals block rule 6 on a position (gazetteer direct
# matches and URL/email hits do not, only rules 1 through 5).
_R6_BLOCKERS = frozenset((
    RuleId.R1_DateTime,
    RuleId.R2_Suffix,
    RuleId.R3_GazetteerName,
    RuleId.R4_SurnameTrigger,
    RuleId.R5_TitleDesignation,
))

_GAZETTEER_KEYS = "gazetteers"
_PATH_KEYS = ("suffixes", "stopwords", "months", "letters", "synonyms")


@dataclass(frozen=True)
class EntitySpan:
    """A resolved entity: token range, byte range, label, rule, surface."""

    token_start: int
    token_end: int
    start_byte: int
    end_byte: int
    label: TagLabel
    rule: RuleId
    surface: str


@dataclass(frozen=True)
class TaggedDocument:
    """Tokenized text plus non-overlapping entities and leftover tokens.

    ``source`` is the whitespace-normalized text the byte spans index.
    Every token index is covered by exactly one entity or listed in
    ``untagged``.
    """

    source: str
    tokens: TokenStream
    entities: Tuple[EntitySpan, ...]
    untagged: Tuple[int, ...]


@dataclass(frozen=True)
class EngineConfig:
    """Paths and switches the engine is built from.

    Relative paths in a config file resolve against the file's directory.
    ``rule_flags`` enables or disables individual rules; ``priorities``
    overrides the default strength table.
    """

    gazetteers: Tuple[Path, ...]
    suffixes: Path
    stopwords: Path
    months: Path
    letters: Path
    synonyms: Optional[Path] = None
    edge_specials: str = EDGE_SPECIALS
    rule_flags: Mapping[RuleId, bool] = field(default_factory=dict)
    priorities: Mapping[RuleId, int] = field(default_factory=dict)

    @classmethod
    def default(cls) -> "EngineConfig":
        return load_config(DEFAULT_CONFIG_PATH)

    def with_gazetteers(self, paths: Sequence[Path]) -> "EngineConfig":
        return replace(self, gazetteers=tuple(Path(p) for p in paths))


def load_config(path) -> EngineConfig:
    """Parse a flat key=value config file into an EngineConfig."""
    path = Path(path)
    if not path.is_file():
        raise MissingDataFile(path)
    base = path.parent
    values: Dict[str, object] = {}
    rule_flags: Dict[RuleId, bool] = {}
    priorities: Dict[RuleId, int] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected key=value, got {line!r}")
            key, _, value = line.partition("=")
            key, value = key.strip(), value.strip()
            if key.startswith("rule."):
                rule_flags[_parse_rule_id(path, lineno, key[5:])] = _parse_flag(
                    path, lineno, value)
            elif key.startswith("priority."):
                try:
                    priorities[_parse_rule_id(path, lineno, key[9:])] = int(value)
                except ValueError:
                    raise ConfigError(
                        f"{path}:{lineno}: priority must be an integer, got {value!r}"
                    ) from None
            elif key == _GAZETTEER_KEYS:
                values[key] = tuple(
                    base / p.strip() for p in value.split(",") if p.strip())
            elif key in _PATH_KEYS:
                values[key] = base / value if value else None
            elif key == "edge_specials":
                values[key] = value or EDGE_SPECIALS
            else:
                raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
    for required in (_GAZETTEER_KEYS, "suffixes", "stopwords", "months", "letters"):
        if not values.get(required):
            raise ConfigError(f"{path}: missing required key {required!r}")
    return EngineConfig(
        gazetteers=values[_GAZETTEER_KEYS],
        suffixes=values["suffixes"],
        stopwords=values["stopwords"],
        months=values["months"],
        letters=values["letters"],
        synonyms=values.get("synonyms"),
        edge_specials=values.get("edge_specials", EDGE_SPECIALS),
        rule_flags=rule_flags,
        priorities=priorities,
    )


def _parse_rule_id(path, lineno, name: str) -> RuleId:
    try:
        return RuleId[name]
    except KeyError:
        raise ConfigError(f"{path}:{lineno}: unknown rule {name!r}") from None


def _parse_flag(path, lineno, value: str) -> bool:
    lowered = value.lower()
    if lowered in ("on", "true", "1", "yes"):
        return True
    if lowered in ("off", "false", "0", "no"):
        return False
    raise ConfigError(f"{path}:{lineno}: expected on/off, got {value!r}")


def _load_synonyms(path) -> Dict[str, str]:
    mapping: Dict[str, str] = {}
    with open(path, encoding="utf-8-sig") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 2 or not parts[0] or not parts[1]:
                raise ConfigError(
                    f"{path}:{lineno}: expected FROM<TAB>TO in synonym map")
            mapping[parts[0].strip()] = parts[1].strip()
    return mapping


class Engine:
    """Immutable tagging engine: config, gazetteer, rules, synonym map."""

    def __init__(self, config: EngineConfig, gaz: Gazetteer, rules: RuleSet,
                 synonyms: Mapping[str, str]):
        self.config = config
        self.gaz = gaz
        self.rules = rules
        self.synonyms = dict(synonyms)
        self.enabled: Dict[RuleId, bool] = {
            rule: bool(config.rule_flags.get(rule, True)) for rule in RuleId}
        # Scan gates: positions whose norm is not in these sets cannot
        # start a match for the corresponding rule.
        self._first_direct = gaz.first_token_norms(DIRECT_LABELS)
        self._first_person = gaz.first_token_norms((Category.PersonFirstName,))
        self._first_surname = gaz.first_token_norms((Category.Surname,))
        self._first_title = gaz.first_token_norms(
            (Category.Title, Category.Designation))
        self._first_abbrev = gaz.first_token_norms((Category.Abbreviation,))
        self._ambig_or_first = (gaz.single_token_norms(Category.AmbiguousName)
                                | gaz.single_token_norms(Category.PersonFirstName))

    @property
    def enabled_rules(self) -> Tuple[RuleId, ...]:
        return tuple(rule for rule in RuleId if self.enabled[rule])

    def tag_text(self, raw: str) -> TaggedDocument:
        return tag_text(self, raw)


def build_engine(config: Optional[EngineConfig] = None) -> Engine:
    """Load all configured data files and assemble an Engine.

    Raises MissingDataFile naming the first absent path; data-file errors
    from the loaders propagate with file and line number.
    """
    if config is None:
        config = EngineConfig.default()
    required = list(config.gazetteers) + [
        config.suffixes, config.stopwords, config.months, config.letters]
    if config.synonyms is not None:
        required.append(config.synonyms)
    for p in required:
        if not Path(p).is_file():
            raise MissingDataFile(p)
    gaz = load_gazetteer(config.gazetteers)
    suffix_cats, markers = load_suffix_table(config.suffixes)
    rules = RuleSet(
        gaz=gaz,
        months=load_word_list(config.months, MONTH_NAME),
        letters=load_word_list(config.letters, LETTER_NAME),
        stopwords=load_word_list(config.stopwords, STOPWORD),
        suffixes={sfx: RuleSet.label_for_suffix_category(cat)
                  for sfx, cat in suffix_cats.items()},
        person_markers=markers,
        priorities={**DEFAULT_PRIORITIES, **config.priorities},
    )
    synonyms = _load_synonyms(config.synonyms) if config.synonyms else {}
    return Engine(config, gaz, rules, synonyms)


# --------------------------------------------------------------------------
# The cascade
# --------------------------------------------------------------------------

def tag_text(engine: Engine, raw: str) -> TaggedDocument:
    """Normalize, tokenize, run the cascade, and resolve conflicts."""
    source = normalize_whitespace(raw)
    stream = tokenize(source, engine.config.edge_specials)
    if engine.synonyms:
        syn = engine.synonyms
        stream = TokenStream(
            tokens=tuple(
                replace(t, norm=syn[t.norm]) if t.norm in syn else t
                for t in stream.tokens),
            source=source)
    proposals = _collect(engine, stream)
    entities = resolve_conflicts(proposals, stream)
    covered = set()
    for e in entities:
        covered.update(range(e.token_start, e.token_end))
    untagged = tuple(i for i in range(len(stream)) if i not in covered)
    return TaggedDocument(source=source, tokens=stream,
                          entities=tuple(entities), untagged=untagged)


def _collect(engine: Engine, stream: TokenStream) -> List[Proposal]:
    """Run every enabled rule over the stream in cascade order.

    Order matters only through the coverage gates: the suffix rule skips
    positions already claimed, rule 6 skips positions claimed by rules
    1..5, the abbreviation rule skips positions claimed by initials, and
    the org-keyword rule sees everything claimed so far.  Direct gazetteer
    matches additionally never override date/time/URL/email shapes.
    """
    rules = engine.rules
    enabled = engine.enabled
    tokens = stream.tokens
    n = len(tokens)
    norms = [t.norm for t in tokens]
    proposals: List[Proposal] = []
    covered: set = set()
    r6_blocked: set = set()

    def push(p: Proposal):
        proposals.append(p)
        covered.update(range(p.start, p.end))
        if p.rule in _R6_BLOCKERS:
            r6_blocked.update(range(p.start, p.end))

    datetime_on = enabled[RuleId.R1_DateTime]
    urlemail_on = enabled[RuleId.R_UrlEmail]
    dt_covered: set = set()
    if datetime_on or urlemail_on:
        for i, t in enumerate(tokens):
            p = None
            if datetime_on and t.kind == NUMBER:
                p = rules.match_datetime(tokens, i)
            if p is None and urlemail_on and (
                    "://" in t.surface or "@" in t.surface
                    or t.surface[:4].lower() == "www."):
                p = rules.match_url_email(tokens, i)
            if p is not None:
                push(p)
                dt_covered.update(range(p.start, p.end))

    if enabled[RuleId.R_GazetteerDirect]:
        first_direct = engine._first_direct
        pri = rules.priorities[RuleId.R_GazetteerDirect]
        for i, norm in enumerate(norms):
            if norm not in first_direct:
                continue
            hit = lookup_longest(engine.gaz, tokens, i, DIRECT_LABELS)
            if hit is None:
                continue
            entry, k = hit
            if any(j in dt_covered for j in range(i, i + k)):
                continue
            push(Proposal(i, i + k, DIRECT_LABELS[entry.category],
                          RuleId.R_GazetteerDirect, pri))

    if enabled[RuleId.R5_TitleDesignation]:
        first_title = engine._first_title
        for i, norm in enumerate(norms):
            if norm in first_title:
                for p in rules.match_title_designation(tokens, i):
                    push(p)

    if enabled[RuleId.R4_SurnameTrigger]:
        first_surname = engine._first_surname
        for i, norm in enumerate(norms):
            if norm in first_surname:
                p = rules.match_surname_trigger(tokens, i)
                if p is not None:
                    push(p)

    if enabled[RuleId.R2_Suffix]:
        pri = rules.priorities[RuleId.R2_Suffix]
        markers = rules.person_markers
        endings = rules.suffix_endings
        for i, t in enumerate(tokens):
            if t.kind != WORD or i in covered:
                continue
            if t.norm in markers or t.norm.endswith(endings):
                hit = rules.match_suffix(t)
                if hit is not None:
                    push(Proposal(i, i + 1, hit[0], RuleId.R2_Suffix, pri))

    if enabled[RuleId.R3_GazetteerName]:
        first_person = engine._first_person
        pri = rules.priorities[RuleId.R3_GazetteerName]
        for i, norm in enumerate(norms):
            if norm not in first_person:
                continue
            hit = lookup_longest(engine.gaz, tokens, i, (Category.PersonFirstName,))
            if hit is not None:
                push(Proposal(i, i + hit[1], TagLabel.PERSON,
                              RuleId.R3_GazetteerName, pri))

    if enabled[RuleId.R8_Initials]:
        letters = rules.letters
        for i, norm in enumerate(norms):
            if norm in letters:
                p = rules.match_initials(tokens, i)
                if p is not None:
                    push(p)

    if enabled[RuleId.R6_Postposition]:
        ambig = engine._ambig_or_first
        for i, norm in enumerate(norms):
            if norm in ambig and i not in r6_blocked:
                p = rules.resolve_postposition(tokens, i)
                if p is not None:
                    push(p)

    if enabled[RuleId.R7_NumberWords]:
        numbers = rules.number_words
        for i, norm in enumerate(norms):
            if norm in numbers:
                p = rules.match_number_words(tokens, i)
                if p is not None:
                    push(p)

    if enabled[RuleId.R9_Abbreviation]:
        letters = rules.letters
        first_abbrev = engine._first_abbrev
        initials_spans = [p for p in proposals if p.rule is RuleId.R8_Initials]
        initials_covered: set = set()
        for p in initials_spans:
            initials_covered.update(range(p.start, p.end))
        for i, norm in enumerate(norms):
            if (norm in letters and i not in initials_covered) or norm in first_abbrev:
                p = rules.match_abbreviation(tokens, i)
                if p is not None:
                    push(p)

    if enabled[RuleId.R10_OrgKeyword]:
        keywords = rules.org_keywords
        frozen_cover = frozenset(covered)
        for i, norm in enumerate(norms):
            if norm in keywords:
                p = rules.match_org_keyword(tokens, i, frozen_cover)
                if p is not None:
                    push(p)

    return proposals


def select_proposals(proposals: Iterable[Proposal]) -> List[Proposal]:
    """Greedy non-overlapping selection in strength order, result by start."""
    taken: List[Proposal] = []
    occupied: set = set()
    for p in sorted(proposals, key=sort_key):
        span = range(p.start, p.end)
        if all(j not in occupied for j in span):
            taken.append(p)
            occupied.update(span)
    taken.sort(key=lambda p: p.start)
    return taken


def resolve_conflicts(proposals: Iterable[Proposal],
                      stream: TokenStream) -> Tuple[EntitySpan, ...]:
    """Select winning proposals and materialize them against the stream."""
    src_bytes = stream.source.encode("utf-8")
    out = []
    for p in select_proposals(proposals):
        start_byte = stream[p.start].span[0]
        end_byte = stream[p.end - 1].span[1]
        out.append(EntitySpan(
            token_start=p.start, token_end=p.end,
            start_byte=start_byte, end_byte=end_byte,
            label=p.label, rule=p.rule,
            surface=src_bytes[start_byte:end_byte].decode("utf-8")))
    return tuple(out)


# --------------------------------------------------------------------------
# Rendering
# --------------------------------------------------------------------------

def render(doc: TaggedDocument, fmt: str = "inline") -> str:
    """Render a tagged document as inline markup, token table, or jsonl."""
    if fmt == "inline":
        return _render_inline(doc)
    if fmt == "tabular":
        return _render_tabular(doc)
    if fmt == "jsonl":
        return _render_jsonl(doc)
    raise UnknownFormat(f"unknown render format {fmt!r}; expected one of "
                        + ", ".join(RENDER_FORMATS))


def _render_inline(doc: TaggedDocument) -> str:
    src = doc.source.encode("utf-8")
    pieces = []
    pos = 0
    for e in doc.entities:
        pieces.append(src[pos:e.start_byte])
        pieces.append(f"<{e.label.value}>".encode("utf-8"))
        pieces.append(src[e.start_byte:e.end_byte])
        pieces.append(f"</{e.label.value}>".encode("utf-8"))
        pos = e.end_byte
    pieces.append(src[pos:])
    return b"".join(pieces).decode("utf-8")


def _render_tabular(doc: TaggedDocument) -> str:
    labels = ["O"] * len(doc.tokens)
    for e in doc.entities:
        for i in range(e.token_start, e.token_end):
            labels[i] = e.label.value
    return "\n".join(f"{t.surface}\t{label}"
                     for t, label in zip(doc.tokens, labels))


def entity_to_dict(e: EntitySpan) -> dict:
    return {
        "start_byte": e.start_byte,
        "end_byte": e.end_byte,
        "token_start": e.token_start,
        "token_end": e.token_end,
        "label": e.label.value,
        "rule": e.rule.value,
        "surface": e.surface,
    }


def entity_from_dict(d: Mapping) -> EntitySpan:
    return EntitySpan(
        token_start=d["token_start"], token_end=d["token_end"],
        start_byte=d["start_byte"], end_byte=d["end_byte"],
        label=TagLabel(d["label"]), rule=RuleId(d["rule"]),
        surface=d["surface"])


def _render_jsonl(doc: TaggedDocument) -> str:
    record = {
        "text": doc.source,
        "entities": [entity_to_dict(e) for e in doc.entities],
    }
    return json.dumps(record, ensure_ascii=False)


def parse_jsonl(text: str) -> List[Tuple[str, List[EntitySpan]]]:
    """Parse jsonl output back into (text, entities) pairs."""
    docs = []
    for line in text.splitlines():
        if not line.strip():
            continue
        record = json.loads(line)
        docs.append((record["text"],
                     [entity_from_dict(d) for d in record["entities"]]))
    return docs
