"""Tagged-corpus storage, gold-standard loading, and evaluation.

CorpusStore keeps tagged documents in an append-only jsonl file with an
in-memory index for querying; reopening a store rebuilds the index from
disk.  GoldCorpus holds token/label sequences read from tab-separated
files, and ``evaluate`` re-tags each gold document and scores the output
token by token.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from .errors import (
    CorruptStore,
    EmptyCorpus,
    LabelMismatch,
    MalformedLine,
    TokenizationMismatch,
    UnknownLabel,
)
from .pipeline import Engine, EntitySpan, TaggedDocument, entity_from_dict, entity_to_dict
from .rules import TagLabel

_DOCSTART = "-DOCSTART-"
_LABEL_VALUES = frozenset(label.value for label in TagLabel)

Location = Tuple[int, int, int]  # (record id, token_start, token_end)


@dataclass
class StoredDocument:
    doc_id: int
    text: str
    entities: List[EntitySpan]


class CorpusStore:
    """Append-only jsonl store of tagged documents with a query index.

    Records carry monotonically increasing integer ids starting at 1.
    The file is the source of truth; the index lives in memory and is
    rebuilt on open.  Writes are flushed per record.
    """

    def __init__(self, path):
        self.path = Path(path)
        self._records: Dict[int, StoredDocument] = {}
        self._next_id = 1
        # (label value, casefolded surface) -> locations, insertion order
        self._index: Dict[Tuple[str, str], List[Location]] = {}
        if self.path.exists():
            self._load()
        self._fh = open(self.path, "a", encoding="utf-8")

    def _load(self):
        offset = 0
        with open(self.path, "rb") as fh:
            for raw in fh:
                line = raw.decode("utf-8", errors="replace").strip()
                if line:
                    try:
                        record = json.loads(line)
                        doc_id = record["id"]
                        text = record["text"]
                        entities = [entity_from_dict(d) for d in record["entities"]]
                        if not isinstance(doc_id, int) or doc_id < self._next_id:
                            raise ValueError("record ids must increase")
                    except (ValueError, KeyError, TypeError) as exc:
                        raise CorruptStore(self.path, offset) from exc
                    self._admit(StoredDocument(doc_id, text, entities))
                offset += len(raw)

    def _admit(self, doc: StoredDocument):
        self._records[doc.doc_id] = doc
        self._next_id = doc.doc_id + 1
        for e in doc.entities:
            key = (e.label.value, e.surface.casefold())
            self._index.setdefault(key, []).append(
                (doc.doc_id, e.token_start, e.token_end))

    def append(self, tagged: TaggedDocument) -> int:
        """Store one tagged document; returns its assigned id."""
        doc = StoredDocument(self._next_id, tagged.source, list(tagged.entities))
        line = json.dumps(
            {"id": doc.doc_id, "text": doc.text,
             "entities": [entity_to_dict(e) for e in doc.entities]},
            ensure_ascii=False)
        self._fh.write(line + "\n")
        self._fh.flush()
        self._admit(doc)
        return doc.doc_id

    def get(self, doc_id: int) -> StoredDocument:
        return self._records[doc_id]

    def __len__(self) -> int:
        return len(self._records)

    def documents(self) -> Iterator[StoredDocument]:
        for doc_id in sorted(self._records):
            yield self._records[doc_id]

    def query(self, label: Optional[str] = None, surface: Optional[str] = None,
              rule: Optional[str] = None) -> List[Tuple[Location, EntitySpan]]:
        """Entities matching every given filter, ordered by (id, start).

        ``label`` matches exactly, ``surface`` is a casefolded substring
        test, ``rule`` matches the producing rule's name exactly.
        """
        needle = surface.casefold() if surface is not None else None
        out = []
        for doc_id in sorted(self._records):
            for e in self._records[doc_id].entities:
                if label is not None and e.label.value != label:
                    continue
                if needle is not None and needle not in e.surface.casefold():
                    continue
                if rule is not None and e.rule.value != rule:
                    continue
                out.append(((doc_id, e.token_start, e.token_end), e))
        out.sort(key=lambda item: (item[0][0], item[0][1]))
        return out

    def close(self):
        if self._fh is not None:
            self._fh.close()
            self._fh = None

    def __enter__(self) -> "CorpusStore":
        return self

    def __exit__(self, *exc) -> None:
        self.close()


def store_document(store: CorpusStore, doc: TaggedDocument) -> int:
    """Append one tagged document to the store; returns its record id."""
    return store.append(doc)


def query(store: CorpusStore, label: Optional[str] = None,
          surface: Optional[str] = None, rule: Optional[str] = None):
    """Free-function form of :meth:`CorpusStore.query`."""
    return store.query(label=label, surface=surface, rule=rule)


# --------------------------------------------------------------------------
# Gold corpora
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class GoldDocument:
    tokens: Tuple[str, ...]
    labels: Tuple[str, ...]  # label values or "O"


@dataclass(frozen=True)
class GoldCorpus:
    documents: Tuple[GoldDocument, ...]

    @property
    def token_count(self) -> int:
        return sum(len(d.tokens) for d in self.documents)


def load_gold(path) -> GoldCorpus:
    """Read token<TAB>label lines; blank lines separate documents."""
    path = Path(path)
    docs: List[GoldDocument] = []
    tokens: List[str] = []
    labels: List[str] = []

    def flush():
        if tokens:
            docs.append(GoldDocument(tuple(tokens), tuple(labels)))
            tokens.clear()
            labels.clear()

    with open(path, encoding="utf-8-sig") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.rstrip("\n").rstrip("\r")
            if not line.strip():
                flush()
                continue
            if line.split("\t")[0].strip() == _DOCSTART:
                continue
            parts = line.split("\t")
            if len(parts) != 2 or not parts[0].strip() or not parts[1].strip():
                raise MalformedLine(
                    path, lineno, f"expected token<TAB>label, got {line!r}")
            token, label = parts[0].strip(), parts[1].strip()
            if label != "O" and label not in _LABEL_VALUES:
                raise UnknownLabel(path, lineno, f"unknown label {label!r}")
            tokens.append(token)
            labels.append(label)
    flush()
    if not docs:
        raise EmptyCorpus(f"no documents in {path}")
    return GoldCorpus(tuple(docs))


# --------------------------------------------------------------------------
# Scoring
# --------------------------------------------------------------------------

@dataclass
class LabelScore:
    tp: int = 0
    fp: int = 0
    fn: int = 0

    @property
    def precision(self) -> float:
        return self.tp / (self.tp + self.fp) if self.tp + self.fp else 0.0

    @property
    def recall(self) -> float:
        return self.tp / (self.tp + self.fn) if self.tp + self.fn else 0.0

    @property
    def f1(self) -> float:
        p, r = self.precision, self.recall
        return 2 * p * r / (p + r) if p + r else 0.0


@dataclass
class EvalReport:
    total_tokens: int
    correct_tokens: int
    per_label: Dict[str, LabelScore] = field(default_factory=dict)

    @property
    def accuracy(self) -> float:
        return self.correct_tokens / self.total_tokens if self.total_tokens else 0.0

    @property
    def accuracy_display(self) -> str:
        return f"{100 * self.correct_tokens / self.total_tokens:.2f}%"

    def to_dict(self) -> dict:
        return {
            "total_tokens": self.total_tokens,
            "correct_tokens": self.correct_tokens,
            "accuracy": self.accuracy_display,
            "labels": {
                name: {"tp": s.tp, "fp": s.fp, "fn": s.fn,
                       "precision": s.precision, "recall": s.recall, "f1": s.f1}
                for name, s in sorted(self.per_label.items())
            },
        }


def score_labels(gold: Sequence[Sequence[str]],
                 predicted: Sequence[Sequence[str]]) -> EvalReport:
    """Token-level scores for aligned gold and predicted label sequences."""
    report = EvalReport(total_tokens=0, correct_tokens=0)
    for gold_seq, pred_seq in zip(gold, predicted):
        if len(gold_seq) != len(pred_seq):
            raise TokenizationMismatch(
                f"sequence lengths differ: {len(gold_seq)} gold vs "
                f"{len(pred_seq)} predicted")
        for g, p in zip(gold_seq, pred_seq):
            report.total_tokens += 1
            if g == p:
                report.correct_tokens += 1
            if p != "O":
                score = report.per_label.setdefault(p, LabelScore())
                if p == g:
                    score.tp += 1
                else:
                    score.fp += 1
            if g != "O" and g != p:
                report.per_label.setdefault(g, LabelScore()).fn += 1
    return report


def predicted_labels(doc: TaggedDocument) -> List[str]:
    labels = ["O"] * len(doc.tokens)
    for e in doc.entities:
        for i in range(e.token_start, e.token_end):
            labels[i] = e.label.value
    return labels


def evaluate(engine: Engine, gold: GoldCorpus) -> EvalReport:
    """Re-tag every gold document and score token labels.

    Gold tokens are joined with single spaces and run through the engine;
    if the engine's tokenizer disagrees about the token count the corpus
    and engine cannot be compared and TokenizationMismatch is raised.
    """
    if not gold.documents:
        raise EmptyCorpus("gold corpus has no documents")
    for idx, doc in enumerate(gold.documents):
        for label in doc.labels:
            if label != "O" and label not in _LABEL_VALUES:
                raise LabelMismatch(
                    f"document {idx + 1}: label {label!r} is not a tag label")
    gold_seqs = []
    pred_seqs = []
    for idx, doc in enumerate(gold.documents):
        tagged = engine.tag_text(" ".join(doc.tokens))
        if len(tagged.tokens) != len(doc.tokens):
            raise TokenizationMismatch(
                f"document {idx + 1}: gold has {len(doc.tokens)} tokens but "
                f"the tokenizer produced {len(tagged.tokens)}")
        gold_seqs.append(doc.labels)
        pred_seqs.append(predicted_labels(tagged))
    return score_labels(gold_seqs, pred_seqs)
