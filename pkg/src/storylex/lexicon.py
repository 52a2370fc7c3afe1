"""Word-level psycholinguistic ratings: loading, normalization, lookup.

The lexicon maps a normalized word form to its age-of-acquisition rating
(plus optional concreteness and part of speech). Lookup falls back from an
exact match to a rule-lemmatized match so inflected story tokens still
resolve; callers learn which rung matched.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional

from .textproc import Document, strip_suffix_candidates


class LexiconError(Exception):
    pass


@dataclass(frozen=True)
class LexiconEntry:
    surface: str
    aoa: float
    concreteness: float | None = None
    pos: str | None = None
    lemma: str | None = None

    def __post_init__(self):
        if not self.surface:
            raise ValueError("empty surface form")
        if self.aoa <= 0:
            raise ValueError(f"aoa must be > 0, got {self.aoa}")


@dataclass(frozen=True)
class ColumnMap:
    """Names of the columns to read from a ratings file."""
    word: str
    aoa: str
    concreteness: str | None = None
    pos: str | None = None


@dataclass
class Lexicon:
    entries: dict[str, LexiconEntry]
    source_meta: dict = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, key: str) -> bool:
        return _norm_key(key) in self.entries

    def get(self, key: str) -> LexiconEntry | None:
        return self.entries.get(_norm_key(key))

    def lookup(self, token_form: str) -> Optional[tuple[float, str]]:
        """Resolve a word to (aoa, rung): exact match, then rule lemma, else None."""
        if not token_form:
            raise ValueError("empty token form")
        key = _norm_key(token_form)
        entry = self.entries.get(key)
        if entry is not None:
            return entry.aoa, "exact"
        for stem in strip_suffix_candidates(key):
            entry = self.entries.get(stem)
            if entry is not None:
                return entry.aoa, "lemma"
        return None

    def lookup_entry(self, token_form: str) -> Optional[tuple[LexiconEntry, str]]:
        key = _norm_key(token_form)
        entry = self.entries.get(key)
        if entry is not None:
            return entry, "exact"
        for stem in strip_suffix_candidates(key):
            entry = self.entries.get(stem)
            if entry is not None:
                return entry, "lemma"
        return None

    def coverage(self, doc: Document) -> float:
        """Fraction of word tokens that resolve through any lookup rung."""
        words = doc.word_tokens()
        if not words:
            raise LexiconError("no word tokens in document")
        found = sum(1 for t in words if self.lookup(t.norm) is not None)
        return found / len(words)


def _norm_key(word: str) -> str:
    return "".join(c for c in word if c.isalpha()).lower()


def _parse_float(raw: str) -> float | None:
    raw = raw.strip()
    if not raw or raw.upper() in ("NA", "N/A", "#N/A", "NONE", "NULL"):
        return None
    try:
        return float(raw)
    except ValueError:
        return None


def load_lexicon(path: str | Path, colmap: ColumnMap) -> Lexicon:
    """Load a comma-separated ratings file with a header row.

    Malformed rows are counted, not fatal. Duplicate normalized keys keep
    the lowest-AoA entry (conservative for appropriateness checks); the
    collision count lands in source_meta.
    """
    path = Path(path)
    if not path.exists():
        raise LexiconError(f"lexicon file not found: {path}")

    entries: dict[str, LexiconEntry] = {}
    malformed = 0
    collisions = 0
    rows = 0
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise LexiconError(f"lexicon file has no header row: {path}")
        header = [h.strip() for h in reader.fieldnames]
        for col in (colmap.word, colmap.aoa, colmap.concreteness, colmap.pos):
            if col is not None and col not in header:
                raise LexiconError(f"column {col!r} not in header {header}")
        for row in reader:
            rows += 1
            row = {(k or "").strip(): v for k, v in row.items() if k is not None}
            word = (row.get(colmap.word) or "").strip().lower()
            aoa = _parse_float(row.get(colmap.aoa) or "")
            if not word or aoa is None or aoa <= 0:
                malformed += 1
                continue
            key = _norm_key(word)
            if not key:
                malformed += 1
                continue
            concreteness = (_parse_float(row.get(colmap.concreteness) or "")
                            if colmap.concreteness else None)
            pos = (row.get(colmap.pos) or "").strip() or None if colmap.pos else None
            entry = LexiconEntry(surface=word, aoa=aoa, concreteness=concreteness, pos=pos)
            prior = entries.get(key)
            if prior is not None:
                collisions += 1
                if entry.aoa < prior.aoa:
                    entries[key] = entry
            else:
                entries[key] = entry

    if not entries:
        raise LexiconError(f"zero parseable rows in {path}")

    return Lexicon(
        entries=entries,
        source_meta={
            "path": str(path),
            "columns": {
                "word": colmap.word,
                "aoa": colmap.aoa,
                "concreteness": colmap.concreteness,
                "pos": colmap.pos,
            },
            "rows": rows,
            "entries": len(entries),
            "malformed": malformed,
            "collisions": collisions,
            "collision_policy": "keep-lowest-aoa",
        },
    )


def from_entries(pairs: Iterable[LexiconEntry]) -> Lexicon:
    """Build an in-memory lexicon (fixtures, tests); same collision policy."""
    entries: dict[str, LexiconEntry] = {}
    collisions = 0
    for entry in pairs:
        key = _norm_key(entry.surface)
        prior = entries.get(key)
        if prior is not None:
            collisions += 1
            if entry.aoa < prior.aoa:
                entries[key] = entry
        else:
            entries[key] = entry
    return Lexicon(entries=entries, source_meta={
        "path": "<memory>", "collisions": collisions,
        "collision_policy": "keep-lowest-aoa",
    })
