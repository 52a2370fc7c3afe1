"""Classic readability formulas computed from Document statistics.

All four scores are pure functions of (words, sentences, syllables,
characters, hard_words). Words include number tokens; characters are the
alphanumeric characters of word and number tokens only, so punctuation
never moves a score. Flesch Reading Ease is reported raw, not clamped to
[0, 100].
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .textproc import Document, is_hard_word


class EmptyDocumentError(ValueError):
    pass


@dataclass(frozen=True)
class DocStats:
    words: int
    sentences: int
    syllables: int
    characters: int
    hard_words: int


@dataclass(frozen=True)
class ReadabilityReport:
    fre: float
    fkgl: float
    gfi: float
    ari: float
    stats: DocStats
    syllable_dict_hit_rate: float = 0.0

    def as_dict(self) -> dict:
        return {
            "fre": self.fre, "fkgl": self.fkgl, "gfi": self.gfi, "ari": self.ari,
            "words": self.stats.words, "sentences": self.stats.sentences,
            "syllables": self.stats.syllables, "characters": self.stats.characters,
            "hard_words": self.stats.hard_words,
            "syllable_dict_hit_rate": self.syllable_dict_hit_rate,
        }


def document_stats(doc: Document,
                   syllables: Mapping[str, int] | None = None) -> DocStats:
    words = 0
    sylls = 0
    chars = 0
    hard = 0
    for tok in doc.tokens:
        if not tok.is_countable:
            continue
        words += 1
        sylls += tok.syllables
        chars += sum(c.isalnum() for c in tok.surface)
        if tok.kind == "word" and is_hard_word(tok, syllables):
            hard += 1
    if words == 0 or doc.sentence_count == 0:
        raise EmptyDocumentError("document has no words or no sentences")
    return DocStats(words=words, sentences=doc.sentence_count,
                    syllables=sylls, characters=chars, hard_words=hard)


def fre_from_stats(s: DocStats) -> float:
    return 206.835 - 1.015 * (s.words / s.sentences) - 84.6 * (s.syllables / s.words)


def fkgl_from_stats(s: DocStats) -> float:
    return 0.39 * (s.words / s.sentences) + 11.8 * (s.syllables / s.words) - 15.59


def gfi_from_stats(s: DocStats) -> float:
    return 0.4 * (s.words / s.sentences + 100.0 * s.hard_words / s.words)


def ari_from_stats(s: DocStats) -> float:
    return 4.71 * (s.characters / s.words) + 0.5 * (s.words / s.sentences) - 21.43


def flesch_reading_ease(doc: Document) -> float:
    return fre_from_stats(document_stats(doc))


def flesch_kincaid_grade(doc: Document) -> float:
    return fkgl_from_stats(document_stats(doc))


def gunning_fog(doc: Document) -> float:
    return gfi_from_stats(document_stats(doc))


def automated_readability_index(doc: Document) -> float:
    return ari_from_stats(document_stats(doc))


METRICS = ("fre", "fkgl", "gfi", "ari")

# Direction of improved readability per metric (higher FRE is easier;
# lower grade-level scores are easier).
IMPROVEMENT_DIRECTION = {"fre": "higher", "fkgl": "lower", "gfi": "lower", "ari": "lower"}


def compute_report(doc: Document,
                   syllables: Mapping[str, int] | None = None) -> ReadabilityReport:
    stats = document_stats(doc, syllables)
    return ReadabilityReport(
        fre=fre_from_stats(stats),
        fkgl=fkgl_from_stats(stats),
        gfi=gfi_from_stats(stats),
        ari=ari_from_stats(stats),
        stats=stats,
        syllable_dict_hit_rate=doc.syllable_dict_hit_rate(),
    )
