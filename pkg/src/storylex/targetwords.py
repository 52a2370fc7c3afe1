"""Target-word selection: AoA band filter, rating aggregation, POS quotas.

Reconstructs the curation pipeline behind the bundled 250-word list
(150 nouns, 50 verbs, 50 adjectives): keep concrete single-POS
nouns/verbs/adjectives acquired between ages 6 and 9, one per lemma
family, then rank annotator-scored candidates and cut per-POS quotas.
The bundled list itself ships as data and is treated as ground truth.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from statistics import fmean

from .lexicon import Lexicon
from .textproc import strip_suffix_candidates

CATEGORIES = ("learnability", "imageability", "appropriateness")
TARGET_POS = ("noun", "verb", "adjective")

_POS_ALIASES = {
    "noun": "noun", "nn": "noun", "n": "noun",
    "verb": "verb", "vb": "verb", "v": "verb",
    "adjective": "adjective", "adj": "adjective", "jj": "adjective",
    "adverb": "adverb", "adv": "adverb", "rb": "adverb",
}
_MULTI_POS_SEPARATORS = "|,/;+& "


class TargetWordError(Exception):
    pass


@dataclass
class TargetCandidate:
    lemma: str
    pos: str
    aoa: float
    concreteness: float
    scores: dict[str, list[int]] = field(default_factory=lambda: {c: [] for c in CATEGORIES})


@dataclass(frozen=True)
class ScoredCandidate:
    candidate: TargetCandidate
    means: dict[str, float]
    composite: float


def normalize_pos(raw: str | None) -> str | None:
    """Single canonical POS, or None for missing/multi-tagged/unknown tags."""
    if not raw:
        return None
    raw = raw.strip().lower()
    if any(sep in raw for sep in _MULTI_POS_SEPARATORS):
        return None
    return _POS_ALIASES.get(raw)


def band_filter(lex: Lexicon, lo: float = 6.0, hi: float = 9.0,
                concreteness_cutoff: float = 3.5) -> list[TargetCandidate]:
    """Candidates in the AoA band, excluding adverbs, multi-POS entries,
    low/missing concreteness, and all but the lowest-AoA member of each
    lemma family."""
    entries = list(lex.entries.values())
    if all(e.pos is None for e in entries):
        raise TargetWordError("lexicon has no POS column loaded")
    if all(e.concreteness is None for e in entries):
        raise TargetWordError("lexicon has no concreteness column loaded")

    kept: dict[str, TargetCandidate] = {}
    for entry in entries:
        if not (lo <= entry.aoa <= hi):
            continue
        pos = normalize_pos(entry.pos)
        if pos not in TARGET_POS:
            continue
        if entry.concreteness is None or entry.concreteness < concreteness_cutoff:
            continue
        kept[entry.surface] = TargetCandidate(
            lemma=entry.surface, pos=pos, aoa=entry.aoa,
            concreteness=entry.concreteness)

    surviving = _dedupe_lemma_families(kept)
    return sorted(surviving, key=lambda c: c.lemma)


def _family_root(word: str, present: set[str]) -> str:
    for cand in strip_suffix_candidates(word):
        if cand in present:
            return _family_root(cand, present)
    return word


def _dedupe_lemma_families(kept: dict[str, TargetCandidate]) -> list[TargetCandidate]:
    present = set(kept)
    families: dict[str, list[TargetCandidate]] = {}
    for word, cand in kept.items():
        families.setdefault(_family_root(word, present), []).append(cand)
    out = []
    for members in families.values():
        members.sort(key=lambda c: (c.aoa, c.lemma))
        out.append(members[0])
    return out


def load_ratings(path: str | Path, candidates: list[TargetCandidate]) -> list[TargetCandidate]:
    """Attach `word,annotator,learnability,imageability,appropriateness` rows."""
    by_lemma = {c.lemma: c for c in candidates}
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        for lineno, row in enumerate(reader, 2):
            word = (row.get("word") or "").strip().lower()
            cand = by_lemma.get(word)
            if cand is None:
                continue
            for cat in CATEGORIES:
                raw = (row.get(cat) or "").strip()
                try:
                    rating = int(raw)
                except ValueError:
                    raise TargetWordError(
                        f"{path}:{lineno}: bad {cat} rating {raw!r}") from None
                if not 1 <= rating <= 5:
                    raise TargetWordError(
                        f"{path}:{lineno}: rating {rating} outside 1..5")
                cand.scores[cat].append(rating)
    return candidates


def aggregate_scores(cands: list[TargetCandidate],
                     composite: str = "min") -> list[ScoredCandidate]:
    """Per-category means plus a composite; default composite is the minimum
    of the three means (a word must clear every bar)."""
    if composite not in ("min", "mean", "product"):
        raise TargetWordError(f"unknown composite {composite!r}")
    scored = []
    for cand in cands:
        for cat in CATEGORIES:
            if not cand.scores[cat]:
                raise TargetWordError(f"{cand.lemma!r} has no {cat} ratings")
        means = {cat: fmean(cand.scores[cat]) for cat in CATEGORIES}
        values = list(means.values())
        if composite == "min":
            comp = min(values)
        elif composite == "mean":
            comp = fmean(values)
        else:
            comp = values[0] * values[1] * values[2]
        scored.append(ScoredCandidate(candidate=cand, means=means, composite=comp))
    return scored


DEFAULT_QUOTA = {"noun": 150, "verb": 50, "adjective": 50}


def select_quota(scored: list[ScoredCandidate],
                 quota: dict[str, int] | None = None) -> list[TargetCandidate]:
    """Top-composite words per POS; ties break to lower AoA, then
    alphabetical. Output is alphabetical."""
    quota = dict(DEFAULT_QUOTA if quota is None else quota)
    chosen: list[TargetCandidate] = []
    for pos, want in quota.items():
        pool = [s for s in scored if s.candidate.pos == pos]
        if len(pool) < want:
            raise TargetWordError(
                f"need {want} {pos} candidates, have {len(pool)}")
        pool.sort(key=lambda s: (-s.composite, s.candidate.aoa, s.candidate.lemma))
        chosen.extend(s.candidate for s in pool[:want])
    return sorted(chosen, key=lambda c: c.lemma)


def load_bundled_target_words() -> list[tuple[str, str]]:
    """The shipped 250-entry (word, pos) list."""
    ref = resources.files("storylex.data").joinpath("target_words.csv")
    out = []
    with ref.open(encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            out.append((row["word"], row["pos"]))
    return out


def load_target_words_file(path: str | Path) -> list[str]:
    """Plain list of target words, one per line (comments with #)."""
    words = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            word = line.split("#")[0].strip().lower()
            if word:
                words.append(word)
    return words
