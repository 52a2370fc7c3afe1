"""Complex-word identification and the three-stage substitution pipeline:
candidate generation (pluggable backends), ranking, and post-filtering
(noise, antonyms, morphological duplicates, AoA validity).

Candidates that survive the filters always have a lower age of acquisition
than the original word when the lexicon covers them; candidates the
lexicon cannot rate are kept but ranked below every rated candidate, since
their validity cannot be certified. Every removal is recorded in the
pipeline trace.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from .audit import matches_target
from .lexicon import Lexicon
from .records import StoryRecord
from .textproc import strip_suffix_candidates, tokenize


class SimplifyError(Exception):
    pass


@dataclass(frozen=True)
class ComplexSpan:
    sentence: str
    word: str                   # surface as it appears in the sentence
    span: tuple[int, int]       # offsets of the word within the sentence
    aoa: float
    norm: str = ""
    story_id: str = ""
    sentence_idx: int = 0

    def as_dict(self) -> dict:
        return {"sentence": self.sentence, "word": self.word,
                "start": self.span[0], "end": self.span[1], "aoa": self.aoa,
                "story_id": self.story_id, "sentence_idx": self.sentence_idx}


@dataclass
class Candidate:
    word: str
    score: float
    source: str
    aoa: float | None = None

    def as_dict(self) -> dict:
        return {"word": self.word, "score": self.score,
                "source": self.source, "aoa": self.aoa}


@dataclass
class CandidateList:
    original: ComplexSpan
    candidates: list[Candidate]
    pipeline_trace: list[dict] = field(default_factory=list)

    def top(self) -> Candidate | None:
        return self.candidates[0] if self.candidates else None


def identify_complex(doc, lex: Lexicon, threshold: float = 6.0,
                     exempt: Sequence[str] = (), *, strict_threshold: bool = True,
                     story_id: str = "") -> list[ComplexSpan]:
    """All found word tokens over the AoA threshold, minus exempt (target)
    words, deduplicated per (sentence, word)."""
    spans: list[ComplexSpan] = []
    seen: set[tuple[int, str]] = set()
    for tok in doc.word_tokens():
        hit = lex.lookup(tok.norm)
        if hit is None:
            continue
        aoa, _ = hit
        over = aoa > threshold if strict_threshold else aoa >= threshold
        if not over:
            continue
        if any(matches_target(tok.norm, t) for t in exempt):
            continue
        key = (tok.sentence_idx, tok.norm)
        if key in seen:
            continue
        seen.add(key)
        sent_start, _ = doc.sentence_span(tok.sentence_idx)
        spans.append(ComplexSpan(
            sentence=doc.sentence_text(tok.sentence_idx),
            word=tok.surface,
            span=(tok.span[0] - sent_start, tok.span[1] - sent_start),
            aoa=aoa,
            norm=tok.norm,
            story_id=story_id,
            sentence_idx=tok.sentence_idx,
        ))
    return spans


SYNONYM_PROMPTS = {
    1: "Name a simpler synonym that could replace the word [{word}] in the "
       "following sentence: [{sentence}]",
    2: "Name two simpler synonyms that could replace the word [{word}] in the "
       "following sentence: [{sentence}]",
    3: "Name three simpler synonyms that could replace the word [{word}] in the "
       "following sentence: [{sentence}]",
}


def render_synonym_prompt(word: str, sentence: str, k: int) -> str:
    if k not in SYNONYM_PROMPTS:
        raise ValueError(f"k must be 1, 2, or 3, got {k}")
    return SYNONYM_PROMPTS[k].format(word=word, sentence=sentence)


class LlmSynonymBackend:
    """Prompts a chat backend for k simpler synonyms and parses the reply."""

    def __init__(self, chat_backend, name: str | None = None):
        self.chat = chat_backend
        self.name = name or getattr(chat_backend, "name", "llm")

    def propose(self, span: ComplexSpan, k: int) -> list[str]:
        prompt = render_synonym_prompt(span.word, span.sentence, k)
        reply = self.chat.complete(prompt)
        return _parse_word_list(reply)[:k]


def _parse_word_list(reply: str) -> list[str]:
    words = []
    for chunk in reply.replace("\n", ",").split(","):
        word = chunk.strip().strip(".;:!?\"'()[]").strip()
        # drop list numbering like "1." or "2)"
        word = word.lstrip("0123456789.)- ").strip()
        if word and " " not in word:
            words.append(word.lower())
    return words


class ThesaurusBackend:
    """Synonyms from a local `word<TAB>comma-joined-list` table."""

    def __init__(self, table: dict[str, list[str]], name: str = "thesaurus"):
        self.table = table
        self.name = name

    @classmethod
    def from_file(cls, path: str | Path, name: str = "thesaurus") -> "ThesaurusBackend":
        return cls(load_word_list_table(path), name=name)

    def propose(self, span: ComplexSpan, k: int) -> list[str]:
        key = span.norm or span.word.lower()
        syns = self.table.get(key)
        if syns is None:
            for stem in strip_suffix_candidates(key):
                syns = self.table.get(stem)
                if syns is not None:
                    break
        return list(syns[:k]) if syns else []


def load_word_list_table(path: str | Path) -> dict[str, list[str]]:
    table: dict[str, list[str]] = {}
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            word, _, rest = line.partition("\t")
            table[word.strip().lower()] = [
                w.strip().lower() for w in rest.split(",") if w.strip()]
    return table


def generate_candidates(span: ComplexSpan, backends: Sequence,
                        k: int = 3) -> list[Candidate]:
    """Union of per-backend top-k proposals with provenance; candidates
    equal to the original are dropped here. Duplicates across backends
    keep the highest-scoring instance."""
    if not backends:
        raise SimplifyError("no candidate backends configured")
    original = span.word.lower()
    merged: dict[str, Candidate] = {}
    failures = 0
    for backend in backends:
        try:
            proposals = backend.propose(span, k)
        except Exception:
            failures += 1
            continue
        for rank, word in enumerate(proposals, start=1):
            word = word.strip().lower()
            if not word or " " in word or word == original:
                continue
            cand = Candidate(word=word, score=1.0 / rank, source=backend.name)
            prior = merged.get(word)
            if prior is None or cand.score > prior.score:
                merged[word] = cand
    if failures == len(backends):
        raise SimplifyError(f"all {failures} candidate backends failed for {span.word!r}")
    return sorted(merged.values(), key=lambda c: (-c.score, c.word))


def postfilter(cands: Sequence[Candidate], span: ComplexSpan, lex: Lexicon,
               antonyms: dict[str, list[str]] | None = None) -> CandidateList:
    """Apply the noise/antonym/duplicate/validity filters and re-rank.

    Surviving rated candidates all satisfy AoA(candidate) < AoA(original);
    unrated (lexicon-miss) candidates are kept but ranked last. An empty
    result is a value, not an error.
    """
    if not cands:
        raise SimplifyError("postfilter needs a non-empty candidate list")
    antonyms = antonyms or {}
    original_key = span.norm or span.word.lower()
    orig_antonyms = set(antonyms.get(original_key, ()))
    for stem in strip_suffix_candidates(original_key):
        orig_antonyms.update(antonyms.get(stem, ()))

    trace: list[dict] = []
    kept: list[Candidate] = []
    for cand in cands:
        word = cand.word.lower()
        letters = "".join(c for c in word if c.isalpha())
        entry = lex.lookup(word)
        if entry is None and not letters:
            trace.append({"word": cand.word, "rule": "non-word",
                          "detail": "no lexicon entry and no letters"})
            continue
        if word in orig_antonyms or letters in orig_antonyms:
            trace.append({"word": cand.word, "rule": "antonym",
                          "detail": f"antonym of {span.word!r}"})
            continue
        if _same_lemma(letters, original_key):
            trace.append({"word": cand.word, "rule": "morphological-duplicate",
                          "detail": f"same lemma as {span.word!r}"})
            continue
        if entry is not None:
            aoa = entry[0]
            if aoa >= span.aoa:
                trace.append({"word": cand.word, "rule": "aoa-invalid",
                              "detail": f"AoA {aoa} >= original {span.aoa}"})
                continue
            cand.aoa = aoa
        kept.append(cand)

    rated = [c for c in kept if c.aoa is not None]
    unrated = [c for c in kept if c.aoa is None]
    rated.sort(key=lambda c: (-c.score, c.aoa, c.word))
    unrated.sort(key=lambda c: (-c.score, c.word))
    return CandidateList(original=span, candidates=rated + unrated,
                         pipeline_trace=trace)


def _bases(word: str) -> set[str]:
    bases = {word}
    bases.update(strip_suffix_candidates(word))
    if word.endswith("ly") and len(word) > 4:
        bases.add(word[:-2])        # adverbial derivation
    return bases


def _same_lemma(a: str, b: str) -> bool:
    if not a or not b:
        return False
    return bool(_bases(a) & _bases(b))


def _match_capitalization(pattern: str, word: str) -> str:
    if pattern.isupper() and len(pattern) > 1:
        return word.upper()
    if pattern[:1].isupper():
        return word[:1].upper() + word[1:]
    return word


@dataclass
class SpanResolution:
    span: ComplexSpan
    candidates: CandidateList
    chosen: Candidate | None

    @property
    def resolved(self) -> bool:
        return self.chosen is not None


@dataclass
class SimplifiedStory:
    story: StoryRecord
    text: str                   # story text with substitutions applied
    resolutions: list[SpanResolution]

    def as_dict(self) -> dict:
        return {
            "id": self.story.id,
            "text": self.text,
            "original_text": self.story.text,
            "spans": [{
                "word": r.span.word, "aoa": r.span.aoa,
                "sentence_idx": r.span.sentence_idx,
                "resolved": r.resolved,
                "replacement": r.chosen.word if r.chosen else None,
                "candidates": [c.as_dict() for c in r.candidates.candidates],
                "trace": r.candidates.pipeline_trace,
            } for r in self.resolutions],
        }


def _resolve_spans(doc, lex: Lexicon, backends: Sequence, spans,
                   antonyms: dict[str, list[str]] | None,
                   k: int) -> tuple[str, list[SpanResolution]]:
    resolutions: list[SpanResolution] = []
    for span in spans:
        try:
            raw = generate_candidates(span, backends, k)
        except SimplifyError:
            raw = []
        if raw:
            clist = postfilter(raw, span, lex, antonyms)
        else:
            clist = CandidateList(original=span, candidates=[],
                                  pipeline_trace=[{"word": span.word,
                                                   "rule": "no-candidates",
                                                   "detail": "generation empty"}])
        resolutions.append(SpanResolution(span=span, candidates=clist,
                                          chosen=clist.top()))

    # Apply substitutions right to left so earlier offsets stay valid.
    replacements: list[tuple[int, int, str]] = []
    by_key = {(r.span.sentence_idx, r.span.norm): r for r in resolutions}
    for tok in doc.word_tokens():
        res = by_key.get((tok.sentence_idx, tok.norm))
        if res is None or res.chosen is None:
            continue
        replacements.append(
            (tok.span[0], tok.span[1],
             _match_capitalization(tok.surface, res.chosen.word)))
    text = doc.text
    for start, end, new in sorted(replacements, reverse=True):
        text = text[:start] + new + text[end:]
    return text, resolutions


def simplify_story(story: StoryRecord, lex: Lexicon, backends: Sequence,
                   threshold: float = 6.0, antonyms: dict[str, list[str]] | None = None,
                   k: int = 3, exempt_targets: bool = True) -> SimplifiedStory:
    """Identify complex spans, resolve candidates, and substitute the top
    survivor for every occurrence of the word in its sentence, preserving
    capitalization. Unresolvable spans are flagged, not dropped."""
    doc = tokenize(story.text)
    exempt = story.target_words if exempt_targets else ()
    spans = identify_complex(doc, lex, threshold, exempt, story_id=story.id)
    text, resolutions = _resolve_spans(doc, lex, backends, spans, antonyms, k)
    return SimplifiedStory(story=story, text=text, resolutions=resolutions)


def simplify_text(text: str, lex: Lexicon, backends: Sequence,
                  threshold: float = 6.0,
                  antonyms: dict[str, list[str]] | None = None,
                  k: int = 3) -> tuple[str, list[SpanResolution]]:
    """Same pipeline for bare text (no story targets to exempt)."""
    doc = tokenize(text)
    spans = identify_complex(doc, lex, threshold)
    return _resolve_spans(doc, lex, backends, spans, antonyms, k)


def backends_from_config(cfgs: Sequence[dict], base_dir: Path | None = None) -> list:
    """Candidate backends from config dicts: thesaurus tables and LLM chat
    endpoints (same wire protocol as story generation)."""
    from .genclient import HttpChatBackend

    backends = []
    for cfg in cfgs:
        kind = cfg.get("type", "thesaurus")
        if kind == "thesaurus":
            table = Path(cfg["table"])
            if base_dir is not None and not table.is_absolute():
                table = base_dir / table
            backends.append(ThesaurusBackend.from_file(
                table, name=cfg.get("name", "thesaurus")))
        elif kind == "llm":
            chat = HttpChatBackend(
                name=cfg.get("name", "llm"),
                endpoint=cfg["endpoint"],
                model=cfg.get("model", ""),
                auth_env=cfg.get("auth_env"),
                params=cfg.get("params"),
            )
            backends.append(LlmSynonymBackend(chat, name=cfg.get("name")))
        else:
            raise SimplifyError(f"unknown candidate backend type {kind!r}")
    return backends
