"""Deterministic text parsing: tokenization, sentence segmentation, syllable counts.

Everything here is pure and rule-based so that identical input text always
produces an identical Document. Syllable counting is dictionary-first (a
bundled word -> count table, overridable) with a vowel-group heuristic
fallback; the fraction of dictionary hits is tracked per document because
the readability formulas multiply syllable averages by large constants.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Iterator, Mapping

VOWELS = frozenset("aeiouy")

# Abbreviations whose trailing period never ends a sentence.
ABBREVIATIONS = frozenset({"mr", "mrs", "ms", "dr", "st", "prof", "sr", "jr", "etc", "vs"})

_TOKEN_RE = re.compile(r"([^\W\d_]+(?:['’][^\W\d_]+)*)|(\d+)|(\S)", re.UNICODE)


@dataclass
class Token:
    surface: str
    norm: str           # lowercase, letters only
    span: tuple[int, int]
    kind: str           # "word" | "number" | "punctuation"
    sentence_idx: int = 0
    syllables: int = 0
    is_propername: bool = False
    hyphen_joined: bool = False
    # True iff hyphen_joined and every sibling part of the compound has < 3
    # syllables; used by the Gunning-Fog easy-hyphenation exemption.
    hyphen_parts_easy: bool = False
    syllables_from_dict: bool = False

    @property
    def is_countable(self) -> bool:
        """Word and number tokens count as words for readability stats."""
        return self.kind in ("word", "number")


@dataclass
class Document:
    text: str
    tokens: list[Token] = field(default_factory=list)
    sentence_count: int = 0

    def word_tokens(self) -> list[Token]:
        return [t for t in self.tokens if t.kind == "word"]

    def countable_tokens(self) -> list[Token]:
        return [t for t in self.tokens if t.is_countable]

    def sentence_span(self, idx: int) -> tuple[int, int]:
        """Character span covering every token of sentence `idx`."""
        spans = [t.span for t in self.tokens if t.sentence_idx == idx]
        if not spans:
            raise IndexError(f"no tokens in sentence {idx}")
        return spans[0][0], spans[-1][1]

    def sentence_text(self, idx: int) -> str:
        start, end = self.sentence_span(idx)
        return self.text[start:end]

    def syllable_dict_hit_rate(self) -> float:
        words = self.word_tokens()
        if not words:
            return 0.0
        return sum(t.syllables_from_dict for t in words) / len(words)


def _letters_only(s: str) -> str:
    return "".join(c for c in s if c.isalpha()).lower()


def load_syllable_dict(path: str | Path) -> dict[str, int]:
    """Load a two-column `word<TAB>count` syllable table."""
    table: dict[str, int] = {}
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            word, _, count = line.partition("\t")
            table[word.strip().lower()] = int(count)
    return table


@lru_cache(maxsize=1)
def bundled_syllable_dict() -> Mapping[str, int]:
    ref = resources.files("storylex.data").joinpath("syllables.tsv")
    with resources.as_file(ref) as path:
        return load_syllable_dict(path)


def _heuristic_syllables(word: str) -> int:
    """Vowel-group count, minus a silent trailing 'e' (keeping -le), min 1."""
    groups = 0
    prev_vowel = False
    for c in word:
        is_vowel = c in VOWELS
        if is_vowel and not prev_vowel:
            groups += 1
        prev_vowel = is_vowel
    if len(word) >= 2 and word.endswith("e") and word[-2] not in VOWELS:
        keeps_le = word.endswith("le") and len(word) >= 3 and word[-3] not in VOWELS
        if not keeps_le:
            groups -= 1
    return max(groups, 1)


def count_syllables(word: str, syllables: Mapping[str, int] | None = None) -> int:
    """Syllable count for a lowercase letters-only word, dictionary first."""
    if not word:
        raise ValueError("cannot count syllables of an empty word")
    table = syllables if syllables is not None else bundled_syllable_dict()
    hit = table.get(word)
    if hit is not None:
        return hit
    return _heuristic_syllables(word)


def _sentence_boundary(text: str, punct: Token, prev_word: Token | None) -> bool:
    if punct.surface not in ".!?":
        return False
    if punct.surface == "." and prev_word is not None:
        # Abbreviation only when the period is flush against the word.
        if prev_word.span[1] == punct.span[0] and prev_word.norm in ABBREVIATIONS:
            return False
    rest = text[punct.span[1]:]
    if not rest:
        return True
    stripped = rest.lstrip()
    return len(stripped) < len(rest) and bool(stripped) and stripped[0].isupper()


def tokenize(text: str, syllables: Mapping[str, int] | None = None) -> Document:
    """Split text into word/number/punctuation tokens with sentence indices.

    Words are maximal runs of letters (apostrophes allowed inside);
    hyphenated compounds split into parts flagged as hyphen-joined.
    Sentences end at . ! ? followed by whitespace plus a capital letter or
    by end of text, except after known abbreviations.
    """
    doc = Document(text=text)
    if not text:
        return doc
    table = syllables if syllables is not None else bundled_syllable_dict()

    tokens: list[Token] = []
    for m in _TOKEN_RE.finditer(text):
        word, number, other = m.groups()
        if word is not None:
            norm = _letters_only(word)
            if not norm:
                # \w-class characters that are not letters (e.g. vulgar
                # fractions) are not words.
                tokens.append(Token(surface=word, norm="", span=m.span(),
                                    kind="punctuation"))
                continue
            tok = Token(surface=word, norm=norm, span=m.span(), kind="word")
            hit = table.get(norm)
            if hit is not None:
                tok.syllables = hit
                tok.syllables_from_dict = True
            else:
                tok.syllables = _heuristic_syllables(norm)
        elif number is not None:
            # Read-aloud approximation: one syllable per digit.
            tok = Token(surface=number, norm="", span=m.span(), kind="number",
                        syllables=len(number))
        else:
            tok = Token(surface=other, norm="", span=m.span(), kind="punctuation")
        tokens.append(tok)

    _mark_hyphen_compounds(tokens)

    sent_idx = 0
    content_in_current = False
    prev_word: Token | None = None
    for tok in tokens:
        tok.sentence_idx = sent_idx
        if tok.is_countable:
            content_in_current = True
            prev_word = tok
        elif _sentence_boundary(text, tok, prev_word) and content_in_current:
            sent_idx += 1
            content_in_current = False
            prev_word = None

    doc.tokens = tokens
    doc.sentence_count = sent_idx + (1 if content_in_current else 0)
    _mark_propernames(tokens)
    return doc


def _mark_hyphen_compounds(tokens: list[Token]) -> None:
    """Flag word parts of span-contiguous word-hyphen-word chains."""
    groups: list[list[Token]] = []
    i = 0
    while i < len(tokens):
        if tokens[i].kind != "word":
            i += 1
            continue
        chain = [tokens[i]]
        j = i
        while (j + 2 < len(tokens)
               and tokens[j + 1].surface == "-"
               and tokens[j + 2].kind == "word"
               and tokens[j].span[1] == tokens[j + 1].span[0]
               and tokens[j + 1].span[1] == tokens[j + 2].span[0]):
            chain.append(tokens[j + 2])
            j += 2
        if len(chain) > 1:
            groups.append(chain)
        i = j + 1
    for chain in groups:
        for part in chain:
            part.hyphen_joined = True
            part.hyphen_parts_easy = all(
                other.syllables < 3 for other in chain if other is not part)


def _mark_propernames(tokens: list[Token]) -> None:
    first_word_of_sentence: set[int] = set()
    seen: set[int] = set()
    for tok in tokens:
        if tok.kind == "word" and tok.sentence_idx not in seen:
            seen.add(tok.sentence_idx)
            first_word_of_sentence.add(id(tok))
    for tok in tokens:
        if tok.kind != "word" or not tok.surface:
            continue
        tok.is_propername = (tok.surface[0].isupper()
                             and id(tok) not in first_word_of_sentence)


def strip_suffix_candidates(word: str) -> list[str]:
    """Base-form candidates from regular inflection stripping.

    Handles -s/-es/-ed/-ing/-er/-est with e-restoration, consonant
    undoubling, and -ies/-ied/-ier/-iest -> -y. Candidates are generated in
    a fixed order (longest suffix first); callers decide which ones exist.
    """
    cands: list[str] = []

    def add(stem: str) -> None:
        if len(stem) >= 2 and stem not in cands and stem != word:
            cands.append(stem)

    if word.endswith("iest"):
        add(word[:-4] + "y")
    for suffix in ("ies", "ied", "ier"):
        if word.endswith(suffix):
            add(word[:-3] + "y")
    for suffix in ("ing", "est"):
        if word.endswith(suffix):
            stem = word[: -len(suffix)]
            add(stem)
            add(stem + "e")
            if len(stem) >= 2 and stem[-1] == stem[-2]:
                add(stem[:-1])
    for suffix in ("ed", "er", "es"):
        if word.endswith(suffix):
            stem = word[:-2]
            add(stem)
            add(stem + "e")
            if len(stem) >= 2 and stem[-1] == stem[-2]:
                add(stem[:-1])
    if word.endswith("s") and not word.endswith("ss"):
        add(word[:-1])
    return cands


def is_hard_word(token: Token, syllables: Mapping[str, int] | None = None) -> bool:
    """Gunning-Fog hard word: >= 3 syllables with the classic exemptions."""
    if token.kind != "word":
        raise ValueError("is_hard_word applies to word tokens only")
    if token.syllables < 3:
        return False
    if token.is_propername:
        return False
    if token.hyphen_joined and token.hyphen_parts_easy:
        return False
    # A two-syllable stem inflated to exactly three by -es/-ed is not hard.
    if token.syllables == 3 and (token.norm.endswith("ed") or token.norm.endswith("es")):
        for stem in strip_suffix_candidates(token.norm):
            if count_syllables(stem, syllables) <= 2:
                return False
    return True


def iter_documents(texts: Iterator[str],
                   syllables: Mapping[str, int] | None = None) -> Iterator[Document]:
    for text in texts:
        yield tokenize(text, syllables)
