"""Story- and corpus-level lexical simplicity audits.

A story audit reports average and highest age of acquisition over the
tokens the lexicon resolves, whether all assigned target words appear
(validity), and whether any non-target word exceeds the audience AoA
threshold (appropriateness). Corpus summaries aggregate per
(model, prompt) cell in the report-table column order:
Average AoA, Highest AoA, % Valid, % Appropriate, then readability means.

Two contested choices are configurable and always disclosed in output:
the threshold comparison (strict `>` by default vs `>=`) and whether
target words are exempt from the appropriateness check (default yes).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from statistics import fmean
from typing import Iterable, Mapping

from .lexicon import Lexicon
from .readability import METRICS, compute_report
from .records import StoryRecord
from .textproc import Document, strip_suffix_candidates, tokenize


class AuditError(Exception):
    pass


@dataclass
class AuditReport:
    story_id: str
    avg_aoa: float
    max_aoa: tuple[str, float]
    coverage: float
    valid: bool
    appropriate: bool
    oov: list[str]
    threshold: float
    strict_threshold: bool
    target_exemption: bool
    missing_targets: list[str]
    flagged: list[tuple[str, float]]          # non-target words over threshold
    lookup_rungs: dict[str, int] = field(default_factory=dict)
    readability: dict[str, float] = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "story_id": self.story_id,
            "avg_aoa": self.avg_aoa,
            "max_aoa_word": self.max_aoa[0],
            "max_aoa": self.max_aoa[1],
            "coverage": self.coverage,
            "valid": self.valid,
            "appropriate": self.appropriate,
            "oov": self.oov,
            "threshold": self.threshold,
            "threshold_operator": ">" if self.strict_threshold else ">=",
            "target_exemption": self.target_exemption,
            "missing_targets": self.missing_targets,
            "flagged": [{"word": w, "aoa": a} for w, a in self.flagged],
            "lookup_rungs": self.lookup_rungs,
            **{k: self.readability.get(k) for k in METRICS},
        }


def matches_target(norm: str, target: str, exact_surface: bool = False) -> bool:
    """Lemma-level target match: the token or one of its stripped bases."""
    target = target.lower()
    if norm == target:
        return True
    if exact_surface:
        return False
    return target in strip_suffix_candidates(norm)


def _over_threshold(aoa: float, threshold: float, strict: bool) -> bool:
    return aoa > threshold if strict else aoa >= threshold


def audit_story(story: StoryRecord, lex: Lexicon, threshold: float = 6.0, *,
                strict_threshold: bool = True, types_mode: bool = False,
                target_exemption: bool = True, exact_targets: bool = False,
                syllables: Mapping[str, int] | None = None) -> AuditReport:
    """Audit one story against the lexicon. OOV tokens never enter AoA stats."""
    if not story.text.strip():
        raise AuditError(f"story {story.id!r} has empty text")
    doc = tokenize(story.text, syllables)

    found: list[tuple[str, float, bool]] = []   # (norm, aoa, is_target)
    rungs = {"exact": 0, "lemma": 0}
    oov: set[str] = set()
    seen_types: set[str] = set()
    matched_targets: set[str] = set()

    for tok in doc.word_tokens():
        is_target = any(matches_target(tok.norm, t, exact_targets)
                        for t in story.target_words)
        if is_target:
            matched_targets.update(
                t for t in story.target_words
                if matches_target(tok.norm, t, exact_targets))
        hit = lex.lookup(tok.norm)
        if hit is None:
            oov.add(tok.norm)
            continue
        aoa, rung = hit
        rungs[rung] += 1
        if types_mode:
            if tok.norm in seen_types:
                continue
            seen_types.add(tok.norm)
        found.append((tok.norm, aoa, is_target))

    if not found:
        raise AuditError(f"story {story.id!r}: lexicon coverage is zero")

    coverage = lex.coverage(doc)
    avg_aoa = fmean(aoa for _, aoa, _ in found)
    max_word, max_val = max(((w, a) for w, a, _ in found), key=lambda p: p[1])

    flagged = sorted({
        (w, a) for w, a, is_target in found
        if _over_threshold(a, threshold, strict_threshold)
        and not (target_exemption and is_target)
    })
    missing = [t for t in story.target_words if t.lower() not in
               {m.lower() for m in matched_targets}]

    return AuditReport(
        story_id=story.id,
        avg_aoa=avg_aoa,
        max_aoa=(max_word, max_val),
        coverage=coverage,
        valid=not missing,
        appropriate=not flagged,
        oov=sorted(oov),
        threshold=threshold,
        strict_threshold=strict_threshold,
        target_exemption=target_exemption,
        missing_targets=missing,
        flagged=flagged,
        lookup_rungs=rungs,
        readability=compute_report(doc, syllables).as_dict(),
    )


@dataclass
class CorpusCell:
    model: str
    prompt_id: str
    n: int
    avg_aoa: float
    max_aoa: float
    pct_valid: float
    pct_appropriate: float
    readability: dict[str, float]

    def as_dict(self) -> dict:
        return {
            "model": self.model, "prompt": self.prompt_id, "n": self.n,
            "avg_aoa": self.avg_aoa, "highest_aoa": self.max_aoa,
            "pct_valid": self.pct_valid, "pct_appropriate": self.pct_appropriate,
            **{k: self.readability.get(k) for k in METRICS},
        }


@dataclass
class CorpusSummary:
    cells: list[CorpusCell]
    options: dict = field(default_factory=dict)

    def cell(self, model: str, prompt_id: str) -> CorpusCell:
        for c in self.cells:
            if c.model == model and c.prompt_id == prompt_id:
                return c
        raise KeyError((model, prompt_id))

    def overall(self) -> dict[str, float]:
        """Story-weighted corpus means, used for corpus-vs-corpus comparison."""
        total = sum(c.n for c in self.cells)
        out = {
            "avg_aoa": sum(c.avg_aoa * c.n for c in self.cells) / total,
            "highest_aoa": sum(c.max_aoa * c.n for c in self.cells) / total,
            "pct_valid": sum(c.pct_valid * c.n for c in self.cells) / total,
            "pct_appropriate": sum(c.pct_appropriate * c.n for c in self.cells) / total,
        }
        for m in METRICS:
            out[m] = sum(c.readability[m] * c.n for c in self.cells) / total
        return out


def summarize_corpus(stories: Iterable[StoryRecord], lex: Lexicon,
                     threshold: float = 6.0, **audit_options) -> CorpusSummary:
    stories = list(stories)
    if not stories:
        raise AuditError("empty corpus")
    groups: dict[tuple[str, str], list[AuditReport]] = {}
    for story in stories:
        report = audit_story(story, lex, threshold, **audit_options)
        groups.setdefault((story.model, story.prompt_id), []).append(report)

    cells = []
    for (model, prompt_id) in sorted(groups):
        reports = groups[(model, prompt_id)]
        n = len(reports)
        cells.append(CorpusCell(
            model=model, prompt_id=prompt_id, n=n,
            avg_aoa=fmean(r.avg_aoa for r in reports),
            max_aoa=fmean(r.max_aoa[1] for r in reports),
            pct_valid=100.0 * sum(r.valid for r in reports) / n,
            pct_appropriate=100.0 * sum(r.appropriate for r in reports) / n,
            readability={m: fmean(r.readability[m] for r in reports) for m in METRICS},
        ))
    return CorpusSummary(cells=cells, options={
        "threshold": threshold,
        "threshold_operator": ">" if audit_options.get("strict_threshold", True) else ">=",
        "target_exemption": audit_options.get("target_exemption", True),
        "types_mode": audit_options.get("types_mode", False),
    })


_PCT_KEYS = ("pct_valid", "pct_appropriate")
_SUMMARY_COLUMNS = ("avg_aoa", "highest_aoa", "pct_valid", "pct_appropriate") + METRICS


def _fmt(key: str, value: float) -> str:
    if key in _PCT_KEYS:
        text = f"{value:.2f}".rstrip("0").rstrip(".")
        return f"{text}%"
    return f"{value:.2f}"


def render_summary_table(summary: CorpusSummary) -> str:
    headers = ["Model", "Prompt", "N", "Average AoA", "Highest AoA",
               "% Valid", "% Appropriate", "FRE", "FKGL", "GFI", "ARI"]
    rows = []
    for c in summary.cells:
        d = c.as_dict()
        rows.append([c.model, c.prompt_id, str(c.n)]
                    + [_fmt(k, d[k]) for k in _SUMMARY_COLUMNS])
    note = (f"threshold: AoA {summary.options.get('threshold_operator', '>')} "
            f"{summary.options.get('threshold')}, target exemption: "
            f"{'on' if summary.options.get('target_exemption', True) else 'off'}")
    return format_table(headers, rows) + "\n" + note


def format_table(headers: list[str], rows: list[list[str]]) -> str:
    widths = [max(len(h), *(len(r[i]) for r in rows)) if rows else len(h)
              for i, h in enumerate(headers)]
    def line(cells):
        return "  ".join(c.ljust(w) for c, w in zip(cells, widths)).rstrip()
    sep = "  ".join("-" * w for w in widths)
    return "\n".join([line(headers), sep] + [line(r) for r in rows])


@dataclass
class ComparisonReport:
    label_a: str
    label_b: str
    metrics: dict[str, tuple[float, float]]     # metric -> (a, b)

    def delta(self, metric: str) -> float:
        a, b = self.metrics[metric]
        return b - a

    def as_rows(self) -> list[dict]:
        from .readability import IMPROVEMENT_DIRECTION
        rows = []
        for metric, (a, b) in self.metrics.items():
            rows.append({
                "metric": metric, self.label_a: a, self.label_b: b,
                "delta": b - a,
                "improvement_direction": IMPROVEMENT_DIRECTION.get(metric, "lower"),
            })
        return rows


def compare_corpora(a: CorpusSummary, b: CorpusSummary,
                    label_a: str = "a", label_b: str = "b") -> ComparisonReport:
    if not a.cells or not b.cells:
        raise AuditError("cannot compare an empty summary")
    oa, ob = a.overall(), b.overall()
    shared = [k for k in oa if k in ob]
    return ComparisonReport(label_a=label_a, label_b=label_b,
                            metrics={k: (oa[k], ob[k]) for k in shared})


def render_comparison_table(cmp: ComparisonReport) -> str:
    headers = ["Metric", cmp.label_a, cmp.label_b, "Delta", "Better"]
    rows = []
    for row in cmp.as_rows():
        arrow = "↑" if row["improvement_direction"] == "higher" else "↓"
        rows.append([row["metric"],
                     f"{row[cmp.label_a]:.2f}", f"{row[cmp.label_b]:.2f}",
                     f"{row['delta']:+.2f}", arrow])
    return format_table(headers, rows)
