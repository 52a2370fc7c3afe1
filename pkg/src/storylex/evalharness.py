"""Gold-data loading, splitting, and scoring for simplification systems.

Accuracy matches a system's top candidate against gold rank 1 only (the
annotators' top synonym) with case-insensitive trimmed string equality;
validity checks that the top candidate's age of acquisition is lower than
the original word's, counting lexicon misses as invalid. Missing
predictions score as misses so the denominator never moves.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .lexicon import Lexicon


class DatasetError(Exception):
    pass


@dataclass(frozen=True)
class SimplificationInstance:
    id: str
    sentence: str
    complex_word: str
    gold: tuple[str, ...]       # rank 1 first
    story_id: str = ""

    def as_row(self) -> list[str]:
        return [self.id, self.story_id, self.sentence, self.complex_word, *self.gold]


@dataclass
class EvalResult:
    name: str
    accuracy: float
    validity: float
    acc_at_2: float
    acc_at_3: float
    n: int
    per_instance: list[dict] = field(default_factory=list)

    def as_dict(self) -> dict:
        return {"system": self.name, "n": self.n, "accuracy": self.accuracy,
                "validity": self.validity, "acc_at_2": self.acc_at_2,
                "acc_at_3": self.acc_at_3}


def _clean(word: str) -> str:
    return word.strip().lower()


def _build_instance(idx: str, story_id: str, sentence: str, complex_word: str,
                    gold_raw: Sequence[str], lineno: int) -> SimplificationInstance:
    sentence = sentence.strip()
    complex_word = complex_word.strip()
    if not sentence or not complex_word:
        raise DatasetError(f"line {lineno}: empty sentence or complex word")
    if complex_word.lower() not in sentence.lower():
        raise DatasetError(
            f"line {lineno}: complex word {complex_word!r} absent from sentence")
    gold: list[str] = []
    seen = set()
    for g in gold_raw:
        g = _clean(g)
        if not g or g in seen:
            continue            # duplicates collapse, first rank wins
        seen.add(g)
        gold.append(g)
    if not gold:
        raise DatasetError(f"line {lineno}: empty gold list")
    if complex_word.lower() in seen:
        raise DatasetError(
            f"line {lineno}: gold contains the complex word {complex_word!r}")
    return SimplificationInstance(id=idx, sentence=sentence,
                                  complex_word=complex_word,
                                  gold=tuple(gold), story_id=story_id)


def load_dataset(path: str | Path, format: str = "cds",
                 rejects: list[str] | None = None) -> list[SimplificationInstance]:
    """Load tab-separated gold data.

    tsar rows: sentence, complex word, substitutes...; ids are synthesized
    from the row number. cds rows carry an instance id and source-story id
    up front. Rows violating the invariants are skipped; diagnostics go to
    `rejects` when a list is passed.
    """
    if format not in ("cds", "tsar"):
        raise DatasetError(f"unknown dataset format {format!r}")
    path = Path(path)
    if not path.exists():
        raise DatasetError(f"dataset not found: {path}")
    instances: list[SimplificationInstance] = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\n")
            if not line.strip() or line.startswith("#"):
                continue
            cols = line.split("\t")
            try:
                if format == "tsar":
                    if len(cols) < 3:
                        raise DatasetError(f"line {lineno}: expected >= 3 columns")
                    inst = _build_instance(str(len(instances) + 1), "",
                                           cols[0], cols[1], cols[2:], lineno)
                else:
                    if len(cols) < 5:
                        raise DatasetError(f"line {lineno}: expected >= 5 columns")
                    inst = _build_instance(cols[0], cols[1], cols[2], cols[3],
                                           cols[4:], lineno)
            except DatasetError as exc:
                if rejects is None:
                    raise
                rejects.append(str(exc))
                continue
            instances.append(inst)
    if not instances:
        raise DatasetError(f"no valid instances in {path}")
    return instances


def write_dataset(instances: Iterable[SimplificationInstance],
                  path: str | Path) -> int:
    n = 0
    with open(path, "w", encoding="utf-8") as fh:
        for inst in instances:
            fh.write("\t".join(inst.as_row()) + "\n")
            n += 1
    return n


def load_predictions(path: str | Path) -> dict[str, list[str]]:
    """`instance_id<TAB>sub1<TAB>sub2...` per line."""
    preds: dict[str, list[str]] = {}
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if not line.strip():
                continue
            cols = line.split("\t")
            preds[cols[0]] = [c for c in (s.strip() for s in cols[1:]) if c]
    return preds


def split(instances: Sequence[SimplificationInstance], train_frac: float = 0.7,
          seed: int = 0) -> tuple[list[SimplificationInstance], list[SimplificationInstance]]:
    """Deterministic shuffle, then floor(train_frac * n) rows for training."""
    if not 0 < train_frac < 1:
        raise DatasetError(f"train_frac must be in (0, 1), got {train_frac}")
    n = len(instances)
    if n < 2:
        raise DatasetError("need at least 2 instances to split")
    order = list(range(n))
    random.Random(seed).shuffle(order)
    n_train = int(train_frac * n)
    train = [instances[i] for i in order[:n_train]]
    test = [instances[i] for i in order[n_train:]]
    return train, test


def score(instances: Sequence[SimplificationInstance],
          preds: Mapping[str, Sequence[str]], lex: Lexicon | None = None,
          name: str = "system") -> EvalResult:
    """Accuracy / validity / accuracy@2 / accuracy@3 over all instances."""
    if not instances:
        raise DatasetError("cannot score an empty instance list")
    hits = hits2 = hits3 = valid = 0
    per_instance = []
    for inst in instances:
        ranked = [_clean(p) for p in preds.get(inst.id, [])]
        ranked = [p for p in ranked if p]
        gold_top = _clean(inst.gold[0])
        hit = bool(ranked) and ranked[0] == gold_top
        hit2 = gold_top in ranked[:2]
        hit3 = gold_top in ranked[:3]
        is_valid = False
        if ranked and lex is not None:
            top_aoa = lex.lookup(ranked[0])
            orig_aoa = lex.lookup(inst.complex_word)
            is_valid = (top_aoa is not None and orig_aoa is not None
                        and top_aoa[0] < orig_aoa[0])
        hits += hit
        hits2 += hit2
        hits3 += hit3
        valid += is_valid
        per_instance.append({
            "id": inst.id, "prediction": ranked[0] if ranked else None,
            "gold": gold_top, "hit": hit, "hit_at_2": hit2, "hit_at_3": hit3,
            "valid": is_valid,
        })
    n = len(instances)
    return EvalResult(name=name, accuracy=hits / n, validity=valid / n,
                      acc_at_2=hits2 / n, acc_at_3=hits3 / n, n=n,
                      per_instance=per_instance)


def accuracy_at_k(result_per_instance: Sequence[dict], k: int) -> float:
    if k < 1:
        raise ValueError("k must be >= 1")
    key = {1: "hit", 2: "hit_at_2", 3: "hit_at_3"}.get(k)
    if key is None:
        raise ValueError("only k in {1, 2, 3} is tracked")
    return sum(r[key] for r in result_per_instance) / len(result_per_instance)


_REPORT_COLUMNS = ("accuracy", "validity", "acc_at_2", "acc_at_3")
_REPORT_HEADERS = ("Accuracy", "Validity", "Accuracy@2", "Accuracy@3")


def render_report(results: Sequence[EvalResult]) -> str:
    """One row per system, 3-decimal cells, best per column starred."""
    from .audit import format_table
    best = {col: max(getattr(r, col) for r in results) for col in _REPORT_COLUMNS}
    rows = []
    for r in results:
        cells = [r.name]
        for col in _REPORT_COLUMNS:
            value = getattr(r, col)
            text = f"{value:.3f}"
            if value == best[col]:
                text += "*"
            cells.append(text)
        cells.append(str(r.n))
        rows.append(cells)
    return format_table(["System", *_REPORT_HEADERS, "N"], rows)
