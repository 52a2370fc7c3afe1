"""Single entry point: every pipeline stage as a subcommand.

Option precedence is flags > config file > defaults, the effective
configuration is logged to stderr for reproducibility (silence with
--quiet), and all randomness flows from --seed. Failures print one
machine-parsable `Error: ...` line and exit nonzero; usage errors exit 2.
"""

from __future__ import annotations

import csv
import functools
import json
import logging
import sys
from pathlib import Path

import click

from . import audit as audit_mod
from . import evalharness as eval_mod
from . import genclient as gen_mod
from . import readability as read_mod
from . import simplify as simp_mod
from . import targetwords as tw_mod
from .annotate.state import AnnotationError, AnnotationStore
from .lexicon import ColumnMap, Lexicon, LexiconError, load_lexicon
from .records import read_story_records, write_jsonl
from .textproc import load_syllable_dict, tokenize

log = logging.getLogger("storylex")

_DOMAIN_ERRORS = (LexiconError, audit_mod.AuditError, tw_mod.TargetWordError,
                  gen_mod.GenerationError, simp_mod.SimplifyError,
                  eval_mod.DatasetError, AnnotationError,
                  read_mod.EmptyDocumentError, ValueError, OSError)


def handle_errors(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except _DOMAIN_ERRORS as exc:
            raise click.ClickException(str(exc)) from exc
    return wrapper


@click.group()
@click.option("--config", type=click.Path(exists=True, dir_okay=False),
              help="JSON config file; flags override its values.")
@click.option("--seed", type=int, default=None, help="Seed for all randomness.")
@click.option("--jobs", type=int, default=None, help="Worker parallelism cap.")
@click.option("--format", "out_format", default=None,
              type=click.Choice(["table", "csv", "jsonl"]),
              help="Output format for reports.")
@click.option("--quiet", is_flag=True, help="Suppress the effective-config log.")
@click.pass_context
def cli(ctx, config, seed, jobs, out_format, quiet):
    """Audit, generate, simplify, and evaluate children's stories."""
    logging.basicConfig(stream=sys.stderr, level=logging.WARNING if quiet else logging.INFO,
                        format="%(message)s")
    cfg = {}
    if config:
        with open(config, encoding="utf-8") as fh:
            cfg = json.load(fh)
    ctx.obj = {
        "config": cfg,
        "seed": seed if seed is not None else cfg.get("seed", 0),
        "jobs": jobs if jobs is not None else cfg.get("jobs", 4),
        "format": out_format or cfg.get("format", "table"),
        "quiet": quiet,
    }


def _cfg(ctx, flag_value, key, default=None):
    if flag_value is not None:
        return flag_value
    return ctx.obj["config"].get(key, default)


def lexicon_options(fn):
    for deco in (
        click.option("--lexicon", "lexicon_path", type=click.Path(), default=None,
                     help="CSV ratings file with a header row."),
        click.option("--word-col", default=None, help="Word column name."),
        click.option("--aoa-col", default=None, help="AoA column name."),
        click.option("--concreteness-col", default=None),
        click.option("--pos-col", default=None),
    )[::-1]:
        fn = deco(fn)
    return fn


def load_lex(ctx, lexicon_path, word_col, aoa_col,
             concreteness_col=None, pos_col=None) -> Lexicon:
    path = _cfg(ctx, lexicon_path, "lexicon")
    if not path:
        raise click.UsageError("a lexicon is required (--lexicon or config)")
    colmap = ColumnMap(
        word=_cfg(ctx, word_col, "word_col", "word"),
        aoa=_cfg(ctx, aoa_col, "aoa_col", "aoa"),
        concreteness=_cfg(ctx, concreteness_col, "concreteness_col"),
        pos=_cfg(ctx, pos_col, "pos_col"),
    )
    lex = load_lexicon(path, colmap)
    _log_effective(ctx, lexicon=str(path), columns=lex.source_meta["columns"],
                   entries=len(lex), collisions=lex.source_meta["collisions"])
    return lex


def _log_effective(ctx, **kv):
    if not ctx.obj["quiet"]:
        log.info("config: %s", json.dumps(kv, sort_keys=True, default=str))


def _syllables(ctx, syllable_dict):
    path = _cfg(ctx, syllable_dict, "syllable_dict")
    return load_syllable_dict(path) if path else None


def _emit(ctx, rows: list[dict], table_text: str, out=None):
    fmt = ctx.obj["format"]
    sink = open(out, "w", encoding="utf-8") if out else sys.stdout
    try:
        if fmt == "jsonl":
            write_jsonl(rows, sink)
        elif fmt == "csv":
            writer = csv.DictWriter(sink, fieldnames=list(rows[0]) if rows else [])
            writer.writeheader()
            writer.writerows(rows)
        else:
            sink.write(table_text + "\n")
    finally:
        if out:
            sink.close()


# -- lexicon -----------------------------------------------------------------

@cli.command("lexicon")
@lexicon_options
@click.argument("words", nargs=-1)
@click.pass_context
@handle_errors
def lexicon_cmd(ctx, lexicon_path, word_col, aoa_col, concreteness_col,
                pos_col, words):
    """Validate a lexicon file; optionally look up WORDS."""
    lex = load_lex(ctx, lexicon_path, word_col, aoa_col, concreteness_col, pos_col)
    meta = lex.source_meta
    click.echo(f"entries={meta['entries']} rows={meta['rows']} "
               f"malformed={meta['malformed']} collisions={meta['collisions']} "
               f"policy={meta['collision_policy']}")
    for word in words:
        hit = lex.lookup(word)
        if hit is None:
            click.echo(f"{word}\tmiss")
        else:
            click.echo(f"{word}\t{hit[0]}\t{hit[1]}")


# -- readability ---------------------------------------------------------------

@cli.command("readability")
@click.argument("inputs", nargs=-1, required=True)
@click.option("--plots", "plots_dir", type=click.Path(file_okay=False), default=None,
              help="Directory for per-metric bar charts.")
@click.option("--syllable-dict", type=click.Path(exists=True), default=None,
              help="Override the bundled word->syllables table.")
@click.option("--out", type=click.Path(), default=None)
@click.pass_context
@handle_errors
def readability_cmd(ctx, inputs, plots_dir, syllable_dict, out):
    """Score text files (or - for stdin) with FRE/FKGL/GFI/ARI."""
    table = _syllables(ctx, syllable_dict)
    rows = []
    for name in inputs:
        text = sys.stdin.read() if name == "-" else Path(name).read_text(encoding="utf-8")
        report = read_mod.compute_report(tokenize(text, table), table)
        rows.append({"input": name, **report.as_dict()})
    headers = ["Input", "FRE", "FKGL", "GFI", "ARI", "Words", "Sentences",
               "Syllables", "Chars", "Hard", "DictHit%"]
    cells = [[r["input"], f"{r['fre']:.2f}", f"{r['fkgl']:.2f}", f"{r['gfi']:.2f}",
              f"{r['ari']:.2f}", str(r["words"]), str(r["sentences"]),
              str(r["syllables"]), str(r["characters"]), str(r["hard_words"]),
              f"{100 * r['syllable_dict_hit_rate']:.0f}"] for r in rows]
    _emit(ctx, rows, audit_mod.format_table(headers, cells), out)
    if plots_dir:
        from . import plots
        per_metric = {m: {r["input"]: r[m] for r in rows} for m in read_mod.METRICS}
        for path in plots.emit_metric_bars(per_metric, plots_dir):
            log.info("wrote %s", path)


# -- audit ---------------------------------------------------------------------

@cli.command("audit")
@click.argument("corpus", type=click.Path(exists=True))
@lexicon_options
@click.option("--threshold", type=float, default=None)
@click.option("--types-mode", is_flag=True, help="AoA stats over types, not tokens.")
@click.option("--no-target-exemption", is_flag=True,
              help="Count target words in the appropriateness check.")
@click.option("--strict-threshold/--inclusive-threshold", default=True,
              help="Compare AoA with > (strict) or >= (inclusive).")
@click.option("--per-story", is_flag=True, help="Emit one row per story.")
@click.option("--out", type=click.Path(), default=None)
@click.option("--summary-json", type=click.Path(), default=None,
              help="Also write the summary as JSON (for `report`).")
@click.pass_context
@handle_errors
def audit_cmd(ctx, corpus, lexicon_path, word_col, aoa_col, concreteness_col,
              pos_col, threshold, types_mode, no_target_exemption,
              strict_threshold, per_story, out, summary_json):
    """Audit a story corpus and print the per-cell summary table."""
    lex = load_lex(ctx, lexicon_path, word_col, aoa_col, concreteness_col, pos_col)
    threshold = threshold if threshold is not None else \
        ctx.obj["config"].get("threshold", 6.0)
    stories = read_story_records(corpus)
    options = dict(strict_threshold=strict_threshold, types_mode=types_mode,
                   target_exemption=not no_target_exemption)
    _log_effective(ctx, corpus=corpus, threshold=threshold, **options)

    if per_story:
        rows = [audit_mod.audit_story(s, lex, threshold, **options).as_dict()
                for s in stories]
        headers = ["Story", "AvgAoA", "MaxWord", "MaxAoA", "Cov", "Valid", "Approp"]
        cells = [[r["story_id"], f"{r['avg_aoa']:.2f}", r["max_aoa_word"],
                  f"{r['max_aoa']:.2f}", f"{r['coverage']:.2f}",
                  str(r["valid"]), str(r["appropriate"])] for r in rows]
        _emit(ctx, rows, audit_mod.format_table(headers, cells), out)
        return

    summary = audit_mod.summarize_corpus(stories, lex, threshold, **options)
    rows = [c.as_dict() for c in summary.cells]
    _emit(ctx, rows, audit_mod.render_summary_table(summary), out)
    if summary_json:
        Path(summary_json).write_text(json.dumps({
            "cells": rows, "options": summary.options}, indent=2, sort_keys=True),
            encoding="utf-8")


# -- targets ---------------------------------------------------------------

@cli.group("targets")
def targets_grp():
    """Target-word pipeline: filter candidates, select quotas."""


@targets_grp.command("filter")
@lexicon_options
@click.option("--lo", type=float, default=6.0)
@click.option("--hi", type=float, default=9.0)
@click.option("--concreteness-cutoff", type=float, default=3.5)
@click.option("--out", type=click.Path(), default=None)
@click.pass_context
@handle_errors
def targets_filter(ctx, lexicon_path, word_col, aoa_col, concreteness_col,
                   pos_col, lo, hi, concreteness_cutoff, out):
    """AoA band + POS + concreteness + lemma-family filter."""
    lex = load_lex(ctx, lexicon_path, word_col, aoa_col, concreteness_col, pos_col)
    cands = tw_mod.band_filter(lex, lo, hi, concreteness_cutoff)
    sink = open(out, "w", encoding="utf-8") if out else sys.stdout
    try:
        sink.write("word,pos,aoa,concreteness\n")
        for c in cands:
            sink.write(f"{c.lemma},{c.pos},{c.aoa},{c.concreteness}\n")
    finally:
        if out:
            sink.close()


@targets_grp.command("select")
@click.option("--candidates", "candidates_path", type=click.Path(exists=True),
              required=True, help="Output of `targets filter`.")
@click.option("--ratings", "ratings_path", type=click.Path(exists=True),
              required=True,
              help="CSV word,annotator,learnability,imageability,appropriateness.")
@click.option("--quota", default="noun=150,verb=50,adjective=50")
@click.option("--composite", type=click.Choice(["min", "mean", "product"]),
              default="min")
@click.option("--out", type=click.Path(), default=None)
@handle_errors
def targets_select(candidates_path, ratings_path, quota, composite, out):
    """Aggregate annotator scores and cut per-POS quotas."""
    cands = []
    with open(candidates_path, encoding="utf-8", newline="") as fh:
        for row in csv.DictReader(fh):
            cands.append(tw_mod.TargetCandidate(
                lemma=row["word"], pos=row["pos"], aoa=float(row["aoa"]),
                concreteness=float(row["concreteness"])))
    tw_mod.load_ratings(ratings_path, cands)
    quota_map = {}
    for part in quota.split(","):
        pos, _, count = part.partition("=")
        pos = {"adj": "adjective"}.get(pos.strip(), pos.strip())
        quota_map[pos] = int(count)
    chosen = tw_mod.select_quota(tw_mod.aggregate_scores(cands, composite), quota_map)
    sink = open(out, "w", encoding="utf-8") if out else sys.stdout
    try:
        for c in chosen:
            sink.write(f"{c.lemma},{c.pos}\n")
    finally:
        if out:
            sink.close()


@targets_grp.command("bundled")
@click.option("--pos", type=click.Choice(["noun", "verb", "adjective"]), default=None)
@handle_errors
def targets_bundled(pos):
    """Print the shipped 250-word curated list."""
    for word, word_pos in tw_mod.load_bundled_target_words():
        if pos is None or word_pos == pos:
            click.echo(f"{word},{word_pos}")


# -- generate ----------------------------------------------------------------

def _load_target_sets(path: Path, n_sets: int, seed: int) -> list[list[str]]:
    """Lines with 5 comma-separated words are explicit sets; otherwise the
    file is a flat word pool sampled into seeded 5-word sets."""
    import random as _random
    lines = [l.strip() for l in path.read_text(encoding="utf-8").splitlines()
             if l.strip() and not l.startswith("#")]
    if lines and "," in lines[0]:
        sets = []
        for i, line in enumerate(lines, 1):
            words = [w.strip() for w in line.split(",") if w.strip()]
            if len(words) != 5:
                raise ValueError(f"{path}:{i}: expected 5 words, got {len(words)}")
            sets.append(words)
        return sets[:n_sets] if n_sets else sets
    pool = [l.split(",")[0] for l in lines]
    if len(pool) < 5:
        raise ValueError(f"target pool has only {len(pool)} words")
    rng = _random.Random(seed)
    return [rng.sample(pool, 5) for _ in range(n_sets)]


@cli.command("generate")
@click.option("--backend", "backend_path", type=click.Path(exists=True), required=True,
              help="Backend config JSON ({type: http|mock, ...}).")
@click.option("--prompt", "prompt_id",
              type=click.Choice(sorted(gen_mod.PROMPT_TEMPLATES)), required=True)
@click.option("--targets-file", type=click.Path(exists=True), required=True,
              help="5-word sets (comma-separated lines) or a word pool to sample.")
@click.option("--n", "n_stories", type=int, default=50,
              help="Stories to generate (one per target set).")
@click.option("--per-set", type=int, default=1, help="Stories per target set.")
@click.option("--out", type=click.Path(), required=True)
@click.pass_context
@handle_errors
def generate_cmd(ctx, backend_path, prompt_id, targets_file, n_stories, per_set, out):
    """Generate stories for a prompt over target-word sets."""
    backend = gen_mod.load_backend_config(backend_path)
    n_sets = max(1, n_stories // max(1, per_set))
    target_sets = _load_target_sets(Path(targets_file), n_sets, ctx.obj["seed"])
    _log_effective(ctx, backend=backend.name, prompt=prompt_id,
                   sets=len(target_sets), per_set=per_set, seed=ctx.obj["seed"])
    with open(out, "w", encoding="utf-8") as sink:
        result = gen_mod.generate_batch(
            backend, prompt_id, target_sets, n_per_set=per_set, out=sink,
            concurrency=ctx.obj["jobs"])
    click.echo(f"generated={len(result.records)} failures={len(result.failures)} "
               f"out={out}")
    if result.failures:
        for failure in result.failures:
            log.warning("failed %s after %d retries: %s",
                        failure.targets, failure.retries, failure.error)


# -- simplify -----------------------------------------------------------------

@cli.command("simplify")
@click.argument("input_path", type=click.Path(exists=True))
@lexicon_options
@click.option("--backends", "backends_path", type=click.Path(exists=True),
              required=True, help="JSON list of candidate backend configs.")
@click.option("--antonyms", "antonyms_path", type=click.Path(exists=True),
              default=None, help="word<TAB>comma-joined antonym table.")
@click.option("--threshold", type=float, default=None)
@click.option("--k", type=int, default=3)
@click.option("--trace", is_flag=True, help="Include per-span filter traces.")
@click.option("--out", type=click.Path(), default=None)
@click.pass_context
@handle_errors
def simplify_cmd(ctx, input_path, lexicon_path, word_col, aoa_col,
                 concreteness_col, pos_col, backends_path, antonyms_path,
                 threshold, k, trace, out):
    """Simplify a story corpus (.records) or a plain text file."""
    lex = load_lex(ctx, lexicon_path, word_col, aoa_col, concreteness_col, pos_col)
    threshold = threshold if threshold is not None else \
        ctx.obj["config"].get("threshold", 6.0)
    with open(backends_path, encoding="utf-8") as fh:
        cfgs = json.load(fh)
    backends = simp_mod.backends_from_config(
        cfgs if isinstance(cfgs, list) else [cfgs], Path(backends_path).parent)
    antonyms = simp_mod.load_word_list_table(antonyms_path) if antonyms_path else None
    _log_effective(ctx, input=input_path, threshold=threshold, k=k,
                   backends=[b.name for b in backends])

    rows = []
    try:
        stories = read_story_records(input_path)
    except (ValueError, json.JSONDecodeError):
        stories = None
    if stories is None:
        text = Path(input_path).read_text(encoding="utf-8")
        new_text, resolutions = simp_mod.simplify_text(
            text, lex, backends, threshold, antonyms, k)
        row = {"id": input_path, "text": new_text, "original_text": text,
               "spans": [_span_row(r, trace) for r in resolutions]}
        rows.append(row)
    else:
        for story in stories:
            result = simp_mod.simplify_story(story, lex, backends, threshold,
                                             antonyms, k)
            row = result.as_dict()
            if not trace:
                for span_row in row["spans"]:
                    span_row.pop("trace", None)
            rows.append(row)

    sink = open(out, "w", encoding="utf-8") if out else sys.stdout
    try:
        write_jsonl(rows, sink)
    finally:
        if out:
            sink.close()


def _span_row(res, trace: bool) -> dict:
    row = {"word": res.span.word, "aoa": res.span.aoa,
           "sentence_idx": res.span.sentence_idx, "resolved": res.resolved,
           "replacement": res.chosen.word if res.chosen else None,
           "candidates": [c.as_dict() for c in res.candidates.candidates]}
    if trace:
        row["trace"] = res.candidates.pipeline_trace
    return row


# -- eval / split --------------------------------------------------------------

def _load_side(dataset, dataset_format, side, train_frac, split_seed):
    instances = eval_mod.load_dataset(dataset, dataset_format)
    if side == "all":
        return instances
    train, test = eval_mod.split(instances, train_frac, split_seed)
    return train if side == "train" else test


@cli.command("eval")
@click.option("--dataset", type=click.Path(exists=True), required=True)
@click.option("--dataset-format", type=click.Choice(["cds", "tsar"]), default="cds")
@click.option("--preds", "preds_specs", multiple=True, required=True,
              help="Predictions file, optionally name=path; repeatable.")
@lexicon_options
@click.option("--side", type=click.Choice(["all", "train", "test"]), default="all")
@click.option("--train-frac", type=float, default=0.7)
@click.option("--split-seed", type=int, default=None)
@click.option("--out", type=click.Path(), default=None)
@click.pass_context
@handle_errors
def eval_cmd(ctx, dataset, dataset_format, preds_specs, lexicon_path, word_col,
             aoa_col, concreteness_col, pos_col, side, train_frac, split_seed, out):
    """Score prediction files against gold data, Table-2 style."""
    lex = load_lex(ctx, lexicon_path, word_col, aoa_col, concreteness_col, pos_col)
    split_seed = split_seed if split_seed is not None else ctx.obj["seed"]
    instances = _load_side(dataset, dataset_format, side, train_frac, split_seed)
    _log_effective(ctx, dataset=dataset, side=side, n=len(instances),
                   train_frac=train_frac, split_seed=split_seed)
    results = []
    for spec in preds_specs:
        name, _, path = spec.rpartition("=")
        if not name:
            name, path = Path(path).stem, path
        preds = eval_mod.load_predictions(path)
        results.append(eval_mod.score(instances, preds, lex, name=name))
    rows = [r.as_dict() for r in results]
    _emit(ctx, rows, eval_mod.render_report(results) + f"\nside={side} n={len(instances)}",
          out)


@cli.command("split")
@click.option("--dataset", type=click.Path(exists=True), required=True)
@click.option("--dataset-format", type=click.Choice(["cds", "tsar"]), default="cds")
@click.option("--train-frac", type=float, default=0.7)
@click.option("--out-train", type=click.Path(), required=True)
@click.option("--out-test", type=click.Path(), required=True)
@click.pass_context
@handle_errors
def split_cmd(ctx, dataset, dataset_format, train_frac, out_train, out_test):
    """Deterministic train/test split of a gold dataset."""
    instances = eval_mod.load_dataset(dataset, dataset_format)
    train, test = eval_mod.split(instances, train_frac, ctx.obj["seed"])
    eval_mod.write_dataset(train, out_train)
    eval_mod.write_dataset(test, out_test)
    click.echo(f"train={len(train)} test={len(test)} seed={ctx.obj['seed']}")


# -- annotate -------------------------------------------------------------------

@cli.group("annotate")
def annotate_grp():
    """Annotation service: enqueue spans, serve, export CDS."""


@annotate_grp.command("enqueue")
@click.option("--corpus", type=click.Path(exists=True), required=True)
@lexicon_options
@click.option("--state", "state_dir", type=click.Path(file_okay=False), required=True)
@click.option("--threshold", type=float, default=6.0)
@click.option("--n", "n_spans", type=int, default=750,
              help="Randomly selected span count (seeded).")
@click.pass_context
@handle_errors
def annotate_enqueue(ctx, corpus, lexicon_path, word_col, aoa_col,
                     concreteness_col, pos_col, state_dir, threshold, n_spans):
    """Identify complex spans in a corpus and queue them for annotation."""
    import random as _random
    lex = load_lex(ctx, lexicon_path, word_col, aoa_col, concreteness_col, pos_col)
    spans = []
    for story in read_story_records(corpus):
        doc = tokenize(story.text)
        spans.extend(simp_mod.identify_complex(
            doc, lex, threshold, exempt=story.target_words, story_id=story.id))
    if len(spans) > n_spans:
        rng = _random.Random(ctx.obj["seed"])
        spans = rng.sample(spans, n_spans)
    store = AnnotationStore(lex, state_dir=state_dir, seed=ctx.obj["seed"])
    ids = store.enqueue(spans)
    click.echo(f"enqueued={len(ids)} state={state_dir}")


@annotate_grp.command("serve")
@click.option("--port", type=int, default=8080)
@click.option("--host", default="127.0.0.1")
@lexicon_options
@click.option("--state", "state_dir", type=click.Path(file_okay=False), required=True)
@click.option("--auth", "auth_path", type=click.Path(exists=True), default=None,
              help="JSON file of static bearer tokens.")
@click.option("--static", "static_dir", type=click.Path(file_okay=False),
              default=None, help="Front-end bundle to serve at /.")
@click.pass_context
@handle_errors
def annotate_serve(ctx, port, host, lexicon_path, word_col, aoa_col,
                   concreteness_col, pos_col, state_dir, auth_path, static_dir):
    """Run the annotation HTTP service."""
    import uvicorn

    from .annotate.service import create_app, load_auth_config
    lex = load_lex(ctx, lexicon_path, word_col, aoa_col, concreteness_col, pos_col)
    store = AnnotationStore(lex, state_dir=state_dir, seed=ctx.obj["seed"])
    tokens = load_auth_config(auth_path) if auth_path else None
    app = create_app(store, auth_tokens=tokens, static_dir=static_dir)
    uvicorn.run(app, host=host, port=port, log_level="warning")


@annotate_grp.command("export")
@lexicon_options
@click.option("--state", "state_dir", type=click.Path(file_okay=False), required=True)
@click.option("--out", type=click.Path(), required=True)
@click.pass_context
@handle_errors
def annotate_export(ctx, lexicon_path, word_col, aoa_col, concreteness_col,
                    pos_col, state_dir, out):
    """Export accepted tasks as a CDS dataset file."""
    lex = load_lex(ctx, lexicon_path, word_col, aoa_col, concreteness_col, pos_col)
    store = AnnotationStore(lex, state_dir=state_dir, seed=ctx.obj["seed"])
    n = eval_mod.write_dataset(store.export_cds(), out)
    click.echo(f"exported={n} out={out}")


# -- report ---------------------------------------------------------------------

@cli.command("report")
@click.option("--summary", "summaries", multiple=True, required=True,
              type=click.Path(exists=True),
              help="Summary JSON from `audit --summary-json`; give two.")
@click.option("--labels", default=None, help="Comma-separated corpus labels.")
@click.option("--plots", "plots_dir", type=click.Path(file_okay=False), default=None)
@click.pass_context
@handle_errors
def report_cmd(ctx, summaries, labels, plots_dir):
    """Compare two corpus summaries side by side, with optional charts."""
    if len(summaries) != 2:
        raise click.UsageError("exactly two --summary files are required")
    loaded = []
    for path in summaries:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
        cells = [audit_mod.CorpusCell(
            model=c["model"], prompt_id=c["prompt"], n=c["n"],
            avg_aoa=c["avg_aoa"], max_aoa=c["highest_aoa"],
            pct_valid=c["pct_valid"], pct_appropriate=c["pct_appropriate"],
            readability={m: c[m] for m in read_mod.METRICS})
            for c in raw["cells"]]
        loaded.append(audit_mod.CorpusSummary(cells=cells,
                                              options=raw.get("options", {})))
    names = (labels.split(",") if labels
             else [Path(p).stem for p in summaries])
    cmp = audit_mod.compare_corpora(loaded[0], loaded[1], names[0], names[1])
    click.echo(audit_mod.render_comparison_table(cmp))
    if plots_dir:
        from . import plots
        per_metric = {m: {cmp.label_a: cmp.metrics[m][0],
                          cmp.label_b: cmp.metrics[m][1]}
                      for m in read_mod.METRICS if m in cmp.metrics}
        for path in plots.emit_metric_bars(per_metric, plots_dir):
            log.info("wrote %s", path)


def main():
    cli(prog_name="storylex")


if __name__ == "__main__":
    main()
