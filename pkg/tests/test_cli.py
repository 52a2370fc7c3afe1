import json

import pytest
from click.testing import CliRunner

from storylex.cli import cli

LEX_ARGS = ["--word-col", "word", "--aoa-col", "aoa"]


@pytest.fixture
def runner():
    return CliRunner()


def lex_args(data_dir):
    return ["--lexicon", str(data_dir / "lexicon.csv"), *LEX_ARGS]


class TestLexiconCmd:
    def test_stats_and_lookup(self, runner, data_dir):
        result = runner.invoke(cli, ["lexicon", *lex_args(data_dir),
                                     "Dog", "juggled", "zxqv"])
        assert result.exit_code == 0, result.output
        assert "entries=" in result.output
        assert "dog\t2.4\texact" in result.output.lower()
        assert "juggled\t6.9\tlemma" in result.output
        assert "zxqv\tmiss" in result.output

    def test_missing_lexicon_is_usage_error(self, runner):
        result = runner.invoke(cli, ["lexicon"])
        assert result.exit_code == 2

    def test_bad_column_is_clean_error(self, runner, data_dir):
        result = runner.invoke(cli, ["lexicon", "--lexicon",
                                     str(data_dir / "lexicon.csv"),
                                     "--word-col", "nope", "--aoa-col", "aoa"])
        assert result.exit_code == 1
        assert "Error:" in result.output


class TestReadabilityCmd:
    def test_table_output(self, runner, tmp_path):
        doc = tmp_path / "doc.txt"
        doc.write_text("The cat sat on the mat.", encoding="utf-8")
        result = runner.invoke(cli, ["readability", str(doc)])
        assert result.exit_code == 0, result.output
        assert "116.15" in result.output     # FRE rendered to 2 decimals

    def test_jsonl_output_and_plots(self, runner, tmp_path):
        doc = tmp_path / "doc.txt"
        doc.write_text("The cat sat on the mat.", encoding="utf-8")
        plots = tmp_path / "plots"
        result = runner.invoke(cli, ["--format", "jsonl", "readability",
                                     str(doc), "--plots", str(plots)])
        assert result.exit_code == 0, result.output
        row = json.loads(result.output.strip().splitlines()[0])
        assert row["words"] == 6
        assert sorted(p.name for p in plots.glob("*.png")) == \
               ["ari.png", "fkgl.png", "fre.png", "gfi.png"]

    def test_stdin(self, runner):
        result = runner.invoke(cli, ["readability", "-"],
                               input="The cat sat on the mat.")
        assert result.exit_code == 0
        assert "116.15" in result.output

    def test_empty_doc_fails_cleanly(self, runner, tmp_path):
        doc = tmp_path / "empty.txt"
        doc.write_text("...", encoding="utf-8")
        result = runner.invoke(cli, ["readability", str(doc)])
        assert result.exit_code == 1
        assert "Error:" in result.output


class TestAuditCmd:
    def test_summary_table(self, runner, data_dir):
        result = runner.invoke(cli, [
            "audit", str(data_dir / "mock_corpus.records"), *lex_args(data_dir)])
        assert result.exit_code == 0, result.output
        assert "% Valid" in result.output
        assert "mock" in result.output

    def test_per_story_jsonl(self, runner, data_dir):
        result = runner.invoke(cli, [
            "--format", "jsonl", "audit", str(data_dir / "mock_corpus.records"),
            *lex_args(data_dir), "--per-story"])
        assert result.exit_code == 0, result.output
        rows = [json.loads(l) for l in result.output.strip().splitlines()
                if l.startswith("{")]
        assert len(rows) == 30
        assert {"story_id", "avg_aoa", "valid", "appropriate"} <= rows[0].keys()

    def test_summary_json_sidecar(self, runner, data_dir, tmp_path):
        out = tmp_path / "summary.json"
        result = runner.invoke(cli, [
            "audit", str(data_dir / "mock_corpus.records"), *lex_args(data_dir),
            "--summary-json", str(out)])
        assert result.exit_code == 0
        raw = json.loads(out.read_text())
        assert raw["cells"][0]["model"] == "mock"


class TestTargetsCmd:
    def test_filter_then_select(self, runner, data_dir, tmp_path):
        cands = tmp_path / "cands.csv"
        result = runner.invoke(cli, [
            "targets", "filter", "--lexicon", str(data_dir / "lexicon.csv"),
            *LEX_ARGS, "--concreteness-col", "concreteness", "--pos-col", "pos",
            "--out", str(cands)])
        assert result.exit_code == 0, result.output
        lines = cands.read_text().strip().splitlines()
        assert lines[0] == "word,pos,aoa,concreteness"
        words = [l.split(",")[0] for l in lines[1:]]
        assert "glacier" in words and "the" not in words

        ratings = tmp_path / "ratings.csv"
        with open(ratings, "w") as fh:
            fh.write("word,annotator,learnability,imageability,appropriateness\n")
            for w in words:
                fh.write(f"{w},a1,5,5,5\n")
        selected = tmp_path / "selected.csv"
        result = runner.invoke(cli, [
            "targets", "select", "--candidates", str(cands),
            "--ratings", str(ratings), "--quota", "noun=3,verb=2,adjective=1",
            "--out", str(selected)])
        assert result.exit_code == 0, result.output
        rows = selected.read_text().strip().splitlines()
        assert len(rows) == 6

    def test_bundled_list(self, runner):
        result = runner.invoke(cli, ["targets", "bundled", "--pos", "verb"])
        assert result.exit_code == 0
        assert "unzip,verb" in result.output
        assert len(result.output.strip().splitlines()) == 50


class TestGenerateCmd:
    def test_mock_generation(self, runner, data_dir, tmp_path):
        out = tmp_path / "generated.records"
        result = runner.invoke(cli, [
            "generate", "--backend", str(data_dir / "mock_backend.json"),
            "--prompt", "preschool",
            "--targets-file", str(data_dir / "target_sets.txt"),
            "--n", "30", "--per-set", "5", "--out", str(out)])
        assert result.exit_code == 0, result.output
        assert "generated=30" in result.output
        lines = out.read_text().strip().splitlines()
        assert len(lines) == 30
        rec = json.loads(lines[0])
        assert rec["model"] == "mock" and len(rec["target_words"]) == 5


class TestSimplifyCmd:
    def test_corpus_simplification(self, runner, data_dir, tmp_path):
        out = tmp_path / "simplified.jsonl"
        result = runner.invoke(cli, [
            "simplify", str(data_dir / "mock_corpus.records"), *lex_args(data_dir),
            "--backends", str(data_dir / "simplify_backends.json"),
            "--antonyms", str(data_dir / "antonyms.tsv"),
            "--out", str(out), "--trace"])
        assert result.exit_code == 0, result.output
        rows = [json.loads(l) for l in out.read_text().splitlines()]
        assert len(rows) == 30
        resolved = [s for r in rows for s in r["spans"] if s["resolved"]]
        assert resolved, "no span resolved by the thesaurus backend"
        sample = next(r for r in rows if r["id"] == "fixture-00-0")
        assert "huge" in sample["text"]          # enormous -> huge
        assert "enormous" not in sample["text"]

    def test_plain_text_input(self, runner, data_dir, tmp_path):
        doc = tmp_path / "text.txt"
        doc.write_text("The enormous dog ran.", encoding="utf-8")
        result = runner.invoke(cli, [
            "simplify", str(doc), *lex_args(data_dir),
            "--backends", str(data_dir / "simplify_backends.json")])
        assert result.exit_code == 0, result.output
        row = json.loads(result.output.strip().splitlines()[-1])
        assert row["text"] == "The huge dog ran."


class TestEvalAndSplitCmd:
    @pytest.fixture
    def gold(self, tmp_path):
        path = tmp_path / "gold.tsv"
        rows = [f"i{k}\ts{k}\tThe enormous cat {k} sat.\tenormous\thuge\tbig"
                for k in range(10)]
        path.write_text("\n".join(rows) + "\n", encoding="utf-8")
        return path

    def test_eval_report(self, runner, data_dir, tmp_path, gold):
        preds = tmp_path / "preds.tsv"
        preds.write_text("".join(f"i{k}\thuge\n" for k in range(5)),
                         encoding="utf-8")
        result = runner.invoke(cli, [
            "eval", "--dataset", str(gold), "--preds", f"sysA={preds}",
            *lex_args(data_dir)])
        assert result.exit_code == 0, result.output
        assert "0.500*" in result.output
        assert "Accuracy@3" in result.output

    def test_split_cmd(self, runner, tmp_path, gold):
        out_train, out_test = tmp_path / "train.tsv", tmp_path / "test.tsv"
        result = runner.invoke(cli, [
            "--seed", "3", "split", "--dataset", str(gold),
            "--train-frac", "0.7",
            "--out-train", str(out_train), "--out-test", str(out_test)])
        assert result.exit_code == 0, result.output
        assert "train=7 test=3" in result.output
        assert len(out_train.read_text().strip().splitlines()) == 7

    def test_eval_on_test_side(self, runner, data_dir, tmp_path, gold):
        preds = tmp_path / "preds.tsv"
        preds.write_text("".join(f"i{k}\thuge\n" for k in range(10)),
                         encoding="utf-8")
        result = runner.invoke(cli, [
            "eval", "--dataset", str(gold), "--preds", f"s={preds}",
            *lex_args(data_dir), "--side", "test", "--split-seed", "1"])
        assert result.exit_code == 0, result.output
        assert "side=test n=3" in result.output


class TestAnnotateCmd:
    def test_enqueue_then_export_needs_accepts(self, runner, data_dir, tmp_path):
        state = tmp_path / "state"
        result = runner.invoke(cli, [
            "annotate", "enqueue", "--corpus", str(data_dir / "mock_corpus.records"),
            *lex_args(data_dir), "--state", str(state), "--n", "10"])
        assert result.exit_code == 0, result.output
        assert "enqueued=10" in result.output
        assert (state / "events.jsonl").exists()

        result = runner.invoke(cli, [
            "annotate", "export", *lex_args(data_dir),
            "--state", str(state), "--out", str(tmp_path / "cds.tsv")])
        assert result.exit_code == 1          # zero accepted tasks yet
        assert "zero accepted" in result.output


class TestReportCmd:
    def test_compare_two_summaries(self, runner, data_dir, tmp_path):
        summaries = []
        for name in ("a", "b"):
            out = tmp_path / f"{name}.json"
            invoke = runner.invoke(cli, [
                "audit", str(data_dir / "mock_corpus.records"),
                *lex_args(data_dir), "--summary-json", str(out)])
            assert invoke.exit_code == 0
            summaries.append(out)
        plots = tmp_path / "charts"
        result = runner.invoke(cli, [
            "report", "--summary", str(summaries[0]), "--summary", str(summaries[1]),
            "--labels", "human,generated", "--plots", str(plots)])
        assert result.exit_code == 0, result.output
        assert "fre" in result.output
        assert "+0.00" in result.output          # identical corpora
        assert (plots / "fre.png").exists()


class TestErrorContract:
    def test_unknown_flag_exits_2(self, runner):
        assert runner.invoke(cli, ["readability", "--bogus"]).exit_code == 2

    def test_unknown_subcommand_exits_2(self, runner):
        assert runner.invoke(cli, ["frobnicate"]).exit_code == 2

    def test_domain_error_one_line(self, runner, tmp_path):
        missing = tmp_path / "missing.records"
        missing.write_text("{not json}\n", encoding="utf-8")
        result = runner.invoke(cli, ["audit", str(missing), "--lexicon",
                                     str(tmp_path / "nope.csv"), *LEX_ARGS])
        assert result.exit_code == 1
        error_lines = [l for l in result.output.splitlines() if l.startswith("Error:")]
        assert len(error_lines) == 1
