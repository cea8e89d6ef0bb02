"""End-to-end command tests through main(argv)."""

import io
import json
import re

import pytest

from sindhi_ner.cli import CONFIG_ENV_VAR, main
from sindhi_ner.corpus import CorpusStore
from sindhi_ner.pipeline import DATA_DIR, DEFAULT_CONFIG_PATH

from test_pipeline import write_config

SENTENCE = "اويس جمائي 05.06.2016 تي سنڌ يونيورسٽي ويو"
INLINE = ("<PERSON>اويس جمائي</PERSON> <DATE>05.06.2016</DATE> تي "
          "<ORGANIZATION>سنڌ يونيورسٽي</ORGANIZATION> ويو")

ERROR_PREFIX = re.compile(r"^error:[a-z-]+: ")


def feed_stdin(monkeypatch, text):
    monkeypatch.setattr("sys.stdin", io.StringIO(text))


class TestTag:
    def test_stdin_inline(self, monkeypatch, capsys):
        feed_stdin(monkeypatch, SENTENCE)
        assert main(["tag"]) == 0
        assert capsys.readouterr().out == INLINE + "\n"

    def test_explicit_dash(self, monkeypatch, capsys):
        feed_stdin(monkeypatch, SENTENCE)
        assert main(["tag", "-"]) == 0
        assert capsys.readouterr().out == INLINE + "\n"

    def test_file_matches_stdin(self, tmp_path, monkeypatch, capsys):
        feed_stdin(monkeypatch, SENTENCE)
        main(["tag"])
        from_stdin = capsys.readouterr().out
        src = tmp_path / "doc.txt"
        src.write_text(SENTENCE, encoding="utf-8")
        assert main(["tag", str(src)]) == 0
        assert capsys.readouterr().out == from_stdin

    def test_tabular_format(self, monkeypatch, capsys):
        feed_stdin(monkeypatch, "اويس ڪراچي ويو")
        assert main(["tag", "--format", "tabular"]) == 0
        assert capsys.readouterr().out == \
            "اويس\tPERSON\nڪراچي\tLOCATION\nويو\tO\n"

    def test_jsonl_format(self, monkeypatch, capsys):
        feed_stdin(monkeypatch, SENTENCE)
        assert main(["tag", "--format", "jsonl"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["text"] == SENTENCE
        assert [e["label"] for e in payload["entities"]] == \
            ["PERSON", "DATE", "ORGANIZATION"]

    def test_empty_stdin(self, monkeypatch, capsys):
        feed_stdin(monkeypatch, "")
        assert main(["tag"]) == 0
        assert capsys.readouterr().out == ""

    def test_multiple_files_ordered(self, tmp_path, capsys):
        names = []
        for i, text in enumerate(("اويس ويو", "ڪراچي ۾", "10:40 تي")):
            path = tmp_path / f"doc{i}.txt"
            path.write_text(text, encoding="utf-8")
            names.append(str(path))
        assert main(["tag", *names]) == 0
        serial = capsys.readouterr().out
        assert serial.splitlines() == [
            "<PERSON>اويس</PERSON> ويو",
            "<LOCATION>ڪراچي</LOCATION> ۾",
            "<TIME>10:40</TIME> تي"]
        assert main(["tag", "--jobs", "4", *names]) == 0
        assert capsys.readouterr().out == serial

    def test_store_appends_and_prints_ids(self, tmp_path, monkeypatch, capsys):
        store_path = tmp_path / "corpus.jsonl"
        feed_stdin(monkeypatch, SENTENCE)
        assert main(["tag", "--store", str(store_path)]) == 0
        captured = capsys.readouterr()
        assert captured.err == "1\n"
        with CorpusStore(store_path) as store:
            assert len(store) == 1
            assert store.get(1).text == SENTENCE

    def test_missing_input_file(self, tmp_path, capsys):
        assert main(["tag", str(tmp_path / "ghost.txt")]) == 1
        err = capsys.readouterr().err
        assert err.startswith("error:missing-data-file: ")

    def test_bad_format_usage_error(self, monkeypatch, capsys):
        feed_stdin(monkeypatch, SENTENCE)
        assert main(["tag", "--format", "xml"]) == 2

    def test_unknown_flag_usage_error(self, capsys):
        assert main(["tag", "--bogus"]) == 2

    def test_missing_subcommand_usage_error(self, capsys):
        assert main([]) == 2

    def test_config_flag(self, tmp_path, monkeypatch, capsys):
        path = write_config(tmp_path, extra_lines=(
            "rule.R1_DateTime=off",))
        feed_stdin(monkeypatch, "گاڏي 10:40 تي ايندي")
        assert main(["tag", "--config", str(path)]) == 0
        assert "<TIME>" not in capsys.readouterr().out

    def test_config_env_var(self, tmp_path, monkeypatch, capsys):
        path = write_config(tmp_path, extra_lines=(
            "rule.R1_DateTime=off",))
        monkeypatch.setenv(CONFIG_ENV_VAR, str(path))
        feed_stdin(monkeypatch, "گاڏي 10:40 تي ايندي")
        assert main(["tag"]) == 0
        assert "<TIME>" not in capsys.readouterr().out

    def test_config_flag_beats_env(self, tmp_path, monkeypatch, capsys):
        muted = write_config(tmp_path, extra_lines=(
            "rule.R1_DateTime=off",))
        monkeypatch.setenv(CONFIG_ENV_VAR, str(muted))
        feed_stdin(monkeypatch, "گاڏي 10:40 تي ايندي")
        assert main(["tag", "--config", str(DEFAULT_CONFIG_PATH)]) == 0
        assert "<TIME>" in capsys.readouterr().out

    def test_gazetteer_override(self, tmp_path, monkeypatch, capsys):
        # Replacing the gazetteers leaves only the tiny supplied file, so
        # the default person entry no longer matches.
        tiny = tmp_path / "tiny.tsv"
        tiny.write_text("مرڪزوال\tLocation\n", encoding="utf-8")
        feed_stdin(monkeypatch, "اويس مرڪزوال ويو")
        assert main(["tag", "--gazetteer", str(tiny)]) == 0
        out = capsys.readouterr().out
        assert "<LOCATION>مرڪزوال</LOCATION>" in out
        assert "<PERSON>" not in out

    def test_missing_config_file(self, tmp_path, capsys):
        assert main(["tag", "--config", str(tmp_path / "ghost.conf")]) == 1
        assert capsys.readouterr().err.startswith("error:missing-data-file: ")


class TestEval:
    def test_human_report(self, capsys):
        gold = DATA_DIR / "mini_gold.tsv"
        assert main(["eval", "--gold", str(gold)]) == 0
        out = capsys.readouterr().out
        lines = out.splitlines()
        assert lines[2].startswith("accuracy\t100.00%")
        assert "label\ttp\tfp\tfn\tprecision\trecall\tf1" in lines
        assert any(line.startswith("PERSON\t") for line in lines)

    def test_json_report(self, capsys):
        gold = DATA_DIR / "mini_gold.tsv"
        assert main(["eval", "--gold", str(gold), "--json"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["accuracy"] == "100.00%"
        assert payload["correct_tokens"] == payload["total_tokens"]
        assert set(payload["labels"]) == {
            "PERSON", "LOCATION", "ORGANIZATION", "DATE", "TIME",
            "DESIGNATION", "TERM", "ABBREVIATION", "NUMBER", "URL",
            "EMAIL", "BRAND"}

    def test_missing_gold(self, tmp_path, capsys):
        assert main(["eval", "--gold", str(tmp_path / "ghost.tsv")]) == 1
        assert ERROR_PREFIX.match(capsys.readouterr().err.splitlines()[0])

    def test_bad_gold_label(self, tmp_path, capsys):
        gold = tmp_path / "gold.tsv"
        gold.write_text("اويس\tPERSONN\n", encoding="utf-8")
        assert main(["eval", "--gold", str(gold)]) == 1
        assert capsys.readouterr().err.startswith("error:unknown-label: ")

    def test_gold_required(self, capsys):
        assert main(["eval"]) == 2


class TestQuery:
    @pytest.fixture()
    def store_path(self, tmp_path, engine):
        path = tmp_path / "corpus.jsonl"
        with CorpusStore(path) as store:
            store.append(engine.tag_text(SENTENCE))
            store.append(engine.tag_text("هو خيرپور کان آيو"))
        return path

    def test_all_rows(self, store_path, capsys):
        assert main(["query", "--store", str(store_path)]) == 0
        rows = capsys.readouterr().out.splitlines()
        assert rows == [
            "1\tPERSON\tاويس جمائي\tR3_GazetteerName",
            "1\tDATE\t05.06.2016\tR1_DateTime",
            "1\tORGANIZATION\tسنڌ يونيورسٽي\tR10_OrgKeyword",
            "2\tLOCATION\tخيرپور\tR2_Suffix"]

    def test_label_filter(self, store_path, capsys):
        assert main(["query", "--store", str(store_path),
                     "--label", "LOCATION"]) == 0
        rows = capsys.readouterr().out.splitlines()
        assert rows == ["2\tLOCATION\tخيرپور\tR2_Suffix"]

    def test_surface_filter(self, store_path, capsys):
        assert main(["query", "--store", str(store_path),
                     "--surface", "يونيورسٽي"]) == 0
        assert len(capsys.readouterr().out.splitlines()) == 1

    def test_rule_filter(self, store_path, capsys):
        assert main(["query", "--store", str(store_path),
                     "--rule", "R1_DateTime"]) == 0
        assert "05.06.2016" in capsys.readouterr().out

    def test_no_matches_still_succeeds(self, store_path, capsys):
        assert main(["query", "--store", str(store_path),
                     "--label", "BRAND"]) == 0
        assert capsys.readouterr().out == ""

    def test_missing_store(self, tmp_path, capsys):
        assert main(["query", "--store", str(tmp_path / "ghost.jsonl")]) == 1
        assert capsys.readouterr().err.startswith("error:missing-data-file: ")

    def test_corrupt_store(self, tmp_path, capsys):
        path = tmp_path / "corpus.jsonl"
        path.write_text("{broken\n", encoding="utf-8")
        assert main(["query", "--store", str(path)]) == 1
        first = capsys.readouterr().err.splitlines()[0]
        assert first.startswith("error:corrupt-store: ")
        assert "byte offset 0" in first

    def test_store_required(self, capsys):
        assert main(["query"]) == 2


class TestGazetteer:
    def test_list_counts_match_files(self, capsys):
        assert main(["gazetteer", "list"]) == 0
        out = capsys.readouterr().out
        counts = dict(line.split("\t") for line in out.splitlines())
        # Line-count oracle against the shipped files.
        def entries(name):
            lines = (DATA_DIR / name).read_text("utf-8").splitlines()
            return [l for l in lines if l.strip() and not l.startswith("#")]
        assert int(counts["PersonFirstName"]) == len(entries("names_first.tsv"))
        assert int(counts["Surname"]) == len(entries("surnames.tsv"))
        assert int(counts["Location"]) == len(entries("locations.tsv"))
        assert int(counts["Title"]) + int(counts["Designation"]) == \
            len(entries("titles_designations.tsv"))
        assert set(counts) == {c.value for c in __import__(
            "sindhi_ner.gazetteer", fromlist=["Category"]).Category}

    def test_check_shipped_data_ok(self, capsys):
        assert main(["gazetteer", "check"]) == 0
        assert capsys.readouterr().out == "OK\n"

    def test_check_reports_every_problem(self, tmp_path, capsys):
        bad = tmp_path / "bad.tsv"
        bad.write_text("سنڌ\tLocation\nbroken line here extra\tNope\n"
                       "سنڌ\tLocation\n", encoding="utf-8")
        assert main(["gazetteer", "check", "--gazetteer", str(bad)]) == 1
        err_lines = capsys.readouterr().err.splitlines()
        assert err_lines[0].startswith("error:invalid-data: ")
        assert len(err_lines) == 1 + int(err_lines[0].split()[1])
        assert any("bad.tsv" in line for line in err_lines[1:])

    def test_add_appends_entry(self, tmp_path, capsys):
        target = tmp_path / "extra.tsv"
        assert main(["gazetteer", "add", "نئون شهر", "Location",
                     "--file", str(target)]) == 0
        assert capsys.readouterr().out == "نئون شهر\tLocation\n"
        assert target.read_text("utf-8") == "نئون شهر\tLocation\n"

    def test_add_refuses_duplicate_in_target(self, tmp_path, capsys):
        target = tmp_path / "extra.tsv"
        main(["gazetteer", "add", "نئون شهر", "Location",
              "--file", str(target)])
        capsys.readouterr()
        assert main(["gazetteer", "add", "نئون شهر", "Location",
                     "--file", str(target)]) == 1
        assert capsys.readouterr().err.startswith("error:duplicate-entry: ")
        assert len(target.read_text("utf-8").splitlines()) == 1

    def test_add_refuses_duplicate_of_configured_entry(self, tmp_path, capsys):
        target = tmp_path / "extra.tsv"
        assert main(["gazetteer", "add", "ڪراچي", "Location",
                     "--file", str(target)]) == 1
        assert capsys.readouterr().err.startswith("error:duplicate-entry: ")
        assert not target.exists()

    def test_add_unknown_category(self, tmp_path, capsys):
        assert main(["gazetteer", "add", "اويس", "Nope",
                     "--file", str(tmp_path / "extra.tsv")]) == 1
        assert capsys.readouterr().err.startswith("error:unknown-category: ")

    def test_add_rejects_four_words(self, tmp_path, capsys):
        assert main(["gazetteer", "add", "هڪ ٻه ٽي چار", "Location",
                     "--file", str(tmp_path / "extra.tsv")]) == 1
        assert ERROR_PREFIX.match(capsys.readouterr().err.splitlines()[0])

    def test_added_entry_changes_tagging(self, tmp_path, monkeypatch, capsys):
        target = tmp_path / "extra.tsv"
        main(["gazetteer", "add", "مرڪزوال", "Location",
              "--file", str(target)])
        capsys.readouterr()
        config = write_config(tmp_path, extra_gazetteer=target)
        feed_stdin(monkeypatch, "هو مرڪزوال ويو")
        assert main(["tag", "--config", str(config)]) == 0
        assert "<LOCATION>مرڪزوال</LOCATION>" in capsys.readouterr().out


class TestErrorPrefixInvariant:
    def test_every_failure_prefixes_stderr(self, tmp_path, capsys):
        failing = [
            ["tag", str(tmp_path / "ghost.txt")],
            ["tag", "--config", str(tmp_path / "ghost.conf")],
            ["eval", "--gold", str(tmp_path / "ghost.tsv")],
            ["query", "--store", str(tmp_path / "ghost.jsonl")],
            ["gazetteer", "add", "اويس", "Nope",
             "--file", str(tmp_path / "x.tsv")],
        ]
        for argv in failing:
            assert main(argv) == 1, argv
            err = capsys.readouterr().err
            assert ERROR_PREFIX.match(err.splitlines()[0]), (argv, err)
