import json
import random

import pytest

from groundtalk.ask import Question, QuestionKind, QuestionOption
from groundtalk.errors import MalformedCommands, MissingScene
from groundtalk.evaluate import (
    EvalCommand,
    load_commands,
    oracle_reply,
    render_figures,
    run_eval,
    write_report_csv,
    write_report_json,
)
from tests.conftest import COMMANDS_PATH, SCENES_DIR


def make_select(focals):
    return Question(
        kind=QuestionKind.SELECT,
        text="which?",
        options=tuple(QuestionOption(focal_id=f, phrase=f"option {f}") for f in focals),
    )


def make_validate(focal):
    return Question(
        kind=QuestionKind.VALIDATE,
        text="confirm?",
        options=(QuestionOption(focal_id=focal, phrase="it"),),
    )


class TestOracleReply:
    def test_validate_yes_on_target(self):
        assert oracle_reply(make_validate(3), target=3) == "yes"

    def test_validate_no_otherwise(self):
        assert oracle_reply(make_validate(3), target=4) == "no"

    def test_select_picks_lowest_matching_option(self):
        assert oracle_reply(make_select([3, 4]), target=4) == 2
        assert oracle_reply(make_select([4, 3, 4]), target=4) == 1

    def test_select_none_when_absent(self):
        assert oracle_reply(make_select([3, 4]), target=5) == "none"


class TestLoadCommands:
    def test_fixture_suite(self):
        commands = load_commands(COMMANDS_PATH)
        assert len(commands) == 12
        assert {c.category for c in commands} == {"clear", "vague", "unsolvable"}

    def test_empty_file_is_error(self, tmp_path):
        path = tmp_path / "empty.jsonl"
        path.write_text("")
        with pytest.raises(MalformedCommands):
            load_commands(path)

    def test_bad_json(self, tmp_path):
        path = tmp_path / "bad.jsonl"
        path.write_text("{nope\n")
        with pytest.raises(MalformedCommands):
            load_commands(path)

    def test_bad_category(self, tmp_path):
        path = tmp_path / "cat.jsonl"
        path.write_text(json.dumps({
            "scene": "fix-cups", "expression": "cup", "target": 3,
            "category": "odd"}) + "\n")
        with pytest.raises(MalformedCommands):
            load_commands(path)

    def test_missing_field(self, tmp_path):
        path = tmp_path / "mf.jsonl"
        path.write_text(json.dumps({
            "scene": "fix-cups", "expression": "cup", "target": 3}) + "\n")
        with pytest.raises(MalformedCommands):
            load_commands(path)


class TestRunEval:
    def test_missing_scene(self, lexicon_matcher):
        commands = [EvalCommand("no-such-scene", "cup", 3, "clear")]
        with pytest.raises(MissingScene):
            run_eval(SCENES_DIR, commands, lexicon_matcher)

    def test_single_direct_ground(self, lexicon_matcher):
        commands = [EvalCommand("fix-cups", "green cup on the table", 3, "clear")]
        report = run_eval(SCENES_DIR, commands, lexicon_matcher)
        assert report.avg_interactions == 0.0
        assert report.success_rate == 1.0
        assert report.histogram == {0: 1}

    def test_unsolvable_command_resolved_by_asking(self, lexicon_matcher):
        commands = [EvalCommand("fix-cups", "top cup on the table", 3, "unsolvable")]
        report = run_eval(SCENES_DIR, commands, lexicon_matcher)
        [row] = report.rows
        assert row.interactions >= 1
        assert row.success

    def test_permutation_invariance(self, lexicon_matcher):
        commands = load_commands(COMMANDS_PATH)
        report_a = run_eval(SCENES_DIR, commands, lexicon_matcher)
        shuffled = commands[:]
        random.Random(4).shuffle(shuffled)
        report_b = run_eval(SCENES_DIR, shuffled, lexicon_matcher)
        assert report_a.avg_interactions == report_b.avg_interactions
        assert report_a.success_rate == report_b.success_rate
        assert report_a.histogram == report_b.histogram
        assert report_a.per_category == report_b.per_category

    def test_rerun_identical(self, lexicon_matcher):
        first = run_eval(SCENES_DIR, COMMANDS_PATH, lexicon_matcher)
        second = run_eval(SCENES_DIR, COMMANDS_PATH, lexicon_matcher)
        assert first == second

    def test_oracle_sessions_never_raise(self, lexicon_matcher):
        # oracle validity: every reply fits the pending question
        report = run_eval(SCENES_DIR, COMMANDS_PATH, lexicon_matcher)
        assert report.total == 12


class TestReportOutputs:
    def test_json_csv_and_figures(self, tmp_path, lexicon_matcher):
        report = run_eval(SCENES_DIR, COMMANDS_PATH, lexicon_matcher)
        out = tmp_path / "report.json"
        write_report_json(report, out)
        loaded = json.loads(out.read_text())
        assert loaded["total"] == 12
        assert sum(loaded["histogram"].values()) == 12
        assert len(loaded["commands"]) == 12

        csv_path = write_report_csv(report, tmp_path / "report.csv")
        lines = csv_path.read_text().strip().splitlines()
        assert len(lines) == 13  # header + one row per command
        assert lines[0].startswith("scene,expression,category,target")

        figures = render_figures(report, tmp_path, stem="report")
        assert [p.name for p in figures] == [
            "report_interactions.png", "report_categories.png"]
        for path in figures:
            assert path.stat().st_size > 1000  # non-trivial PNG payload
