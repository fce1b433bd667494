import io
import json
import random

import pytest

from groundtalk.ask import QuestionKind
from groundtalk.errors import InvalidOption, SessionFinished, WrongReplyKind
from groundtalk.session import (
    SessionStatus,
    answer,
    snapshot,
    start_session,
    write_transcript,
)
from tests.generators import NAMES, ATTRIBUTES, PREDICATES, random_graph


class TestStartSession:
    def test_direct_ground_zero_interactions(self, fix_cups, lexicon_matcher):
        state = start_session(fix_cups, "grab the green cup on the table",
                              lexicon_matcher)
        assert state.status is SessionStatus.GROUNDED
        assert state.grounded_node == 3
        assert state.interactions == 0

    def test_select_question_counts_one(self, fix_cups, lexicon_matcher):
        state = start_session(fix_cups, "cup on the table", lexicon_matcher)
        assert state.status is SessionStatus.AWAITING_ANSWER
        assert state.pending.kind is QuestionKind.SELECT
        assert state.interactions == 1

    def test_no_grounding(self, fix_cups, lexicon_matcher):
        state = start_session(fix_cups, "banana next to the car", lexicon_matcher)
        assert state.status is SessionStatus.FAILED
        assert state.failure_reason == "no grounding"
        assert state.grounded_node is None

    def test_unparseable(self, fix_cups, lexicon_matcher):
        state = start_session(fix_cups, "on the", lexicon_matcher)
        assert state.status is SessionStatus.FAILED
        assert state.failure_reason == "unparseable"

    def test_relationless_unique_grounds_immediately(self, fix_cups,
                                                     lexicon_matcher):
        state = start_session(fix_cups, "the blue cup", lexicon_matcher)
        assert state.status is SessionStatus.GROUNDED
        assert state.grounded_node == 5
        assert state.interactions == 0

    def test_relationless_ambiguous_asks(self, fix_cups, lexicon_matcher):
        state = start_session(fix_cups, "cup", lexicon_matcher)
        assert state.pending.kind is QuestionKind.SELECT
        assert [o.focal_id for o in state.pending.options] == [3, 4, 5]


class TestAnswer:
    def test_select_option_grounds(self, fix_cups, lexicon_matcher):
        state = start_session(fix_cups, "cup on the table", lexicon_matcher)
        option_2 = state.pending.options[1]
        answer(state, 2)
        assert state.status is SessionStatus.GROUNDED
        assert state.grounded_node == option_2.focal_id == 4
        assert state.interactions == 1

    def test_validate_yes_grounds(self, fix_cups, lexicon_matcher):
        state = start_session(fix_cups, "green cup under the table",
                              lexicon_matcher)
        assert state.pending.kind is QuestionKind.VALIDATE
        answer(state, "yes")
        assert state.status is SessionStatus.GROUNDED
        assert state.grounded_node == 3
        assert state.interactions == 1

    def test_two_edge_command_two_interactions(self, fix_boy, lexicon_matcher):
        state = start_session(fix_boy, "boy wearing black shirt inside the boat",
                              lexicon_matcher)
        assert state.status is SessionStatus.AWAITING_ANSWER
        answer(state, 1)  # the young boy wearing the black shirt
        assert state.status is SessionStatus.AWAITING_ANSWER
        answer(state, 1)
        assert state.status is SessionStatus.GROUNDED
        assert state.grounded_node == 2
        assert state.interactions == 2

    def test_conflicting_edges_fail(self, fix_boy, lexicon_matcher):
        state = start_session(fix_boy, "boy wearing black shirt inside the boat",
                              lexicon_matcher)
        answer(state, 1)  # boy 2
        answer(state, 2)  # boy 3: contradicts the first pick
        assert state.status is SessionStatus.FAILED
        assert state.failure_reason == "conflicting edges"

    def test_option_out_of_range(self, fix_cups, lexicon_matcher):
        state = start_session(fix_cups, "cup on the table", lexicon_matcher)
        with pytest.raises(InvalidOption):
            answer(state, 7)
        assert state.status is SessionStatus.AWAITING_ANSWER

    def test_wrong_reply_kind(self, fix_cups, lexicon_matcher):
        state = start_session(fix_cups, "cup on the table", lexicon_matcher)
        with pytest.raises(WrongReplyKind):
            answer(state, "yes")
        validate = start_session(fix_cups, "green cup under the table",
                                 lexicon_matcher)
        with pytest.raises(WrongReplyKind):
            answer(validate, 1)

    def test_rendered_none_entry_is_accepted(self, fix_cups, lexicon_matcher):
        state = start_session(fix_cups, "cup on the table", lexicon_matcher)
        n = len(state.pending.options)
        answer(state, n + 1)  # the "none of these" entry in the rendered text
        assert state.status in (SessionStatus.AWAITING_ANSWER, SessionStatus.FAILED)

    def test_answer_after_terminal_raises(self, fix_cups, lexicon_matcher):
        state = start_session(fix_cups, "grab the green cup on the table",
                              lexicon_matcher)
        with pytest.raises(SessionFinished):
            answer(state, "yes")


class TestRejectionFallback:
    def test_validate_no_widens_to_remaining_candidate(self, fix_cups,
                                                       lexicon_matcher):
        state = start_session(fix_cups, "green cup under the table",
                              lexicon_matcher)
        answer(state, "no")
        # widened to the subject-stage survivors minus the rejected cup
        assert state.status is SessionStatus.AWAITING_ANSWER
        assert state.interactions == 2
        assert state.pending.kind is QuestionKind.VALIDATE
        assert state.pending.options[0].focal_id == 4
        answer(state, "yes")
        assert state.status is SessionStatus.GROUNDED
        assert state.grounded_node == 4

    def test_second_rejection_fails(self, fix_cups, lexicon_matcher):
        state = start_session(fix_cups, "green cup under the table",
                              lexicon_matcher)
        answer(state, "no")
        answer(state, "no")
        assert state.status is SessionStatus.FAILED
        assert state.failure_reason == "rejected"
        assert state.interactions == 2

    def test_select_none_widens_to_object_stage(self, fix_cups, lexicon_matcher):
        state = start_session(fix_cups, "cup on the table", lexicon_matcher)
        answer(state, "none")
        # object stage still held the remote-on-table edge
        assert state.status is SessionStatus.AWAITING_ANSWER
        assert state.pending.kind is QuestionKind.VALIDATE
        assert state.pending.options[0].focal_id == 6
        assert state.interactions == 2

    def test_node_path_rejection_fails_directly(self, fix_cups, lexicon_matcher):
        state = start_session(fix_cups, "cup", lexicon_matcher)
        answer(state, "none")
        assert state.status is SessionStatus.FAILED
        assert state.failure_reason == "rejected"
        assert state.interactions == 1


class TestInvariants:
    def _random_expression(self, rng):
        parts = []
        if rng.random() < 0.5:
            parts.append(rng.choice(ATTRIBUTES))
        parts.append(rng.choice(NAMES))
        for _ in range(rng.randint(0, 3)):
            parts.append(rng.choice(PREDICATES))
            if rng.random() < 0.3:
                parts.append(rng.choice(ATTRIBUTES))
            parts.append(rng.choice(NAMES))
        return " ".join(parts)

    def _random_reply(self, rng, question):
        if question.kind is QuestionKind.VALIDATE:
            return rng.choice(["yes", "no", "none"])
        return rng.choice(list(range(1, len(question.options) + 1)) + ["none"])

    def test_interaction_bound_and_termination(self, lexicon_matcher):
        rng = random.Random(99)
        for _ in range(300):
            graph = random_graph(rng)
            expression = self._random_expression(rng)
            state = start_session(graph, expression, lexicon_matcher)
            edges = len(state.language.edges) if state.language else 0
            steps = 0
            while state.status is SessionStatus.AWAITING_ANSWER:
                answer(state, self._random_reply(rng, state.pending))
                steps += 1
                assert steps <= 2 * edges + 1
            assert state.interactions <= 2 * edges + 1

    def test_replay_is_deterministic(self, fix_boy, lexicon_matcher):
        def run():
            state = start_session(fix_boy, "boy inside the boat",
                                  lexicon_matcher, session_id="replay")
            trail = [self._project(state)]
            for reply in (2,):
                answer(state, reply)
                trail.append(self._project(state))
            return trail

        assert run() == run()

    def _project(self, state):
        snap = snapshot(state)
        return json.dumps(snap, sort_keys=True)

    def test_grounded_node_in_every_selection(self, fix_boy, lexicon_matcher):
        state = start_session(fix_boy, "boy wearing black shirt inside the boat",
                              lexicon_matcher)
        answer(state, 1)
        answer(state, 1)
        assert state.status is SessionStatus.GROUNDED
        for chosen in state.per_edge_selection.values():
            assert state.grounded_node in chosen


class TestTranscript:
    def test_event_sequence(self, fix_cups, lexicon_matcher):
        state = start_session(fix_cups, "cup on the table", lexicon_matcher)
        answer(state, 1)
        events = [e["event"] for e in state.transcript]
        assert events == ["started", "asked", "answered", "grounded"]
        assert state.transcript[0]["payload"]["expression"] == "cup on the table"

    def test_interactions_equal_asked_events(self, fix_cups, fix_boy,
                                             lexicon_matcher):
        cases = [
            (fix_cups, "grab the green cup on the table", ()),
            (fix_cups, "cup on the table", (1,)),
            (fix_boy, "boy wearing black shirt inside the boat", (1, 1)),
        ]
        for graph, text, replies in cases:
            state = start_session(graph, text, lexicon_matcher)
            for reply in replies:
                answer(state, reply)
            asked = sum(1 for e in state.transcript if e["event"] == "asked")
            assert state.interactions == asked

    def test_write_transcript_json_lines(self, fix_cups, lexicon_matcher):
        state = start_session(fix_cups, "cup on the table", lexicon_matcher)
        answer(state, 2)
        buffer = io.StringIO()
        count = write_transcript(state, buffer)
        lines = buffer.getvalue().strip().splitlines()
        assert count == len(state.transcript) == len(lines)
        for line in lines:
            event = json.loads(line)
            assert {"ts", "session_id", "event", "payload"} <= set(event)
