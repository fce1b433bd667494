"""Dialogue state machine driving one grounding session.

A session parses the expression, resolves each language edge through the
matching cascade, asks at most one primary question plus one widened
fallback question per edge, and finally intersects the per-edge choices.
Every question issued bumps the interaction counter; a session therefore
never asks more than 2 * |edges| + 1 questions.
"""

from __future__ import annotations

import json
import secrets
from dataclasses import dataclass, field
from datetime import datetime, timezone
from enum import Enum
from typing import IO, Optional, Union

from .ask import (
    Question,
    QuestionKind,
    generate_question,
    question_for_candidates,
    question_for_nodes,
)
from .errors import (
    EmptyExpression,
    InvalidOption,
    ParseError,
    SessionFinished,
    WrongReplyKind,
)
from .model import RelationEdge, SceneGraph
from .parse import LanguageGraph, parse_expression
from .reason import Action, LanguageEdge, MatchStage, incremental_match, match_node
from .similarity import SimilarityProvider

Reply = Union[int, str]

_VALID_WORDS = ("yes", "no", "none")


class SessionStatus(Enum):
    AWAITING_ANSWER = "awaiting_answer"
    GROUNDED = "grounded"
    FAILED = "failed"


# which flow issued the pending question
_SCOPE_EDGE = "edge"
_SCOPE_FALLBACK = "fallback"
_SCOPE_NODE = "node"
_SCOPE_INTERSECTION = "intersection"


@dataclass
class SessionState:
    session_id: str
    graph: SceneGraph
    matcher: SimilarityProvider
    language: Optional[LanguageGraph] = None
    status: SessionStatus = SessionStatus.FAILED
    pending: Optional[Question] = None
    interactions: int = 0
    edge_cursor: int = 0
    per_edge_selection: dict[int, frozenset[int]] = field(default_factory=dict)
    grounded_node: Optional[int] = None
    failure_reason: Optional[str] = None
    transcript: list[dict] = field(default_factory=list)
    # bookkeeping for the pending question
    _scope: str = _SCOPE_EDGE
    _asked: tuple[RelationEdge, ...] = ()
    _trace: tuple[tuple[MatchStage, tuple[RelationEdge, ...]], ...] = ()

    @property
    def scene_id(self) -> str:
        return self.graph.scene_id


def _log(state: SessionState, event: str, payload: dict) -> None:
    state.transcript.append({
        "ts": datetime.now(timezone.utc).isoformat(),
        "session_id": state.session_id,
        "event": event,
        "payload": payload,
    })


def _fail(state: SessionState, reason: str) -> None:
    state.status = SessionStatus.FAILED
    state.failure_reason = reason
    state.pending = None
    _log(state, "failed", {"reason": reason})


def _ground(state: SessionState, node_id: int) -> None:
    node = state.graph.node(node_id)
    state.status = SessionStatus.GROUNDED
    state.grounded_node = node_id
    state.pending = None
    _log(state, "grounded", {
        "node_id": node_id,
        "name": node.name,
        "bbox": node.bbox.to_dict() if node.bbox else None,
    })


def _ask(
    state: SessionState,
    question: Question,
    scope: str,
    asked: tuple[RelationEdge, ...] = (),
    trace: tuple = (),
) -> None:
    state.status = SessionStatus.AWAITING_ANSWER
    state.pending = question
    state.interactions += 1
    state._scope = scope
    state._asked = asked
    state._trace = trace
    _log(state, "asked", {
        "kind": question.kind.value,
        "text": question.text,
        "options": [{"focal_id": o.focal_id, "phrase": o.phrase} for o in question.options],
        "position_hint_used": question.position_hint_used,
    })


def _advance_edges(state: SessionState) -> None:
    """Resolve language edges from the cursor until a question or a terminal state."""
    language = state.language
    assert language is not None
    while state.edge_cursor < len(language.edges):
        edge = LanguageEdge.from_graph(language, state.edge_cursor)
        outcome = incremental_match(edge, state.graph, state.matcher)
        if outcome.action is Action.NO_GROUNDING:
            _fail(state, "no grounding")
            return
        if outcome.action is Action.DIRECT_GROUND:
            subject = outcome.candidates[0].subject_id
            state.per_edge_selection[state.edge_cursor] = frozenset((subject,))
            state.edge_cursor += 1
            continue
        question = generate_question(outcome, state.graph)
        _ask(state, question, _SCOPE_EDGE, asked=outcome.candidates, trace=outcome.trace)
        return
    _finalize(state)


def _finalize(state: SessionState) -> None:
    """Intersect per-edge choices once every language edge is resolved."""
    selections = list(state.per_edge_selection.values())
    common = frozenset.intersection(*selections)
    if len(common) == 1:
        _ground(state, next(iter(common)))
    elif not common:
        _fail(state, "conflicting edges")
    else:
        ordered = [nid for nid in state.graph.nodes if nid in common]
        question = question_for_nodes(ordered, state.graph)
        _ask(state, question, _SCOPE_INTERSECTION)


def start_session(
    graph: SceneGraph,
    expression: str,
    matcher: SimilarityProvider,
    session_id: Optional[str] = None,
) -> SessionState:
    """Parse the expression and run the dialogue until its first stop point."""
    state = SessionState(
        session_id=session_id or secrets.token_hex(16),
        graph=graph,
        matcher=matcher,
    )
    _log(state, "started", {"scene_id": graph.scene_id, "expression": expression})
    try:
        state.language = parse_expression(expression)
    except (ParseError, EmptyExpression):
        _fail(state, "unparseable")
        return state

    if not state.language.edges:
        node_ids = match_node(state.language.head, graph, state.matcher)
        if not node_ids:
            _fail(state, "no grounding")
        elif len(node_ids) == 1:
            _ground(state, node_ids[0])
        else:
            _ask(state, question_for_nodes(node_ids, graph), _SCOPE_NODE)
        return state

    _advance_edges(state)
    return state


def _interpret_reply(state: SessionState, reply: Reply) -> Union[int, str]:
    question = state.pending
    assert question is not None
    if isinstance(reply, str):
        word = reply.strip().lower()
        if word not in _VALID_WORDS:
            raise WrongReplyKind(f"unrecognized reply {reply!r}")
        if word in ("yes", "no") and question.kind is not QuestionKind.VALIDATE:
            raise WrongReplyKind("yes/no answers a validation question only")
        return word
    if isinstance(reply, int) and not isinstance(reply, bool):
        if question.kind is not QuestionKind.SELECT:
            raise WrongReplyKind("numbered options answer a selection question only")
        if reply == len(question.options) + 1:
            return "none"  # the rendered escape entry
        if not 1 <= reply <= len(question.options):
            raise InvalidOption(
                f"option {reply} out of range 1..{len(question.options) + 1}"
            )
        return reply
    raise WrongReplyKind(f"unsupported reply type {type(reply).__name__}")


def _resolve_choice(state: SessionState, focal_id: int) -> None:
    scope = state._scope
    state.pending = None
    if scope in (_SCOPE_NODE, _SCOPE_INTERSECTION):
        _ground(state, focal_id)
        return
    state.per_edge_selection[state.edge_cursor] = frozenset((focal_id,))
    state.edge_cursor += 1
    _advance_edges(state)


def _reject(state: SessionState) -> None:
    """A validation "no" or a "none of these": widen once, then fail."""
    if state._scope != _SCOPE_EDGE:
        _fail(state, "rejected")
        return
    asked = state._asked
    for _, survivors in reversed(state._trace):
        if len(survivors) > len(asked):
            remaining = tuple(e for e in survivors if e not in asked)
            if remaining:
                question = question_for_candidates(remaining, state.graph)
                _ask(state, question, _SCOPE_FALLBACK, asked=remaining)
                return
    _fail(state, "rejected")


def answer(state: SessionState, reply: Reply) -> SessionState:
    """Apply one user reply to the pending question and advance the session."""
    if state.status is not SessionStatus.AWAITING_ANSWER or state.pending is None:
        raise SessionFinished(f"session is {state.status.value}")
    interpreted = _interpret_reply(state, reply)
    _log(state, "answered", {"reply": interpreted})
    if interpreted == "yes":
        _resolve_choice(state, state.pending.options[0].focal_id)
    elif interpreted in ("no", "none"):
        _reject(state)
    else:
        assert isinstance(interpreted, int)
        _resolve_choice(state, state.pending.options[interpreted - 1].focal_id)
    return state


def question_payload(question: Question, graph: SceneGraph) -> dict:
    options = []
    for option in question.options:
        node = graph.nodes.get(option.focal_id)
        options.append({
            "edge": option.edge.to_dict() if option.edge else None,
            "focal_id": option.focal_id,
            "phrase": option.phrase,
            "bbox": node.bbox.to_dict() if node and node.bbox else None,
        })
    return {
        "kind": question.kind.value,
        "text": question.text,
        "options": options,
        "allows_none": question.allows_none,
    }


def snapshot(state: SessionState) -> dict:
    """JSON-ready projection of the live session state."""
    grounded = None
    if state.grounded_node is not None:
        node = state.graph.node(state.grounded_node)
        grounded = {
            "node_id": node.id,
            "name": node.name,
            "bbox": node.bbox.to_dict() if node.bbox else None,
        }
    return {
        "session_id": state.session_id,
        "scene_id": state.scene_id,
        "status": state.status.value,
        "interactions": state.interactions,
        "pending": question_payload(state.pending, state.graph) if state.pending else None,
        "grounded": grounded,
        "failure_reason": state.failure_reason,
    }


def write_transcript(state: SessionState, fp: IO[str], start: int = 0) -> int:
    """Append transcript events as JSON lines; returns the new start index."""
    for event in state.transcript[start:]:
        fp.write(json.dumps(event, sort_keys=True) + "\n")
    return len(state.transcript)
