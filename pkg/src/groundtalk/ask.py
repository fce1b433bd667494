"""Question generation: distinctive relations and template rendering.

When several candidates would read the same to the user, each one is
described by the incident relation whose phrase occurs least often across
all candidates, so every option points at something unique nearby.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence

from .errors import InvalidAction
from .model import ObjectNode, RelationEdge, SceneGraph
from .reason import Action, MatchOutcome


@dataclass(frozen=True)
class PhraseSignature:
    """Identity under which relation occurrences are counted.

    Captures how an incident edge reads from a focal node: the predicate,
    the counterpart's name and attributes, and which side the focal node is
    on.  The focal node itself is excluded, so edges that render the same
    description for different candidates count as overlapping.
    """

    predicate: str
    counterpart_name: str
    counterpart_attributes: frozenset[str]
    subject_side: bool


class QuestionKind(Enum):
    VALIDATE = "validate"
    SELECT = "select"


@dataclass(frozen=True)
class QuestionOption:
    """One selectable answer: a focal node plus the edge describing it."""

    focal_id: int
    phrase: str
    edge: Optional[RelationEdge] = None


@dataclass(frozen=True)
class Question:
    kind: QuestionKind
    text: str
    options: tuple[QuestionOption, ...]
    allows_none: bool = True
    position_hint_used: bool = False


def signature_for(edge: RelationEdge, focal_id: int, graph: SceneGraph) -> PhraseSignature:
    if edge.subject_id == focal_id:
        counterpart = graph.node(edge.object_id)
        subject_side = True
    else:
        counterpart = graph.node(edge.subject_id)
        subject_side = False
    return PhraseSignature(
        predicate=edge.predicate,
        counterpart_name=counterpart.name,
        counterpart_attributes=counterpart.attribute_set,
        subject_side=subject_side,
    )


def _noun(node: ObjectNode) -> str:
    return " ".join((*node.attributes, node.name))


def render_node_phrase(node: ObjectNode) -> str:
    return f"the {_noun(node)}"


def render_phrase(edge: RelationEdge, focal_id: int, graph: SceneGraph) -> str:
    """English description of an edge from the focal node's point of view."""
    if edge.subject_id == focal_id:
        focal, other = graph.node(edge.subject_id), graph.node(edge.object_id)
        return f"the {_noun(focal)} {edge.predicate} the {_noun(other)}"
    focal, other = graph.node(edge.object_id), graph.node(edge.subject_id)
    return f"the {_noun(focal)} that the {_noun(other)} is {edge.predicate}"


def find_node_relation(
    focal_ids: Sequence[int],
    graph: SceneGraph,
) -> list[tuple[int, Optional[RelationEdge]]]:
    """For each focal node, pick its least-overlapping incident relation.

    Occurrences are counted across all focal nodes' incident edge
    collections by phrase signature; ties break on the lowest image edge
    index.  A node with no incident edges maps to None.
    """
    collections = [graph.incident_edges(f) for f in focal_ids]
    counts: Counter[PhraseSignature] = Counter()
    for focal, edges in zip(focal_ids, collections):
        for edge in edges:
            counts[signature_for(edge, focal, graph)] += 1
    chosen: list[tuple[int, Optional[RelationEdge]]] = []
    for focal, edges in zip(focal_ids, collections):
        if not edges:
            chosen.append((focal, None))
            continue
        best = min(
            edges,
            key=lambda e: (counts[signature_for(e, focal, graph)], graph.edge_index(e)),
        )
        chosen.append((focal, best))
    return chosen


def find_relation(
    candidates: Sequence[RelationEdge],
    graph: SceneGraph,
) -> list[tuple[RelationEdge, RelationEdge]]:
    """Distinctive incident edge for each candidate edge's subject node."""
    picked = find_node_relation([c.subject_id for c in candidates], graph)
    out: list[tuple[RelationEdge, RelationEdge]] = []
    for candidate, (_, edge) in zip(candidates, picked):
        # a candidate edge is itself incident to its subject, so edge is set
        assert edge is not None
        out.append((candidate, edge))
    return out


def _quadrant(node: ObjectNode, graph: SceneGraph) -> str:
    boxes = [n.bbox for n in graph.nodes.values() if n.bbox is not None]
    assert node.bbox is not None
    cx, cy = node.bbox.center()
    xs = [b.center()[0] for b in boxes]
    ys = [b.center()[1] for b in boxes]
    mid_x = (min(xs) + max(xs)) / 2.0
    mid_y = (min(ys) + max(ys)) / 2.0
    vertical = "upper" if cy <= mid_y else "lower"
    horizontal = "left" if cx <= mid_x else "right"
    return f"{vertical} {horizontal}"


def _suffix_duplicate_phrases(
    options: list[QuestionOption], graph: SceneGraph
) -> tuple[list[QuestionOption], bool]:
    """Last resort for fully symmetric scenes: tag repeated phrases with the
    focal box's centroid quadrant."""
    tally = Counter(o.phrase for o in options)
    if all(count == 1 for count in tally.values()):
        return options, False
    adjusted = []
    for option in options:
        if tally[option.phrase] > 1 and graph.node(option.focal_id).bbox is not None:
            phrase = f"{option.phrase} ({_quadrant(graph.node(option.focal_id), graph)})"
            adjusted.append(QuestionOption(option.focal_id, phrase, option.edge))
        else:
            adjusted.append(option)
    return adjusted, True


def _select_text(options: Sequence[QuestionOption]) -> str:
    numbered = ", ".join(f"({i}) {o.phrase}" for i, o in enumerate(options, start=1))
    return f"Which one: {numbered}, ({len(options) + 1}) none of these?"


def question_for_candidates(
    candidates: Sequence[RelationEdge],
    graph: SceneGraph,
) -> Question:
    """Build a question over candidate edges.

    One candidate gives a yes/no validation.  Several candidates give a
    selection; when their phrase signatures collide, each option switches to
    the candidate's distinctive relation instead.
    """
    if not candidates:
        raise InvalidAction("no candidates to ask about")
    if len(candidates) == 1:
        edge = candidates[0]
        phrase = render_phrase(edge, edge.subject_id, graph)
        option = QuestionOption(focal_id=edge.subject_id, phrase=phrase, edge=edge)
        return Question(
            kind=QuestionKind.VALIDATE,
            text=f"Do you mean {phrase}? (yes/no)",
            options=(option,),
        )
    signatures = [signature_for(c, c.subject_id, graph) for c in candidates]
    if len(set(signatures)) < len(signatures):
        options = [
            QuestionOption(
                focal_id=candidate.subject_id,
                phrase=render_phrase(edge, candidate.subject_id, graph),
                edge=edge,
            )
            for candidate, edge in find_relation(candidates, graph)
        ]
    else:
        options = [
            QuestionOption(
                focal_id=c.subject_id,
                phrase=render_phrase(c, c.subject_id, graph),
                edge=c,
            )
            for c in candidates
        ]
    options, hinted = _suffix_duplicate_phrases(options, graph)
    return Question(
        kind=QuestionKind.SELECT,
        text=_select_text(options),
        options=tuple(options),
        position_hint_used=hinted,
    )


def question_for_nodes(node_ids: Sequence[int], graph: SceneGraph) -> Question:
    """Selection question over candidate nodes (relationless commands)."""
    if not node_ids:
        raise InvalidAction("no candidate nodes to ask about")
    options = []
    for focal, edge in find_node_relation(list(node_ids), graph):
        if edge is None:
            phrase = render_node_phrase(graph.node(focal))
        else:
            phrase = render_phrase(edge, focal, graph)
        options.append(QuestionOption(focal_id=focal, phrase=phrase, edge=edge))
    options, hinted = _suffix_duplicate_phrases(options, graph)
    if len(options) == 1:
        return Question(
            kind=QuestionKind.VALIDATE,
            text=f"Do you mean {options[0].phrase}? (yes/no)",
            options=tuple(options),
            position_hint_used=hinted,
        )
    return Question(
        kind=QuestionKind.SELECT,
        text=_select_text(options),
        options=tuple(options),
        position_hint_used=hinted,
    )


def generate_question(outcome: MatchOutcome, graph: SceneGraph) -> Question:
    """Question for a match outcome that needs one (validate or select)."""
    if outcome.action not in (Action.VALIDATE, Action.SELECT):
        raise InvalidAction(f"outcome {outcome.action.value} needs no question")
    return question_for_candidates(outcome.candidates, graph)
