"""Incremental pruning of image edges against one language edge.

The cascade filters image edges by object, then subject, then predicate,
then subject attributes.  A stage that would empty the survivor set falls
back to the previous non-empty stage instead, so a partial mismatch still
yields candidates to ask about; only a total mismatch (neither the object
nor the subject of the language edge appears anywhere) gives NoGrounding.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum, IntEnum
from typing import Sequence

from .model import ObjectNode, RelationEdge, SceneGraph
from .parse import LanguageGraph
from .similarity import SimilarityProvider

# Ordinal and comparative terms that pairwise relations cannot encode; the
# matcher skips them and leaves disambiguation to the question loop.
POSITIONAL_ATTRIBUTES = frozenset({
    "top", "bottom", "left", "right", "leftmost", "rightmost",
    "first", "second", "third", "closest", "furthest", "nearest",
    "middle", "front", "back",
})


class MatchStage(IntEnum):
    """Cascade stages in fixed order; NODE_ONLY marks relationless commands."""

    OBJECT = 1
    SUBJECT = 2
    PREDICATE = 3
    ATTRIBUTE = 4
    NODE_ONLY = 5


class Action(Enum):
    DIRECT_GROUND = "direct_ground"
    VALIDATE = "validate"
    SELECT = "select"
    NO_GROUNDING = "no_grounding"


@dataclass(frozen=True)
class LanguageEdge:
    """One language triplet with its endpoint nodes resolved."""

    subject: ObjectNode
    predicate: str
    object: ObjectNode

    @classmethod
    def from_graph(cls, language: LanguageGraph, index: int) -> "LanguageEdge":
        edge = language.edges[index]
        return cls(
            subject=language.node(edge.subject_id),
            predicate=edge.predicate,
            object=language.node(edge.object_id),
        )


@dataclass(frozen=True)
class MatchOutcome:
    """Result of the cascade: surviving candidates and the required action."""

    action: Action
    candidates: tuple[RelationEdge, ...]
    stage_reached: MatchStage
    exact: tuple[bool, ...]
    trace: tuple[tuple[MatchStage, tuple[RelationEdge, ...]], ...] = ()


def non_positional_attributes(node: ObjectNode) -> tuple[str, ...]:
    return tuple(a for a in node.attributes if a not in POSITIONAL_ATTRIBUTES)


def match_object(
    language_edge: LanguageEdge,
    edges: Sequence[RelationEdge],
    graph: SceneGraph,
    matcher: SimilarityProvider,
) -> list[RelationEdge]:
    """Image edges whose object node name matches the language object."""
    want = language_edge.object.name
    return [e for e in edges if matcher.is_match(graph.node(e.object_id).name, want)]


def match_subject(
    language_edge: LanguageEdge,
    edges: Sequence[RelationEdge],
    graph: SceneGraph,
    matcher: SimilarityProvider,
) -> list[RelationEdge]:
    """Image edges whose subject node name matches the language subject."""
    want = language_edge.subject.name
    return [e for e in edges if matcher.is_match(graph.node(e.subject_id).name, want)]


def match_predicate(
    language_edge: LanguageEdge,
    edges: Sequence[RelationEdge],
    graph: SceneGraph,
    matcher: SimilarityProvider,
) -> list[RelationEdge]:
    """Image edges whose predicate phrase matches the language predicate."""
    want = language_edge.predicate
    return [e for e in edges if matcher.is_match(e.predicate, want)]


def match_attribute(
    language_edge: LanguageEdge,
    edges: Sequence[RelationEdge],
    graph: SceneGraph,
    matcher: SimilarityProvider,
) -> list[RelationEdge]:
    """Keep edges whose subject node carries every non-positional language attribute.

    Conjunctive: each wanted attribute must match some attribute of the image
    subject.  With no (non-positional) language attributes this is the
    identity filter.
    """
    wanted = non_positional_attributes(language_edge.subject)
    if not wanted:
        return list(edges)
    kept = []
    for e in edges:
        have = graph.node(e.subject_id).attributes
        if all(any(matcher.is_match(h, w) for h in have) for w in wanted):
            kept.append(e)
    return kept


def is_exact_candidate(
    language_edge: LanguageEdge,
    edge: RelationEdge,
    graph: SceneGraph,
    matcher: SimilarityProvider,
) -> bool:
    """Exactness for direct grounding: normalized equality on all three
    components, and every language attribute literally present on the
    corresponding image node (positional ones included)."""
    subject = graph.node(edge.subject_id)
    obj = graph.node(edge.object_id)
    if not matcher.is_exact(subject.name, language_edge.subject.name):
        return False
    if not matcher.is_exact(edge.predicate, language_edge.predicate):
        return False
    if not matcher.is_exact(obj.name, language_edge.object.name):
        return False
    if not set(language_edge.subject.attributes) <= subject.attribute_set:
        return False
    if not set(language_edge.object.attributes) <= obj.attribute_set:
        return False
    return True


def _select_action(
    language_edge: LanguageEdge,
    candidates: Sequence[RelationEdge],
    graph: SceneGraph,
    matcher: SimilarityProvider,
) -> tuple[Action, tuple[bool, ...]]:
    exact = tuple(
        is_exact_candidate(language_edge, e, graph, matcher) for e in candidates
    )
    if not candidates:
        return Action.NO_GROUNDING, exact
    if len(candidates) == 1:
        return (Action.DIRECT_GROUND if exact[0] else Action.VALIDATE), exact
    return Action.SELECT, exact


def incremental_match(
    language_edge: LanguageEdge,
    graph: SceneGraph,
    matcher: SimilarityProvider,
) -> MatchOutcome:
    """Run the object -> subject -> predicate -> attribute cascade.

    Candidate order always equals image document edge order.
    """
    all_edges = graph.edges
    trace: list[tuple[MatchStage, tuple[RelationEdge, ...]]] = []

    obj = match_object(language_edge, all_edges, graph, matcher)
    trace.append((MatchStage.OBJECT, tuple(obj)))

    if not obj:
        # Object absent everywhere: retry from the subject over all edges,
        # then narrow by attributes before predicates.
        sub = match_subject(language_edge, all_edges, graph, matcher)
        trace.append((MatchStage.SUBJECT, tuple(sub)))
        if not sub:
            return MatchOutcome(
                Action.NO_GROUNDING, (), MatchStage.SUBJECT, (), tuple(trace)
            )
        attr = match_attribute(language_edge, sub, graph, matcher)
        trace.append((MatchStage.ATTRIBUTE, tuple(attr)))
        if attr:
            base, base_stage = attr, MatchStage.ATTRIBUTE
        else:
            base, base_stage = sub, MatchStage.SUBJECT
        pred = match_predicate(language_edge, base, graph, matcher)
        trace.append((MatchStage.PREDICATE, tuple(pred)))
        if pred:
            candidates, stage = pred, MatchStage.PREDICATE
        else:
            candidates, stage = base, base_stage
    else:
        sub = match_subject(language_edge, obj, graph, matcher)
        trace.append((MatchStage.SUBJECT, tuple(sub)))
        if not sub:
            # Subject mismatch: ask over the object survivors as-is.
            candidates, stage = obj, MatchStage.OBJECT
        else:
            pred = match_predicate(language_edge, sub, graph, matcher)
            trace.append((MatchStage.PREDICATE, tuple(pred)))
            if len(pred) > 1:
                attr = match_attribute(language_edge, pred, graph, matcher)
                trace.append((MatchStage.ATTRIBUTE, tuple(attr)))
                candidates = attr if attr else pred
                stage = MatchStage.ATTRIBUTE
            elif len(pred) == 1:
                candidates, stage = pred, MatchStage.PREDICATE
            else:
                # Predicate emptied the set: fall back to the subject
                # survivors, still narrowed by attributes when possible.
                attr = match_attribute(language_edge, sub, graph, matcher)
                trace.append((MatchStage.ATTRIBUTE, tuple(attr)))
                candidates = attr if attr else sub
                stage = MatchStage.PREDICATE

    action, exact = _select_action(language_edge, candidates, graph, matcher)
    return MatchOutcome(action, tuple(candidates), stage, exact, tuple(trace))


def match_node(
    head: ObjectNode,
    graph: SceneGraph,
    matcher: SimilarityProvider,
) -> list[int]:
    """Node-level path for relationless commands ("grab the cup").

    Matches node names, then filters conjunctively by non-positional
    attributes; if that empties the list, the name-only list stands.
    """
    by_name = [
        n.id for n in graph.nodes.values() if matcher.is_match(n.name, head.name)
    ]
    wanted = non_positional_attributes(head)
    if not wanted:
        return by_name
    filtered = []
    for node_id in by_name:
        have = graph.node(node_id).attributes
        if all(any(matcher.is_match(h, w) for h in have) for w in wanted):
            filtered.append(node_id)
    return filtered if filtered else by_name
