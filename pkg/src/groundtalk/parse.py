"""Rule-based parser from referring expressions to language scene graphs.

Grammar::

    NP  := det? ATTR* NOUN REL*
    REL := PREP NP | GERUND NP

Relation phrases come from fixed lists (longest match wins); the noun
vocabulary is open, and any non-determiner token before a noun is an
attribute.  Stacked relations all attach to the head noun, so "black bag in
the car next to the red bag" yields two edges rooted at the bag.  Nested
attachment is not representable.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional

from .errors import EmptyExpression, ParseError
from .model import ObjectNode, RelationEdge, normalize_token

PREPOSITIONS = (
    "on top of",
    "in front of",
    "to the left of",
    "to the right of",
    "next to",
    "on",
    "in",
    "under",
    "near",
    "beside",
    "behind",
    "above",
    "below",
    "inside",
)

GERUNDS = (
    "sitting on",
    "standing on",
    "wearing",
    "holding",
    "carrying",
    "riding",
)

DETERMINERS = frozenset({"the", "a", "an", "that", "this"})

# "the cup that is on the table" - glue words skipped before a preposition
_GLUE = (("that", "is"), ("which", "is"))

_ACTION_PREFIX = re.compile(
    r"^\s*(?:pick\s+up|hand\s+me|grab|get|bring|fetch|take)\s+(?:(?:the|a|an)\s+)?",
    re.IGNORECASE,
)

# longest phrases first so "on top of" beats "on", "sitting on" beats "on"
_RELATION_PHRASES = tuple(
    sorted(
        (tuple(p.split()) for p in PREPOSITIONS + GERUNDS),
        key=len,
        reverse=True,
    )
)
_PREP_FIRST_WORDS = frozenset(p.split()[0] for p in PREPOSITIONS)


@dataclass(frozen=True)
class LanguageGraph:
    """Parsed referring expression: head referent plus relation triplets."""

    head_id: int
    nodes: dict[int, ObjectNode] = field(default_factory=dict)
    edges: tuple[RelationEdge, ...] = ()
    raw_text: str = ""

    @property
    def head(self) -> ObjectNode:
        return self.nodes[self.head_id]

    def node(self, node_id: int) -> ObjectNode:
        return self.nodes[node_id]

    def to_document(self) -> dict:
        """Scene graph document (no bboxes) plus the head marker."""
        return {
            "scene_id": "expression",
            "head_id": self.head_id,
            "objects": [
                {"id": n.id, "name": n.name, "attributes": list(n.attributes)}
                for n in self.nodes.values()
            ],
            "relationships": [e.to_dict() for e in self.edges],
        }


def strip_action_prefix(text: str) -> str:
    """Drop a leading action verb phrase ("grab the", "pick up"...), if any."""
    if not text or not text.strip():
        raise EmptyExpression("empty expression")
    stripped = _ACTION_PREFIX.sub("", text, count=1)
    return stripped if stripped.strip() else text


def _tokenize(text: str) -> list[str]:
    tokens = []
    for raw in text.lower().split():
        token = raw.strip(".,!?;:'\"()")
        if token:
            tokens.append(token)
    return tokens


def _drop_glue(tokens: list[str]) -> list[str]:
    out: list[str] = []
    i = 0
    while i < len(tokens):
        pair = tuple(tokens[i:i + 2])
        if pair in _GLUE and i + 2 < len(tokens) and tokens[i + 2] in _PREP_FIRST_WORDS:
            i += 2
            continue
        out.append(tokens[i])
        i += 1
    return out


def _relation_at(tokens: list[str], i: int) -> Optional[tuple[str, ...]]:
    for phrase in _RELATION_PHRASES:
        if tuple(tokens[i:i + len(phrase)]) == phrase:
            return phrase
    return None


def _build_np(tokens: list[str], node_id: int, context: str) -> ObjectNode:
    words = [t for t in tokens if t not in DETERMINERS]
    if not words:
        raise ParseError(f"no noun found {context}")
    noun = normalize_token(words[-1])
    attrs: list[str] = []
    for w in words[:-1]:
        token = normalize_token(w)
        if token not in attrs:
            attrs.append(token)
    return ObjectNode(id=node_id, name=noun, attributes=tuple(attrs), bbox=None)


def parse_expression(text: str) -> LanguageGraph:
    """Parse a referring expression; raises ParseError outside the grammar."""
    if not text or not text.strip():
        raise EmptyExpression("empty expression")
    body = strip_action_prefix(text)
    tokens = _drop_glue(_tokenize(body))
    if not tokens:
        raise EmptyExpression("expression has no words")

    # segment into head NP and (relation, NP) clauses
    segments: list[list[str]] = [[]]
    relations: list[str] = []
    i = 0
    while i < len(tokens):
        phrase = _relation_at(tokens, i)
        if phrase is not None:
            relations.append(normalize_token(" ".join(phrase)))
            segments.append([])
            i += len(phrase)
        else:
            segments[-1].append(tokens[i])
            i += 1

    nodes: dict[int, ObjectNode] = {}
    head = _build_np(segments[0], 0, "for the head noun phrase")
    nodes[0] = head
    edges: list[RelationEdge] = []
    for k, (rel, segment) in enumerate(zip(relations, segments[1:]), start=1):
        counterpart = _build_np(segment, k, f"after relation {rel!r}")
        nodes[k] = counterpart
        edges.append(RelationEdge(subject_id=0, predicate=rel, object_id=k))

    return LanguageGraph(head_id=0, nodes=nodes, edges=tuple(edges), raw_text=text)
