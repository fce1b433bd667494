"""Scene graph data model, token normalization, and document I/O.

A scene graph is a set of object nodes (name, attributes, optional bounding
box) plus directed relation edges written as (subject, predicate, object)
triplets.  Image graphs arrive as JSON documents; the loader validates them
and preserves document order, which all downstream tie-breaking relies on.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from .errors import (
    DanglingEdge,
    DuplicateId,
    EmptyToken,
    MalformedDocument,
    MissingBBox,
)


@dataclass(frozen=True)
class BBox:
    """Axis-aligned box: top-left corner plus width/height, image pixels."""

    x: int
    y: int
    w: int
    h: int

    def center(self) -> tuple[float, float]:
        return (self.x + self.w / 2.0, self.y + self.h / 2.0)

    def to_dict(self) -> dict:
        return {"x": self.x, "y": self.y, "w": self.w, "h": self.h}


@dataclass(frozen=True)
class ObjectNode:
    """A scene entity: name, attribute tokens, optional bounding box.

    Attributes keep document order (deduplicated) so phrase rendering is
    deterministic; treat them as a set for membership questions.
    """

    id: int
    name: str
    attributes: tuple[str, ...] = ()
    bbox: Optional[BBox] = None

    @property
    def attribute_set(self) -> frozenset[str]:
        return frozenset(self.attributes)


@dataclass(frozen=True)
class RelationEdge:
    """One (subject, predicate, object) triplet; ids refer to the owning graph."""

    subject_id: int
    predicate: str
    object_id: int

    def as_triplet(self) -> tuple[int, str, int]:
        return (self.subject_id, self.predicate, self.object_id)

    def to_dict(self) -> dict:
        return {
            "subject_id": self.subject_id,
            "predicate": self.predicate,
            "object_id": self.object_id,
        }


@dataclass(frozen=True)
class SceneGraph:
    """Validated scene graph; nodes and edges keep document order."""

    scene_id: str
    nodes: dict[int, ObjectNode] = field(default_factory=dict)
    edges: tuple[RelationEdge, ...] = ()
    image_ref: Optional[str] = None

    def node(self, node_id: int) -> ObjectNode:
        return self.nodes[node_id]

    def edge_index(self, edge: RelationEdge) -> int:
        return self.edges.index(edge)

    def incident_edges(self, node_id: int) -> list[RelationEdge]:
        """Edges touching the node in either role, in document order."""
        return [
            e for e in self.edges
            if e.subject_id == node_id or e.object_id == node_id
        ]


_PLURAL_ES_ENDINGS = ("sses", "shes", "ches", "xes", "zes")
_PLURAL_S_GUARDS = ("ss", "us", "is")


def _singularize(word: str) -> str:
    # Small rule table (s / es / ies), not a lemmatizer; irregulars pass through.
    if len(word) > 4 and word.endswith("ies"):
        return word[:-3] + "y"
    if len(word) > 4 and word.endswith(_PLURAL_ES_ENDINGS):
        return word[:-2]
    if len(word) > 3 and word.endswith("s") and not word.endswith(_PLURAL_S_GUARDS):
        return word[:-1]
    return word


def normalize_token(raw: str) -> str:
    """Lowercase, trim, and strip regular plural suffixes, word by word.

    Idempotent; multiword phrases ("next to") keep single internal spaces.
    Raises EmptyToken on blank input.
    """
    if raw is None or not raw.strip():
        raise EmptyToken("blank token")
    words = raw.strip().lower().split()
    return " ".join(_singularize(w) for w in words)


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise MalformedDocument(message)


def _parse_bbox(raw: object, node_id: int) -> BBox:
    _require(isinstance(raw, dict), f"node {node_id}: bbox must be an object")
    assert isinstance(raw, dict)
    try:
        x, y, w, h = raw["x"], raw["y"], raw["w"], raw["h"]
    except KeyError as exc:
        raise MalformedDocument(f"node {node_id}: bbox missing field {exc}") from exc
    for v in (x, y, w, h):
        _require(isinstance(v, (int, float)) and not isinstance(v, bool),
                 f"node {node_id}: bbox values must be numbers")
    _require(w > 0 and h > 0, f"node {node_id}: bbox needs w>0 and h>0")
    return BBox(int(x), int(y), int(w), int(h))


def load_scene_graph(doc: dict, scene_id: Optional[str] = None) -> SceneGraph:
    """Validate a parsed image scene graph document.

    Every node must carry a bounding box; names and attributes are
    normalized; node and edge order follow document order.
    """
    _require(isinstance(doc, dict), "document must be a JSON object")
    sid = scene_id or doc.get("scene_id")
    _require(isinstance(sid, str) and bool(sid), "scene_id must be a non-empty string")
    image_ref = doc.get("image")
    if image_ref is not None:
        _require(isinstance(image_ref, str), "image must be a string path")
    raw_objects = doc.get("objects")
    raw_edges = doc.get("relationships", [])
    _require(isinstance(raw_objects, list), "objects must be a list")
    _require(isinstance(raw_edges, list), "relationships must be a list")

    nodes: dict[int, ObjectNode] = {}
    for raw in raw_objects:
        _require(isinstance(raw, dict), "each object must be a JSON object")
        node_id = raw.get("id")
        _require(isinstance(node_id, int) and not isinstance(node_id, bool),
                 "object id must be an integer")
        if node_id in nodes:
            raise DuplicateId(f"node id {node_id} appears twice")
        raw_name = raw.get("name")
        _require(isinstance(raw_name, str), f"node {node_id}: name must be a string")
        try:
            name = normalize_token(raw_name)
        except EmptyToken as exc:
            raise MalformedDocument(f"node {node_id}: empty name") from exc
        raw_attrs = raw.get("attributes", [])
        _require(isinstance(raw_attrs, list), f"node {node_id}: attributes must be a list")
        attrs: list[str] = []
        for a in raw_attrs:
            _require(isinstance(a, str) and bool(a.strip()),
                     f"node {node_id}: attributes must be non-empty strings")
            token = normalize_token(a)
            if token not in attrs:
                attrs.append(token)
        if "bbox" not in raw or raw["bbox"] is None:
            raise MissingBBox(f"node {node_id} has no bbox")
        bbox = _parse_bbox(raw["bbox"], node_id)
        nodes[node_id] = ObjectNode(node_id, name, tuple(attrs), bbox)

    edges: list[RelationEdge] = []
    seen: set[tuple[int, str, int]] = set()
    for raw in raw_edges:
        _require(isinstance(raw, dict), "each relationship must be a JSON object")
        try:
            s, p, o = raw["subject_id"], raw["predicate"], raw["object_id"]
        except KeyError as exc:
            raise MalformedDocument(f"relationship missing field {exc}") from exc
        for v in (s, o):
            _require(isinstance(v, int) and not isinstance(v, bool),
                     "relationship ids must be integers")
        _require(isinstance(p, str) and bool(p.strip()), "predicate must be non-empty")
        _require(s != o, f"edge ({s}, {p}, {o}) relates a node to itself")
        for v in (s, o):
            if v not in nodes:
                raise DanglingEdge(f"edge references missing node id {v}")
        predicate = normalize_token(p)
        key = (s, predicate, o)
        _require(key not in seen, f"duplicate edge {key}")
        seen.add(key)
        edges.append(RelationEdge(s, predicate, o))

    return SceneGraph(scene_id=sid, nodes=nodes, edges=tuple(edges), image_ref=image_ref)


def load_scene_graph_file(path: str | Path) -> SceneGraph:
    path = Path(path)
    try:
        with open(path, encoding="utf-8") as fp:
            doc = json.load(fp)
    except json.JSONDecodeError as exc:
        raise MalformedDocument(f"{path}: invalid JSON ({exc})") from exc
    except OSError as exc:
        raise MalformedDocument(f"{path}: unreadable ({exc})") from exc
    return load_scene_graph(doc)


def dump_scene_graph(graph: SceneGraph) -> dict:
    """Serialize back to the document schema, preserving order."""
    doc: dict = {"scene_id": graph.scene_id}
    if graph.image_ref is not None:
        doc["image"] = graph.image_ref
    doc["objects"] = [
        {
            "id": node.id,
            "name": node.name,
            "attributes": list(node.attributes),
            **({"bbox": node.bbox.to_dict()} if node.bbox is not None else {}),
        }
        for node in graph.nodes.values()
    ]
    doc["relationships"] = [e.to_dict() for e in graph.edges]
    return doc
