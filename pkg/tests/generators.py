"""Seeded random scene graphs and language edges for property tests."""

import random

from groundtalk.model import BBox, ObjectNode, RelationEdge, SceneGraph
from groundtalk.reason import LanguageEdge

NAMES = ["cup", "mug", "table", "plate", "lamp", "sofa", "remote",
         "cat", "box", "chair", "banana"]
ATTRIBUTES = ["red", "green", "blue", "white", "big", "top", "left"]
PREDICATES = ["on", "under", "next to", "near", "in", "behind"]


def random_graph(rng: random.Random, max_nodes: int = 10,
                 max_edges: int = 15) -> SceneGraph:
    n_nodes = rng.randint(2, max_nodes)
    nodes = {}
    for node_id in range(1, n_nodes + 1):
        attrs = tuple(sorted(rng.sample(ATTRIBUTES, rng.randint(0, 2))))
        nodes[node_id] = ObjectNode(
            id=node_id,
            name=rng.choice(NAMES),
            attributes=attrs,
            bbox=BBox(rng.randint(0, 500), rng.randint(0, 500),
                      rng.randint(10, 100), rng.randint(10, 100)),
        )
    ids = list(nodes)
    edges = []
    seen = set()
    for _ in range(rng.randint(0, max_edges)):
        s, o = rng.choice(ids), rng.choice(ids)
        if s == o:
            continue
        p = rng.choice(PREDICATES)
        if (s, p, o) in seen:
            continue
        seen.add((s, p, o))
        edges.append(RelationEdge(s, p, o))
    return SceneGraph(scene_id=f"random-{rng.random():.8f}",
                      nodes=nodes, edges=tuple(edges))


def random_language_edge(rng: random.Random) -> LanguageEdge:
    subject = ObjectNode(
        id=0,
        name=rng.choice(NAMES),
        attributes=tuple(sorted(rng.sample(ATTRIBUTES, rng.randint(0, 2)))),
    )
    obj = ObjectNode(
        id=1,
        name=rng.choice(NAMES),
        attributes=tuple(sorted(rng.sample(ATTRIBUTES, rng.randint(0, 1)))),
    )
    return LanguageEdge(subject=subject, predicate=rng.choice(PREDICATES),
                        object=obj)
