"""Directory-backed scene collection used by the CLI, eval harness, and server."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterator, Optional

from .errors import MissingScene
from .model import SceneGraph, load_scene_graph_file


@dataclass(frozen=True)
class SceneRecord:
    graph: SceneGraph
    path: Path


class SceneStore:
    """Loads every ``*.json`` scene document under a directory, keyed by scene_id."""

    def __init__(self, root: str | Path):
        self.root = Path(root).resolve()
        if not self.root.is_dir():
            raise MissingScene(f"scenes directory not found: {self.root}")
        self._records: dict[str, SceneRecord] = {}
        for path in sorted(self.root.glob("*.json")):
            graph = load_scene_graph_file(path)
            self._records[graph.scene_id] = SceneRecord(graph, path)

    def __len__(self) -> int:
        return len(self._records)

    def __iter__(self) -> Iterator[SceneRecord]:
        return iter(self._records.values())

    def scene_ids(self) -> list[str]:
        return list(self._records)

    def get(self, scene_id: str) -> SceneGraph:
        try:
            return self._records[scene_id].graph
        except KeyError:
            raise MissingScene(f"unknown scene id: {scene_id}") from None

    def record(self, scene_id: str) -> SceneRecord:
        if scene_id not in self._records:
            raise MissingScene(f"unknown scene id: {scene_id}")
        return self._records[scene_id]

    def resolve_image(self, scene_id: str) -> Optional[Path]:
        """Absolute path of the scene's image, if it resolves inside the root.

        Image references are opaque; anything escaping the scenes directory is
        refused so the server never reads outside it.
        """
        record = self.record(scene_id)
        ref = record.graph.image_ref
        if not ref:
            return None
        candidate = (self.root / ref).resolve()
        if not candidate.is_file():
            return None
        if self.root not in candidate.parents and candidate != self.root:
            return None
        return candidate
