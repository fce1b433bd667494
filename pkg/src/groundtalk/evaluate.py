"""Batch evaluation with a scripted oracle standing in for the human.

Each command runs as a full dialogue session; the oracle answers every
question truthfully with respect to the command's target node.  The report
aggregates interaction counts and grounding success, overall and per
category, and can be written as JSON plus a per-command CSV table and
rendered figures.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence, Union

from .ask import Question, QuestionKind
from .errors import MalformedCommands, MissingScene
from .session import Reply, SessionStatus, answer, start_session
from .similarity import SimilarityProvider
from .store import SceneStore

CATEGORIES = ("clear", "vague", "unsolvable")


@dataclass(frozen=True)
class EvalCommand:
    scene_id: str
    expression: str
    target: int
    category: str


@dataclass(frozen=True)
class CommandResult:
    scene_id: str
    expression: str
    category: str
    target: int
    grounded: Optional[int]
    interactions: int
    success: bool
    status: str


@dataclass(frozen=True)
class CategoryStats:
    count: int
    avg_interactions: float
    success_rate: float


@dataclass(frozen=True)
class MetricsReport:
    total: int
    successes: int
    avg_interactions: float
    success_rate: float
    per_category: dict[str, CategoryStats]
    histogram: dict[int, int]
    rows: tuple[CommandResult, ...]

    def to_dict(self) -> dict:
        return {
            "total": self.total,
            "successes": self.successes,
            "avg_interactions": self.avg_interactions,
            "success_rate": self.success_rate,
            "per_category": {
                name: {
                    "count": stats.count,
                    "avg_interactions": stats.avg_interactions,
                    "success_rate": stats.success_rate,
                }
                for name, stats in sorted(self.per_category.items())
            },
            "histogram": {str(k): v for k, v in sorted(self.histogram.items())},
            "commands": [
                {
                    "scene": r.scene_id,
                    "expression": r.expression,
                    "category": r.category,
                    "target": r.target,
                    "grounded": r.grounded,
                    "interactions": r.interactions,
                    "success": r.success,
                    "status": r.status,
                }
                for r in self.rows
            ],
        }


def load_commands(path: Union[str, Path]) -> list[EvalCommand]:
    """Read one JSON record per line; empty files are an error."""
    path = Path(path)
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise MalformedCommands(f"commands file unreadable: {path} ({exc})") from exc
    commands = []
    for lineno, line in enumerate(lines, start=1):
        line = line.strip()
        if not line:
            continue
        try:
            record = json.loads(line)
        except json.JSONDecodeError as exc:
            raise MalformedCommands(f"line {lineno}: invalid JSON ({exc})") from exc
        if not isinstance(record, dict):
            raise MalformedCommands(f"line {lineno}: record must be an object")
        try:
            scene = record["scene"]
            expression = record["expression"]
            target = record["target"]
            category = record["category"]
        except KeyError as exc:
            raise MalformedCommands(f"line {lineno}: missing field {exc}") from exc
        if not isinstance(scene, str) or not isinstance(expression, str):
            raise MalformedCommands(f"line {lineno}: scene/expression must be strings")
        if not isinstance(target, int) or isinstance(target, bool):
            raise MalformedCommands(f"line {lineno}: target must be an integer")
        if category not in CATEGORIES:
            raise MalformedCommands(
                f"line {lineno}: category must be one of {CATEGORIES}, got {category!r}"
            )
        commands.append(EvalCommand(scene, expression, target, category))
    if not commands:
        raise MalformedCommands(f"commands file is empty: {path}")
    return commands


def oracle_reply(question: Question, target: int) -> Reply:
    """Truthful scripted answer: confirm or pick the option matching the target."""
    if question.kind is QuestionKind.VALIDATE:
        return "yes" if question.options[0].focal_id == target else "no"
    for k, option in enumerate(question.options, start=1):
        if option.focal_id == target:
            return k
    return "none"


def run_command(
    store: SceneStore,
    command: EvalCommand,
    matcher: SimilarityProvider,
) -> CommandResult:
    graph = store.get(command.scene_id)
    if command.target not in graph.nodes:
        raise MissingScene(
            f"target node {command.target} not in scene {command.scene_id}"
        )
    state = start_session(graph, command.expression, matcher)
    guard = 0
    while state.status is SessionStatus.AWAITING_ANSWER:
        assert state.pending is not None
        answer(state, oracle_reply(state.pending, command.target))
        guard += 1
        if guard > 50:  # sessions are finite; this is a hard backstop
            raise RuntimeError(f"session did not terminate: {command.expression!r}")
    success = (
        state.status is SessionStatus.GROUNDED
        and state.grounded_node == command.target
    )
    return CommandResult(
        scene_id=command.scene_id,
        expression=command.expression,
        category=command.category,
        target=command.target,
        grounded=state.grounded_node,
        interactions=state.interactions,
        success=success,
        status=state.status.value,
    )


def _mean(values: Sequence[float]) -> float:
    return sum(values) / len(values) if values else 0.0


def run_eval(
    store: Union[SceneStore, str, Path],
    commands: Union[Sequence[EvalCommand], str, Path],
    matcher: SimilarityProvider,
) -> MetricsReport:
    """Run every command against its scene and aggregate the metrics."""
    if not isinstance(store, SceneStore):
        store = SceneStore(store)
    if isinstance(commands, (str, Path)):
        commands = load_commands(commands)
    if not commands:
        raise MalformedCommands("no commands to evaluate")
    for command in commands:
        store.get(command.scene_id)  # fail fast on unknown scenes

    rows = tuple(run_command(store, c, matcher) for c in commands)
    histogram: dict[int, int] = {}
    for row in rows:
        histogram[row.interactions] = histogram.get(row.interactions, 0) + 1
    per_category: dict[str, CategoryStats] = {}
    for category in sorted({r.category for r in rows}):
        members = [r for r in rows if r.category == category]
        per_category[category] = CategoryStats(
            count=len(members),
            avg_interactions=_mean([r.interactions for r in members]),
            success_rate=_mean([1.0 if r.success else 0.0 for r in members]),
        )
    successes = sum(1 for r in rows if r.success)
    return MetricsReport(
        total=len(rows),
        successes=successes,
        avg_interactions=_mean([r.interactions for r in rows]),
        success_rate=successes / len(rows),
        per_category=per_category,
        histogram=histogram,
        rows=rows,
    )


def write_report_json(report: MetricsReport, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(report.to_dict(), indent=2) + "\n", encoding="utf-8")
    return path


def write_report_csv(report: MetricsReport, path: Union[str, Path]) -> Path:
    """Per-command table, one row per evaluated command."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as fp:
        writer = csv.writer(fp)
        writer.writerow([
            "scene", "expression", "category", "target",
            "grounded", "interactions", "success", "status",
        ])
        for r in report.rows:
            writer.writerow([
                r.scene_id, r.expression, r.category, r.target,
                "" if r.grounded is None else r.grounded,
                r.interactions, int(r.success), r.status,
            ])
    return path


def render_figures(report: MetricsReport, out_dir: Union[str, Path],
                   stem: str = "report") -> list[Path]:
    """Render the interactions histogram and per-category success bars as PNGs."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = []

    counts = sorted(report.histogram.items())
    fig, ax = plt.subplots(figsize=(5, 3.2))
    ax.bar([str(k) for k, _ in counts], [v for _, v in counts], color="#4878cf")
    ax.set_xlabel("interactions per command")
    ax.set_ylabel("commands")
    ax.set_title(f"Interactions (avg {report.avg_interactions:.2f})")
    fig.tight_layout()
    hist_path = out_dir / f"{stem}_interactions.png"
    fig.savefig(hist_path, dpi=120)
    plt.close(fig)
    paths.append(hist_path)

    names = list(report.per_category)
    fig, ax = plt.subplots(figsize=(5, 3.2))
    ax.bar(names, [report.per_category[n].success_rate for n in names], color="#6acc64")
    ax.set_ylim(0.0, 1.0)
    ax.set_ylabel("success rate")
    ax.set_title(f"Success by category (overall {report.success_rate:.2f})")
    fig.tight_layout()
    cat_path = out_dir / f"{stem}_categories.png"
    fig.savefig(cat_path, dpi=120)
    plt.close(fig)
    paths.append(cat_path)
    return paths
