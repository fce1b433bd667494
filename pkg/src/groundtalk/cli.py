"""Command line interface: parse, match, repl, eval, serve."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Optional, TextIO

import click

from . import evaluate as ev
from .errors import GroundtalkError, InvalidOption, WrongReplyKind
from .model import load_scene_graph_file
from .parse import parse_expression
from .reason import LanguageEdge, incremental_match
from .session import (
    SessionStatus,
    answer,
    start_session,
    write_transcript,
)
from .similarity import DEFAULT_THRESHOLD, build_provider
from .store import SceneStore

_SIM_HELP = "similarity provider: exact | lexicon[:path] | vectors[:path]"


def _sim_options(fn):
    fn = click.option("--sim", default="lexicon", show_default=True, help=_SIM_HELP)(fn)
    fn = click.option("--threshold", default=DEFAULT_THRESHOLD, show_default=True,
                      type=float, help="similarity gate in [0, 1]")(fn)
    return fn


@click.group()
def main() -> None:
    """Ground referring expressions against scene graphs, asking when unsure."""


@main.command("parse")
@click.argument("expression")
def parse_cmd(expression: str) -> None:
    """Parse EXPRESSION into a language scene graph document."""
    try:
        graph = parse_expression(expression)
    except GroundtalkError as exc:
        raise click.ClickException(str(exc))
    click.echo(json.dumps(graph.to_document(), indent=2))


def _edge_repr(edge, graph) -> str:
    s = graph.node(edge.subject_id)
    o = graph.node(edge.object_id)
    return f"({s.name}[{s.id}], {edge.predicate}, {o.name}[{o.id}])"


@main.command("match")
@click.option("--scene", "scene_path", required=True, type=click.Path(exists=True))
@click.option("--expr", "expression", required=True)
@click.option("--trace", is_flag=True, help="print survivors at each stage")
@_sim_options
def match_cmd(scene_path: str, expression: str, trace: bool,
              sim: str, threshold: float) -> None:
    """Run the matching cascade for one expression against one scene."""
    try:
        graph = load_scene_graph_file(scene_path)
        matcher = build_provider(sim, threshold)
        language = parse_expression(expression)
    except GroundtalkError as exc:
        raise click.ClickException(str(exc))
    if not language.edges:
        from .reason import match_node
        ids = match_node(language.head, graph, matcher)
        click.echo(f"relationless expression; node candidates: {ids}")
        return
    for index in range(len(language.edges)):
        edge = LanguageEdge.from_graph(language, index)
        outcome = incremental_match(edge, graph, matcher)
        click.echo(
            f"edge {index}: ({edge.subject.name}, {edge.predicate}, "
            f"{edge.object.name}) -> {outcome.action.value} "
            f"at stage {outcome.stage_reached.name.lower()}"
        )
        if trace:
            for stage, survivors in outcome.trace:
                shown = ", ".join(_edge_repr(e, graph) for e in survivors) or "-"
                click.echo(f"  {stage.name.lower():<9} {shown}")
        for candidate, exact in zip(outcome.candidates, outcome.exact):
            mark = "exact" if exact else "similar"
            click.echo(f"  candidate {_edge_repr(candidate, graph)} [{mark}]")


def _print_question(question) -> None:
    click.echo(question.text)


def _read_reply(line: str):
    word = line.strip().lower()
    if word in ("yes", "y"):
        return "yes"
    if word in ("no", "n"):
        return "no"
    if word == "none":
        return "none"
    try:
        return int(word)
    except ValueError:
        return None


@main.command("repl")
@click.argument("scene", type=click.Path(exists=True))
@click.option("--log", "log_path", type=click.Path(), default=None,
              help="append transcript JSON lines to this file")
@_sim_options
def repl_cmd(scene: str, log_path: Optional[str], sim: str, threshold: float) -> None:
    """Interactive grounding loop over one scene file."""
    try:
        graph = load_scene_graph_file(scene)
        matcher = build_provider(sim, threshold)
    except GroundtalkError as exc:
        raise click.ClickException(str(exc))
    click.echo(f"scene {graph.scene_id}: {len(graph.nodes)} objects, "
               f"{len(graph.edges)} relations. Type an expression, or 'quit'.")
    log_fp: Optional[TextIO] = open(log_path, "a", encoding="utf-8") if log_path else None
    try:
        while True:
            try:
                line = click.prompt("expr", prompt_suffix="> ")
            except (click.Abort, EOFError):
                break
            if line.strip().lower() in ("quit", "exit"):
                break
            if not line.strip():
                continue
            state = start_session(graph, line, matcher)
            logged = 0
            while state.status is SessionStatus.AWAITING_ANSWER:
                assert state.pending is not None
                _print_question(state.pending)
                if log_fp:
                    logged = write_transcript(state, log_fp, logged)
                try:
                    raw = click.prompt("answer", prompt_suffix="> ")
                except (click.Abort, EOFError):
                    return
                reply = _read_reply(raw)
                if reply is None:
                    click.echo("reply with an option number, yes, no, or none")
                    continue
                try:
                    answer(state, reply)
                except (InvalidOption, WrongReplyKind) as exc:
                    click.echo(f"error: {exc}")
            if state.status is SessionStatus.GROUNDED:
                node = graph.node(state.grounded_node)
                bbox = node.bbox.to_dict() if node.bbox else None
                click.echo(
                    f"grounded: node {node.id} ({node.name}) bbox={bbox} "
                    f"interactions={state.interactions}"
                )
            else:
                click.echo(
                    f"failed: {state.failure_reason} "
                    f"(interactions={state.interactions})"
                )
            if log_fp:
                write_transcript(state, log_fp, logged)
                log_fp.flush()
    finally:
        if log_fp:
            log_fp.close()


@main.command("eval")
@click.option("--scenes", "scenes_dir", required=True, type=click.Path(exists=True))
@click.option("--commands", "commands_path", required=True, type=click.Path(exists=True))
@click.option("--out", "out_path", required=True, type=click.Path())
@click.option("--figures/--no-figures", default=True, show_default=True,
              help="render PNG figures next to the report")
@_sim_options
def eval_cmd(scenes_dir: str, commands_path: str, out_path: str,
             figures: bool, sim: str, threshold: float) -> None:
    """Evaluate a commands file with the scripted oracle and write the report."""
    try:
        matcher = build_provider(sim, threshold)
        report = ev.run_eval(scenes_dir, commands_path, matcher)
    except GroundtalkError as exc:
        raise click.ClickException(str(exc))
    out = Path(out_path)
    ev.write_report_json(report, out)
    csv_path = ev.write_report_csv(report, out.with_suffix(".csv"))
    written = [out, csv_path]
    if figures:
        written += ev.render_figures(report, out.parent, stem=out.stem)
    click.echo(
        f"{report.total} commands: success_rate={report.success_rate:.4f} "
        f"avg_interactions={report.avg_interactions:.4f}"
    )
    for path in written:
        click.echo(f"wrote {path}")


@main.command("serve")
@click.option("--port", default=8080, show_default=True, type=int)
@click.option("--scenes", "scenes_dir", envvar="IGSG_SCENES", required=True,
              type=click.Path(exists=True),
              help="scenes directory (env IGSG_SCENES)")
@click.option("--static", "static_dir", type=click.Path(exists=True), default=None,
              help="directory with the web UI build")
@click.option("--session-ttl", default=1800.0, show_default=True, type=float,
              help="seconds of idleness before sessions are evicted")
@_sim_options
def serve_cmd(port: int, scenes_dir: str, static_dir: Optional[str],
              session_ttl: float, sim: str, threshold: float) -> None:
    """Serve the session API (and optionally the web UI)."""
    import uvicorn

    from .server import create_app

    try:
        store = SceneStore(scenes_dir)
        matcher = build_provider(sim, threshold)
    except GroundtalkError as exc:
        raise click.ClickException(str(exc))
    app = create_app(
        store, matcher, session_ttl=session_ttl,
        static_dir=Path(static_dir) if static_dir else None,
    )
    click.echo(f"serving {len(store)} scenes on port {port}")
    uvicorn.run(app, host="0.0.0.0", port=port)


if __name__ == "__main__":
    main()
