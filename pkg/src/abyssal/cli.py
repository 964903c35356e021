"""Command-line front door: validate, plan, run, ablate, replay."""

from __future__ import annotations

import json
import os
import sys
from pathlib import Path

import click

from .ablation import generate_corpus, run_ablation, scenario_view
from .bt import BT_SCHEMA, node_to_obj
from .errors import AbyssalError
from .mission import parse_mission
from .orchestrator import run_scenario
from .planner import FULL, KG_ONLY, MODES, STATE_ONLY, PlannerConfig, plan_mission, validate_mission
from .replay import replay_log
from .scenario import load_scenario

MODE_FLAGS = {"full": FULL, "kg": KG_ONLY, "state": STATE_ONLY}


def _load(scenario_path):
    path = scenario_path or os.environ.get("ABYSSAL_SCENARIO")
    if path is None:
        raise click.UsageError("no scenario given and ABYSSAL_SCENARIO unset")
    try:
        return load_scenario(Path(path).read_text())
    except (OSError, AbyssalError) as exc:
        raise click.ClickException(f"cannot load scenario: {exc}")


def _config(scenario, mode):
    return PlannerConfig(
        mode=MODE_FLAGS[mode],
        battery_floor=scenario.battery_floor,
        refresh_interval=scenario.refresh_interval,
    )


@click.group()
def main():
    """Deterministic multi-AUV mission engine."""


@main.command()
@click.argument("scenario", type=click.Path(exists=True))
@click.argument("mission", type=click.Path(exists=True))
@click.option("--mode", type=click.Choice(sorted(MODE_FLAGS)), default="full")
@click.option("--json", "as_json", is_flag=True)
def validate(scenario, mission, mode, as_json):
    """Validate a mission file against a scenario."""
    scn = _load(scenario)
    try:
        parsed = parse_mission(Path(mission).read_text())
    except AbyssalError as exc:
        raise click.ClickException(str(exc))
    report = validate_mission(parsed, scenario_view(scn), _config(scn, mode))
    if as_json:
        click.echo(json.dumps(report.to_dict(), indent=2))
    else:
        click.echo(f"mission {parsed.mission_id}: {report.summary()}")
        for task, verdict in zip(parsed.tasks, report.verdicts):
            line = f"  {task.subject} {task.action.value}: {verdict.code}"
            if verdict.detail:
                line += f" ({verdict.detail})"
            click.echo(line)
    sys.exit(0 if report.feasible else 1)


@main.command()
@click.argument("scenario", type=click.Path(exists=True))
@click.argument("mission", type=click.Path(exists=True))
@click.option("--mode", type=click.Choice(sorted(MODE_FLAGS)), default="full")
@click.option("--json", "as_json", is_flag=True)
def plan(scenario, mission, mode, as_json):
    """Validate and synthesize behavior trees for a mission."""
    scn = _load(scenario)
    try:
        parsed = parse_mission(Path(mission).read_text())
        result = plan_mission(parsed, scenario_view(scn), _config(scn, mode))
    except AbyssalError as exc:
        raise click.ClickException(str(exc))
    doc = {
        "schema": BT_SCHEMA,
        "mission_id": result.mission_id,
        "priority": result.priority,
        "trees": [
            {"task": f"{t.subject} {t.action.value}", "root": node_to_obj(bt.root)}
            for t, bt in result.trees
        ],
    }
    if as_json:
        click.echo(json.dumps(doc, indent=2))
    else:
        click.echo(f"planned {len(result.trees)} trees for {result.mission_id}")
        for entry in doc["trees"]:
            click.echo(f"  {entry['task']}")


@main.command()
@click.argument("scenario", type=click.Path(exists=True), required=False)
@click.option("--until", type=float, default=None, help="stop at sim time (s)")
@click.option("--until-event", default=None, help="stop once this event kind appears")
@click.option("--log", "log_path", type=click.Path(), default=None)
@click.option("--serve", default=None, help="HOST:PORT for the HTTP API")
@click.option("--realtime", is_flag=True, help="pace the loop at wall-clock dt")
@click.option("--json", "as_json", is_flag=True)
def run(scenario, until, until_event, log_path, serve, realtime, as_json):
    """Run a scenario; optionally expose the HTTP API while running."""
    scn = _load(scenario)
    if serve:
        import uvicorn

        from .orchestrator import Engine
        from .server import EngineController, create_app

        host, _, port = serve.partition(":")
        engine = Engine(scn, log_path=log_path)
        controller = EngineController(engine, realtime=realtime)
        controller.start()
        try:
            uvicorn.run(create_app(controller), host=host or "127.0.0.1", port=int(port or 8000))
        finally:
            controller.stop()
            engine.close()
        return
    if until is None and until_event is None:
        until = 300.0
    engine = run_scenario(scn, until_t=until, until_event=until_event, log_path=log_path)
    if as_json:
        click.echo(json.dumps([e.to_dict() for e in engine.events]))
    else:
        for e in engine.events:
            if e.kind in ("ScenarioLoaded",):
                click.echo(f"{e.seq:>5} {e.t:>8.1f} {e.kind}")
            else:
                click.echo(f"{e.seq:>5} {e.t:>8.1f} {e.kind} {json.dumps(e.payload, sort_keys=True)}")


def _parse_mix(text):
    mix = {}
    if not text:
        return None
    for part in text.split(","):
        key, _, value = part.partition("=")
        mix[key.strip()] = float(value)
    return mix


@main.command()
@click.argument("scenario", type=click.Path(exists=True))
@click.option("--n", default=20, show_default=True)
@click.option("--seed", default=1, show_default=True)
@click.option("--mix", default="", help="e.g. none=0.5,capability=0.2,affordance=0.3")
@click.option("--json", "as_json", is_flag=True)
def ablate(scenario, n, seed, mix, as_json):
    """Score FULL / KG_ONLY / STATE_ONLY against the oracle on a generated
    corpus.

    The degraded configurations model check-skipping, not language-model
    behavior; their absolute scores are corpus-mix artifacts, only the
    FULL-first ordering is meaningful.
    """
    scn = _load(scenario)
    try:
        corpus = generate_corpus(scn, seed, n, _parse_mix(mix))
        result = run_ablation(corpus, scn)
    except AbyssalError as exc:
        raise click.ClickException(str(exc))
    if as_json:
        click.echo(json.dumps({"seed": seed, "n": n, **result.to_dict()}, indent=2))
    else:
        click.echo(result.render_table())


@main.command()
@click.argument("log", type=click.Path(exists=True))
@click.option("--json", "as_json", is_flag=True)
def replay(log, as_json):
    """Re-simulate a recorded run and report the first divergence."""
    try:
        report = replay_log(log)
    except AbyssalError as exc:
        raise click.ClickException(str(exc))
    if as_json:
        click.echo(json.dumps(report.to_dict()))
    elif report.clean:
        click.echo("clean")
    else:
        click.echo(f"divergence at seq {report.divergent_seq}: {report.detail}")
    sys.exit(0 if report.clean else 1)


if __name__ == "__main__":
    main()
