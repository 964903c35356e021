"""Scenario files: the single input document describing a run.

Schema ``abyssal-scenario/1``: top-level keys ``schema``, ``seed``,
``robots``, ``graph``, ``taxonomy``, ``objects``, ``params``.  Stations and
the timed script live under ``params``.  See docs/schemas.md.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .errors import ScenarioError
from .knowledge import (
    ActionKind,
    KnowledgeGraph,
    KnowledgeStore,
    RuntimeState,
    Taxonomy,
    load_knowledge,
    load_taxonomy,
)
from .sim import RobotState, SimObject, SimParams, Station, WorldState

SCENARIO_SCHEMA = "abyssal-scenario/1"


@dataclass
class RobotSpec:
    robot_id: str
    start: tuple = (0.0, 0.0, 0.0)
    heading: float = 0.0
    battery: float = 100.0
    docked: bool = False
    epsilon: float = 0.0
    sense_overrides: dict = field(default_factory=dict)


@dataclass
class Scenario:
    seed: int
    robots: list
    graph: KnowledgeGraph
    taxonomy: Taxonomy
    objects: list  # SimObject
    stations: list  # Station
    params: SimParams
    mode: str = "FULL"
    battery_floor: float = 20.0
    refresh_interval: float = 1.0
    resume_battery: float = 50.0
    lane_spacing: float = 5.0
    script: list = field(default_factory=list)
    raw: dict = field(default_factory=dict)

    def build_store(self) -> KnowledgeStore:
        return KnowledgeStore(self.graph, self.taxonomy)

    def build_world(self) -> WorldState:
        robots = []
        for spec in self.robots:
            closure = self.graph.capability_closure(spec.robot_id)
            robots.append(
                RobotState(
                    robot_id=spec.robot_id,
                    position=tuple(spec.start),
                    heading=spec.heading,
                    battery=spec.battery,
                    docked=spec.docked,
                    has_manipulator=ActionKind.MANIPULATE in closure,
                    has_vlc=ActionKind.COMMUNICATE in closure,
                    epsilon=spec.epsilon,
                )
            )
        objects = [
            SimObject(o.object_id, o.true_class, o.position) for o in self.objects
        ]
        stations = [
            Station(s.station_id, s.position, s.heading, s.vlc_mounted, s.omni)
            for s in self.stations
        ]
        return WorldState(robots, objects, stations, self.params, self.seed)

    def build_runtime(self) -> RuntimeState:
        return RuntimeState([r.robot_id for r in self.robots])


def load_scenario(document) -> Scenario:
    if isinstance(document, (str, Path)) and "\n" not in str(document) and Path(str(document)).exists():
        document = Path(document).read_text()
    if isinstance(document, str):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise ScenarioError(f"invalid JSON: {exc}") from exc
    if not isinstance(document, dict):
        raise ScenarioError("scenario must be a JSON object")
    if document.get("schema") != SCENARIO_SCHEMA:
        raise ScenarioError(f"expected schema {SCENARIO_SCHEMA!r}")

    graph = load_knowledge(document.get("graph", {}))
    taxonomy = load_taxonomy(document.get("taxonomy", {}))

    robots = []
    for raw in document.get("robots", []):
        try:
            robots.append(
                RobotSpec(
                    robot_id=raw["id"],
                    start=tuple(raw.get("start", (0, 0, 0))),
                    heading=float(raw.get("heading", 0.0)),
                    battery=float(raw.get("battery", 100.0)),
                    docked=bool(raw.get("docked", False)),
                    epsilon=float(raw.get("epsilon", 0.0)),
                    sense_overrides=dict(raw.get("sense_overrides", {})),
                )
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ScenarioError(f"malformed robot entry: {raw!r}") from exc
        if raw["id"] not in graph.nodes:
            raise ScenarioError(f"robot {raw['id']!r} missing from graph")

    objects = []
    for raw in document.get("objects", []):
        try:
            objects.append(
                SimObject(raw["id"], raw["class"], tuple(raw["position"]))
            )
        except (KeyError, TypeError) as exc:
            raise ScenarioError(f"malformed object entry: {raw!r}") from exc

    params_doc = dict(document.get("params", {}))
    stations = []
    for raw in params_doc.pop("stations", []):
        try:
            stations.append(
                Station(
                    raw["id"],
                    tuple(raw["position"]),
                    float(raw.get("heading", 0.0)),
                    bool(raw.get("vlc_mounted", True)),
                    bool(raw.get("omni", True)),
                )
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ScenarioError(f"malformed station entry: {raw!r}") from exc

    script = sorted(params_doc.pop("script", []), key=lambda e: float(e.get("t", 0.0)))
    mode = params_doc.pop("mode", "FULL")
    battery_floor = float(params_doc.pop("battery_floor", 20.0))
    refresh_interval = float(params_doc.pop("refresh_interval", 1.0))
    resume_battery = float(params_doc.pop("resume_battery", 50.0))
    lane_spacing = float(params_doc.pop("lane_spacing", 5.0))
    params = SimParams.from_dict({**params_doc, "battery_floor": battery_floor})

    return Scenario(
        seed=int(document.get("seed", 0)),
        robots=robots,
        graph=graph,
        taxonomy=taxonomy,
        objects=objects,
        stations=stations,
        params=params,
        mode=mode,
        battery_floor=battery_floor,
        refresh_interval=refresh_interval,
        resume_battery=resume_battery,
        lane_spacing=lane_spacing,
        script=script,
        raw=document,
    )


def builtin_scenario_path(name: str) -> Path:
    return Path(resources.files("abyssal") / "scenarios" / f"{name}.json")


def load_builtin(name: str) -> Scenario:
    return load_scenario(builtin_scenario_path(name).read_text())
