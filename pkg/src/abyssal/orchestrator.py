"""Mission engine: one deterministic loop owning store, planner, behavior
trees, and the simulated world.

Per step: tick each robot's plan stack (leaves write motion commands to the
blackboard), integrate the sim, refresh blackboards from sensors and VLC
link checks, let the context manager push overrides, flush queued
interventions and script entries, and open the knowledge-store version gate
on refresh ticks.  Every externally visible change is an event record; the
log fully determines the run.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

from . import sim as simlib
from .bt import FAILURE, RUNNING, SUCCESS, BtStack, LeafRegistry
from .errors import (
    AbyssalError,
    BadCursor,
    DuplicatePlan,
    MissionSyntaxError,
    UnknownEntity,
    ValidationFailed,
)
from .knowledge import KnowledgePatch, ObjectRecord, UNKNOWN_CLASS
from .mission import PRIORITY_RANK, parse_mission
from .paths import generate_inspection_path, generate_survey_path
from .planner import (
    KEEP_CURRENT,
    OVERRIDE,
    RESUME,
    Context,
    PlannerConfig,
    WorldView,
    build_return_to_dock,
    context_decide,
    plan_mission,
    safety_plan_id,
    validate_mission,
)

EVENTS_SCHEMA = "abyssal-events/1"

GOAL_TOLERANCE = 0.3
DOCK_APPROACH_RANGE = 5.0
PEER_STANDOFF = 3.0
INSPECT_RADIUS = 3.0
INSPECT_POINTS = 36
REFINED_CONFIDENCE = 0.95
SHARE_HOLD_S = 180.0


@dataclass
class EventRecord:
    seq: int
    t: float
    kind: str
    payload: dict

    def to_dict(self):
        return {"seq": self.seq, "t": round(self.t, 6), "kind": self.kind, "payload": self.payload}


@dataclass
class Executive:
    stack: BtStack = field(default_factory=BtStack)
    blackboard: dict = field(default_factory=dict)
    registry: LeafRegistry = None


class Engine:
    def __init__(self, scenario, log_path=None):
        self.scenario = scenario
        self.store = scenario.build_store()
        self.world = scenario.build_world()
        self.runtime = scenario.build_runtime()
        self.config = PlannerConfig(
            mode=scenario.mode,
            battery_floor=scenario.battery_floor,
            refresh_interval=scenario.refresh_interval,
        )
        self.events: list[EventRecord] = []
        self._seq = 0
        self._log_file = open(log_path, "w") if log_path else None
        self.paused = False
        self.outbox: dict[str, list] = {r.robot_id: [] for r in scenario.robots}
        self.plans: dict[str, dict] = {}
        self._link_up: set = set()
        self._script = list(scenario.script)
        self._external_queue: list = []
        self._refresh_count = 0
        self.executives: dict[str, Executive] = {}
        for spec in scenario.robots:
            ex = Executive()
            ex.registry = _build_registry(self, spec.robot_id)
            self.executives[spec.robot_id] = ex
        self.emit("ScenarioLoaded", {"scenario": scenario.raw, "seed": scenario.seed})
        self._sync_blackboards()

    # -- events ---------------------------------------------------------------

    def emit(self, kind, payload):
        self._seq += 1
        rec = EventRecord(self._seq, self.world.time, kind, payload)
        self.events.append(rec)
        if self._log_file:
            self._log_file.write(json.dumps(rec.to_dict(), sort_keys=True) + "\n")
            self._log_file.flush()
        return rec

    def event_stream(self, since: int = 0):
        if since > self._seq:
            raise BadCursor(f"since={since} beyond head {self._seq}")
        return [e for e in self.events if e.seq > since]

    # -- views ----------------------------------------------------------------

    def world_view(self, robot_id=None) -> WorldView:
        robots = {
            rid: {"battery": r.battery, "pose": (*r.position, r.heading)}
            for rid, r in self.world.robots.items()
        }
        stations = {
            sid: {"position": s.position} for sid, s in self.world.stations.items()
        }
        objects = {}
        if robot_id is not None:
            for oid, rec in self.runtime.robot(robot_id).object_records.items():
                objects[oid] = (rec.classification, rec.position)
        else:
            # Union view (API/console): best-confidence record per object.
            best = {}
            for rid in sorted(self.runtime.robots):
                for oid, rec in self.runtime.robot(rid).object_records.items():
                    if oid not in best or rec.confidence > best[oid].confidence:
                        best[oid] = rec
            objects = {oid: (r.classification, r.position) for oid, r in best.items()}
        return WorldView(
            graph=self.store.visible_graph,
            taxonomy=self.store.visible_taxonomy,
            robots=robots,
            objects=objects,
            stations=stations,
            drain_move=self.world.params.drain_move,
        )

    # -- mission + intervention ingress ---------------------------------------

    def submit_mission(self, robot_id, text, source="api"):
        """Parse, validate, and (when feasible) plan + push the mission."""
        try:
            mission = parse_mission(text)
        except MissionSyntaxError as exc:
            self.emit(
                "MissionRejected",
                {"robot": robot_id, "reason": f"SyntaxError: {exc}", "source": source},
            )
            return {"accepted": False, "reason": str(exc)}
        view = self.world_view(robot_id)
        report = validate_mission(mission, view, self.config)
        if not report.feasible:
            self.emit(
                "MissionRejected",
                {
                    "robot": robot_id,
                    "mission_id": mission.mission_id,
                    "report": report.to_dict(),
                    "source": source,
                },
            )
            return {"accepted": False, "report": report.to_dict()}
        try:
            plan = plan_mission(mission, view, self.config)
        except AbyssalError as exc:
            # Passes validation but is unplannable here, e.g. a class target
            # with no known instance to bind a position from.
            self.emit(
                "MissionRejected",
                {
                    "robot": robot_id,
                    "mission_id": mission.mission_id,
                    "reason": f"BindError: {exc}",
                    "source": source,
                },
            )
            return {"accepted": False, "reason": str(exc)}
        plan_id = mission.mission_id
        ex = self.executives[robot_id]
        try:
            ex.stack.push(plan_id, plan.behavior_tree(), plan.priority)
        except DuplicatePlan:
            self.emit(
                "MissionRejected",
                {"robot": robot_id, "mission_id": plan_id, "reason": "DuplicatePlan"},
            )
            return {"accepted": False, "reason": "DuplicatePlan"}
        self.plans[plan_id] = {
            "robot": robot_id,
            "mission_id": mission.mission_id,
            "kind": "mission",
        }
        self.emit(
            "MissionValidated",
            {
                "robot": robot_id,
                "mission_id": mission.mission_id,
                "plan_id": plan_id,
                "report": report.to_dict(),
                "source": source,
            },
        )
        return {"accepted": True, "plan_id": plan_id, "report": report.to_dict()}

    def queue_external(self, message: dict):
        """Queue an API-side input; applied at the next step boundary and
        recorded in the log so replays can re-inject it."""
        self._external_queue.append(message)

    def apply_intervention(self, intervention: dict, source="api"):
        kind = intervention.get("type")
        if kind == "ClassifyObject":
            oid = intervention["object"]
            cls = intervention["class"]
            if cls not in self.store.visible_taxonomy.classes:
                raise UnknownEntity(f"class {cls}")
            position = None
            for rid in sorted(self.runtime.robots):
                rec = self.runtime.robot(rid).object_records.get(oid)
                if rec is not None:
                    position = rec.position
                    break
            if position is None:
                obj = self.world.objects.get(oid)
                if obj is None:
                    raise UnknownEntity(f"object {oid}")
                position = obj.position
            for rid in sorted(self.runtime.robots):
                self.runtime.merge_record(
                    rid, ObjectRecord(oid, position, cls, 1.0, "human")
                )
            self.emit(
                "ClassificationCorrected",
                {"object": oid, "class": cls, "source": "human"},
            )
        elif kind == "DeployRobot":
            rid = intervention["robot"]
            if rid not in self.world.robots:
                raise UnknownEntity(f"robot {rid}")
            robot = self.world.robots[rid]
            self.emit("DeployRobot", {"robot": rid, "source": source})
            if robot.docked:
                robot.docked = False
                self.emit("Undocked", {"robot": rid})
            self.submit_mission(rid, intervention["mission"], source=source)
        elif kind == "PatchKnowledge":
            patch = KnowledgePatch.from_dict(intervention["patch"])
            version = self.store.apply_patch(patch)
            self.emit("KnowledgePatched", {"version": version})
        elif kind == "AbortMission":
            plan_id = intervention["mission"]
            info = self.plans.get(plan_id)
            if info is None:
                raise UnknownEntity(f"mission {plan_id}")
            ex = self.executives[info["robot"]]
            if ex.stack.remove(plan_id):
                self.emit(
                    "MissionAborted", {"plan_id": plan_id, "robot": info["robot"]}
                )
        else:
            raise UnknownEntity(f"intervention type {kind!r}")

    # -- engine loop ----------------------------------------------------------

    def run(self, until_t=None, until_event=None, max_steps=1_000_000):
        """Advance until a sim-time bound or an event kind appears."""
        steps = 0
        while steps < max_steps:
            if until_t is not None and self.world.time >= until_t - 1e-9:
                break
            if until_event is not None and any(
                e.kind == until_event for e in self.events
            ):
                break
            self.step_once()
            steps += 1
        self.emit("RunCompleted", {"t": round(self.world.time, 6)})
        return self.events

    def run_until_time(self, t):
        while self.world.time < t - 1e-9:
            self.step_once()

    def step_once(self):
        dt = self.world.params.dt
        # 1. Tick plan stacks; leaves stage motion commands on the blackboard.
        for rid in sorted(self.executives):
            ex = self.executives[rid]
            robot = self.world.robots[rid]
            if not ex.stack.entries:
                continue
            if (
                robot.docked
                and robot.battery < self.scenario.resume_battery
                and ex.stack.active.plan_id not in (safety_plan_id(rid),)
            ):
                continue  # hold on the charger until the battery recovers
            plan_id, status, resumed = ex.stack.step(ex.blackboard, ex.registry)
            if status in (SUCCESS, FAILURE):
                self._on_plan_finished(rid, plan_id, status)
            if resumed is not None:
                self.emit("Resume", {"robot": rid, "plan_id": resumed})

        # 2. Integrate the world.
        commands = {}
        for rid in sorted(self.executives):
            commands[rid] = self.executives[rid].blackboard.pop(
                "command", {"cmd": "hold"}
            )
        try:
            sim_events = simlib.step(self.world, commands, dt)
        except AbyssalError as exc:
            sim_events = []
            self.emit("CommandRejected", {"error": str(exc)})
        for ev in sim_events:
            self.emit(ev.kind, ev.payload)

        # 3. Refresh blackboards: sensing, link states.
        self._sync_blackboards()
        self._scan_vlc_links()

        # 4. Context manager: possible priority overrides.
        self._context_step()

        # 5. Flush script entries and queued API inputs at the boundary.
        self._flush_script()
        self._flush_external()

        # 6. Knowledge-store version gate.
        ticks = int((self.world.time + 1e-9) / self.config.refresh_interval)
        if ticks > self._refresh_count:
            self._refresh_count = ticks
            if self.store.visible_version != self.store.version:
                self.store.refresh()
                self.emit("KnowledgeRefreshed", {"version": self.store.version})

    def _on_plan_finished(self, rid, plan_id, status):
        info = self.plans.get(plan_id, {"kind": "mission", "mission_id": plan_id})
        if info.get("kind") == "safety":
            self.emit("OverrideCompleted", {"robot": rid, "plan_id": plan_id})
        else:
            kind = "MissionSucceeded" if status == SUCCESS else "MissionFailed"
            self.emit(
                kind,
                {"robot": rid, "plan_id": plan_id, "mission_id": info["mission_id"]},
            )
        self.plans.pop(plan_id, None)

    def _sync_blackboards(self):
        for rid in sorted(self.executives):
            bb = self.executives[rid].blackboard
            robot = self.world.robots[rid]
            rt = self.runtime.robot(rid)
            rt.battery = robot.battery
            rt.pose = (*robot.position, robot.heading)
            rt.docked = robot.docked
            bb["battery"] = robot.battery
            bb["pose"] = (*robot.position, robot.heading)
            bb["docked"] = robot.docked
            bb["time"] = self.world.time

            spec = next(s for s in self.scenario.robots if s.robot_id == rid)
            reading = simlib.sense(
                self.world, rid, self.store.visible_taxonomy, spec.sense_overrides
            )
            visible = set()
            for det in reading.detections:
                visible.add(det.object_id)
                cls = self.store.visible_taxonomy.resolve_class(det.primitives)
                record = ObjectRecord(
                    det.object_id,
                    det.position,
                    cls if cls is not None else UNKNOWN_CLASS,
                    det.confidence,
                    "self_sensed",
                )
                fresh = det.object_id not in rt.object_records
                self.runtime.merge_record(rid, record)
                if fresh:
                    self.emit(
                        "ObjectDetected",
                        {
                            "robot": rid,
                            "object": det.object_id,
                            "class": rt.object_records[det.object_id].classification,
                        },
                    )
            bb["visible"] = visible
            bb["records"] = rt.object_records

    def _scan_vlc_links(self):
        names = sorted(self.world.robots) + sorted(self.world.stations)
        links = {}
        for i, a in enumerate(names):
            for b in names[i + 1 :]:
                if a in self.world.stations and b in self.world.stations:
                    continue
                try:
                    status = simlib.vlc_link(self.world, a, b)
                except AbyssalError:
                    continue
                links[(a, b)] = status
                was_up = (a, b) in self._link_up
                if status.state == simlib.CONNECTED and not was_up:
                    self._link_up.add((a, b))
                    self.emit(
                        "VlcConnected",
                        {"a": a, "b": b, "quality": round(status.quality, 4)},
                    )
                elif status.state != simlib.CONNECTED and was_up:
                    self._link_up.discard((a, b))
                    self.emit("VlcDisconnected", {"a": a, "b": b, "state": status.state})
        for rid in sorted(self.executives):
            bb = self.executives[rid].blackboard
            bb["links"] = {
                (a if a != rid else b): s.state
                for (a, b), s in links.items()
                if rid in (a, b)
            }

    def _context_step(self):
        for rid in sorted(self.executives):
            ex = self.executives[rid]
            robot = self.world.robots[rid]
            ctx = Context(
                battery=robot.battery,
                detections=len(ex.blackboard.get("visible", ())),
                vlc_window=any(
                    s == simlib.CONNECTED for s in ex.blackboard.get("links", {}).values()
                ),
            )
            sid = safety_plan_id(rid)
            decision = context_decide(
                ctx,
                ex.stack.active,
                [],
                self.config,
                ex.stack.plan_ids()[1:],
                safety_pending=sid in ex.stack.plan_ids(),
            )
            if decision.kind == OVERRIDE and decision.plan_id is None and not robot.docked:
                tree = build_return_to_dock(rid, self.world_view(rid))
                ex.stack.push(sid, tree, PRIORITY_RANK["safety"])
                self.plans[sid] = {"robot": rid, "mission_id": sid, "kind": "safety"}
                self.emit(
                    "Override",
                    {"robot": rid, "plan_id": sid, "reason": decision.reason},
                )

    def _flush_script(self):
        while self._script and self._script[0].get("t", 0.0) <= self.world.time + 1e-9:
            entry = self._script.pop(0)
            self._apply_script_entry(entry)

    def _apply_script_entry(self, entry):
        kind = entry.get("type")
        if kind == "submit_mission":
            self.submit_mission(entry["robot"], entry["mission"], source="script")
        elif kind == "set_battery":
            for ev in simlib.set_battery(self.world, entry["robot"], entry["value"]):
                self.emit(ev.kind, ev.payload)
        elif kind == "queue_handoff":
            self.outbox[entry["robot"]].append(entry["mission"])
            self.emit(
                "HandoffQueued", {"robot": entry["robot"], "count": len(self.outbox[entry["robot"]])}
            )
        elif kind == "deploy_robot":
            self.apply_intervention(
                {"type": "DeployRobot", "robot": entry["robot"], "mission": entry["mission"]},
                source="script",
            )
        elif kind == "classify_object":
            self.apply_intervention(
                {"type": "ClassifyObject", "object": entry["object"], "class": entry["class"]},
                source="script",
            )
        elif kind == "patch_knowledge":
            self.apply_intervention(
                {"type": "PatchKnowledge", "patch": entry["patch"]}, source="script"
            )
        elif kind == "abort_mission":
            self.apply_intervention(
                {"type": "AbortMission", "mission": entry["mission"]}, source="script"
            )

    def _flush_external(self):
        queue, self._external_queue = self._external_queue, []
        for message in queue:
            # Record before applying so replays re-inject at the same step.
            self.emit("ExternalInput", {"message": message})
            self._apply_external(message)

    def _apply_external(self, message):
        kind = message.get("type")
        if kind == "mission":
            self.submit_mission(message["robot"], message["text"], source="api")
        elif kind == "intervention":
            try:
                self.apply_intervention(message["intervention"], source="api")
            except AbyssalError as exc:
                self.emit("InterventionRejected", {"error": str(exc)})

    # -- transfers ------------------------------------------------------------

    def complete_transfer(self, sender, receiver, session):
        changed = []
        receiver_rt = self.runtime.robot(receiver)
        fresh = 0
        for rec in session.records:
            if rec.object_id not in receiver_rt.object_records:
                fresh += 1
            self.runtime.merge_record(
                receiver,
                ObjectRecord(
                    rec.object_id, rec.position, rec.classification, rec.confidence, "transferred"
                ),
            )
        self.emit(
            "KnowledgeTransferred",
            {
                "from": sender,
                "to": receiver,
                "records": len(session.records),
                "handoffs": len(session.handoffs),
            },
        )
        self.outbox[sender] = []
        self.executives[sender].blackboard["handoff_delivered"] = True
        for text in session.handoffs:
            self.submit_mission(receiver, text, source="handoff")
        return changed

    def refined_observe(self, rid, object_id):
        """Close-range re-segmentation: exact class at high confidence."""
        obj = self.world.objects.get(object_id)
        if obj is None:
            return
        rt = self.runtime.robot(rid)
        old = rt.object_records.get(object_id)
        changed = self.runtime.merge_record(
            rid,
            ObjectRecord(
                object_id, obj.position, obj.true_class, REFINED_CONFIDENCE, "self_sensed"
            ),
        )
        self.emit(
            "ObservationRecorded",
            {"robot": rid, "object": object_id, "class": obj.true_class},
        )
        if changed and old is not None and old.classification != UNKNOWN_CLASS:
            self.emit(
                "ClassificationCorrected",
                {
                    "object": object_id,
                    "class": obj.true_class,
                    "previous": old.classification,
                    "source": rid,
                },
            )

    def report_metrics(self, rid):
        rt = self.runtime.robot(rid)
        return {
            "robot": rid,
            "objects_classified": sum(
                1
                for r in rt.object_records.values()
                if r.classification != UNKNOWN_CLASS
            ),
            "missions_completed": sum(
                1 for e in self.events if e.kind == "MissionSucceeded"
            ),
        }

    def snapshot(self):
        """Read-only state for the API and console."""
        view = self.world_view()
        best_records = {}
        for rid in sorted(self.runtime.robots):
            for oid, rec in self.runtime.robot(rid).object_records.items():
                if (
                    oid not in best_records
                    or rec.source == "human"
                    or (
                        best_records[oid].source != "human"
                        and rec.confidence > best_records[oid].confidence
                    )
                ):
                    best_records[oid] = rec
        return {
            "t": round(self.world.time, 6),
            "paused": self.paused,
            "seq": self._seq,
            "mode": self.config.mode,
            "store_version": self.store.version,
            "visible_version": self.store.visible_version,
            "robots": {
                rid: {
                    "position": list(r.position),
                    "heading": r.heading,
                    "battery": r.battery,
                    "docked": r.docked,
                    "carried_object": r.carried_object,
                }
                for rid, r in self.world.robots.items()
            },
            "stations": {
                sid: {"position": list(s.position)} for sid, s in self.world.stations.items()
            },
            "objects": {oid: rec.to_dict() for oid, rec in best_records.items()},
            "links": sorted(f"{a}|{b}" for a, b in self._link_up),
            "knowledge": {
                "graph": self.store.visible_graph.to_dict(),
                "taxonomy": self.store.visible_taxonomy.to_dict(),
            },
        }

    def close(self):
        if self._log_file:
            self._log_file.close()
            self._log_file = None


# --- leaf registry -----------------------------------------------------------


def _planar(a, b):
    return math.hypot(a[0] - b[0], a[1] - b[1])


def _build_registry(engine: Engine, rid: str) -> LeafRegistry:
    world = engine.world

    def robot():
        return world.robots[rid]

    def goto(bb, target, standoff):
        """Stage a motion command toward target; True when arrived."""
        r = robot()
        if r.docked:
            bb["command"] = {"cmd": "undock"}
            return False
        dx = target[0] - r.position[0]
        dy = target[1] - r.position[1]
        d = math.hypot(dx, dy)
        heading = math.atan2(dy, dx) if d > 1e-9 else r.heading
        if d <= standoff + GOAL_TOLERANCE:
            bb["command"] = {"cmd": "hold", "heading": heading}
            return True
        speed = world.params.max_speed
        bb["command"] = {
            "cmd": "set_velocity",
            "v": (dx / d * speed, dy / d * speed, 0.0),
            "heading": heading,
        }
        return False

    def follow(bb, state, waypoints):
        i = state.setdefault("i", 0)
        while i < len(waypoints):
            if goto(bb, waypoints[i], 0.0):
                i += 1
                state["i"] = i
                continue
            return RUNNING
        return SUCCESS

    # -- conditions --

    def battery_above_floor(bb, params):
        return bb["battery"] >= params.get("floor", engine.config.battery_floor)

    def target_in_view(bb, params):
        tid = params.get("target_id")
        if tid is not None:
            return tid in bb.get("visible", ())
        cls = params.get("target_class")
        if cls is not None:
            records = bb.get("records", {})
            return any(
                oid in records and records[oid].classification == cls
                for oid in bb.get("visible", ())
            )
        return True

    def dock_in_range(bb, params):
        r = robot()
        return any(
            _planar(r.position, s.position) <= DOCK_APPROACH_RANGE
            for s in world.stations.values()
        )

    def vlc_connected(bb, params):
        peer = params.get("peer") or params.get("station")
        if peer is None:
            return any(s == simlib.CONNECTED for s in bb.get("links", {}).values())
        return bb.get("links", {}).get(peer) == simlib.CONNECTED

    def detection_active(bb, params):
        return True  # detection pipeline is always healthy in this model

    # -- actions --

    def navigate_to(bb, params, state):
        target = params["position"]
        return SUCCESS if goto(bb, target, params.get("standoff", 0.5)) else RUNNING

    def follow_survey_path(bb, params, state):
        if "path" not in state:
            depth = robot().position[2]
            state["path"] = generate_survey_path(
                tuple(params["region"]), engine.scenario.lane_spacing, depth
            )
            engine.emit("SurveyStarted", {"robot": rid, "region": list(params["region"])})
        return follow(bb, state, state["path"])

    def circumnavigate(bb, params, state):
        if "path" not in state:
            tid = params.get("target_id")
            center = params.get("position")
            rec = bb.get("records", {}).get(tid)
            if rec is not None:
                center = rec.position
            state["path"] = generate_inspection_path(
                tuple(center), INSPECT_RADIUS, INSPECT_POINTS
            )
            engine.emit("InspectionStarted", {"robot": rid, "target": tid})
        return follow(bb, state, state["path"])

    def record_observation(bb, params, state):
        tid = params.get("target_id")
        if tid is None:
            cls = params.get("target_class")
            records = bb.get("records", {})
            candidates = [
                oid
                for oid in sorted(bb.get("visible", ()))
                if oid in records and records[oid].classification == cls
            ]
            tid = candidates[0] if candidates else None
        if tid is not None:
            engine.refined_observe(rid, tid)
        return SUCCESS

    def touch_target(bb, params, state):
        tid = params.get("target_id")
        engine.emit("ObjectTouched", {"robot": rid, "object": tid})
        return SUCCESS

    def grasp_target(bb, params, state):
        r = robot()
        tid = params.get("target_id")
        if tid is None:
            cls = params.get("target_class")
            records = bb.get("records", {})
            near = [
                oid
                for oid, rec in sorted(records.items())
                if rec.classification == cls
                and _planar(r.position, rec.position) <= world.params.grasp_range
            ]
            tid = near[0] if near else None
        if r.carried_object == tid and tid is not None:
            return SUCCESS
        if not r.has_manipulator or tid is None:
            return FAILURE
        obj = world.objects.get(tid)
        if obj is None or obj.collected:
            return FAILURE
        if _planar(r.position, obj.position) > world.params.grasp_range:
            if not goto(bb, obj.position, world.params.grasp_range * 0.2):
                return RUNNING
        bb["command"] = {"cmd": "grasp", "object": tid}
        return RUNNING

    def store_sample(bb, params, state):
        engine.emit(
            "SampleStored", {"robot": rid, "object": robot().carried_object}
        )
        return SUCCESS

    def align_dock(bb, params, state):
        station = _nearest_station()
        if station is None:
            return FAILURE
        arrived = goto(bb, station.position, world.params.dock_range * 0.5)
        return SUCCESS if arrived else RUNNING

    def dock(bb, params, state):
        r = robot()
        if r.docked:
            return SUCCESS
        station = _nearest_station()
        if station is None or _planar(r.position, station.position) > world.params.dock_range:
            return FAILURE
        bb["command"] = {"cmd": "dock"}
        return RUNNING

    def undock(bb, params, state):
        if not robot().docked:
            return SUCCESS
        bb["command"] = {"cmd": "undock"}
        return RUNNING

    def navigate_to_peer(bb, params, state):
        peer = params.get("peer")
        if peer is not None:
            target = world.robots[peer].position
        else:
            target = world.stations[params["station"]].position
        return SUCCESS if goto(bb, target, PEER_STANDOFF) else RUNNING

    def transfer_data(bb, params, state):
        peer = params.get("peer")
        if peer is not None:
            session = state.get("session")
            if session is None:
                peer_rt = engine.runtime.robot(peer)
                records = [peer_rt.object_records[k] for k in sorted(peer_rt.object_records)]
                session = simlib.TransferSession(
                    world, peer, rid, records, list(engine.outbox[peer])
                )
                state["session"] = session
            # Keep aiming at the peer while the transfer runs.
            goto(bb, world.robots[peer].position, PEER_STANDOFF)
            try:
                done = session.advance(world.params.dt)
            except AbyssalError:
                state.pop("session", None)
                return FAILURE
            if not done:
                return RUNNING
            engine.complete_transfer(peer, rid, session)
            return SUCCESS
        station = params.get("station")
        engine.emit(
            "ReportDelivered",
            {"robot": rid, "station": station, "metrics": engine.report_metrics(rid)},
        )
        return SUCCESS

    def share_pending_knowledge(bb, params, state):
        if bb.pop("handoff_delivered", False):
            return SUCCESS
        if not engine.outbox[rid]:
            return SUCCESS
        started = state.setdefault("t0", bb["time"])
        if bb["time"] - started > SHARE_HOLD_S:
            return SUCCESS
        # Aim the VLC head at the nearest peer robot so it can link up.
        r = robot()
        peers = [
            p
            for p in sorted(world.robots)
            if p != rid and _planar(r.position, world.robots[p].position) <= world.params.vlc_range
        ]
        if peers:
            p = world.robots[peers[0]].position
            heading = math.atan2(p[1] - r.position[1], p[0] - r.position[0])
            bb["command"] = {"cmd": "hold", "heading": heading}
        else:
            bb["command"] = {"cmd": "hold"}
        return RUNNING

    def _nearest_station():
        r = robot()
        best, best_d = None, math.inf
        for s in world.stations.values():
            d = _planar(r.position, s.position)
            if d < best_d:
                best, best_d = s, d
        return best

    return LeafRegistry(
        conditions={
            "battery_above_floor": battery_above_floor,
            "target_in_view": target_in_view,
            "dock_in_range": dock_in_range,
            "vlc_connected": vlc_connected,
            "detection_active": detection_active,
        },
        actions={
            "navigate_to": navigate_to,
            "follow_survey_path": follow_survey_path,
            "circumnavigate": circumnavigate,
            "record_observation": record_observation,
            "touch_target": touch_target,
            "grasp_target": grasp_target,
            "store_sample": store_sample,
            "align_dock": align_dock,
            "dock": dock,
            "undock": undock,
            "navigate_to_peer": navigate_to_peer,
            "transfer_data": transfer_data,
            "share_pending_knowledge": share_pending_knowledge,
        },
    )


def run_scenario(scenario, until_t=None, until_event=None, log_path=None):
    engine = Engine(scenario, log_path=log_path)
    try:
        engine.run(until_t=until_t, until_event=until_event)
    finally:
        engine.close()
    return engine
