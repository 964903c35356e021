"""Brute-force feasibility oracle, independent of the planner.

Used as ground truth for the ablation harness and the equivalence property
tests.  Deliberately re-derives everything by exhaustive scans over the raw
edge list and taxonomy table; it shares no reachability or lookup code with
``planner``/``knowledge`` query paths.
"""

from __future__ import annotations

import math

from .knowledge import OBJECT_ACTIONS, UNKNOWN_CLASS, parse_action_kind
from .mission import Mission, Task


def _edges(graph):
    return [(e.src, e.dst, e.relation) for e in graph.edges]


def _robot_actions(graph, robot: str):
    """Every action kind the robot can reach, by exhaustive enumeration."""
    edges = _edges(graph)
    devices = []
    for src, dst, rel in edges:
        if src == robot and rel in ("hasSensor", "hasActuator"):
            devices.append(dst)
    provided = []
    for src, dst, rel in edges:
        if rel == "provides":
            for d in devices:
                if src == d:
                    provided.append(dst)
    feasible = set()
    for node in graph.nodes.values():
        if node.kind != "Action":
            continue
        kind = parse_action_kind(node.id)
        if kind is None:
            continue
        all_required_met = True
        for src, dst, rel in edges:
            if rel == "requires" and src == node.id:
                if dst not in provided:
                    all_required_met = False
        enabled = False
        for src, dst, rel in edges:
            if rel == "enables" and dst == node.id and src in provided:
                enabled = True
        if all_required_met and enabled:
            feasible.add(kind)
    return feasible


def _class_affords(taxonomy, class_name, action) -> bool:
    for cls in taxonomy.classes.values():
        if cls.name == class_name:
            return action in cls.affordances
    return False


def oracle_task_feasible(task: Task, view, battery_floor: float) -> bool:
    """Ground-truth feasibility of one task against a world view."""
    if task.subject not in view.robots:
        return False

    # Reference resolution.
    cls = None
    target = task.target
    if target is not None:
        if target.kind == "class":
            if target.name not in view.taxonomy.classes:
                return False
            cls = target.name
        elif target.kind == "object":
            if target.name not in view.objects:
                return False
            known = view.objects[target.name][0]
            if known not in (None, UNKNOWN_CLASS):
                if known not in view.taxonomy.classes:
                    return False
                cls = known
        elif target.kind == "robot" and target.name not in view.robots:
            return False
        elif target.kind == "station" and target.name not in view.stations:
            return False

    if task.action not in _robot_actions(view.graph, task.subject):
        return False

    if cls is not None and task.action in OBJECT_ACTIONS:
        if not _class_affords(view.taxonomy, cls, task.action):
            return False

    # Resource: straight-line transit cost against the battery floor.
    pose = view.robots[task.subject]["pose"]
    position = None
    if target is None:
        from .knowledge import ActionKind

        if task.action == ActionKind.DOCK and view.stations:
            best = None
            for s in view.stations.values():
                d = math.hypot(pose[0] - s["position"][0], pose[1] - s["position"][1])
                if best is None or d < best:
                    best = d
                    position = s["position"]
    elif target.kind == "object":
        position = view.objects[target.name][1]
    elif target.kind == "region":
        position = (target.region[0], target.region[1], 0.0)
    elif target.kind == "robot":
        position = view.robots[target.name]["pose"][:3]
    elif target.kind == "station":
        position = view.stations[target.name]["position"]
    elif target.kind == "class":
        best = None
        for known_cls, p in view.objects.values():
            if known_cls == target.name:
                d = math.hypot(pose[0] - p[0], pose[1] - p[1])
                if best is None or d < best:
                    best = d
                    position = p
    distance = 0.0
    if position is not None:
        distance = math.hypot(pose[0] - position[0], pose[1] - position[1])
    projected = view.robots[task.subject]["battery"] - distance * view.drain_move
    return projected >= battery_floor


def oracle_mission_feasible(mission: Mission, view, battery_floor: float) -> bool:
    return all(oracle_task_feasible(t, view, battery_floor) for t in mission.tasks)
