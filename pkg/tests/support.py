"""Shared test helpers: random world/mission generation for equivalence
testing, plus small graph builders."""

from __future__ import annotations

import random

from abyssal.knowledge import (
    PRIMITIVES,
    ActionKind,
    Edge,
    KnowledgeGraph,
    Node,
    ObjectClass,
    Taxonomy,
)
from abyssal.mission import Mission, Task, TargetRef
from abyssal.planner import WorldView

ACTION_IDS = [a.value for a in ActionKind]


def two_robot_graph() -> KnowledgeGraph:
    """Minimal graph: r_survey has a camera, r_arm adds a manipulator."""
    g = KnowledgeGraph()
    for rid in ("r_survey", "r_arm"):
        g.add_node(Node(rid, "Robot"))
    g.add_node(Node("camera", "Sensor"))
    g.add_node(Node("gripper", "Actuator"))
    g.add_node(Node("thruster", "Actuator"))
    g.add_node(Node("imaging", "Capability"))
    g.add_node(Node("grasping", "Capability"))
    g.add_node(Node("locomotion", "Capability"))
    for act in ("observe", "manipulate", "navigate"):
        g.add_node(Node(act, "Action"))
    for rid in ("r_survey", "r_arm"):
        g.add_edge(Edge(rid, "camera", "hasSensor"))
        g.add_edge(Edge(rid, "thruster", "hasActuator"))
    g.add_edge(Edge("r_arm", "gripper", "hasActuator"))
    g.add_edge(Edge("camera", "imaging", "provides"))
    g.add_edge(Edge("gripper", "grasping", "provides"))
    g.add_edge(Edge("thruster", "locomotion", "provides"))
    g.add_edge(Edge("imaging", "observe", "enables"))
    g.add_edge(Edge("grasping", "manipulate", "enables"))
    g.add_edge(Edge("locomotion", "navigate", "enables"))
    g.add_edge(Edge("observe", "imaging", "requires"))
    g.add_edge(Edge("manipulate", "grasping", "requires"))
    g.add_edge(Edge("navigate", "locomotion", "requires"))
    return g


def random_case(rng: random.Random):
    """One random (WorldView, Mission) pair for planner/oracle equivalence.

    Graphs stay well under 50 nodes; names are sometimes dangling on
    purpose so UnknownReference paths get exercised.
    """
    robot_ids = [f"r{i}" for i in range(rng.randint(1, 3))]
    sensor_ids = [f"s{i}" for i in range(rng.randint(1, 3))]
    actuator_ids = [f"a{i}" for i in range(rng.randint(1, 3))]
    cap_ids = [f"c{i}" for i in range(rng.randint(1, 5))]
    action_ids = rng.sample(ACTION_IDS, rng.randint(1, len(ACTION_IDS)))

    graph = KnowledgeGraph()
    for rid in robot_ids:
        graph.add_node(Node(rid, "Robot"))
    for sid in sensor_ids:
        graph.add_node(Node(sid, "Sensor"))
    for aid in actuator_ids:
        graph.add_node(Node(aid, "Actuator"))
    for cid in cap_ids:
        graph.add_node(Node(cid, "Capability"))
    for act in action_ids:
        graph.add_node(Node(act, "Action"))

    for rid in robot_ids:
        for sid in sensor_ids:
            if rng.random() < 0.6:
                graph.add_edge(Edge(rid, sid, "hasSensor"))
        for aid in actuator_ids:
            if rng.random() < 0.6:
                graph.add_edge(Edge(rid, aid, "hasActuator"))
    for dev in sensor_ids + actuator_ids:
        for cid in cap_ids:
            if rng.random() < 0.5:
                graph.add_edge(Edge(dev, cid, "provides"))
    for cid in cap_ids:
        for act in action_ids:
            if rng.random() < 0.5:
                graph.add_edge(Edge(cid, act, "enables"))
    for act in action_ids:
        for cid in cap_ids:
            if rng.random() < 0.3:
                graph.add_edge(Edge(act, cid, "requires"))

    primitives = rng.sample(PRIMITIVES, rng.randint(1, len(PRIMITIVES)))
    classes = []
    for p in primitives:
        affordances = frozenset(
            a
            for a in (ActionKind.OBSERVE, ActionKind.TOUCH, ActionKind.MANIPULATE)
            if rng.random() < 0.5
        )
        classes.append(ObjectClass(p, (p,), affordances))
    taxonomy = Taxonomy(classes)
    class_names = list(taxonomy.classes)

    objects = {}
    for i in range(rng.randint(0, 4)):
        if class_names and rng.random() < 0.8:
            cls = rng.choice(class_names)
        else:
            cls = "mystery"  # class name outside the taxonomy
        objects[f"o{i}"] = (
            cls,
            (rng.uniform(-80, 80), rng.uniform(-80, 80), -5.0),
        )

    stations = {
        f"st{i}": {"position": (rng.uniform(-30, 30), rng.uniform(-30, 30), -5.0)}
        for i in range(rng.randint(0, 2))
    }

    robots = {
        rid: {
            "battery": rng.uniform(5, 100),
            "pose": (rng.uniform(-50, 50), rng.uniform(-50, 50), -5.0, 0.0),
        }
        for rid in robot_ids
    }

    view = WorldView(
        graph=graph,
        taxonomy=taxonomy,
        robots=robots,
        objects=objects,
        stations=stations,
        drain_move=0.05,
    )

    tasks = []
    for _ in range(rng.randint(1, 3)):
        subject = rng.choice(robot_ids + ["ghost"]) if rng.random() < 0.15 else rng.choice(robot_ids)
        action = ActionKind(rng.choice(ACTION_IDS))
        target = _random_target(rng, action, objects, class_names, robot_ids, stations)
        tasks.append(Task(subject, action, target))
    mission = Mission("random", "normal", tuple(tasks))
    return view, mission


def _random_target(rng, action, objects, class_names, robot_ids, stations):
    def obj_name():
        pool = list(objects) + ["phantom"]
        return rng.choice(pool)

    def class_name():
        pool = class_names + ["mystery"]
        return rng.choice(pool) if pool else "mystery"

    if action in (ActionKind.OBSERVE, ActionKind.TOUCH, ActionKind.MANIPULATE):
        if rng.random() < 0.5:
            return TargetRef("object", name=obj_name())
        return TargetRef("class", name=class_name())
    if action == ActionKind.SURVEY:
        if rng.random() < 0.5:
            return None
        return TargetRef(
            "region",
            region=(rng.uniform(-50, 50), rng.uniform(-50, 50), rng.uniform(1, 60), rng.uniform(1, 60)),
        )
    if action == ActionKind.NAVIGATE:
        kind = rng.choice(["object", "class", "region", "robot", "station"])
        if kind == "object":
            return TargetRef("object", name=obj_name())
        if kind == "class":
            return TargetRef("class", name=class_name())
        if kind == "region":
            return TargetRef(
                "region", region=(rng.uniform(-50, 50), rng.uniform(-50, 50), 10.0, 10.0)
            )
        if kind == "robot":
            return TargetRef("robot", name=rng.choice(robot_ids + ["ghost"]))
        return TargetRef("station", name=rng.choice(list(stations) + ["nowhere"]))
    if action == ActionKind.COMMUNICATE:
        if rng.random() < 0.5:
            return TargetRef("robot", name=rng.choice(robot_ids + ["ghost"]))
        return TargetRef("station", name=rng.choice(list(stations) + ["nowhere"]))
    return None  # dock / undock
