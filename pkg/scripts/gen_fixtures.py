"""Regenerate the bundled scenario files."""

import json
from pathlib import Path

OUT = Path(__file__).resolve().parents[1] / "src" / "abyssal" / "scenarios"

SENSORS = ["rgb_camera", "depth_camera", "vlc_modem"]

nodes = (
    [{"id": r, "kind": "Robot", "attributes": {"depth_limit_m": 100}} for r in ("alpha", "beta")]
    + [{"id": s, "kind": "Sensor", "attributes": {}} for s in SENSORS]
    + [{"id": a, "kind": "Actuator", "attributes": {}} for a in ("manipulator", "thrusters")]
    + [
        {"id": c, "kind": "Capability", "attributes": {}}
        for c in ("visual_imaging", "depth_sensing", "optical_comms", "grasping", "locomotion")
    ]
    + [
        {"id": a, "kind": "Action", "attributes": {}}
        for a in ("observe", "touch", "manipulate", "survey", "navigate", "dock", "undock", "communicate")
    ]
)

edges = []
for robot in ("alpha", "beta"):
    for s in SENSORS:
        edges.append({"from": robot, "to": s, "relation": "hasSensor"})
    edges.append({"from": robot, "to": "thrusters", "relation": "hasActuator"})
edges.append({"from": "beta", "to": "manipulator", "relation": "hasActuator"})

for src, dst in [
    ("rgb_camera", "visual_imaging"),
    ("depth_camera", "depth_sensing"),
    ("vlc_modem", "optical_comms"),
    ("manipulator", "grasping"),
    ("thrusters", "locomotion"),
]:
    edges.append({"from": src, "to": dst, "relation": "provides"})

for cap, act in [
    ("visual_imaging", "observe"),
    ("visual_imaging", "survey"),
    ("grasping", "touch"),
    ("grasping", "manipulate"),
    ("locomotion", "navigate"),
    ("locomotion", "dock"),
    ("locomotion", "undock"),
    ("optical_comms", "communicate"),
]:
    edges.append({"from": cap, "to": act, "relation": "enables"})

for act, caps in {
    "observe": ["visual_imaging", "depth_sensing", "locomotion"],
    "survey": ["visual_imaging", "locomotion"],
    "touch": ["grasping", "locomotion"],
    "manipulate": ["grasping", "locomotion"],
    "navigate": ["locomotion"],
    "dock": ["locomotion"],
    "undock": ["locomotion"],
    "communicate": ["optical_comms"],
}.items():
    for cap in caps:
        edges.append({"from": act, "to": cap, "relation": "requires"})

GRAPH = {"nodes": nodes, "edges": edges}

# Affordance table: only the cube-observable / cylinder-not-observable facts
# are load-bearing; the rest is scenario data.  lost_mooring is a synthetic
# composite class.
TAXONOMY = {
    "classes": [
        {"name": "sphere", "primitives": ["sphere"], "affordances": ["observe"]},
        {"name": "cylinder", "primitives": ["cylinder"], "affordances": ["touch", "manipulate"]},
        {"name": "cube", "primitives": ["cube"], "affordances": ["observe", "touch", "manipulate"]},
        {"name": "cone", "primitives": ["cone"], "affordances": ["observe", "touch"]},
        {"name": "torus", "primitives": ["torus"], "affordances": ["observe", "manipulate"]},
        {"name": "lost_mooring", "primitives": ["cylinder", "torus"], "affordances": ["observe"]},
    ]
}

OBJECTS = [
    {"id": "sphere_1", "class": "sphere", "position": [-10.0, -4.5, -8.0]},
    {"id": "cube_2", "class": "cube", "position": [-2.0, -5.5, -8.0]},
    {"id": "cylinder_3", "class": "cylinder", "position": [8.0, -4.0, -8.0]},
    {"id": "cone_4", "class": "cone", "position": [5.0, 0.5, -8.0]},
    {"id": "torus_5", "class": "torus", "position": [0.0, 5.5, -8.0]},
]

STATIONS = [
    {"id": "dock1", "position": [0.0, -15.0, -6.0], "omni": True},
    {"id": "dock2", "position": [6.0, -15.0, -6.0], "omni": True},
]

BASE_PARAMS = {
    "dt": 0.1,
    "max_speed": 1.0,
    "drain_idle": 0.01,
    "drain_move": 0.05,
    "recharge": 1.0,
    "sensor_range": 8.0,
    "fov_deg": 90.0,
    "vlc_range": 10.0,
    "vlc_half_angle_deg": 30.0,
    "battery_floor": 20.0,
    "refresh_interval": 1.0,
    "lane_spacing": 5.0,
    "mode": "FULL",
    "stations": STATIONS,
}

two_auv = {
    "schema": "abyssal-scenario/1",
    "seed": 7,
    "robots": [
        {"id": "alpha", "start": [-20.0, -5.0, -6.0], "heading": 0.0, "battery": 100.0},
        {"id": "beta", "start": [6.0, -15.0, -6.0], "heading": 1.5707963, "battery": 100.0, "docked": True},
    ],
    "graph": GRAPH,
    "taxonomy": TAXONOMY,
    "objects": OBJECTS,
    "params": dict(BASE_PARAMS),
}

SURVEY_MISSION = "mission survey_area normal\nalpha survey region 0 0 40 10\n"
DEPLOY_MISSION = (
    "mission beta_link communication\nbeta undock\nbeta communicate robot alpha\n"
)
HANDOFF_MISSION = (
    "mission inspect_find normal\n"
    "beta observe object cylinder_3\n"
    "beta communicate station dock1\n"
)

replay_demo = dict(two_auv)
replay_demo["robots"] = [
    {
        "id": "alpha",
        "start": [-20.0, -5.0, -6.0],
        "heading": 0.0,
        "battery": 90.0,
        "sense_overrides": {"cylinder_3": "cube"},
    },
    {"id": "beta", "start": [6.0, -15.0, -6.0], "heading": 1.5707963, "battery": 100.0, "docked": True},
]
replay_demo["params"] = dict(BASE_PARAMS)
replay_demo["params"]["script"] = [
    {"t": 0.0, "type": "submit_mission", "robot": "alpha", "mission": SURVEY_MISSION},
    {"t": 110.0, "type": "set_battery", "robot": "alpha", "value": 15.0},
    {"t": 111.0, "type": "queue_handoff", "robot": "alpha", "mission": HANDOFF_MISSION},
    {"t": 135.0, "type": "deploy_robot", "robot": "beta", "mission": DEPLOY_MISSION},
]

OUT.mkdir(parents=True, exist_ok=True)
(OUT / "two_auv.json").write_text(json.dumps(two_auv, indent=2) + "\n")
(OUT / "replay_demo.json").write_text(json.dumps(replay_demo, indent=2) + "\n")
print("wrote", OUT / "two_auv.json")
print("wrote", OUT / "replay_demo.json")
