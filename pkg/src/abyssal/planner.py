"""Mission validation, behavior-tree synthesis, and context switching.

Validation checks each task three ways: capability (the action is in the
subject robot's capability closure), affordance (the target's class affords
the action), and resource (projected battery after a conservative
straight-line transit stays above the floor).  The ablation modes drop
checks: KG_ONLY skips the affordance check, STATE_ONLY keeps only the
resource check.  Reference errors (unknown robot/object/class/station) are
reported in every mode.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .bt import Action, BehaviorTree, Condition, Monitor, Sequence
from .errors import BindError, TemplateMissing, ValidationFailed
from .knowledge import OBJECT_ACTIONS, UNKNOWN_CLASS, ActionKind, UnknownClass
from .mission import PRIORITY_RANK, Mission, Task

FULL = "FULL"
KG_ONLY = "KG_ONLY"
STATE_ONLY = "STATE_ONLY"

MODES = (FULL, KG_ONLY, STATE_ONLY)

SAFETY_RANK = PRIORITY_RANK["safety"]


@dataclass
class PlannerConfig:
    mode: str = FULL
    battery_floor: float = 20.0
    refresh_interval: float = 1.0

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r}")
        if not 0 < self.battery_floor < 100:
            raise ValueError("battery_floor must be in (0, 100)")
        if self.refresh_interval <= 0:
            raise ValueError("refresh_interval must be > 0")


@dataclass
class WorldView:
    """Read-only snapshot the planner validates against.

    ``objects`` maps object id -> (classification or Unknown, position);
    classification reflects what the validating robot currently knows, not
    ground truth.
    """

    graph: object
    taxonomy: object
    robots: dict  # robot id -> {"battery": float, "pose": (x, y, z, heading)}
    objects: dict = field(default_factory=dict)
    stations: dict = field(default_factory=dict)  # station id -> {"position": (x,y,z)}
    drain_move: float = 0.05  # % per meter


FEASIBLE = "Feasible"
INFEASIBLE_CAPABILITY = "InfeasibleCapability"
INFEASIBLE_AFFORDANCE = "InfeasibleAffordance"
INFEASIBLE_RESOURCE = "InfeasibleResource"
UNKNOWN_REFERENCE = "UnknownReference"


@dataclass(frozen=True)
class Verdict:
    code: str
    detail: str = ""

    @property
    def feasible(self) -> bool:
        return self.code == FEASIBLE


@dataclass
class ValidationReport:
    mission_id: str
    mode: str
    verdicts: list

    @property
    def feasible(self) -> bool:
        return all(v.feasible for v in self.verdicts)

    def summary(self) -> str:
        if self.feasible:
            return "Feasible"
        first = next(v for v in self.verdicts if not v.feasible)
        return f"{first.code}({first.detail})"

    def to_dict(self) -> dict:
        return {
            "mission_id": self.mission_id,
            "mode": self.mode,
            "overall": "Feasible" if self.feasible else "Infeasible",
            "tasks": [{"code": v.code, "detail": v.detail} for v in self.verdicts],
        }


def _planar_distance(a, b) -> float:
    return math.hypot(a[0] - b[0], a[1] - b[1])


def _target_class(task: Task, view: WorldView):
    """Resolve a task target to (class name or None, UnknownReference detail
    or None).  None class means "no class to check"."""
    target = task.target
    if target is None:
        return None, None
    if target.kind == "class":
        if target.name not in view.taxonomy.classes:
            return None, f"class {target.name}"
        return target.name, None
    if target.kind == "object":
        if target.name not in view.objects:
            return None, f"object {target.name}"
        cls = view.objects[target.name][0]
        if cls == UNKNOWN_CLASS or cls is None:
            return None, None
        if cls not in view.taxonomy.classes:
            return None, f"class {cls}"
        return cls, None
    if target.kind == "robot":
        if target.name not in view.robots:
            return None, f"robot {target.name}"
        return None, None
    if target.kind == "station":
        if target.name not in view.stations:
            return None, f"station {target.name}"
        return None, None
    return None, None  # region


def _target_position(task: Task, view: WorldView):
    """Best-known target position, or None when the location is not yet
    known (conservative zero-distance transit estimate)."""
    target = task.target
    if target is None:
        if task.action == ActionKind.DOCK and view.stations:
            pose = view.robots[task.subject]["pose"]
            return min(
                (s["position"] for s in view.stations.values()),
                key=lambda p: _planar_distance(pose, p),
            )
        return None
    if target.kind == "object":
        return view.objects[target.name][1]
    if target.kind == "region":
        cx, cy, _, _ = target.region
        return (cx, cy, 0.0)
    if target.kind == "robot":
        return view.robots[target.name]["pose"][:3]
    if target.kind == "station":
        return view.stations[target.name]["position"]
    if target.kind == "class":
        positions = [
            pos for cls, pos in view.objects.values() if cls == target.name
        ]
        if positions:
            pose = view.robots[task.subject]["pose"]
            return min(positions, key=lambda p: _planar_distance(pose, p))
        return None
    return None


def validate_task(task: Task, view: WorldView, config: PlannerConfig) -> Verdict:
    if task.subject not in view.robots:
        return Verdict(UNKNOWN_REFERENCE, f"robot {task.subject}")
    cls, missing = _target_class(task, view)
    if missing is not None:
        return Verdict(UNKNOWN_REFERENCE, missing)

    if config.mode in (FULL, KG_ONLY):
        closure = view.graph.capability_closure(task.subject)
        if task.action not in closure:
            return Verdict(
                INFEASIBLE_CAPABILITY, f"{task.subject} cannot {task.action.value}"
            )

    if config.mode == FULL and cls is not None and task.action in OBJECT_ACTIONS:
        if not view.taxonomy.affords(cls, task.action):
            return Verdict(
                INFEASIBLE_AFFORDANCE, f"{cls} does not afford {task.action.value}"
            )

    # Resource check runs in every mode (runtime state is always available).
    robot = view.robots[task.subject]
    position = _target_position(task, view)
    distance = 0.0
    if position is not None:
        distance = _planar_distance(robot["pose"], position)
    projected = robot["battery"] - distance * view.drain_move
    if projected < config.battery_floor:
        return Verdict(
            INFEASIBLE_RESOURCE,
            f"projected battery {projected:.1f}% below floor {config.battery_floor:.0f}%",
        )
    return Verdict(FEASIBLE)


def validate_mission(
    mission: Mission, view: WorldView, config: PlannerConfig
) -> ValidationReport:
    verdicts = [validate_task(t, view, config) for t in mission.tasks]
    return ValidationReport(mission.mission_id, config.mode, verdicts)


# --- Behavior-tree templates -------------------------------------------------
#
# Fixed per-action templates; the required leaf sequence doubles as the
# ground truth for the completeness checker.  ``guards`` lists
# (condition id, action id) pairs where the condition must precede the
# action.

BATTERY_GUARD = ("condition", "battery_above_floor")

TEMPLATE_LEAVES = {
    ActionKind.OBSERVE: [
        BATTERY_GUARD,
        ("action", "navigate_to"),
        ("condition", "target_in_view"),
        ("action", "circumnavigate"),
        ("action", "record_observation"),
    ],
    ActionKind.TOUCH: [
        BATTERY_GUARD,
        ("action", "navigate_to"),
        ("condition", "target_in_view"),
        ("action", "touch_target"),
    ],
    ActionKind.MANIPULATE: [
        BATTERY_GUARD,
        ("action", "navigate_to"),
        ("condition", "target_in_view"),
        ("action", "grasp_target"),
        ("action", "store_sample"),
    ],
    ActionKind.SURVEY: [
        BATTERY_GUARD,
        ("monitor", "detection_active"),
        ("action", "follow_survey_path"),
    ],
    ActionKind.NAVIGATE: [
        BATTERY_GUARD,
        ("action", "navigate_to"),
    ],
    ActionKind.DOCK: [
        ("condition", "dock_in_range"),
        ("action", "align_dock"),
        ("action", "dock"),
    ],
    ActionKind.UNDOCK: [
        ("action", "undock"),
    ],
    ActionKind.COMMUNICATE: [
        BATTERY_GUARD,
        ("action", "navigate_to_peer"),
        ("condition", "vlc_connected"),
        ("action", "transfer_data"),
    ],
}

TEMPLATE_GUARDS = {
    ActionKind.OBSERVE: [
        ("battery_above_floor", "navigate_to"),
        ("target_in_view", "circumnavigate"),
    ],
    ActionKind.TOUCH: [
        ("battery_above_floor", "navigate_to"),
        ("target_in_view", "touch_target"),
    ],
    ActionKind.MANIPULATE: [
        ("battery_above_floor", "navigate_to"),
        ("target_in_view", "grasp_target"),
    ],
    ActionKind.SURVEY: [("battery_above_floor", "follow_survey_path")],
    ActionKind.NAVIGATE: [("battery_above_floor", "navigate_to")],
    ActionKind.DOCK: [("dock_in_range", "align_dock")],
    ActionKind.UNDOCK: [],
    ActionKind.COMMUNICATE: [("vlc_connected", "transfer_data")],
}


def _bind_target_params(task: Task, view: WorldView) -> dict:
    target = task.target
    params = {}
    if target is None:
        return params
    if target.kind == "object":
        if target.name not in view.objects:
            raise BindError(f"object {target.name} has no known record")
        params["target_id"] = target.name
        params["position"] = list(view.objects[target.name][1])
    elif target.kind == "class":
        position = _target_position(task, view)
        if position is None:
            raise BindError(f"no known instance of class {target.name}")
        params["target_class"] = target.name
        params["position"] = list(position)
    elif target.kind == "region":
        params["region"] = list(target.region)
    elif target.kind == "robot":
        params["peer"] = target.name
    elif target.kind == "station":
        if target.name not in view.stations:
            raise BindError(f"unknown station {target.name}")
        params["station"] = target.name
        params["position"] = list(view.stations[target.name]["position"])
    return params


def synthesize_bt(task: Task, view: WorldView, config: PlannerConfig) -> BehaviorTree:
    """Instantiate the task's template with parameters bound from the view."""
    if task.action not in TEMPLATE_LEAVES:
        raise TemplateMissing(str(task.action))
    floor = {"floor": config.battery_floor}
    bind = _bind_target_params(task, view)

    if task.action == ActionKind.SURVEY:
        region = bind.get("region")
        if region is None:
            raise BindError("survey without region target needs a default region")
        root = Sequence(
            [
                Condition("battery_above_floor", floor),
                Monitor(
                    Action("follow_survey_path", {"region": region}),
                    "detection_active",
                ),
            ]
        )
    elif task.action == ActionKind.DOCK:
        root = Sequence(
            [
                Condition("dock_in_range", {}),
                Action("align_dock", {}),
                Action("dock", {}),
            ]
        )
    elif task.action == ActionKind.UNDOCK:
        root = Sequence([Action("undock", {})])
    elif task.action == ActionKind.NAVIGATE:
        root = Sequence(
            [
                Condition("battery_above_floor", floor),
                Action("navigate_to", bind),
            ]
        )
    elif task.action == ActionKind.COMMUNICATE:
        root = Sequence(
            [
                Condition("battery_above_floor", floor),
                Action("navigate_to_peer", bind),
                Condition("vlc_connected", bind),
                Action("transfer_data", bind),
            ]
        )
    elif task.action == ActionKind.OBSERVE:
        root = Sequence(
            [
                Condition("battery_above_floor", floor),
                Action("navigate_to", {**bind, "standoff": 4.0}),
                Condition("target_in_view", bind),
                Action("circumnavigate", bind),
                Action("record_observation", bind),
            ]
        )
    elif task.action == ActionKind.TOUCH:
        root = Sequence(
            [
                Condition("battery_above_floor", floor),
                Action("navigate_to", {**bind, "standoff": 0.4}),
                Condition("target_in_view", bind),
                Action("touch_target", bind),
            ]
        )
    else:  # MANIPULATE
        root = Sequence(
            [
                Condition("battery_above_floor", floor),
                Action("navigate_to", {**bind, "standoff": 0.4}),
                Condition("target_in_view", bind),
                Action("grasp_target", bind),
                Action("store_sample", bind),
            ]
        )
    return BehaviorTree(root)


@dataclass
class MissionPlan:
    mission_id: str
    trees: list  # [(Task, BehaviorTree)]
    priority: int

    def behavior_tree(self) -> BehaviorTree:
        """All task trees joined into one top-level Sequence."""
        return BehaviorTree(Sequence([bt.root for _, bt in self.trees]))


def plan_mission(
    mission: Mission, view: WorldView, config: PlannerConfig
) -> MissionPlan:
    report = validate_mission(mission, view, config)
    if not report.feasible:
        raise ValidationFailed(report)
    trees = [(t, synthesize_bt(t, view, config)) for t in mission.tasks]
    return MissionPlan(mission.mission_id, trees, PRIORITY_RANK[mission.priority])


@dataclass
class CompletenessReport:
    fraction: float
    per_task: list  # [(task index, bool)]

    def to_dict(self):
        return {
            "fraction": self.fraction,
            "tasks": [{"index": i, "complete": ok} for i, ok in self.per_task],
        }


def _tree_complete(tree: BehaviorTree, action: ActionKind) -> bool:
    required = TEMPLATE_LEAVES.get(action)
    if required is None:
        return False
    leaves = tree.leaves()
    # Required leaves must appear in order.
    pos = 0
    for want in required:
        while pos < len(leaves) and leaves[pos] != want:
            pos += 1
        if pos == len(leaves):
            return False
        pos += 1
    # Every guard condition must come before the action it protects.
    index = {}
    for i, (kind, lid) in enumerate(leaves):
        index.setdefault((kind, lid), i)
    for cond, act in TEMPLATE_GUARDS[action]:
        ci = index.get(("condition", cond), index.get(("monitor", cond)))
        ai = index.get(("action", act))
        if ci is None or ai is None or ci > ai:
            return False
    return True


def check_completeness(trees_by_task, mission: Mission) -> CompletenessReport:
    """``trees_by_task``: mapping of task index -> BehaviorTree (missing
    entries count incomplete)."""
    per_task = []
    for i, task in enumerate(mission.tasks):
        tree = trees_by_task.get(i)
        ok = tree is not None and _tree_complete(tree, task.action)
        per_task.append((i, ok))
    total = len(mission.tasks)
    fraction = sum(1 for _, ok in per_task if ok) / total if total else 0.0
    return CompletenessReport(fraction, per_task)


def check_plan_completeness(plan: MissionPlan, mission: Mission) -> CompletenessReport:
    return check_completeness(
        {i: bt for i, (_, bt) in enumerate(plan.trees)}, mission
    )


# --- Context-driven behavior switching ---------------------------------------

KEEP_CURRENT = "KeepCurrent"
OVERRIDE = "Override"
RESUME = "Resume"


@dataclass
class SwitchDecision:
    kind: str
    plan_id: str | None = None
    reason: str = ""


@dataclass
class Context:
    battery: float
    detections: int = 0
    vlc_window: bool = False
    human_request: bool = False


def build_return_to_dock(robot: str, view: WorldView) -> BehaviorTree:
    """Safety plan: head to the nearest station, share anything pending over
    VLC, then dock."""
    pose = view.robots[robot]["pose"]
    if not view.stations:
        raise BindError("no station to return to")
    station = min(
        view.stations, key=lambda s: _planar_distance(pose, view.stations[s]["position"])
    )
    position = list(view.stations[station]["position"])
    return BehaviorTree(
        Sequence(
            [
                Action("navigate_to", {"position": position, "standoff": 1.5}),
                Action("align_dock", {"station": station}),
                Action("share_pending_knowledge", {"station": station}),
                Action("dock", {"station": station}),
            ]
        )
    )


def safety_plan_id(robot: str) -> str:
    return f"safety_return:{robot}"


def context_decide(
    context: Context,
    active,  # StackEntry or None
    candidates,  # [(plan id, priority)]
    config: PlannerConfig,
    pending,  # plan ids suspended below the active entry
    safety_pending: bool = False,
) -> SwitchDecision:
    active_priority = active.priority if active is not None else -1
    if context.battery < config.battery_floor:
        if active_priority < SAFETY_RANK and not safety_pending:
            return SwitchDecision(OVERRIDE, None, reason="low battery")
        return SwitchDecision(KEEP_CURRENT)
    best = None
    for plan_id, priority in candidates:
        if priority > active_priority and (best is None or priority > best[1]):
            best = (plan_id, priority)
    if best is not None:
        return SwitchDecision(OVERRIDE, best[0], reason="higher priority candidate")
    if active is None and pending:
        return SwitchDecision(RESUME, pending[0])
    return SwitchDecision(KEEP_CURRENT)
