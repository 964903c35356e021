"""Mission file format: parse, validate arities, render canonically.

Grammar (one task per line, ``#`` starts a comment):

    mission <id> <priority>
    <subject> <action> [<target-kind> <args...>]

Target kinds: ``object <id>``, ``class <name>``,
``region <cx> <cy> <width> <height>``, ``robot <id>``, ``station <id>``.
``collect`` is accepted as an alias for ``manipulate``.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ArityError, MissionSyntaxError, UnknownAction
from .knowledge import ActionKind, parse_action_kind

PRIORITIES = ("safety", "human", "communication", "normal")

PRIORITY_RANK = {p: i for i, p in enumerate(reversed(PRIORITIES))}

MEDIA_LABEL = "abyssal-mission/1"


@dataclass(frozen=True)
class TargetRef:
    kind: str  # object | class | region | robot | station
    name: str | None = None
    region: tuple | None = None  # (cx, cy, width, height)


@dataclass(frozen=True)
class Task:
    subject: str
    action: ActionKind
    target: TargetRef | None = None


@dataclass(frozen=True)
class Mission:
    mission_id: str
    priority: str
    tasks: tuple


# Target requirements per action: "required", "optional", "forbidden",
# plus the target kinds each action accepts.
_TARGET_RULES = {
    ActionKind.OBSERVE: ("required", {"object", "class"}),
    ActionKind.TOUCH: ("required", {"object", "class"}),
    ActionKind.MANIPULATE: ("required", {"object", "class"}),
    ActionKind.SURVEY: ("optional", {"region"}),
    ActionKind.NAVIGATE: ("required", {"object", "class", "region", "robot", "station"}),
    ActionKind.DOCK: ("forbidden", set()),
    ActionKind.UNDOCK: ("forbidden", set()),
    ActionKind.COMMUNICATE: ("required", {"robot", "station"}),
}


def _fmt(x: float) -> str:
    # Canonical numeral: integer-valued floats render without the decimal part.
    return str(int(x)) if float(x) == int(x) else repr(float(x))


def _parse_target(words, line_no):
    kind = words[0]
    args = words[1:]
    if kind == "region":
        if len(args) != 4:
            raise ArityError(
                "region target takes 4 numbers: cx cy width height", line=line_no, column=1
            )
        try:
            cx, cy, w, h = (float(a) for a in args)
        except ValueError:
            raise ArityError("region arguments must be numeric", line=line_no, column=1)
        if w <= 0 or h <= 0:
            raise ArityError("region width and height must be > 0", line=line_no, column=1)
        return TargetRef("region", region=(cx, cy, w, h))
    if kind in ("object", "class", "robot", "station"):
        if len(args) != 1:
            raise ArityError(f"{kind} target takes one identifier", line=line_no, column=1)
        return TargetRef(kind, name=args[0])
    raise MissionSyntaxError(f"unknown target kind {kind!r}", line=line_no, column=1)


def parse_mission(text: str) -> Mission:
    header = None
    tasks = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        words = line.split()
        if header is None:
            if words[0] != "mission" or len(words) != 3:
                raise MissionSyntaxError(
                    "expected header 'mission <id> <priority>'", line=line_no, column=1
                )
            mission_id, priority = words[1], words[2]
            if priority not in PRIORITIES:
                raise MissionSyntaxError(
                    f"unknown priority {priority!r}", line=line_no, column=len("mission ") + len(mission_id) + 2
                )
            header = (mission_id, priority)
            continue
        subject = words[0]
        if len(words) < 2:
            raise MissionSyntaxError("task line needs an action", line=line_no, column=len(subject) + 1)
        action = parse_action_kind(words[1])
        if action is None:
            raise UnknownAction(f"unknown action {words[1]!r}", line=line_no, column=len(subject) + 2)
        rule, allowed_kinds = _TARGET_RULES[action]
        target = None
        if len(words) > 2:
            target = _parse_target(words[2:], line_no)
        if target is None and rule == "required":
            raise ArityError(
                f"action {action.value!r} requires a target", line=line_no, column=1
            )
        if target is not None and rule == "forbidden":
            raise ArityError(
                f"action {action.value!r} takes no target", line=line_no, column=1
            )
        if target is not None and target.kind not in allowed_kinds:
            raise ArityError(
                f"action {action.value!r} does not accept a {target.kind} target",
                line=line_no,
                column=1,
            )
        tasks.append(Task(subject, action, target))
    if header is None:
        raise MissionSyntaxError("empty mission file", line=1, column=1)
    if not tasks:
        raise MissionSyntaxError("mission has no tasks", line=1, column=1)
    return Mission(header[0], header[1], tuple(tasks))


def render_target(target: TargetRef) -> str:
    if target.kind == "region":
        cx, cy, w, h = target.region
        return f"region {_fmt(cx)} {_fmt(cy)} {_fmt(w)} {_fmt(h)}"
    return f"{target.kind} {target.name}"


def render_mission(mission: Mission) -> str:
    if not mission.tasks:
        raise ArityError("mission has no tasks")
    lines = [f"mission {mission.mission_id} {mission.priority}"]
    for task in mission.tasks:
        parts = [task.subject, task.action.value]
        if task.target is not None:
            parts.append(render_target(task.target))
        lines.append(" ".join(parts))
    return "\n".join(lines) + "\n"
