"""Deterministic discrete-time underwater world.

Planar kinematics at commanded depth, closed-form battery accounting,
range/FOV sensing with a seeded misclassification channel, and a
range/alignment/line-of-sight VLC link model.  All physical constants are
scenario parameters; none are anchored to measured hardware.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field

from .errors import InvalidCommand, LinkLost, NotEquipped
from .knowledge import UNKNOWN_CLASS


@dataclass
class SimParams:
    dt: float = 0.1
    max_speed: float = 1.0  # m/s
    drain_idle: float = 0.01  # %/s
    drain_move: float = 0.05  # %/m
    recharge: float = 1.0  # %/s while docked
    sensor_range: float = 8.0  # m
    fov_deg: float = 90.0
    vlc_range: float = 10.0  # m
    vlc_half_angle_deg: float = 30.0
    battery_floor: float = 20.0  # LowBattery threshold
    sense_confidence: float = 0.8
    object_radius: float = 0.3  # occlusion sphere radius
    vlc_base_rate: float = 10.0  # transfer units/s at quality 1
    dock_range: float = 1.0  # m
    grasp_range: float = 0.5  # m

    @classmethod
    def from_dict(cls, d: dict) -> "SimParams":
        known = {f for f in cls.__dataclass_fields__}
        return cls(**{k: v for k, v in d.items() if k in known})


@dataclass
class RobotState:
    robot_id: str
    position: tuple = (0.0, 0.0, 0.0)
    heading: float = 0.0  # radians, planar
    velocity: tuple = (0.0, 0.0, 0.0)
    battery: float = 100.0
    docked: bool = False
    has_manipulator: bool = False
    has_vlc: bool = True
    carried_object: str | None = None
    epsilon: float = 0.0  # misclassification probability


@dataclass
class SimObject:
    object_id: str
    true_class: str
    position: tuple
    collected: bool = False


@dataclass
class Station:
    station_id: str
    position: tuple
    heading: float = 0.0
    vlc_mounted: bool = True
    omni: bool = True  # station VLC head tracks approaching vehicles


class WorldState:
    def __init__(self, robots, objects, stations, params: SimParams, seed: int = 0):
        self.time = 0.0
        self.robots: dict[str, RobotState] = {r.robot_id: r for r in robots}
        self.objects: dict[str, SimObject] = {o.object_id: o for o in objects}
        self.stations: dict[str, Station] = {s.station_id: s for s in stations}
        self.params = params
        self.rng = random.Random(seed)


@dataclass
class SimEvent:
    kind: str
    payload: dict = field(default_factory=dict)


def _clamp_speed(velocity, max_speed):
    vx, vy, vz = velocity
    speed = math.sqrt(vx * vx + vy * vy + vz * vz)
    if speed > max_speed and speed > 0:
        k = max_speed / speed
        return (vx * k, vy * k, vz * k)
    return (vx, vy, vz)


def _planar(a, b):
    return math.hypot(a[0] - b[0], a[1] - b[1])


def step(world: WorldState, commands: dict, dt: float):
    """Advance the world one step.

    ``commands``: robot id -> command dict with a ``cmd`` tag:
    set_velocity {v: (vx,vy,vz), heading?}, hold, dock, undock,
    grasp {object}, release.  Returns a list of SimEvents.
    """
    if dt <= 0:
        raise InvalidCommand("dt must be > 0")
    events = []
    params = world.params
    for rid in sorted(world.robots):
        robot = world.robots[rid]
        command = commands.get(rid, {"cmd": "hold"})
        tag = command.get("cmd", "hold")

        if tag == "dock":
            station = _nearest_station(world, robot.position)
            if station is None or _planar(robot.position, station.position) > params.dock_range:
                raise InvalidCommand(f"{rid}: no station within {params.dock_range} m")
            robot.docked = True
            robot.velocity = (0.0, 0.0, 0.0)
            events.append(SimEvent("Docked", {"robot": rid, "station": station.station_id}))
        elif tag == "undock":
            if robot.docked:
                robot.docked = False
                events.append(SimEvent("Undocked", {"robot": rid}))
        elif tag == "grasp":
            oid = command.get("object")
            obj = world.objects.get(oid)
            if not robot.has_manipulator:
                raise InvalidCommand(f"{rid} has no manipulator")
            if obj is None or obj.collected or _planar(robot.position, obj.position) > params.grasp_range:
                raise InvalidCommand(f"{rid}: no object {oid!r} within {params.grasp_range} m")
            obj.collected = True
            robot.carried_object = oid
            events.append(SimEvent("ObjectGrasped", {"robot": rid, "object": oid}))
        elif tag == "release":
            if robot.carried_object is not None:
                oid = robot.carried_object
                obj = world.objects[oid]
                obj.collected = False
                obj.position = robot.position
                robot.carried_object = None
                events.append(SimEvent("ObjectReleased", {"robot": rid, "object": oid}))
        elif tag == "set_velocity":
            if robot.docked:
                raise InvalidCommand(f"{rid} is docked; undock before moving")
            robot.velocity = _clamp_speed(tuple(command["v"]), params.max_speed)
            if "heading" in command:
                robot.heading = command["heading"]
            elif robot.velocity[0] or robot.velocity[1]:
                robot.heading = math.atan2(robot.velocity[1], robot.velocity[0])
        else:  # hold
            robot.velocity = (0.0, 0.0, 0.0)
            if "heading" in command:
                robot.heading = command["heading"]

        # Integrate and account energy.
        x, y, z = robot.position
        vx, vy, vz = robot.velocity
        nx, ny, nz = x + vx * dt, y + vy * dt, z + vz * dt
        distance = math.sqrt((nx - x) ** 2 + (ny - y) ** 2 + (nz - z) ** 2)
        robot.position = (nx, ny, nz)

        before = robot.battery
        if robot.docked:
            delta = params.recharge * dt
        else:
            delta = -(params.drain_idle * dt + params.drain_move * distance)
        robot.battery = min(100.0, max(0.0, robot.battery + delta))
        if before >= params.battery_floor > robot.battery:
            events.append(SimEvent("LowBattery", {"robot": rid, "battery": robot.battery}))

    world.time += dt
    return events


def set_battery(world: WorldState, rid: str, value: float):
    """Scenario hook: force a battery level, emitting LowBattery on a
    downward threshold crossing."""
    robot = world.robots[rid]
    before = robot.battery
    robot.battery = min(100.0, max(0.0, value))
    if before >= world.params.battery_floor > robot.battery:
        return [SimEvent("LowBattery", {"robot": rid, "battery": robot.battery})]
    return []


def _nearest_station(world, position):
    best = None
    best_d = math.inf
    for s in world.stations.values():
        d = _planar(position, s.position)
        if d < best_d:
            best, best_d = s, d
    return best


@dataclass
class Detection:
    object_id: str
    position: tuple
    primitives: tuple
    confidence: float


@dataclass
class SensorReading:
    robot_id: str
    detections: list


def sense(world: WorldState, rid: str, taxonomy, overrides=None) -> SensorReading:
    """Objects within sensor range and field of view.

    ``overrides`` maps object id -> class name whose primitives replace the
    true measurement (scripted segmentation faults, applied per sensing
    robot).  Otherwise, with per-robot probability epsilon the measured
    primitive multiset is swapped for a different class's.
    """
    robot = world.robots[rid]
    params = world.params
    half_fov = math.radians(params.fov_deg) / 2.0
    detections = []
    for oid in sorted(world.objects):
        obj = world.objects[oid]
        if obj.collected:
            continue
        d = _planar(robot.position, obj.position)
        if d > params.sensor_range:
            continue
        bearing = math.atan2(
            obj.position[1] - robot.position[1], obj.position[0] - robot.position[0]
        )
        off = _angle_diff(bearing, robot.heading)
        if abs(off) > half_fov:
            continue
        measured_class = obj.true_class
        if overrides and oid in overrides:
            measured_class = overrides[oid]
        elif robot.epsilon > 0 and world.rng.random() < robot.epsilon:
            others = [c for c in sorted(taxonomy.classes) if c != obj.true_class]
            if others:
                measured_class = world.rng.choice(others)
        cls = taxonomy.classes.get(measured_class)
        primitives = cls.primitives if cls is not None else ()
        detections.append(
            Detection(oid, obj.position, primitives, params.sense_confidence)
        )
    return SensorReading(rid, detections)


def _angle_diff(a, b):
    d = (a - b) % (2 * math.pi)
    return d - 2 * math.pi if d > math.pi else d


CONNECTED = "Connected"
OUT_OF_RANGE = "OutOfRange"
MISALIGNED = "Misaligned"
NO_LINE_OF_SIGHT = "NoLineOfSight"


@dataclass
class VlcLinkStatus:
    state: str
    quality: float = 0.0


def _endpoint(world, name):
    """(position, boresight heading or None for omni, equipped)."""
    if name in world.robots:
        r = world.robots[name]
        return r.position, r.heading, r.has_vlc
    if name in world.stations:
        s = world.stations[name]
        return s.position, (None if s.omni else s.heading), s.vlc_mounted
    raise NotEquipped(f"unknown endpoint {name!r}")


def vlc_link(world: WorldState, a: str, b: str) -> VlcLinkStatus:
    pos_a, head_a, ok_a = _endpoint(world, a)
    pos_b, head_b, ok_b = _endpoint(world, b)
    if not (ok_a and ok_b):
        raise NotEquipped(f"{a if not ok_a else b} has no VLC head")
    params = world.params
    d = _planar(pos_a, pos_b)
    # quality > 0 must hold exactly when Connected, so the range gate is
    # strict: a link at exactly max range has no usable budget.
    if d >= params.vlc_range:
        return VlcLinkStatus(OUT_OF_RANGE)
    half = math.radians(params.vlc_half_angle_deg)
    for pos, head, other in ((pos_a, head_a, pos_b), (pos_b, head_b, pos_a)):
        if head is None:
            continue
        bearing = math.atan2(other[1] - pos[1], other[0] - pos[0])
        if abs(_angle_diff(bearing, head)) > half:
            return VlcLinkStatus(MISALIGNED)
    for obj in world.objects.values():
        if obj.collected:
            continue
        if obj.object_id in (a, b):
            continue
        if _segment_hits_sphere(pos_a, pos_b, obj.position, params.object_radius):
            return VlcLinkStatus(NO_LINE_OF_SIGHT)
    quality = 1.0 - d / params.vlc_range
    return VlcLinkStatus(CONNECTED, quality)


def _segment_hits_sphere(a, b, center, radius):
    ax, ay = a[0], a[1]
    bx, by = b[0], b[1]
    cx, cy = center[0], center[1]
    dx, dy = bx - ax, by - ay
    seg2 = dx * dx + dy * dy
    if seg2 == 0:
        return math.hypot(ax - cx, ay - cy) <= radius
    t = max(0.0, min(1.0, ((cx - ax) * dx + (cy - ay) * dy) / seg2))
    return math.hypot(ax + t * dx - cx, ay + t * dy - cy) <= radius


@dataclass
class TransferResult:
    records: int
    handoffs: int


class TransferSession:
    """Multi-step VLC transfer; discarded atomically if the link drops.

    Size is one unit per record or handoff; progress accrues at
    quality * base_rate units per second while Connected.
    """

    def __init__(self, world, sender, receiver, records, handoffs=()):
        self.world = world
        self.sender = sender
        self.receiver = receiver
        self.records = list(records)
        self.handoffs = list(handoffs)
        self.size = max(1, len(self.records) + len(self.handoffs))
        self.progress = 0.0
        self.done = False

    def advance(self, dt: float) -> bool:
        """Move the transfer forward; True once complete.

        Raises LinkLost (and poisons the session) if the link is not
        Connected at any step.
        """
        if self.done:
            return True
        link = vlc_link(self.world, self.sender, self.receiver)
        if link.state != CONNECTED:
            self.progress = 0.0
            raise LinkLost(f"{self.sender}->{self.receiver}: {link.state}")
        self.progress += link.quality * self.world.params.vlc_base_rate * dt
        if self.progress >= self.size:
            self.done = True
        return self.done

    def result(self) -> TransferResult:
        return TransferResult(len(self.records), len(self.handoffs))


def transfer_knowledge(world, sender, receiver, records, handoffs=()) -> TransferResult:
    """Single-shot transfer: runs the whole session against the current
    world; the link must stay Connected for the full duration."""
    session = TransferSession(world, sender, receiver, records, handoffs)
    dt = world.params.dt
    while not session.advance(dt):
        pass
    return session.result()
