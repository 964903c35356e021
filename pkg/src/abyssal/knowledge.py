"""Knowledge graph, object taxonomy, runtime state, and the versioned store.

The graph encodes which sensors/actuators a robot carries, which
capabilities those provide, and which actions those capabilities enable or
require.  The taxonomy describes object classes as multisets of geometric
primitives plus the actions each class affords.  Both are queried with
exact-match semantics only; results are a pure function of (version, query).
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum

from .errors import (
    AmbiguousClass,
    IntegrityError,
    ParseError,
    UnknownClass,
    UnknownRobot,
    VersionConflict,
)

PRIMITIVES = ("sphere", "cylinder", "cube", "cone", "torus")

NODE_KINDS = ("Robot", "Sensor", "Actuator", "Capability", "Action")

RELATIONS = ("hasSensor", "hasActuator", "provides", "enables", "requires")

# Allowed (from kind, to kind) pairs per relation.
RELATION_SIGNATURES = {
    "hasSensor": ({"Robot"}, {"Sensor"}),
    "hasActuator": ({"Robot"}, {"Actuator"}),
    "provides": ({"Sensor", "Actuator"}, {"Capability"}),
    "enables": ({"Capability"}, {"Action"}),
    "requires": ({"Action"}, {"Capability"}),
}


class ActionKind(Enum):
    OBSERVE = "observe"
    TOUCH = "touch"
    MANIPULATE = "manipulate"
    SURVEY = "survey"
    NAVIGATE = "navigate"
    DOCK = "dock"
    UNDOCK = "undock"
    COMMUNICATE = "communicate"


# "collect" is accepted as a synonym for manipulate wherever actions are named.
ACTION_ALIASES = {"collect": ActionKind.MANIPULATE}

OBJECT_ACTIONS = (ActionKind.OBSERVE, ActionKind.TOUCH, ActionKind.MANIPULATE)


def parse_action_kind(word: str) -> ActionKind | None:
    word = word.lower()
    if word in ACTION_ALIASES:
        return ACTION_ALIASES[word]
    try:
        return ActionKind(word)
    except ValueError:
        return None


@dataclass(frozen=True)
class Node:
    id: str
    kind: str
    attributes: dict = field(default_factory=dict, compare=False)


@dataclass(frozen=True)
class Edge:
    src: str
    dst: str
    relation: str


class KnowledgeGraph:
    """Typed node/edge structure with referential-integrity checking."""

    def __init__(self, nodes=(), edges=()):
        self.nodes: dict[str, Node] = {}
        self.edges: set[Edge] = set()
        for n in nodes:
            self.add_node(n)
        for e in edges:
            self.add_edge(e)

    def add_node(self, node: Node):
        if node.kind not in NODE_KINDS:
            raise IntegrityError(f"unknown node kind {node.kind!r}", offender=node.id)
        if node.id in self.nodes:
            raise IntegrityError(f"duplicate node id {node.id!r}", offender=node.id)
        self.nodes[node.id] = node

    def add_edge(self, edge: Edge):
        if edge.relation not in RELATIONS:
            raise IntegrityError(
                f"unknown relation {edge.relation!r}", offender=edge.relation
            )
        for endpoint in (edge.src, edge.dst):
            if endpoint not in self.nodes:
                raise IntegrityError(
                    f"edge references missing node {endpoint!r}", offender=endpoint
                )
        src_kinds, dst_kinds = RELATION_SIGNATURES[edge.relation]
        if self.nodes[edge.src].kind not in src_kinds:
            raise IntegrityError(
                f"{edge.relation} edge from {self.nodes[edge.src].kind} node "
                f"{edge.src!r} not allowed",
                offender=edge.src,
            )
        if self.nodes[edge.dst].kind not in dst_kinds:
            raise IntegrityError(
                f"{edge.relation} edge to {self.nodes[edge.dst].kind} node "
                f"{edge.dst!r} not allowed",
                offender=edge.dst,
            )
        if edge in self.edges:
            raise IntegrityError(
                f"duplicate edge ({edge.src}, {edge.dst}, {edge.relation})",
                offender=edge.src,
            )
        self.edges.add(edge)

    def remove_node(self, node_id: str):
        if node_id not in self.nodes:
            raise IntegrityError(f"no node {node_id!r}", offender=node_id)
        for e in self.edges:
            if e.src == node_id or e.dst == node_id:
                raise IntegrityError(
                    f"node {node_id!r} still referenced by an edge", offender=node_id
                )
        del self.nodes[node_id]

    def remove_edge(self, edge: Edge):
        if edge not in self.edges:
            raise IntegrityError(
                f"no edge ({edge.src}, {edge.dst}, {edge.relation})", offender=edge.src
            )
        self.edges.remove(edge)

    def robots(self):
        return sorted(n.id for n in self.nodes.values() if n.kind == "Robot")

    def out_edges(self, node_id, relation=None):
        return [
            e
            for e in self.edges
            if e.src == node_id and (relation is None or e.relation == relation)
        ]

    def capability_closure(self, robot: str) -> set[ActionKind]:
        """Actions the robot can perform, by reachability over the graph.

        An action is in the closure iff every capability it requires is
        provided by some sensor/actuator attached to the robot, and at least
        one provided capability enables it.
        """
        node = self.nodes.get(robot)
        if node is None or node.kind != "Robot":
            raise UnknownRobot(robot)
        devices = {
            e.dst
            for e in self.edges
            if e.src == robot and e.relation in ("hasSensor", "hasActuator")
        }
        provided = {
            e.dst for e in self.edges if e.relation == "provides" and e.src in devices
        }
        closure = set()
        for n in self.nodes.values():
            if n.kind != "Action":
                continue
            kind = parse_action_kind(n.id)
            if kind is None:
                continue
            required = {
                e.dst for e in self.edges if e.relation == "requires" and e.src == n.id
            }
            enabling = {
                e.src for e in self.edges if e.relation == "enables" and e.dst == n.id
            }
            if required <= provided and (enabling & provided):
                closure.add(kind)
        return closure

    def copy(self) -> "KnowledgeGraph":
        g = KnowledgeGraph()
        g.nodes = dict(self.nodes)
        g.edges = set(self.edges)
        return g

    def to_dict(self) -> dict:
        return {
            "nodes": [
                {"id": n.id, "kind": n.kind, "attributes": dict(n.attributes)}
                for n in sorted(self.nodes.values(), key=lambda n: n.id)
            ],
            "edges": [
                {"from": e.src, "to": e.dst, "relation": e.relation}
                for e in sorted(self.edges, key=lambda e: (e.src, e.dst, e.relation))
            ],
        }

    @classmethod
    def from_dict(cls, doc) -> "KnowledgeGraph":
        if not isinstance(doc, dict):
            raise ParseError("graph document must be an object")
        g = cls()
        for raw in doc.get("nodes", []):
            try:
                g.add_node(
                    Node(raw["id"], raw["kind"], dict(raw.get("attributes", {})))
                )
            except (KeyError, TypeError) as exc:
                raise ParseError(f"malformed node entry: {raw!r}") from exc
        for raw in doc.get("edges", []):
            try:
                g.add_edge(Edge(raw["from"], raw["to"], raw["relation"]))
            except (KeyError, TypeError) as exc:
                raise ParseError(f"malformed edge entry: {raw!r}") from exc
        return g

    def __eq__(self, other):
        return (
            isinstance(other, KnowledgeGraph)
            and self.nodes == other.nodes
            and self.edges == other.edges
        )


def load_knowledge(document) -> KnowledgeGraph:
    """Parse a graph from a JSON string or an already-decoded mapping."""
    if isinstance(document, str):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc}") from exc
    return KnowledgeGraph.from_dict(document)


@dataclass(frozen=True)
class ObjectClass:
    name: str
    primitives: tuple  # sorted tuple acting as a multiset
    affordances: frozenset  # subset of OBJECT_ACTIONS

    @property
    def primitive_counts(self) -> Counter:
        return Counter(self.primitives)


class Taxonomy:
    def __init__(self, classes=()):
        self.classes: dict[str, ObjectClass] = {}
        for c in classes:
            self.add_class(c)

    def add_class(self, cls: ObjectClass):
        if cls.name in self.classes:
            raise IntegrityError(f"duplicate class {cls.name!r}", offender=cls.name)
        if not cls.primitives:
            raise IntegrityError(
                f"class {cls.name!r} has no primitives", offender=cls.name
            )
        for p in cls.primitives:
            if p not in PRIMITIVES:
                raise IntegrityError(
                    f"class {cls.name!r} uses unknown primitive {p!r}", offender=cls.name
                )
        for a in cls.affordances:
            if a not in OBJECT_ACTIONS:
                raise IntegrityError(
                    f"class {cls.name!r} has invalid affordance {a!r}",
                    offender=cls.name,
                )
        self.classes[cls.name] = cls

    def remove_class(self, name: str):
        if name not in self.classes:
            raise IntegrityError(f"no class {name!r}", offender=name)
        del self.classes[name]

    def affords(self, class_name: str, action: ActionKind) -> bool:
        cls = self.classes.get(class_name)
        if cls is None:
            raise UnknownClass(class_name)
        return action in cls.affordances

    def resolve_class(self, primitives) -> str | None:
        """Class whose primitive multiset equals the input, or None."""
        wanted = Counter(primitives)
        matches = [c.name for c in self.classes.values() if c.primitive_counts == wanted]
        if len(matches) > 1:
            raise AmbiguousClass(f"{sorted(matches)} share primitives {sorted(primitives)}")
        return matches[0] if matches else None

    def copy(self) -> "Taxonomy":
        t = Taxonomy()
        t.classes = dict(self.classes)
        return t

    def to_dict(self) -> dict:
        return {
            "classes": [
                {
                    "name": c.name,
                    "primitives": list(c.primitives),
                    "affordances": sorted(a.value for a in c.affordances),
                }
                for c in sorted(self.classes.values(), key=lambda c: c.name)
            ]
        }

    @classmethod
    def from_dict(cls, doc) -> "Taxonomy":
        if not isinstance(doc, dict):
            raise ParseError("taxonomy document must be an object")
        t = cls()
        for raw in doc.get("classes", []):
            try:
                name = raw["name"]
                primitives = tuple(sorted(raw["primitives"]))
                affordances = []
                for a in raw.get("affordances", []):
                    kind = parse_action_kind(a)
                    if kind is None or kind not in OBJECT_ACTIONS:
                        raise IntegrityError(
                            f"class {name!r} has invalid affordance {a!r}",
                            offender=name,
                        )
                    affordances.append(kind)
            except (KeyError, TypeError) as exc:
                raise ParseError(f"malformed class entry: {raw!r}") from exc
            t.add_class(ObjectClass(name, primitives, frozenset(affordances)))
        return t

    def __eq__(self, other):
        return isinstance(other, Taxonomy) and self.classes == other.classes


def load_taxonomy(document) -> Taxonomy:
    if isinstance(document, str):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc}") from exc
    return Taxonomy.from_dict(document)


UNKNOWN_CLASS = "Unknown"


@dataclass
class ObjectRecord:
    object_id: str
    position: tuple  # (x, y, z) meters
    classification: str = UNKNOWN_CLASS
    confidence: float = 0.0
    source: str = "self_sensed"  # self_sensed | transferred | human

    def to_dict(self):
        return {
            "object_id": self.object_id,
            "position": list(self.position),
            "classification": self.classification,
            "confidence": self.confidence,
            "source": self.source,
        }

    @classmethod
    def from_dict(cls, d):
        return cls(
            d["object_id"],
            tuple(d["position"]),
            d.get("classification", UNKNOWN_CLASS),
            d.get("confidence", 0.0),
            d.get("source", "self_sensed"),
        )


@dataclass
class RobotRuntime:
    battery: float = 100.0
    pose: tuple = (0.0, 0.0, 0.0, 0.0)  # x, y, z, heading
    docked: bool = False
    sensor_health: dict = field(default_factory=dict)
    object_records: dict = field(default_factory=dict)  # object id -> ObjectRecord


class RuntimeState:
    """Per-robot live state mirrored from the simulator plus merged
    object records (own detections, VLC transfers, human classifications)."""

    def __init__(self, robot_ids):
        self.robots = {rid: RobotRuntime() for rid in robot_ids}

    def robot(self, rid) -> RobotRuntime:
        if rid not in self.robots:
            raise UnknownRobot(rid)
        return self.robots[rid]

    def merge_record(self, rid, record: ObjectRecord) -> bool:
        """Merge one object record into a robot's view.

        Human-sourced records always win; otherwise a record replaces the
        existing one only with strictly greater confidence.  Returns True
        when the stored classification changed.
        """
        book = self.robot(rid).object_records
        old = book.get(record.object_id)
        if old is not None:
            if old.source == "human" and record.source != "human":
                return False
            # Ties keep the existing record; only strictly better evidence
            # (or a human call) rewrites a classification.
            if record.source != "human" and record.confidence <= old.confidence:
                return False
        book[record.object_id] = record
        return old is not None and old.classification != record.classification


class KnowledgePatch:
    """Atomic, versioned edit to the graph and taxonomy.

    ``ops`` entries are dicts with an ``op`` tag: add_node / remove_node /
    add_edge / remove_edge / set_class / remove_class.
    """

    def __init__(self, version: int, ops):
        self.version = version
        self.ops = list(ops)

    def to_dict(self):
        return {"version": self.version, "ops": self.ops}

    @classmethod
    def from_dict(cls, d):
        try:
            return cls(int(d["version"]), list(d["ops"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"malformed patch: {d!r}") from exc


class KnowledgeStore:
    """Versioned holder of graph + taxonomy with a visibility gate.

    ``apply_patch`` commits a new version immediately, but readers that go
    through ``visible_graph``/``visible_taxonomy`` keep seeing the previous
    version until ``refresh`` is called (the orchestrator calls it on its
    refresh tick).
    """

    def __init__(self, graph: KnowledgeGraph, taxonomy: Taxonomy):
        self._committed = (graph, taxonomy)
        self._visible = self._committed
        self.version = 0
        self.visible_version = 0

    @property
    def graph(self) -> KnowledgeGraph:
        return self._committed[0]

    @property
    def taxonomy(self) -> Taxonomy:
        return self._committed[1]

    @property
    def visible_graph(self) -> KnowledgeGraph:
        return self._visible[0]

    @property
    def visible_taxonomy(self) -> Taxonomy:
        return self._visible[1]

    def refresh(self):
        self._visible = self._committed
        self.visible_version = self.version

    def apply_patch(self, patch: KnowledgePatch) -> int:
        if patch.version != self.version + 1:
            raise VersionConflict(
                f"patch version {patch.version}, store at {self.version}"
            )
        graph = self.graph.copy()
        taxonomy = self.taxonomy.copy()
        for op in patch.ops:
            kind = op.get("op")
            if kind == "add_node":
                graph.add_node(
                    Node(op["id"], op["kind"], dict(op.get("attributes", {})))
                )
            elif kind == "remove_node":
                graph.remove_node(op["id"])
            elif kind == "add_edge":
                graph.add_edge(Edge(op["from"], op["to"], op["relation"]))
            elif kind == "remove_edge":
                graph.remove_edge(Edge(op["from"], op["to"], op["relation"]))
            elif kind == "set_class":
                affordances = []
                for a in op.get("affordances", []):
                    k = parse_action_kind(a)
                    if k is None or k not in OBJECT_ACTIONS:
                        raise IntegrityError(
                            f"invalid affordance {a!r}", offender=op.get("name")
                        )
                    affordances.append(k)
                cls = ObjectClass(
                    op["name"],
                    tuple(sorted(op["primitives"])),
                    frozenset(affordances),
                )
                if cls.name in taxonomy.classes:
                    taxonomy.remove_class(cls.name)
                taxonomy.add_class(cls)
            elif kind == "remove_class":
                taxonomy.remove_class(op["name"])
            else:
                raise IntegrityError(f"unknown patch op {kind!r}", offender=kind)
        # Only commit once every op has succeeded.
        self._committed = (graph, taxonomy)
        self.version = patch.version
        return self.version

    def render(self) -> str:
        """Canonical serialization of the committed graph + taxonomy."""
        return json.dumps(
            {
                "version": self.version,
                "graph": self.graph.to_dict(),
                "taxonomy": self.taxonomy.to_dict(),
            },
            sort_keys=True,
        )
