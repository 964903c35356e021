"""Behavior trees with deterministic tick semantics plus the priority stack.

Composites use with-memory semantics: a Sequence or Fallback resumes at the
child that last returned Running.  A Monitor ticks a watcher condition
before its child and fails the subtree as soon as the watcher fails.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .errors import DuplicatePlan, EmptyStack, ParseError, UnknownLeaf

SUCCESS = "Success"
FAILURE = "Failure"
RUNNING = "Running"

BT_SCHEMA = "abyssal-bt/1"


class BtNode:
    def tick(self, blackboard, registry):
        raise NotImplementedError

    def reset(self):
        pass


class Sequence(BtNode):
    def __init__(self, children):
        if not children:
            raise ValueError("Sequence needs at least one child")
        self.children = list(children)
        self.cursor = 0

    def tick(self, blackboard, registry):
        while self.cursor < len(self.children):
            status = self.children[self.cursor].tick(blackboard, registry)
            if status == RUNNING:
                return RUNNING
            if status == FAILURE:
                self.reset()
                return FAILURE
            self.cursor += 1
        self.reset()
        return SUCCESS

    def reset(self):
        self.cursor = 0
        for c in self.children:
            c.reset()


class Fallback(BtNode):
    def __init__(self, children):
        if not children:
            raise ValueError("Fallback needs at least one child")
        self.children = list(children)
        self.cursor = 0

    def tick(self, blackboard, registry):
        while self.cursor < len(self.children):
            status = self.children[self.cursor].tick(blackboard, registry)
            if status == RUNNING:
                return RUNNING
            if status == SUCCESS:
                self.reset()
                return SUCCESS
            self.cursor += 1
        self.reset()
        return FAILURE

    def reset(self):
        self.cursor = 0
        for c in self.children:
            c.reset()


class Condition(BtNode):
    def __init__(self, predicate_id, params=None):
        self.predicate_id = predicate_id
        self.params = dict(params or {})

    def tick(self, blackboard, registry):
        fn = registry.conditions.get(self.predicate_id)
        if fn is None:
            raise UnknownLeaf(self.predicate_id)
        return SUCCESS if fn(blackboard, self.params) else FAILURE


class Action(BtNode):
    def __init__(self, leaf_id, params=None):
        self.leaf_id = leaf_id
        self.params = dict(params or {})
        self.state = {}  # leaf-private scratch, cleared on reset

    def tick(self, blackboard, registry):
        fn = registry.actions.get(self.leaf_id)
        if fn is None:
            raise UnknownLeaf(self.leaf_id)
        status = fn(blackboard, self.params, self.state)
        if status != RUNNING:
            self.state = {}
        return status

    def reset(self):
        self.state = {}


class Monitor(BtNode):
    """Run a child while a watcher predicate holds; fail when it breaks."""

    def __init__(self, child, watcher_id, params=None):
        self.child = child
        self.watcher_id = watcher_id
        self.params = dict(params or {})

    def tick(self, blackboard, registry):
        fn = registry.conditions.get(self.watcher_id)
        if fn is None:
            raise UnknownLeaf(self.watcher_id)
        if not fn(blackboard, self.params):
            self.child.reset()
            return FAILURE
        return self.child.tick(blackboard, registry)

    def reset(self):
        self.child.reset()


@dataclass
class LeafRegistry:
    """Named predicates and action leaves bound at execution time.

    Conditions take (blackboard, params) -> bool; actions take
    (blackboard, params, state) -> status.
    """

    conditions: dict = field(default_factory=dict)
    actions: dict = field(default_factory=dict)


class BehaviorTree:
    def __init__(self, root: BtNode):
        self.root = root

    def tick(self, blackboard, registry) -> str:
        return self.root.tick(blackboard, registry)

    def reset(self):
        self.root.reset()

    def leaves(self):
        """In-order (kind, id) pairs for every Condition/Action/Monitor leaf."""
        out = []

        def walk(node):
            if isinstance(node, (Sequence, Fallback)):
                for c in node.children:
                    walk(c)
            elif isinstance(node, Monitor):
                out.append(("monitor", node.watcher_id))
                walk(node.child)
            elif isinstance(node, Condition):
                out.append(("condition", node.predicate_id))
            elif isinstance(node, Action):
                out.append(("action", node.leaf_id))

        walk(self.root)
        return out

    def serialize(self) -> str:
        return json.dumps({"schema": BT_SCHEMA, "root": node_to_obj(self.root)})

    @classmethod
    def deserialize(cls, text: str) -> "BehaviorTree":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc}") from exc
        if not isinstance(doc, dict) or doc.get("schema") != BT_SCHEMA:
            raise ParseError(f"expected schema {BT_SCHEMA}")
        return cls(obj_to_node(doc["root"]))


def node_to_obj(node: BtNode):
    if isinstance(node, Sequence):
        return ["sequence", [node_to_obj(c) for c in node.children]]
    if isinstance(node, Fallback):
        return ["fallback", [node_to_obj(c) for c in node.children]]
    if isinstance(node, Condition):
        return ["condition", node.predicate_id, node.params]
    if isinstance(node, Action):
        return ["action", node.leaf_id, node.params]
    if isinstance(node, Monitor):
        return ["monitor", node_to_obj(node.child), node.watcher_id, node.params]
    raise ParseError(f"unserializable node {node!r}")


def obj_to_node(obj) -> BtNode:
    try:
        tag = obj[0]
        if tag == "sequence":
            return Sequence([obj_to_node(c) for c in obj[1]])
        if tag == "fallback":
            return Fallback([obj_to_node(c) for c in obj[1]])
        if tag == "condition":
            return Condition(obj[1], obj[2])
        if tag == "action":
            return Action(obj[1], obj[2])
        if tag == "monitor":
            return Monitor(obj_to_node(obj[1]), obj[2], obj[3])
    except (IndexError, TypeError) as exc:
        raise ParseError(f"malformed node {obj!r}") from exc
    raise ParseError(f"unknown node tag {obj!r}")


@dataclass
class StackEntry:
    plan_id: str
    tree: BehaviorTree
    priority: int
    arrival: int


class BtStack:
    """Priority-ordered plan stack; exactly one entry ticks per step."""

    def __init__(self):
        self.entries: list[StackEntry] = []
        self._arrivals = 0

    def __len__(self):
        return len(self.entries)

    def plan_ids(self):
        return [e.plan_id for e in self.entries]

    @property
    def active(self) -> StackEntry | None:
        return self.entries[0] if self.entries else None

    def push(self, plan_id: str, tree: BehaviorTree, priority: int):
        if any(e.plan_id == plan_id for e in self.entries):
            raise DuplicatePlan(plan_id)
        entry = StackEntry(plan_id, tree, priority, self._arrivals)
        self._arrivals += 1
        self.entries.append(entry)
        # Higher priority first; equal priority keeps arrival order, so a
        # later equal-priority plan never preempts the one running.
        self.entries.sort(key=lambda e: (-e.priority, e.arrival))

    def remove(self, plan_id: str) -> bool:
        for i, e in enumerate(self.entries):
            if e.plan_id == plan_id:
                del self.entries[i]
                return True
        return False

    def step(self, blackboard, registry):
        """Tick the highest-priority entry once.

        Returns (plan id, status, resumed plan id or None).  A finished
        entry pops; the next entry resumes from its preserved cursor.
        """
        if not self.entries:
            raise EmptyStack("no plans to run")
        entry = self.entries[0]
        status = entry.tree.tick(blackboard, registry)
        resumed = None
        if status in (SUCCESS, FAILURE):
            self.entries.pop(0)
            if self.entries:
                resumed = self.entries[0].plan_id
        return entry.plan_id, status, resumed
