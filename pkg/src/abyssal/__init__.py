"""Deterministic multi-AUV mission engine.

Missions are validated against a robot-capability knowledge graph and an
object-affordance taxonomy, compiled to behavior trees, and executed in a
simulated two-vehicle underwater world with VLC-constrained communication
and live human interventions.
"""

from .knowledge import (
    ActionKind,
    KnowledgeGraph,
    KnowledgePatch,
    KnowledgeStore,
    Taxonomy,
    load_knowledge,
    load_taxonomy,
)
from .mission import Mission, Task, parse_mission, render_mission
from .planner import PlannerConfig, plan_mission, validate_mission
from .scenario import Scenario, load_builtin, load_scenario

__all__ = [
    "ActionKind",
    "KnowledgeGraph",
    "KnowledgePatch",
    "KnowledgeStore",
    "Taxonomy",
    "Mission",
    "Task",
    "PlannerConfig",
    "Scenario",
    "load_builtin",
    "load_knowledge",
    "load_scenario",
    "load_taxonomy",
    "parse_mission",
    "plan_mission",
    "render_mission",
    "validate_mission",
]

__version__ = "0.1.0"
