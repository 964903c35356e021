"""Corpus generation and the knowledge-ablation harness.

Generates seed-deterministic mission corpora with controlled violation
mixes (none / capability / affordance / resource), labels each mission with
the brute-force oracle, then scores every planner configuration by
agreement with the oracle and by behavior-tree completeness over the
missions it accepted.  The FULL configuration matches the oracle by
construction; dropping the taxonomy (KG_ONLY) false-accepts exactly the
affordance violations, and dropping the graph as well (STATE_ONLY) also
false-accepts the capability violations.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .errors import BadMix
from .knowledge import OBJECT_ACTIONS
from .mission import parse_mission
from .oracle import oracle_mission_feasible
from .planner import (
    MODES,
    PlannerConfig,
    WorldView,
    check_plan_completeness,
    plan_mission,
    validate_mission,
)

VIOLATION_TAGS = ("none", "capability", "affordance", "resource")


def scenario_view(scenario) -> WorldView:
    """Validation view of a scenario at start of mission: declared objects
    with their declared classes, robots at their start states."""
    robots = {
        r.robot_id: {"battery": r.battery, "pose": (*r.start, r.heading)}
        for r in scenario.robots
    }
    objects = {o.object_id: (o.true_class, o.position) for o in scenario.objects}
    stations = {s.station_id: {"position": s.position} for s in scenario.stations}
    return WorldView(
        graph=scenario.graph,
        taxonomy=scenario.taxonomy,
        robots=robots,
        objects=objects,
        stations=stations,
        drain_move=scenario.params.drain_move,
    )


@dataclass
class CorpusEntry:
    text: str
    oracle_feasible: bool
    tag: str


@dataclass
class Corpus:
    seed: int
    entries: list

    def __len__(self):
        return len(self.entries)


def _candidate_triples(scenario, view):
    """(robot, action, class) triples bucketed by which single check they
    violate.  Only classes with at least one declared object are used, so
    target binding always succeeds."""
    instantiated = sorted({o.true_class for o in scenario.objects})
    buckets = {"none": [], "capability": [], "affordance": []}
    for rid in sorted(view.robots):
        closure = scenario.graph.capability_closure(rid)
        for action in OBJECT_ACTIONS:
            for cls in instantiated:
                affords = scenario.taxonomy.affords(cls, action)
                capable = action in closure
                if capable and affords:
                    buckets["none"].append((rid, action, cls))
                elif not capable and affords:
                    buckets["capability"].append((rid, action, cls))
                elif capable and not affords:
                    buckets["affordance"].append((rid, action, cls))
                # both-violated triples are ambiguous labels; skipped
    return buckets


def _resource_mission(rng, scenario, index):
    rid = rng.choice(sorted(r.robot_id for r in scenario.robots))
    # A transit far beyond the battery budget.
    far = 100.0 / scenario.params.drain_move * 2.0
    return f"mission corpus_{index} normal\n{rid} navigate region {far:.0f} 0 10 10\n"


def generate_corpus(scenario, seed: int, n: int, mix=None) -> Corpus:
    """``mix``: fractions per violation tag; must sum to 1.  Counts for the
    violation tags round to nearest integer; the remainder goes to
    ``none``."""
    if mix is None:
        mix = {"none": 1.0}
    unknown = set(mix) - set(VIOLATION_TAGS)
    if unknown:
        raise BadMix(f"unknown tags {sorted(unknown)}")
    if any(v < 0 for v in mix.values()):
        raise BadMix("negative fraction")
    total = sum(mix.values())
    if abs(total - 1.0) > 1e-9:
        raise BadMix(f"fractions sum to {total}, expected 1")

    counts = {
        tag: round(n * mix.get(tag, 0.0))
        for tag in ("capability", "affordance", "resource")
    }
    spent = sum(counts.values())
    if spent > n:
        raise BadMix("violation fractions exceed corpus size after rounding")
    counts["none"] = n - spent

    rng = random.Random(seed)
    view = scenario_view(scenario)
    buckets = _candidate_triples(scenario, view)
    entries = []
    index = 0
    for tag in VIOLATION_TAGS:
        for _ in range(counts[tag]):
            if tag == "resource":
                text = _resource_mission(rng, scenario, index)
            else:
                pool = buckets[tag]
                if not pool:
                    raise BadMix(f"scenario offers no {tag} candidates")
                rid, action, cls = rng.choice(pool)
                text = f"mission corpus_{index} normal\n{rid} {action.value} class {cls}\n"
            mission = parse_mission(text)
            feasible = oracle_mission_feasible(mission, view, scenario.battery_floor)
            entries.append(CorpusEntry(text, feasible, tag))
            index += 1
    return Corpus(seed, entries)


@dataclass
class ConfigResult:
    mode: str
    validation_accuracy: float
    bt_completeness: float
    missions: int

    def to_dict(self):
        return {
            "mode": self.mode,
            "validation_accuracy": self.validation_accuracy,
            "bt_completeness": self.bt_completeness,
            "missions": self.missions,
        }


@dataclass
class AblationResult:
    per_config: list  # [ConfigResult] in MODES order

    def to_dict(self):
        return {"configs": [c.to_dict() for c in self.per_config]}

    def render_table(self) -> str:
        header = f"{'Configuration':<14} {'Validation accuracy':>20} {'BT completeness':>17} {'Missions':>9}"
        lines = [header, "-" * len(header)]
        for c in self.per_config:
            lines.append(
                f"{c.mode:<14} {c.validation_accuracy:>20.2f} {c.bt_completeness:>17.2f} {c.missions:>9d}"
            )
        return "\n".join(lines)


def run_ablation(corpus: Corpus, scenario) -> AblationResult:
    view = scenario_view(scenario)
    results = []
    for mode in MODES:
        config = PlannerConfig(
            mode=mode,
            battery_floor=scenario.battery_floor,
            refresh_interval=scenario.refresh_interval,
        )
        agree = 0
        completeness = []
        for entry in corpus.entries:
            mission = parse_mission(entry.text)
            report = validate_mission(mission, view, config)
            if report.feasible == entry.oracle_feasible:
                agree += 1
            if report.feasible:
                plan = plan_mission(mission, view, config)
                completeness.append(
                    check_plan_completeness(plan, mission).fraction
                )
        n = len(corpus.entries)
        results.append(
            ConfigResult(
                mode=mode,
                validation_accuracy=agree / n if n else 1.0,
                bt_completeness=(
                    sum(completeness) / len(completeness) if completeness else 1.0
                ),
                missions=n,
            )
        )
    return AblationResult(results)
