"""Validate missions against the two-AUV scenario and inspect the plans.

Shows the three validation modes side by side on missions that violate a
capability, an affordance, or a resource constraint, then prints the
behavior tree synthesized for a feasible mission.
"""

import json

from abyssal.ablation import scenario_view
from abyssal.bt import node_to_obj
from abyssal.mission import parse_mission
from abyssal.planner import MODES, PlannerConfig, plan_mission, validate_mission
from abyssal.scenario import load_builtin

scenario = load_builtin("two_auv")
view = scenario_view(scenario)

MISSIONS = {
    "feasible": "mission survey_dock normal\nalpha survey region 0 0 40 10\nalpha dock\n",
    "capability violation": "mission grab normal\nalpha manipulate class cube\n",
    "affordance violation": "mission peek normal\nbeta observe class cylinder\n",
    "resource violation": "mission trek normal\nalpha navigate region 4000 0 10 10\n",
}

for label, text in MISSIONS.items():
    mission = parse_mission(text)
    print(f"\n== {label}: {mission.mission_id}")
    for mode in MODES:
        config = PlannerConfig(mode=mode)
        report = validate_mission(mission, view, config)
        print(f"  {mode:<11} {report.summary()}")

print("\n== behavior trees for the feasible mission")
plan = plan_mission(parse_mission(MISSIONS["feasible"]), view, PlannerConfig())
for task, tree in plan.trees:
    print(f"\n  {task.subject} {task.action.value}:")
    print("  " + json.dumps(node_to_obj(tree.root), indent=2).replace("\n", "\n  "))
