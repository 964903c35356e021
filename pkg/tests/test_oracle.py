"""Planner / brute-force oracle equivalence.

The oracle recomputes reachability and affordance lookup by exhaustive
edge-list scans; agreement over randomized worlds is the evidence that the
FULL-mode validator is correct rather than self-consistent.
"""

import random

from hypothesis import given, settings
from hypothesis import strategies as st

from abyssal.ablation import scenario_view
from abyssal.mission import parse_mission
from abyssal.oracle import oracle_mission_feasible, oracle_task_feasible
from abyssal.planner import FULL, PlannerConfig, validate_mission
from support import random_case

CONFIG = PlannerConfig(mode=FULL, battery_floor=20.0)


def assert_equivalent(view, mission):
    planner = validate_mission(mission, view, CONFIG).feasible
    oracle = oracle_mission_feasible(mission, view, CONFIG.battery_floor)
    assert planner == oracle, (
        f"planner={planner} oracle={oracle} for "
        f"{[(t.subject, t.action.value, t.target) for t in mission.tasks]}"
    )


def test_equivalence_1000_random_cases():
    rng = random.Random(2024)
    for _ in range(1000):
        view, mission = random_case(rng)
        assert_equivalent(view, mission)


@settings(max_examples=250, deadline=None)
@given(st.integers(min_value=0, max_value=2**32 - 1))
def test_equivalence_property(seed):
    view, mission = random_case(random.Random(seed))
    assert_equivalent(view, mission)


def test_oracle_matches_on_builtin_fixture(two_auv):
    view = scenario_view(two_auv)
    texts = [
        "mission m normal\nbeta manipulate class cube\n",
        "mission m normal\nalpha manipulate class cube\n",
        "mission m normal\nbeta observe class cylinder\n",
        "mission m normal\nalpha survey region 0 0 40 10\nalpha dock\n",
        "mission m normal\nalpha navigate region 4000 0 10 10\n",
        "mission m normal\ngamma dock\n",
    ]
    for text in texts:
        assert_equivalent(view, parse_mission(text))


def test_oracle_task_reference_failures(two_auv):
    view = scenario_view(two_auv)
    mission = parse_mission("mission m normal\nalpha observe object o99\n")
    assert not oracle_task_feasible(mission.tasks[0], view, 20.0)
