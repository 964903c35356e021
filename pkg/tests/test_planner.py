import pytest

from abyssal.bt import Action, BehaviorTree, Condition, Sequence
from abyssal.errors import ValidationFailed
from abyssal.knowledge import ActionKind
from abyssal.mission import parse_mission
from abyssal.planner import (
    FULL,
    KG_ONLY,
    STATE_ONLY,
    FEASIBLE,
    INFEASIBLE_AFFORDANCE,
    INFEASIBLE_CAPABILITY,
    INFEASIBLE_RESOURCE,
    KEEP_CURRENT,
    MODES,
    OVERRIDE,
    RESUME,
    UNKNOWN_REFERENCE,
    Context,
    PlannerConfig,
    SwitchDecision,
    build_return_to_dock,
    check_completeness,
    check_plan_completeness,
    context_decide,
    plan_mission,
    safety_plan_id,
    synthesize_bt,
    validate_mission,
)
from abyssal.ablation import scenario_view


def config(mode=FULL, floor=20.0):
    return PlannerConfig(mode=mode, battery_floor=floor)


def validate(two_auv, text, mode=FULL):
    view = scenario_view(two_auv)
    return validate_mission(parse_mission(text), view, config(mode))


class TestValidation:
    def test_arm_robot_manipulate_cube_feasible(self, two_auv):
        report = validate(two_auv, "mission m normal\nbeta manipulate class cube\n")
        assert report.feasible

    def test_survey_robot_lacks_manipulator(self, two_auv):
        report = validate(two_auv, "mission m normal\nalpha manipulate class cube\n")
        assert report.verdicts[0].code == INFEASIBLE_CAPABILITY

    def test_affordance_violation_only_in_full(self, two_auv):
        text = "mission m normal\nbeta observe class cylinder\n"
        assert validate(two_auv, text, FULL).verdicts[0].code == INFEASIBLE_AFFORDANCE
        assert validate(two_auv, text, KG_ONLY).feasible
        assert validate(two_auv, text, STATE_ONLY).feasible

    def test_capability_violation_slips_past_state_only(self, two_auv):
        text = "mission m normal\nalpha manipulate class cube\n"
        assert validate(two_auv, text, KG_ONLY).verdicts[0].code == INFEASIBLE_CAPABILITY
        assert validate(two_auv, text, STATE_ONLY).feasible

    def test_resource_violation_caught_in_all_modes(self, two_auv):
        text = "mission m normal\nalpha navigate region 4000 0 10 10\n"
        for mode in MODES:
            assert validate(two_auv, text, mode).verdicts[0].code == INFEASIBLE_RESOURCE

    def test_unknown_references_every_mode(self, two_auv):
        cases = [
            "mission m normal\ngamma dock\n",
            "mission m normal\nalpha observe object o99\n",
            "mission m normal\nalpha observe class jellyfish\n",
            "mission m normal\nalpha communicate station dock9\n",
        ]
        for mode in MODES:
            for text in cases:
                assert validate(two_auv, text, mode).verdicts[0].code == UNKNOWN_REFERENCE

    def test_verdict_cites_first_failing_check(self, two_auv):
        # alpha lacks the manipulator AND cylinder does not afford observe;
        # capability is checked first.
        report = validate(two_auv, "mission m normal\nalpha touch class sphere\n")
        assert report.verdicts[0].code == INFEASIBLE_CAPABILITY

    def test_overall_consistency(self, two_auv):
        report = validate(
            two_auv, "mission m normal\nbeta manipulate class cube\nalpha manipulate class cube\n"
        )
        assert not report.feasible
        codes = [v.code for v in report.verdicts]
        assert codes == [FEASIBLE, INFEASIBLE_CAPABILITY]

    def test_mode_monotonicity(self, two_auv):
        texts = [
            "mission m normal\nbeta observe class cylinder\n",
            "mission m normal\nalpha manipulate class cube\n",
            "mission m normal\nalpha survey region 0 0 40 10\n",
            "mission m normal\nalpha navigate region 4000 0 10 10\n",
            "mission m normal\nbeta touch class cone\n",
        ]
        accepted = {
            mode: {t for t in texts if validate(two_auv, t, mode).feasible}
            for mode in MODES
        }
        assert accepted[FULL] <= accepted[KG_ONLY] <= accepted[STATE_ONLY]


class TestSynthesis:
    def test_observe_template_shape(self, two_auv):
        mission = parse_mission("mission m normal\nbeta observe class cube\n")
        tree = synthesize_bt(mission.tasks[0], scenario_view(two_auv), config())
        assert tree.leaves() == [
            ("condition", "battery_above_floor"),
            ("action", "navigate_to"),
            ("condition", "target_in_view"),
            ("action", "circumnavigate"),
            ("action", "record_observation"),
        ]

    def test_dock_template_shape(self, two_auv):
        mission = parse_mission("mission m normal\nalpha dock\n")
        tree = synthesize_bt(mission.tasks[0], scenario_view(two_auv), config())
        assert tree.leaves() == [
            ("condition", "dock_in_range"),
            ("action", "align_dock"),
            ("action", "dock"),
        ]

    def test_survey_template_has_monitor(self, two_auv):
        mission = parse_mission("mission m normal\nalpha survey region 0 0 40 10\n")
        tree = synthesize_bt(mission.tasks[0], scenario_view(two_auv), config())
        assert ("monitor", "detection_active") in tree.leaves()

    def test_plan_preserves_task_order(self, two_auv):
        mission = parse_mission(
            "mission m normal\nalpha survey region 0 0 40 10\nalpha dock\n"
        )
        plan = plan_mission(mission, scenario_view(two_auv), config())
        assert len(plan.trees) == 2
        assert plan.trees[0][0].action is ActionKind.SURVEY
        assert plan.trees[1][0].action is ActionKind.DOCK

    def test_plan_rejects_infeasible(self, two_auv):
        mission = parse_mission("mission m normal\nalpha manipulate class cube\n")
        with pytest.raises(ValidationFailed):
            plan_mission(mission, scenario_view(two_auv), config())


class TestCompleteness:
    def test_full_mode_plans_complete(self, two_auv):
        mission = parse_mission(
            "mission m normal\nalpha survey region 0 0 40 10\nbeta observe class cube\nalpha dock\n"
        )
        plan = plan_mission(mission, scenario_view(two_auv), config())
        assert check_plan_completeness(plan, mission).fraction == 1.0

    def test_guard_after_action_rejected(self, two_auv):
        mission = parse_mission("mission m normal\nalpha dock\n")
        swapped = BehaviorTree(
            Sequence(
                [
                    Action("align_dock", {}),
                    Condition("dock_in_range", {}),
                    Action("dock", {}),
                ]
            )
        )
        report = check_completeness({0: swapped}, mission)
        assert report.fraction == 0.0

    def test_missing_tree_counts_incomplete(self, two_auv):
        mission = parse_mission(
            "mission m normal\nalpha dock\nalpha undock\nalpha survey region 0 0 40 10\n"
        )
        assert check_completeness({}, mission).fraction == 0.0
        partial = synthesize_bt(mission.tasks[0], scenario_view(two_auv), config())
        report = check_completeness({0: partial}, mission)
        assert abs(report.fraction - 1 / 3) < 1e-9


class TestContextDecide:
    def test_low_battery_overrides_normal_plan(self):
        class Fake:
            priority = 0
            plan_id = "survey"

        decision = context_decide(Context(battery=15.0), Fake(), [], config(), [])
        assert decision.kind == OVERRIDE and decision.plan_id is None

    def test_low_battery_does_not_stack_safety_twice(self):
        class Fake:
            priority = 3
            plan_id = "safety_return:alpha"

        decision = context_decide(Context(battery=15.0), Fake(), [], config(), [])
        assert decision.kind == KEEP_CURRENT

    def test_equal_priority_keeps_current(self):
        class Fake:
            priority = 0
            plan_id = "survey"

        decision = context_decide(
            Context(battery=80.0), Fake(), [("other", 0)], config(), []
        )
        assert decision.kind == KEEP_CURRENT

    def test_resume_after_active_finishes(self):
        decision = context_decide(Context(battery=80.0), None, [], config(), ["survey"])
        assert decision.kind == RESUME and decision.plan_id == "survey"

    def test_return_plan_shape(self, two_auv):
        tree = build_return_to_dock("alpha", scenario_view(two_auv))
        leaf_ids = [lid for _, lid in tree.leaves()]
        assert leaf_ids == ["navigate_to", "align_dock", "share_pending_knowledge", "dock"]
        assert safety_plan_id("alpha") == "safety_return:alpha"


class TestConfig:
    def test_invalid_configs(self):
        with pytest.raises(ValueError):
            PlannerConfig(mode="HALF")
        with pytest.raises(ValueError):
            PlannerConfig(battery_floor=0.0)
        with pytest.raises(ValueError):
            PlannerConfig(refresh_interval=0.0)
