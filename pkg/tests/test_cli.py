import json

from click.testing import CliRunner

from abyssal.cli import main
from abyssal.orchestrator import run_scenario
from abyssal.scenario import builtin_scenario_path, load_builtin

SCENARIO = str(builtin_scenario_path("two_auv"))


def invoke(*args):
    return CliRunner().invoke(main, list(args))


def write_mission(tmp_path, text):
    path = tmp_path / "mission.txt"
    path.write_text(text)
    return str(path)


class TestValidate:
    def test_feasible_exit_zero(self, tmp_path):
        mission = write_mission(tmp_path, "mission m normal\nbeta manipulate class cube\n")
        result = invoke("validate", SCENARIO, mission)
        assert result.exit_code == 0
        assert "Feasible" in result.output

    def test_infeasible_exit_one(self, tmp_path):
        mission = write_mission(tmp_path, "mission m normal\nalpha manipulate class cube\n")
        result = invoke("validate", SCENARIO, mission)
        assert result.exit_code == 1
        assert "InfeasibleCapability" in result.output

    def test_mode_flag(self, tmp_path):
        mission = write_mission(tmp_path, "mission m normal\nbeta observe class cylinder\n")
        assert invoke("validate", SCENARIO, mission, "--mode", "full").exit_code == 1
        assert invoke("validate", SCENARIO, mission, "--mode", "kg").exit_code == 0

    def test_json_output(self, tmp_path):
        mission = write_mission(tmp_path, "mission m normal\nalpha dock\n")
        result = invoke("validate", SCENARIO, mission, "--json")
        body = json.loads(result.output)
        assert body["overall"] == "Feasible"


class TestPlan:
    def test_plan_json_schema(self, tmp_path):
        mission = write_mission(
            tmp_path, "mission m normal\nalpha survey region 0 0 40 10\nalpha dock\n"
        )
        result = invoke("plan", SCENARIO, mission, "--json")
        assert result.exit_code == 0
        body = json.loads(result.output)
        assert body["schema"] == "abyssal-bt/1"
        assert len(body["trees"]) == 2


class TestAblate:
    def test_table_output(self):
        result = invoke(
            "ablate", SCENARIO, "--n", "20", "--seed", "1",
            "--mix", "none=0.5,capability=0.2,affordance=0.3",
        )
        assert result.exit_code == 0
        assert "FULL" in result.output and "1.00" in result.output

    def test_json_output(self):
        result = invoke("ablate", SCENARIO, "--n", "10", "--seed", "2", "--json")
        body = json.loads(result.output)
        assert [c["mode"] for c in body["configs"]] == ["FULL", "KG_ONLY", "STATE_ONLY"]

    def test_bad_mix(self):
        result = invoke("ablate", SCENARIO, "--mix", "none=0.4,capability=0.4")
        assert result.exit_code != 0


class TestRunReplay:
    def test_run_then_replay_clean(self, tmp_path):
        log = tmp_path / "run.jsonl"
        result = invoke("run", SCENARIO, "--until", "2.0", "--log", str(log))
        assert result.exit_code == 0
        replayed = invoke("replay", str(log))
        assert replayed.exit_code == 0
        assert "clean" in replayed.output

    def test_replay_divergence_exit_one(self, tmp_path):
        log = tmp_path / "run.jsonl"
        run_scenario(load_builtin("replay_demo"), until_t=5.0, log_path=str(log))
        lines = log.read_text().splitlines()
        rec = json.loads(lines[1])
        rec["payload"]["robot"] = "omega"
        lines[1] = json.dumps(rec, sort_keys=True)
        log.write_text("\n".join(lines) + "\n")
        result = invoke("replay", str(log))
        assert result.exit_code == 1
        assert "divergence" in result.output
