import pytest
from fastapi.testclient import TestClient

from abyssal.orchestrator import Engine
from abyssal.scenario import load_builtin
from abyssal.server import EngineController, create_app


@pytest.fixture()
def client():
    engine = Engine(load_builtin("two_auv"))
    engine.paused = True
    controller = EngineController(engine)  # not started: tests drive steps
    app = create_app(controller)
    with TestClient(app) as c:
        yield c, controller
    engine.close()


class TestState:
    def test_snapshot(self, client):
        c, _ = client
        body = c.get("/state").json()
        assert set(body["robots"]) == {"alpha", "beta"}
        assert body["paused"] is True

    def test_state_advances_with_steps(self, client):
        c, controller = client
        controller.engine.paused = False
        controller.step_blocking(5)
        assert c.get("/state").json()["t"] == pytest.approx(0.5)


class TestMissions:
    def test_paused_submission_synchronous(self, client):
        c, _ = client
        resp = c.post(
            "/missions",
            json={"robot": "alpha", "text": "mission sweep normal\nalpha survey region 0 0 40 10\n"},
        )
        body = resp.json()
        assert body["accepted"] and body["plan_id"] == "sweep"

    def test_running_submission_queued_then_applied(self, client):
        c, controller = client
        controller.engine.paused = False
        resp = c.post(
            "/missions",
            json={"robot": "alpha", "text": "mission sweep normal\nalpha survey region 0 0 40 10\n"},
        )
        assert resp.json() == {"queued": True}
        controller.step_blocking(2)
        kinds = [e.kind for e in controller.engine.events]
        assert "ExternalInput" in kinds and "MissionValidated" in kinds

    def test_missing_fields(self, client):
        c, _ = client
        assert c.post("/missions", json={"robot": "alpha"}).status_code == 422


class TestInterventions:
    def test_classify_applied_while_paused(self, client):
        c, controller = client
        resp = c.post(
            "/interventions", json={"type": "ClassifyObject", "object": "torus_5", "class": "cube"}
        )
        assert resp.json()["applied"]
        rec = controller.engine.runtime.robot("alpha").object_records["torus_5"]
        assert rec.source == "human" and rec.classification == "cube"

    def test_bad_intervention_rejected(self, client):
        c, _ = client
        resp = c.post("/interventions", json={"type": "Nonsense"})
        assert resp.status_code == 400


class TestControl:
    def test_pause_resume(self, client):
        c, controller = client
        assert c.post("/control", json={"action": "resume"}).json()["paused"] is False
        assert c.post("/control", json={"action": "pause"}).json()["paused"] is True
        assert c.post("/control", json={"action": "warp"}).status_code == 422


class TestEvents:
    def test_backlog_and_incremental(self, client):
        c, controller = client
        everything = c.get("/events", params={"since": 0}).json()
        assert everything[0]["kind"] == "ScenarioLoaded"
        head = everything[-1]["seq"]
        assert c.get("/events", params={"since": head}).json() == []
        controller.engine.paused = False
        controller.step_blocking(1)
        fresh = c.get("/events", params={"since": head}).json()
        assert all(e["seq"] > head for e in fresh)

    def test_bad_cursor(self, client):
        c, controller = client
        head = controller.engine.events[-1].seq
        assert c.get("/events", params={"since": head + 10}).status_code == 416
