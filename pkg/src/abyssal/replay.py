"""Event-log replay: re-simulate from the embedded scenario and compare."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .errors import CorruptLog
from .orchestrator import Engine
from .scenario import load_scenario


def read_log(path):
    text = Path(path).read_text()
    records = []
    for line_no, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            rec = json.loads(line)
        except json.JSONDecodeError as exc:
            raise CorruptLog(f"line {line_no}: {exc}") from exc
        for key in ("seq", "t", "kind", "payload"):
            if key not in rec:
                raise CorruptLog(f"line {line_no}: missing {key!r}")
        records.append(rec)
    if not records:
        raise CorruptLog("empty log")
    if records[0]["kind"] != "ScenarioLoaded":
        raise CorruptLog("log does not start with ScenarioLoaded")
    if records[-1]["kind"] != "RunCompleted":
        raise CorruptLog("log truncated: no RunCompleted record")
    return records


@dataclass
class ReplayReport:
    clean: bool
    divergent_seq: int | None = None
    detail: str = ""

    def to_dict(self):
        return {
            "clean": self.clean,
            "divergent_seq": self.divergent_seq,
            "detail": self.detail,
        }


def replay_log(path) -> ReplayReport:
    """Re-run the embedded scenario, re-injecting recorded API inputs, and
    report the first sequence number where the new run diverges."""
    records = read_log(path)
    scenario = load_scenario(records[0]["payload"]["scenario"])
    end_t = float(records[-1]["payload"]["t"])
    externals = [r for r in records if r["kind"] == "ExternalInput"]

    engine = Engine(scenario)
    dt = engine.world.params.dt
    while engine.world.time < end_t - 1e-9:
        while externals and externals[0]["t"] <= engine.world.time + dt + 1e-9:
            engine.queue_external(externals.pop(0)["payload"]["message"])
        engine.step_once()
    engine.emit("RunCompleted", {"t": round(engine.world.time, 6)})

    fresh = [e.to_dict() for e in engine.events]
    for i, old in enumerate(records):
        if i >= len(fresh):
            return ReplayReport(False, old["seq"], "replay produced fewer events")
        if fresh[i] != old:
            return ReplayReport(
                False,
                old["seq"],
                f"recorded {json.dumps(old, sort_keys=True)} != replayed "
                f"{json.dumps(fresh[i], sort_keys=True)}",
            )
    if len(fresh) > len(records):
        return ReplayReport(False, records[-1]["seq"], "replay produced extra events")
    return ReplayReport(True)
