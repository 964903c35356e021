"""HTTP face of the engine: snapshots, mission submission, interventions,
and a server-push event stream.

One background thread owns the engine loop; API handlers only queue
messages and read snapshots under the engine lock.
"""

from __future__ import annotations

import json
import threading
import time

from fastapi import FastAPI, HTTPException
from fastapi.responses import StreamingResponse

from .errors import AbyssalError, BadCursor


class EngineController:
    def __init__(self, engine, realtime=False):
        self.engine = engine
        self.lock = threading.Lock()
        self.realtime = realtime
        self._stop = threading.Event()
        self._thread = None

    def start(self):
        self._thread = threading.Thread(target=self._loop, daemon=True)
        self._thread.start()

    def stop(self):
        self._stop.set()
        if self._thread:
            self._thread.join(timeout=2.0)

    def _loop(self):
        dt = self.engine.world.params.dt
        while not self._stop.is_set():
            if self.engine.paused:
                time.sleep(0.05)
                continue
            with self.lock:
                self.engine.step_once()
            if self.realtime:
                time.sleep(dt)

    def step_blocking(self, n=1):
        with self.lock:
            for _ in range(n):
                self.engine.step_once()


def create_app(controller: EngineController) -> FastAPI:
    app = FastAPI(title="abyssal")
    engine = controller.engine

    @app.get("/state")
    def state():
        with controller.lock:
            return engine.snapshot()

    @app.post("/missions")
    def missions(body: dict):
        robot = body.get("robot")
        text = body.get("text")
        if not robot or not text:
            raise HTTPException(422, "need {robot, text}")
        with controller.lock:
            if engine.paused:
                # Applied immediately while paused so the console gets a
                # synchronous verdict; still logged as external input.
                engine.emit(
                    "ExternalInput", {"message": {"type": "mission", "robot": robot, "text": text}}
                )
                return engine.submit_mission(robot, text, source="api")
            engine.queue_external({"type": "mission", "robot": robot, "text": text})
        return {"queued": True}

    @app.post("/interventions")
    def interventions(body: dict):
        with controller.lock:
            if engine.paused:
                engine.emit(
                    "ExternalInput", {"message": {"type": "intervention", "intervention": body}}
                )
                try:
                    engine.apply_intervention(body, source="api")
                except AbyssalError as exc:
                    raise HTTPException(400, str(exc))
                return {"applied": True, "seq": engine.events[-1].seq}
            engine.queue_external({"type": "intervention", "intervention": body})
        return {"queued": True}

    @app.post("/control")
    def control(body: dict):
        action = body.get("action")
        if action == "pause":
            engine.paused = True
        elif action == "resume":
            engine.paused = False
        elif action == "seed":
            with controller.lock:
                engine.world.rng.seed(int(body.get("value", 0)))
        else:
            raise HTTPException(422, f"unknown action {action!r}")
        return {"paused": engine.paused}

    @app.get("/events")
    def events(since: int = 0, follow: int = 0):
        with controller.lock:
            try:
                backlog = [e.to_dict() for e in engine.event_stream(since)]
            except BadCursor as exc:
                raise HTTPException(416, str(exc))
        if not follow:
            return backlog

        def sse():
            cursor = since
            pending = backlog
            while True:
                for e in pending:
                    cursor = e["seq"]
                    yield f"data: {json.dumps(e, sort_keys=True)}\n\n"
                time.sleep(0.05)
                with controller.lock:
                    pending = [e.to_dict() for e in engine.event_stream(cursor)]

        return StreamingResponse(sse(), media_type="text/event-stream")

    return app
