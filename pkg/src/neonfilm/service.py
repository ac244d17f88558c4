"""HTTP gateway around a live engine.

Endpoints:
  GET  /state            current snapshot
  GET  /scenario         scenario + config + sampled phase boundary
  POST /command          validated control command (seq-idempotent)
  GET  /stream           NDJSON telemetry, one record per stride
  GET  /history?from_t=  backfill for reconnecting clients

One background thread steps the engine at a wall-clock pacing factor
(sim seconds per wall second). Slow stream consumers are dropped rather
than allowed to stall the producer.
"""

from __future__ import annotations

import json
import queue
import threading
import time
from collections import deque
from typing import Any

from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import StreamingResponse
from pydantic import BaseModel

from .config import ModelConfig
from .engine import CSV_COLUMNS, Engine, Scenario
from .errors import CommandError
from .thermo import phase_boundary_points

_QUEUE_LIMIT = 512
_HISTORY_LIMIT = 500_000


class _Subscriber:
    def __init__(self) -> None:
        self.q: queue.Queue = queue.Queue(maxsize=_QUEUE_LIMIT)
        self.dropped = False


class SimService:
    """Owns the engine, its pacing thread, and the fan-out to subscribers."""

    def __init__(self, scenario: Scenario, cfg: ModelConfig | None = None,
                 pacing: float | None = None):
        self.engine = Engine(scenario, cfg)
        self.pacing = pacing if pacing is not None else self.engine.cfg.engine.pacing
        self.lock = threading.Lock()
        self.history: deque = deque(maxlen=_HISTORY_LIMIT)
        self.subscribers: list[_Subscriber] = []
        self.acks: dict[int, dict[str, Any]] = {}
        self.done = False
        self._stop = threading.Event()
        self._thread: threading.Thread | None = None
        self._strides_per_push = 1
        if self.engine.records:
            self.history.append(self.engine.records[-1].as_dict())

    # -- stepping

    def step_strides(self, count: int = 1) -> None:
        """Advance by telemetry strides; also used directly by tests."""
        per = self.engine._record_every
        with self.lock:
            for _ in range(count):
                if self.engine.t >= self.engine.scenario.duration_s:
                    self.done = True
                    break
                before = len(self.engine.records)
                for _ in range(per):
                    self.engine.step()
                for rec in self.engine.records[before:]:
                    self._publish(rec.as_dict())

    def _publish(self, item: dict[str, Any]) -> None:
        self.history.append(item)
        alive = []
        for sub in self.subscribers:
            try:
                sub.q.put_nowait(item)
                alive.append(sub)
            except queue.Full:
                sub.dropped = True
        self.subscribers = alive

    def _loop(self) -> None:
        stride = self.engine.scenario.stride_s
        wall_per_stride = stride / self.pacing if self.pacing > 0 else 0.0
        next_tick = time.monotonic()
        while not self._stop.is_set() and not self.done:
            self.step_strides(1)
            if wall_per_stride > 0:
                next_tick += wall_per_stride
                delay = next_tick - time.monotonic()
                if delay > 0:
                    self._stop.wait(delay)
                else:
                    next_tick = time.monotonic()

    def start(self) -> None:
        if self._thread is None:
            self._thread = threading.Thread(target=self._loop, daemon=True)
            self._thread.start()

    def stop(self) -> None:
        self._stop.set()
        if self._thread is not None:
            self._thread.join(timeout=5)

    # -- queries

    def state(self) -> dict[str, Any]:
        with self.lock:
            out = self.engine.state_dict()
        out["status"] = "done" if self.done else "running"
        out["pacing"] = self.pacing
        return out

    def scenario_info(self) -> dict[str, Any]:
        sc = self.engine.scenario
        cfg = self.engine.cfg
        return {
            "name": sc.name,
            "seed": sc.seed,
            "duration_s": sc.duration_s,
            "dt": sc.dt,
            "stride_s": sc.stride_s,
            "initial": {"T_K": sc.T_start, "n_mol": sc.n_mol,
                        "power_dbm": sc.power_dbm},
            "commands": [{"t_s": c.t_s, "kind": c.kind, **c.args}
                         for c in sc.commands],
            "csv_columns": CSV_COLUMNS,
            "config": cfg.to_dict(),
            "phase_boundary": phase_boundary_points(cfg.diagram),
        }

    def command(self, seq: int, kind: str, args: dict[str, Any]) -> dict[str, Any]:
        with self.lock:
            if seq in self.acks:
                return self.acks[seq]
            self.engine.submit(kind, args)
            ack = {"seq": seq, "accepted": True, "kind": kind,
                   "sim_t_s": self.engine.t}
            self.acks[seq] = ack
            return ack

    def history_since(self, from_t: float, limit: int = 100_000) -> list[dict[str, Any]]:
        with self.lock:
            return [item for item in self.history if item["t_s"] >= from_t][:limit]

    def subscribe(self) -> _Subscriber:
        sub = _Subscriber()
        with self.lock:
            self.subscribers.append(sub)
        return sub

    def unsubscribe(self, sub: _Subscriber) -> None:
        with self.lock:
            if sub in self.subscribers:
                self.subscribers.remove(sub)


class CommandIn(BaseModel):
    seq: int
    kind: str
    args: dict[str, float] = {}


def create_app(service: SimService) -> FastAPI:
    app = FastAPI(title="neonfilm gateway", docs_url=None, redoc_url=None)
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"],
        allow_headers=["*"],
    )
    app.state.service = service

    @app.get("/state")
    def state() -> dict[str, Any]:
        return service.state()

    @app.get("/scenario")
    def scenario() -> dict[str, Any]:
        return service.scenario_info()

    @app.post("/command")
    def command(cmd: CommandIn) -> dict[str, Any]:
        try:
            return service.command(cmd.seq, cmd.kind, cmd.args)
        except CommandError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from None

    @app.get("/history")
    def history(from_t: float = 0.0) -> dict[str, Any]:
        records = service.history_since(from_t)
        return {"count": len(records), "records": records}

    @app.get("/stream")
    def stream() -> StreamingResponse:
        sub = service.subscribe()

        def lines():
            try:
                while True:
                    try:
                        item = sub.q.get(timeout=1.0)
                    except queue.Empty:
                        if sub.dropped or service.done or service._stop.is_set():
                            break
                        continue
                    yield json.dumps(item, sort_keys=True) + "\n"
                    if sub.dropped:
                        break
            finally:
                service.unsubscribe(sub)

        return StreamingResponse(lines(), media_type="application/x-ndjson")

    return app


def serve(scenario: Scenario, cfg: ModelConfig | None = None,
          host: str = "127.0.0.1", port: int = 8777,
          pacing: float | None = None) -> None:
    import uvicorn

    service = SimService(scenario, cfg, pacing=pacing)
    service.start()
    app = create_app(service)
    try:
        uvicorn.run(app, host=host, port=port, log_level="warning")
    finally:
        service.stop()
