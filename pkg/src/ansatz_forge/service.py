"""HTTP run-service: starts search runs on worker threads, persists run
records as JSON files, and exposes the feedback mailbox the cockpit drives."""

from __future__ import annotations

import json
import os
import queue
import threading
import time
import uuid
from dataclasses import dataclass, field
from pathlib import Path

from fastapi import FastAPI, HTTPException
from fastapi.responses import PlainTextResponse
from pydantic import BaseModel

from . import llm, problems, search, vqe
from .circuit import decode
from .errors import AnsatzForgeError
from .qasm import emit_qasm
from .search import FeedbackDecision, FeedbackNote, SearchConfig


class Mailbox:
    """Thread-safe feedback queue drained by the search loop between iterations."""

    def __init__(self):
        self._q = queue.Queue()

    def post(self, event) -> None:
        self._q.put(event)

    def drain(self) -> list:
        events = []
        while True:
            try:
                events.append(self._q.get_nowait())
            except queue.Empty:
                return events


@dataclass
class RunState:
    run_id: str
    created_at: float
    record: dict
    mailbox: Mailbox = field(default_factory=Mailbox)
    thread: threading.Thread | None = None
    lock: threading.Lock = field(default_factory=threading.Lock)

    def snapshot(self) -> dict:
        with self.lock:
            return json.loads(json.dumps(self.record))


def _atomic_write(path: Path, doc: dict) -> None:
    tmp = path.with_suffix(".tmp")
    tmp.write_text(json.dumps(doc, indent=2))
    os.replace(tmp, path)


class RunManager:
    def __init__(self, runs_dir):
        self.runs_dir = Path(runs_dir)
        self.runs_dir.mkdir(parents=True, exist_ok=True)
        self.runs: dict[str, RunState] = {}
        self._load_existing()

    def _load_existing(self) -> None:
        for path in sorted(self.runs_dir.glob("*.json")):
            try:
                record = json.loads(path.read_text())
                run_id = record["run_id"]
            except (ValueError, KeyError):
                continue
            if record.get("status") == "running":
                # The process that owned this run is gone.
                record["status"] = "aborted"
            self.runs[run_id] = RunState(
                run_id=run_id, created_at=record.get("created_at", 0.0),
                record=record)

    def _persist(self, state: RunState) -> None:
        _atomic_write(self.runs_dir / f"{state.run_id}.json", state.record)

    def start_run(self, problem_doc: dict, search_cfg: SearchConfig,
                  train_cfg: vqe.TrainConfig, proposer_kind: str = "random",
                  seed: int = 0, llm_cfg: llm.LlmConfig | None = None) -> str:
        hamiltonian, _ = problems.load_problem(problem_doc)
        proposer = make_proposer(proposer_kind, seed, search_cfg, llm_cfg)
        run_id = uuid.uuid4().hex[:12]
        state = RunState(run_id=run_id, created_at=time.time(), record={
            "run_id": run_id,
            "created_at": time.time(),
            "status": "running",
            "problem": problem_doc,
            "proposer": proposer_kind,
            "seed": seed,
            "train_config": _train_cfg_dict(train_cfg),
            "report": None,
        })
        self.runs[run_id] = state
        self._persist(state)

        def on_iteration(report: search.SearchReport) -> None:
            with state.lock:
                state.record["report"] = report.to_dict()
                state.record["status"] = (
                    report.status if report.status != "running" else "running")
            self._persist(state)

        def worker() -> None:
            try:
                search.run_search(
                    hamiltonian, proposer, train_cfg, search_cfg,
                    feedback_source=state.mailbox, on_iteration=on_iteration)
            except AnsatzForgeError as exc:
                with state.lock:
                    state.record["status"] = "aborted"
                    state.record["error"] = str(exc)
                self._persist(state)

        state.thread = threading.Thread(target=worker, daemon=True)
        state.thread.start()
        return run_id

    def get(self, run_id: str) -> RunState:
        if run_id not in self.runs:
            raise KeyError(run_id)
        return self.runs[run_id]


def make_proposer(kind: str, seed: int, cfg: SearchConfig,
                  llm_cfg: llm.LlmConfig | None = None):
    if kind == "random":
        return llm.RandomProposer(seed, cfg)
    if kind == "exhaustive":
        return llm.ExhaustiveProposer(cfg)
    if kind == "llm":
        if llm_cfg is None:
            raise AnsatzForgeError("llm proposer needs an LlmConfig")
        return llm.LlmProposer(llm_cfg)
    raise AnsatzForgeError(f"unknown proposer {kind!r}")


def _train_cfg_dict(cfg: vqe.TrainConfig) -> dict:
    return {
        "optimizer": cfg.optimizer,
        "learning_rate": cfg.learning_rate,
        "max_epochs": cfg.max_epochs,
        "convergence_tol": cfg.convergence_tol,
        "convergence_window": cfg.convergence_window,
        "init_strategy": cfg.init_strategy,
        "init_value": cfg.init_value,
        "seed": cfg.seed,
        "gradient_mode": cfg.gradient_mode,
        "fd_step": cfg.fd_step,
    }


class StartRunBody(BaseModel):
    problem: dict
    search: dict = {}
    train: dict = {}
    proposer: str = "random"
    seed: int = 0


class FeedbackBody(BaseModel):
    text: str


class DecisionBody(BaseModel):
    iteration: int
    decision: str  # accept | reject


def create_app(runs_dir) -> FastAPI:
    app = FastAPI(title="ansatz-forge run service")
    manager = RunManager(runs_dir)
    app.state.manager = manager

    def get_state(run_id: str) -> RunState:
        try:
            return manager.get(run_id)
        except KeyError:
            raise HTTPException(status_code=404, detail=f"unknown run {run_id}")

    @app.post("/runs")
    def start_run(body: StartRunBody):
        search_cfg = SearchConfig(**body.search) if body.search else None
        if search_cfg is None:
            hamiltonian, _ = problems.load_problem(body.problem)
            search_cfg = SearchConfig(n_qubits=hamiltonian.n_qubits)
        train_cfg = vqe.TrainConfig(**body.train)
        try:
            run_id = manager.start_run(
                body.problem, search_cfg, train_cfg,
                proposer_kind=body.proposer, seed=body.seed)
        except AnsatzForgeError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        return {"run_id": run_id}

    @app.get("/runs")
    def list_runs():
        return {"runs": [
            {"run_id": s.run_id, "created_at": s.record.get("created_at"),
             "status": s.snapshot().get("status")}
            for s in sorted(manager.runs.values(), key=lambda s: s.created_at)]}

    @app.get("/runs/{run_id}")
    def get_run(run_id: str):
        return get_state(run_id).snapshot()

    @app.get("/runs/{run_id}/events")
    def get_events(run_id: str, since: int = 0):
        record = get_state(run_id).snapshot()
        report = record.get("report") or {}
        entries = (report.get("history") or {}).get("entries", [])
        return {
            "status": record.get("status"),
            "entries": entries[since:],
            "next": len(entries),
            "best": report.get("best"),
            "feedback_notes": (report.get("history") or {}).get("feedback_notes", []),
        }

    @app.get("/runs/{run_id}/iterations/{k}/qasm", response_class=PlainTextResponse)
    def get_qasm(run_id: str, k: int):
        record = get_state(run_id).snapshot()
        report = record.get("report") or {}
        entries = (report.get("history") or {}).get("entries", [])
        matches = [e for e in entries if e["iteration"] == k]
        if not matches:
            raise HTTPException(status_code=404, detail=f"no entry for iteration {k}")
        entry = matches[0]
        n_qubits = report["config"]["n_qubits"]
        cfg = SearchConfig(n_qubits=n_qubits,
                           n_blocks=report["config"]["n_blocks"])
        genome = search.parse_proposal(entry["genome"], cfg)
        return emit_qasm(decode(genome, n_qubits), entry["best_params"])

    @app.post("/runs/{run_id}/feedback")
    def post_feedback(run_id: str, body: FeedbackBody):
        state = get_state(run_id)
        if state.snapshot().get("status") != "running":
            raise HTTPException(status_code=409, detail="run is not running")
        state.mailbox.post(FeedbackNote(body.text))
        return {"ok": True}

    @app.post("/runs/{run_id}/decision")
    def post_decision(run_id: str, body: DecisionBody):
        state = get_state(run_id)
        if state.snapshot().get("status") != "running":
            raise HTTPException(status_code=409, detail="run is finished")
        if body.decision not in ("accept", "reject"):
            raise HTTPException(status_code=422, detail="decision must be accept|reject")
        state.mailbox.post(
            FeedbackDecision(body.iteration, accept=body.decision == "accept"))
        return {"ok": True}

    return app
