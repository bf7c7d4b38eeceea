"""Engine state shared by request handlers.

Readers grab ``engine.current`` once and work on that immutable snapshot;
a rebuild publishes a new snapshot with a single attribute assignment.
"""

from __future__ import annotations

import itertools
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Mapping, Optional

from ..evaluation import ALL_ALGORITHMS, run_evaluation
from ..model import AlgorithmId, Dataset
from ..ingestion import ingest
from ..recommenders import build_item_index, recommend


class EngineEmpty(RuntimeError):
    pass


class RebuildInProgress(RuntimeError):
    pass


class EvaluationRunning(RuntimeError):
    pass


class UnknownUser(LookupError):
    pass


@dataclass(frozen=True)
class Snapshot:
    version: int
    dataset: Dataset
    index: Mapping


@dataclass
class Job:
    id: str
    version: int
    status: str = "pending"
    report_json: Optional[str] = None
    error: Optional[str] = None


class Engine:
    def __init__(self, eval_workers: int = 2):
        self.current: Optional[Snapshot] = None
        self.last_report: Optional[str] = None
        self._staged = {"marketplace": [], "social": []}
        self._stage_lock = threading.Lock()
        self._rebuild_lock = threading.Lock()
        self._jobs_lock = threading.Lock()
        self._jobs = {}
        self._running = {}  # snapshot version -> job id
        self._ids = itertools.count(1)
        self._pool = ThreadPoolExecutor(max_workers=eval_workers, thread_name_prefix="eval")

    @property
    def version(self) -> int:
        snap = self.current
        return snap.version if snap else 0

    def stage(self, stream: str, records) -> int:
        with self._stage_lock:
            self._staged[stream].extend(records)
        return len(records)

    def rebuild(self) -> int:
        """Build from all staged records and publish the new snapshot."""
        if not self._rebuild_lock.acquire(blocking=False):
            raise RebuildInProgress("a rebuild is already running")
        try:
            with self._stage_lock:
                market = list(self._staged["marketplace"])
                social = list(self._staged["social"])
            dataset = ingest(market, social).warm()
            snap = Snapshot(self.version + 1, dataset, build_item_index(dataset))
            self.current = snap
            return snap.version
        finally:
            self._rebuild_lock.release()

    def snapshot(self) -> Snapshot:
        snap = self.current
        if snap is None:
            raise EngineEmpty("no data has been indexed yet")
        return snap

    def recommend(self, algorithm: AlgorithmId, user: str, k: int):
        snap = self.snapshot()
        if algorithm != AlgorithmId.MP and user not in snap.dataset.users:
            raise UnknownUser(user)
        return snap.version, recommend(algorithm, user, snap.dataset, snap.index, k)

    def start_evaluation(self, algorithms=ALL_ALGORITHMS, k: int = 10, seed: int = 0,
                         measure_runtime: bool = False) -> str:
        snap = self.snapshot()
        with self._jobs_lock:
            if snap.version in self._running:
                raise EvaluationRunning(
                    f"evaluation {self._running[snap.version]} is running on version {snap.version}")
            job = Job(str(next(self._ids)), snap.version)
            self._jobs[job.id] = job
            self._running[snap.version] = job.id
        self._pool.submit(self._run_job, job, snap, tuple(algorithms), k, seed, measure_runtime)
        return job.id

    def _run_job(self, job, snap, algorithms, k, seed, measure_runtime):
        status = "failed"
        try:
            report = run_evaluation(snap.dataset, algorithms, k, seed,
                                    measure_runtime=measure_runtime)
            job.report_json = report.to_json()
            self.last_report = job.report_json
            status = "done"
        except Exception as exc:  # surfaced through the job record
            job.error = f"{type(exc).__name__}: {exc}"
        finally:
            with self._jobs_lock:
                self._running.pop(snap.version, None)
                job.status = status

    def job(self, job_id: str) -> Job:
        with self._jobs_lock:
            return self._jobs[job_id]

    def shutdown(self):
        self._pool.shutdown(wait=True)
