"""Multi-stream decode engine.

W worker threads each own a bounded input queue and run the full
interleave / lockstep-decode / deinterleave pipeline per job.  Because
the jitted kernels release the GIL, streams overlap on real cores.
Dispatch picks the least-loaded stream (queued plus in-flight), breaking
ties round-robin, so equally idle streams are filled in rotation.

Accounting is strict: every accepted job is eventually either completed
(its outcome is collectable) or cancelled at shutdown, and the engine
never holds more than w * queue_depth + w jobs.
"""

from __future__ import annotations

import queue
import threading
import time
from dataclasses import dataclass, field

import numpy as np

from .batch import _materialize, interleave
from .code import ParityCheckCode
from .decoder import DecoderConfig, _decode_lanes

__all__ = [
    "StreamConfig",
    "DecodeJob",
    "SubmitStatus",
    "ShutdownSummary",
    "Engine",
    "engine_start",
    "engine_shutdown",
]

BACKPRESSURE_POLICIES = ("block", "reject")


@dataclass(frozen=True)
class StreamConfig:
    """w parallel streams, f frames per batch, queue_depth jobs buffered each."""

    w: int = 1
    f: int = 32
    queue_depth: int = 4
    backpressure: str = "block"

    def __post_init__(self):
        if self.w < 1:
            raise ValueError("w must be >= 1")
        if self.f < 1:
            raise ValueError("f must be >= 1")
        if self.queue_depth < 1:
            raise ValueError("queue_depth must be >= 1")
        if self.backpressure not in BACKPRESSURE_POLICIES:
            raise ValueError(f"backpressure must be one of {BACKPRESSURE_POLICIES}")


@dataclass
class DecodeJob:
    """One batch of f frames; job_id must be unique per engine."""

    job_id: int
    frames: np.ndarray
    submitted_at: float | None = None


@dataclass(frozen=True)
class SubmitStatus:
    accepted: bool
    stream: int | None = None
    reason: str | None = None


@dataclass(frozen=True)
class ShutdownSummary:
    accepted: int
    completed: int
    cancelled: int
    cancelled_job_ids: tuple = field(default_factory=tuple)


class _Stream:
    __slots__ = ("index", "q", "thread", "outstanding")

    def __init__(self, index, depth):
        self.index = index
        self.q = queue.Queue(maxsize=depth)
        self.thread = None
        self.outstanding = 0


class Engine:
    """Running decode engine; create via engine_start()."""

    def __init__(self, code: ParityCheckCode, decoder_config: DecoderConfig,
                 stream_config: StreamConfig, backend: str | None = None,
                 job_hook=None):
        self.code = code
        self.decoder_config = decoder_config
        self.stream_config = stream_config
        self.backend = backend
        self._job_hook = job_hook  # instrumentation: called with each job at start
        self._lock = threading.Lock()
        self._shutdown_lock = threading.Lock()
        self._results = queue.Queue()
        self._streams = [_Stream(i, stream_config.queue_depth)
                         for i in range(stream_config.w)]
        self._rr = stream_config.w - 1  # so the first pick lands on stream 0
        self._accepted = 0
        self._completed = 0
        self._delivered = 0
        self._next_id = 0
        self._seen_ids = set()
        self._stopping = False
        self._summary: ShutdownSummary | None = None
        self._worker_errors: list = []
        self._timers = {"interleave": 0.0, "decode": 0.0, "deinterleave": 0.0,
                        "batches": 0}
        for st in self._streams:
            st.thread = threading.Thread(target=self._worker, args=(st,),
                                         name=f"streamdec-w{st.index}", daemon=True)
            st.thread.start()

    # -- job helpers ---------------------------------------------------------

    def next_job_id(self) -> int:
        with self._lock:
            jid = self._next_id
            self._next_id += 1
            return jid

    def make_job(self, frames) -> DecodeJob:
        return DecodeJob(job_id=self.next_job_id(), frames=frames,
                         submitted_at=time.time())

    # -- submission ------------------------------------------------------

    def _select_stream(self):
        """Least outstanding among streams with queue space, tie round-robin."""
        w = self.stream_config.w
        depth = self.stream_config.queue_depth
        best = None
        best_load = None
        for off in range(1, w + 1):
            st = self._streams[(self._rr + off) % w]
            if st.q.qsize() >= depth:
                continue
            if best_load is None or st.outstanding < best_load:
                best, best_load = st, st.outstanding
        return best

    def submit(self, job: DecodeJob) -> SubmitStatus:
        """Queue one job; blocks or rejects when every stream is full."""
        frames = np.asarray(job.frames, dtype=np.float64)
        want = (self.stream_config.f, self.code.n)
        if frames.shape != want:
            return SubmitStatus(False, None,
                                f"frames shape {frames.shape} != expected {want}")
        if not np.isfinite(frames).all():
            return SubmitStatus(False, None, "frames contain non-finite values")
        while True:
            with self._lock:
                if self._stopping:
                    return SubmitStatus(False, None, "engine stopped")
                if job.job_id in self._seen_ids:
                    return SubmitStatus(False, None, f"duplicate job_id {job.job_id}")
                st = self._select_stream()
                if st is not None:
                    if job.submitted_at is None:
                        job.submitted_at = time.time()
                    st.q.put_nowait((job.job_id, frames))
                    st.outstanding += 1
                    self._accepted += 1
                    self._seen_ids.add(job.job_id)
                    self._rr = st.index
                    return SubmitStatus(True, st.index, None)
                if self.stream_config.backpressure == "reject":
                    return SubmitStatus(False, None, "queues full")
            time.sleep(0.002)

    # -- worker ----------------------------------------------------------

    def _worker(self, st: _Stream):
        while True:
            item = st.q.get()
            if item is None:
                return
            job_id, frames = item
            try:
                if self._job_hook is not None:
                    self._job_hook(job_id)
                t0 = time.perf_counter()
                batch = interleave(frames)
                t1 = time.perf_counter()
                raw = _decode_lanes(self.code, batch.lanes(), self.decoder_config,
                                    self.backend)
                t2 = time.perf_counter()
                outcome = _materialize(*raw[:3])
                t3 = time.perf_counter()
            except Exception as exc:  # decode bugs must surface at shutdown
                with self._lock:
                    st.outstanding -= 1
                    self._worker_errors.append((job_id, exc))
                continue
            with self._lock:
                st.outstanding -= 1
                self._completed += 1
                self._timers["interleave"] += t1 - t0
                self._timers["decode"] += t2 - t1
                self._timers["deinterleave"] += t3 - t2
                self._timers["batches"] += 1
            self._results.put((job_id, outcome))

    # -- collection --------------------------------------------------------

    def collect(self):
        """Yield (job_id, BatchOutcome) until shut down and fully drained.

        Per-stream results arrive in that stream's submission order.
        Safe to call from several threads; each result goes to one caller.
        """
        while True:
            with self._lock:
                finished = (self._summary is not None
                            and self._delivered >= self._completed)
            if finished and self._results.empty():
                return
            try:
                item = self._results.get(timeout=0.05)
            except queue.Empty:
                continue
            with self._lock:
                self._delivered += 1
            yield item

    # -- shutdown ----------------------------------------------------------

    def shutdown(self, drain: bool = True) -> ShutdownSummary:
        """Stop accepting work; drain or cancel what is queued.

        drain=True decodes everything already accepted; drain=False
        cancels queued (never in-flight) jobs and reports their ids.
        Subsequent calls return the same summary.
        """
        with self._shutdown_lock:
            if self._summary is not None:
                return self._summary
            with self._lock:
                self._stopping = True
            cancelled_ids = []
            if not drain:
                for st in self._streams:
                    while True:
                        try:
                            item = st.q.get_nowait()
                        except queue.Empty:
                            break
                        if item is None:
                            continue
                        cancelled_ids.append(item[0])
                        with self._lock:
                            st.outstanding -= 1
            for st in self._streams:
                st.q.put(None)
            for st in self._streams:
                st.thread.join()
            if self._worker_errors:
                job_id, exc = self._worker_errors[0]
                raise RuntimeError(f"worker failed on job {job_id}: {exc!r}") from exc
            with self._lock:
                summary = ShutdownSummary(
                    accepted=self._accepted,
                    completed=self._completed,
                    cancelled=len(cancelled_ids),
                    cancelled_job_ids=tuple(cancelled_ids),
                )
                self._summary = summary
            return summary

    # -- introspection -------------------------------------------------------

    def resident_jobs(self) -> int:
        """Jobs currently held (queued + in-flight)."""
        with self._lock:
            return self._accepted - self._completed - (
                len(self._summary.cancelled_job_ids) if self._summary else 0)

    def phase_totals(self) -> dict:
        """Aggregate busy seconds per pipeline phase across all workers."""
        with self._lock:
            return dict(self._timers)

    def reset_timers(self):
        with self._lock:
            for k in self._timers:
                self._timers[k] = 0 if k == "batches" else 0.0


def engine_start(code: ParityCheckCode, decoder_config: DecoderConfig,
                 stream_config: StreamConfig, backend: str | None = None,
                 job_hook=None) -> Engine:
    """Spin up the worker threads and return the running engine."""
    return Engine(code, decoder_config, stream_config, backend=backend,
                  job_hook=job_hook)


def engine_shutdown(engine: Engine, drain: bool = True) -> ShutdownSummary:
    """Module-level alias for Engine.shutdown()."""
    return engine.shutdown(drain=drain)
