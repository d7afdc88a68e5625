"""
Run Pool - Distributes independent jobs (enumeration chunks, greedy runs,
simulation blocks) across worker threads
"""

import time
import logging
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Any, Callable, Dict, Iterable, List, Optional, TypeVar

T = TypeVar("T")
R = TypeVar("R")


@dataclass
class JobInfo:
    """Information about a job currently held by the pool"""

    job_id: int
    label: str
    started_at: float


class RunPool:
    """Runs independent jobs on worker threads and returns results in submission order.

    Callers reduce the returned list themselves, so the outcome never depends on
    the number of workers or on completion order.
    """

    def __init__(self, workers: int = 1, name: str = "rc_codes"):
        self.workers = max(1, int(workers))
        self.name = name

        # Thread-safe bookkeeping
        self._lock = threading.RLock()
        self._active: Dict[int, JobInfo] = {}
        self._next_id = 0
        self._completed = 0
        self._failed = 0
        self._executor: Optional[ThreadPoolExecutor] = None

        self.logger = logging.getLogger(__name__)

    def _get_executor(self) -> ThreadPoolExecutor:
        with self._lock:
            if self._executor is None:
                self._executor = ThreadPoolExecutor(
                    max_workers=self.workers, thread_name_prefix=self.name
                )
            return self._executor

    def _run_job(self, fn: Callable[[T], R], item: T, label: str) -> R:
        with self._lock:
            job_id = self._next_id
            self._next_id += 1
            self._active[job_id] = JobInfo(job_id, label, time.time())
        try:
            result = fn(item)
        except Exception as e:
            with self._lock:
                self._failed += 1
            self.logger.error(f"Job {label}#{job_id} failed: {str(e)}")
            raise
        finally:
            with self._lock:
                del self._active[job_id]
        with self._lock:
            self._completed += 1
        return result

    def map(
        self, fn: Callable[[T], R], items: Iterable[T], label: str = "job"
    ) -> List[R]:
        """Apply fn to every item; the result list follows the order of items"""
        items = list(items)
        if self.workers == 1 or len(items) <= 1:
            return [self._run_job(fn, item, label) for item in items]

        executor = self._get_executor()
        futures = [executor.submit(self._run_job, fn, item, label) for item in items]
        return [future.result() for future in futures]

    def summary(self) -> Dict[str, Any]:
        """Counters describing the work done so far"""
        with self._lock:
            return {
                "workers": self.workers,
                "active_jobs": len(self._active),
                "completed_jobs": self._completed,
                "failed_jobs": self._failed,
            }

    def shutdown(self) -> None:
        """Stop the worker threads"""
        with self._lock:
            if self._executor is not None:
                self._executor.shutdown(wait=True)
                self._executor = None
                self.logger.debug(f"Run pool {self.name} shut down")

    def __enter__(self):
        """Context manager entry"""
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        """Context manager exit"""
        self.shutdown()
