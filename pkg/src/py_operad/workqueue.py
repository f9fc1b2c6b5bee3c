# -*- coding: utf-8 -*-
"""按元数分发的工作队列

每个元数的计算相互独立。工作线程从队列取任务，结果按元数排序合并，
输出与调度顺序无关。线程数只由配置 OPERAD_THREADS 决定。
"""

import queue
import threading
from dataclasses import dataclass
from typing import Callable, Dict, Generic, Hashable, Iterable, List, Optional, Tuple, TypeVar

from .config import get_settings
from .logging import get_logger

logger = get_logger(__name__)

K = TypeVar("K", bound=Hashable)
R = TypeVar("R")


@dataclass
class _Job(Generic[K]):
    """队列中的一个任务"""
    key: K
    order: int


class ArityWorkQueue(Generic[K, R]):
    """按键（通常是元数）分发任务的线程池

    Args:
        worker: 对单个键求值的函数，必须是纯函数
        threads: 工作线程数，缺省取配置
    """

    def __init__(self, worker: Callable[[K], R], threads: Optional[int] = None):
        self._worker = worker
        self._threads = threads or get_settings().threads
        self._jobs: "queue.Queue[Optional[_Job[K]]]" = queue.Queue()
        self._results: Dict[int, Tuple[K, R]] = {}
        self._errors: Dict[int, BaseException] = {}
        self._lock = threading.Lock()

    @property
    def threads(self) -> int:
        return self._threads

    def run(self, keys: Iterable[K]) -> Dict[K, R]:
        """执行全部任务

        Args:
            keys: 任务键，按此顺序合并结果

        Returns:
            键 -> 结果，按输入顺序排列

        Raises:
            任一任务的异常（按输入顺序最早的那个）
        """
        ordered: List[K] = list(keys)
        if self._threads <= 1 or len(ordered) <= 1:
            return {key: self._worker(key) for key in ordered}

        for order, key in enumerate(ordered):
            self._jobs.put(_Job(key=key, order=order))
        workers = []
        for k in range(min(self._threads, len(ordered))):
            self._jobs.put(None)
            thread = threading.Thread(target=self._worker_loop, daemon=True, name=f"ArityWorker-{k}")
            thread.start()
            workers.append(thread)
        for thread in workers:
            thread.join()

        if self._errors:
            first = min(self._errors)
            logger.error("按元数计算失败", key=ordered[first], error=str(self._errors[first]))
            raise self._errors[first]
        return {self._results[i][0]: self._results[i][1] for i in sorted(self._results)}

    def _worker_loop(self) -> None:
        """工作线程：取到 None 时退出"""
        while True:
            job = self._jobs.get()
            if job is None:
                self._jobs.task_done()
                break
            try:
                value = self._worker(job.key)
                with self._lock:
                    self._results[job.order] = (job.key, value)
            except Exception as exc:  # noqa: BLE001 - 交给调用线程重新抛出
                with self._lock:
                    self._errors[job.order] = exc
            finally:
                self._jobs.task_done()


def run_per_arity(keys: Iterable[K], worker: Callable[[K], R], threads: Optional[int] = None) -> Dict[K, R]:
    """便捷入口：并行计算每个元数并按顺序合并"""
    return ArityWorkQueue(worker, threads).run(keys)
