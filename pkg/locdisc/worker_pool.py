import concurrent.futures
import logging
from collections.abc import Iterable
from enum import Enum
from typing import Callable, NamedTuple, Optional, TypeVar

from .exceptions import ParameterRangeError

T = TypeVar('T')
R = TypeVar('R')


class TaskData(NamedTuple):
    index: int
    argument: object


class SweepPool:
    """Runs independent grid points or restarts, serially or in worker processes.

    Results always come back in submission order, so the output of a sweep does
    not depend on the number of workers.
    """

    class Status(Enum):
        IDLE = 1
        STARTED = 2
        STOPPED = 3

    def __init__(self, num_workers: int = 1):
        if num_workers < 1:
            raise ParameterRangeError(f'Number of workers must be positive, got {num_workers!r}')
        self.num_workers: int = num_workers
        self.log: logging.Logger = logging.getLogger(__name__)
        self.status: SweepPool.Status = self.Status.IDLE

    def map(self, func: Callable[[T], R], arguments: Iterable[T]) -> list[R]:
        """Applies `func` to every argument.

        `func` must be picklable (a module-level function) when more than one
        worker is used.
        A pool runs one map at a time; calling `map` from inside `func` raises
        RuntimeError.
        """
        if self.status == self.Status.STARTED:
            raise RuntimeError('SweepPool.map is not re-entrant: the pool is already running')
        tasks = [TaskData(index, argument) for index, argument in enumerate(arguments)]
        self.status = self.Status.STARTED
        try:
            if self.num_workers == 1 or len(tasks) <= 1:
                self.log.debug('Running %d tasks serially', len(tasks))
                return [func(task.argument) for task in tasks]  # type: ignore[arg-type]

            self.log.debug('Running %d tasks on %d worker processes', len(tasks), self.num_workers)
            results: list[Optional[R]] = [None] * len(tasks)
            with concurrent.futures.ProcessPoolExecutor(max_workers=self.num_workers) as executor:
                futures = {executor.submit(func, task.argument): task.index for task in tasks}  # type: ignore[arg-type]
                for future in concurrent.futures.as_completed(futures):
                    results[futures[future]] = future.result()
            return results  # type: ignore[return-value]
        finally:
            self.status = self.Status.STOPPED
