import logging
import multiprocessing.pool
import signal
from typing import Any, Callable, Optional, Sequence

from .utils import worker_count

logger = logging.getLogger(__name__)


class ParallelEvaluator:
    """
    Evaluates a module-level function over independent cells, e.g., table entries or grid points of a
    threshold scan, with a process pool. Results are always returned in input order.
    """

    def __init__(self, parallelization: Optional[int] = None, initWorker=None, initArgs=()):
        self.parallelization: int = worker_count(parallelization)
        self.initWorker = ParallelEvaluator._init_worker if initWorker is None else initWorker
        self.initArgs = initArgs
        self._pool: Optional[multiprocessing.pool.Pool] = None

    def __enter__(self):
        return self

    def __exit__(self, exception_type, exception_value, exception_traceback):
        self.close()

    def close(self) -> None:
        if self._pool is not None:
            self.join_threads()

    def join_threads(self):
        if self._pool is None:
            return
        self._pool.close()
        self._pool.join()
        self._pool = None

    def _get_pool(self):
        if not self._pool:
            self._pool = multiprocessing.pool.Pool(self.parallelization, self.initWorker, self.initArgs)
        return self._pool

    @staticmethod
    def _init_worker():
        """
        Ignore the interrupt signal inside the child worker processes to avoid Python backtraces for each of them.
        Aborting with Ctrl+C will still work as the main process still accepts the signal.
        """
        signal.signal(signal.SIGINT, signal.SIG_IGN)

    def map(
        self,
        function: Callable[..., Any],
        cells: Sequence[tuple],
        progress: Optional[Callable[[int, int], None]] = None,
    ) -> list[Any]:
        """
        Returns [function(*cell) for cell in cells]. The progress callback is called with the number of finished
        cells and the total count after each finished cell.
        """
        cells = list(cells)
        results: list[Any] = []
        if self.parallelization <= 1 or len(cells) <= 1:
            for cell in cells:
                results.append(function(*cell))
                if progress:
                    progress(len(results), len(cells))
            return results

        logger.debug("Evaluating %d cells with %d worker processes.", len(cells), self.parallelization)
        for result in self._get_pool().imap(_Star(function), cells):
            results.append(result)
            if progress:
                progress(len(results), len(cells))
        return results


class _Star:
    """Picklable adaptor that unpacks an argument tuple."""

    def __init__(self, function):
        self.function = function

    def __call__(self, cell):
        return self.function(*cell)
