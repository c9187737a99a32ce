import logging
import sys
import time
from typing import Any, Optional

try:
    import rich.console
    import rich.progress
    from rich.logging import RichHandler
except ImportError:
    RichHandler = None  # type: ignore

logger = logging.getLogger(__name__)


def _logging_uses_rich() -> bool:
    return RichHandler is not None and any(isinstance(handler, RichHandler) for handler in logging.getLogger().handlers)


class ProgressBar:
    """
    Tracks finished cells of a long computation. Shows a rich progress bar on stderr when logging goes through
    rich, else logs the progress and a time estimate at the info level. Nothing is written to stdout, which
    carries the tables.
    """

    def __init__(self, maxValue: float, description: str = "Evaluating"):
        self._get_time = time.time
        self.description = description
        self.value = 0.0
        self.maxValue = maxValue
        self.lastUpdateTime = self._get_time()
        self.updateInterval = 5.0  # seconds
        self.creationTime = self._get_time()
        self._richProgress: Optional[Any] = None
        self._taskID: Optional[Any] = None

    def __enter__(self):
        self.start()
        return self

    def __exit__(self, exception_type, exception_value, exception_traceback) -> None:
        if self._richProgress is None:
            return
        if self._taskID is not None:
            self._richProgress.update(self._taskID, completed=self.value)
            self._richProgress.refresh()
        self._richProgress.stop()
        self._richProgress = None
        self._taskID = None

    def start(self) -> None:
        if 'rich.progress' in sys.modules and self._richProgress is None and _logging_uses_rich():
            self._richProgress = rich.progress.Progress(
                rich.progress.TextColumn("[progress.description]{task.description}"),
                rich.progress.BarColumn(bar_width=None),
                rich.progress.MofNCompleteColumn(),
                rich.progress.TimeElapsedColumn(),
                rich.progress.TimeRemainingColumn(elapsed_when_finished=True),
                console=rich.console.Console(stderr=True),
                auto_refresh=False,
                redirect_stdout=False,
                redirect_stderr=False,
            )

        if self._richProgress:
            self._richProgress.start()
            if self._taskID is None:
                self._taskID = self._richProgress.add_task(self.description, total=self.maxValue)
            self.updateInterval = 0.2

    def stop(self) -> None:
        if self._richProgress:
            self._richProgress.stop()

    def update(self, value: float, maxValue: Optional[float] = None) -> None:
        """Should be called whenever the monitored value changes. Has the signature of a map progress callback."""
        self.value = value
        if maxValue is not None:
            self.maxValue = maxValue
        if (self._get_time() - self.lastUpdateTime) < self.updateInterval and value < self.maxValue:
            return

        if self._richProgress and self._taskID is not None:
            self._richProgress.update(self._taskID, completed=value)
            self._richProgress.refresh()
        else:
            percent = value / self.maxValue if self.maxValue != 0 else 1.0
            totalTime = self._get_time() - self.creationTime
            eta = int(totalTime / percent - totalTime if percent != 0 else 0)
            logger.info(
                "%s: %d of %d (%.1f%%). Remaining time: %d min %d s. Spent time: %d min %d s",
                self.description,
                value,
                self.maxValue,
                percent * 100.0,
                eta // 60,
                eta % 60,
                int(totalTime) // 60,
                int(totalTime) % 60,
            )

        self.lastUpdateTime = self._get_time()
