"""Live run counters for ``minids experiment``"""

from collections.abc import Callable

from rich.console import Console
from rich.progress import (
    BarColumn,
    MofNCompleteColumn,
    Progress,
    SpinnerColumn,
    TaskID,
    TextColumn,
    TimeElapsedColumn,
)


class ProgressTracker:
    """
    One Rich progress bar per experiment, counting finished solver runs.

    The display starts with the first task and ``stop`` may be called any
    number of times. ``progress`` is the underlying Rich display; its tasks
    hold the current counts.
    """

    def __init__(self, console: Console | None = None):
        self.progress = Progress(
            SpinnerColumn(),
            TextColumn("{task.description}"),
            BarColumn(),
            MofNCompleteColumn(),
            TimeElapsedColumn(),
            console=console,
        )
        self._live = False

    def add_task(self, description: str, total: int) -> TaskID:
        """Start counting ``total`` runs under ``description``."""
        if not self._live:
            self.progress.start()
            self._live = True
        return self.progress.add_task(description, total=total)

    def set_completed(self, task_id: TaskID, completed: int, total: int | None = None) -> None:
        if task_id not in self.progress.task_ids:
            return
        self.progress.update(task_id, completed=completed, total=total)

    def callback_for(self, task_id: TaskID) -> Callable[[int, int], None]:
        """(done, total) callback in the shape run_experiment reports progress."""
        return lambda done, total: self.set_completed(task_id, done, total)

    def stop(self) -> None:
        if self._live:
            self.progress.stop()
            self._live = False
