# common/timers.py
import time
from typing import Dict, Iterable, List, Optional


class Timer:
    """Stopwatch accumulating the sum of its start/stop intervals"""

    __slots__ = ('elapsed', 'running', '_started')

    def __init__(self):
        self.elapsed = 0.0
        self.running = False
        self._started = 0.0

    def start(self):
        self._started = time.perf_counter()
        self.running = True

    def stop(self):
        if self.running:
            self.elapsed += time.perf_counter() - self._started
            self.running = False

    def clear(self):
        self.elapsed = 0.0
        self.running = False

    def read(self) -> float:
        if self.running:
            return self.elapsed + (time.perf_counter() - self._started)
        return self.elapsed


class TimerSet:
    """Named stopwatches; the first name is the benchmark (timed section) timer.

    When ``enabled`` is False only the first timer records; phase timers are
    no-ops so the timed loop carries no extra clock reads.
    """

    def __init__(self, names: Iterable[str], enabled: bool = True):
        self.names: List[str] = list(names)
        self.enabled = enabled
        self._timers: Dict[str, Timer] = {name: Timer() for name in self.names}

    @classmethod
    def for_run(cls, names: Iterable[str], enabled: Optional[bool] = None) -> 'TimerSet':
        """TimerSet whose phase timers follow NPB_TIMERS unless ``enabled`` is given"""
        if enabled is None:
            import settings
            enabled = settings.NPB_TIMERS
        return cls(names, enabled)

    @property
    def total_name(self) -> str:
        return self.names[0]

    def _active(self, name: str) -> Optional[Timer]:
        if name == self.total_name or self.enabled:
            return self._timers[name]
        return None

    def start(self, name: str):
        timer = self._active(name)
        if timer is not None:
            timer.start()

    def stop(self, name: str):
        timer = self._active(name)
        if timer is not None:
            timer.stop()

    def clear(self, name: str = None):
        for key in ([name] if name else self.names):
            self._timers[key].clear()

    def read(self, name: str) -> float:
        return self._timers[name].read()

    def phase(self, name: str):
        return _Phase(self, name)

    def as_dict(self) -> Dict[str, float]:
        """Phase timings (excluding the total) when phase timers are enabled"""
        if not self.enabled:
            return {}
        return {name: self.read(name) for name in self.names[1:]}


class _Phase:
    __slots__ = ('timers', 'name')

    def __init__(self, timers: TimerSet, name: str):
        self.timers = timers
        self.name = name

    def __enter__(self):
        self.timers.start(self.name)
        return self

    def __exit__(self, *exc):
        self.timers.stop(self.name)
        return False
