# runtime/pipeline.py
"""
Ordered wavefront pipeline over (plane, block) stages.

Each block is handled by one worker that walks the planes in sweep order,
so stage(k, b) always follows stage(k -/+ 1, b) on the same worker. Before
running stage(k, b) the worker waits for the ticket of the neighbouring
block in sweep order (b - 1 ascending, b + 1 descending) on plane k.
Tickets are published only after a stage body returned.
"""
import itertools
import threading
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Tuple

from error_handler import PipelineError
from runtime.pool import IndexRange, WorkerPool, _invoke

ASCENDING = 'ascending'
DESCENDING = 'descending'
DIRECTIONS = (ASCENDING, DESCENDING)

# seconds between abort checks while waiting for a ticket
TICKET_POLL = 0.05


@dataclass(frozen=True)
class TicketEvent:
    seq: int
    kind: str  # 'start' or 'finish'
    plane: int
    block: int


class TicketLog:
    """Thread-safe, totally ordered record of stage starts and finishes"""

    def __init__(self):
        self._lock = threading.Lock()
        self._seq = itertools.count()
        self.events: List[TicketEvent] = []

    def record(self, kind: str, plane: int, block: int):
        with self._lock:
            self.events.append(TicketEvent(next(self._seq), kind, plane, block))

    def executions(self) -> int:
        return sum(1 for event in self.events if event.kind == 'start')

    def clear(self):
        with self._lock:
            self.events.clear()


def _sweep(rng: IndexRange, direction: str) -> List[int]:
    order = list(rng)
    return order if direction == ASCENDING else order[::-1]


class PipelineTickets:
    """Per-(plane, block) completion flags"""

    def __init__(self, planes: List[int], blocks: List[int]):
        self._flags: Dict[Tuple[int, int], threading.Event] = {
            (k, b): threading.Event() for k in planes for b in blocks
        }

    def publish(self, plane: int, block: int):
        self._flags[(plane, block)].set()

    def wait(self, plane: int, block: int, abort: threading.Event):
        flag = self._flags[(plane, block)]
        while not flag.wait(TICKET_POLL):
            if abort.is_set():
                raise PipelineError(f"pipeline aborted while stage ({plane}, {block}) was pending",
                                    index=(plane, block))


def ordered_pipeline(pool: WorkerPool, planes, blocks, stage: Callable[[int, int], None],
                     direction: str = ASCENDING, log: Optional[TicketLog] = None) -> None:
    """
    Run stage(k, b) for every plane k and block b under wavefront ordering.

    stage(k, b) may read what stage(k-1, b) and stage(k, b-1) wrote
    (ascending), or stage(k+1, b) and stage(k, b+1) (descending).
    """
    if direction not in DIRECTIONS:
        raise ValueError(f"direction must be one of {DIRECTIONS}, got {direction!r}")
    planes = IndexRange.of(planes)
    blocks = IndexRange.of(blocks)
    if len(planes) == 0 or len(blocks) == 0:
        return

    plane_order = _sweep(planes, direction)
    block_order = _sweep(blocks, direction)

    def execute(k: int, b: int):
        if log is not None:
            log.record('start', k, b)
        _invoke(stage, k, b)
        if log is not None:
            log.record('finish', k, b)

    if pool.workers == 1:
        def sequential(_item, _run):
            for k in plane_order:
                for b in block_order:
                    execute(k, b)

        pool.run_ordered(1, sequential)
        return

    tickets = PipelineTickets(plane_order, block_order)

    def run_block(position: int, run):
        b = block_order[position]
        upstream = block_order[position - 1] if position > 0 else None
        for k in plane_order:
            if run.abort.is_set():
                raise PipelineError("pipeline aborted", index=(k, b))
            if upstream is not None:
                tickets.wait(k, upstream, run.abort)
            execute(k, b)
            tickets.publish(k, b)

    pool.run_ordered(len(block_order), run_block)


def check_ticket_log(log: TicketLog, planes, blocks, direction: str = ASCENDING) -> List[str]:
    """
    Dependency violations found in a ticket log (empty list when the run was correct).

    Checks that every stage ran exactly once and started only after the
    stages it depends on had finished.
    """
    planes = IndexRange.of(planes)
    blocks = IndexRange.of(blocks)
    plane_order = _sweep(planes, direction)
    block_order = _sweep(blocks, direction)

    starts: Dict[Tuple[int, int], List[int]] = {}
    finishes: Dict[Tuple[int, int], List[int]] = {}
    for event in log.events:
        bucket = starts if event.kind == 'start' else finishes
        bucket.setdefault((event.plane, event.block), []).append(event.seq)

    violations = []
    for key in set(starts) | set(finishes):
        if key[0] not in planes or key[1] not in blocks:
            violations.append(f"stage {key} outside the pipeline domain")

    for pi, k in enumerate(plane_order):
        for bi, b in enumerate(block_order):
            key = (k, b)
            if len(starts.get(key, [])) != 1 or len(finishes.get(key, [])) != 1:
                violations.append(f"stage {key} ran {len(starts.get(key, []))} times")
                continue
            start = starts[key][0]
            if finishes[key][0] < start:
                violations.append(f"stage {key} finished before it started")
            deps = []
            if pi > 0:
                deps.append((plane_order[pi - 1], b))
            if bi > 0:
                deps.append((k, block_order[bi - 1]))
            for dep in deps:
                done = finishes.get(dep)
                if not done or done[0] > start:
                    violations.append(f"stage {key} started before {dep} finished")
    return violations
