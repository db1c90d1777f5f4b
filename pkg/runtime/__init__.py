"""Data-parallel runtime: worker pool primitives and the ordered wavefront pipeline."""
from runtime.pool import (Barrier, IndexRange, WorkerPool, WorkerPoolConfig, split_range,
                          static_partition)
from runtime.pipeline import ASCENDING, DESCENDING, TicketLog, check_ticket_log, ordered_pipeline

__all__ = [
    'Barrier', 'IndexRange', 'WorkerPool', 'WorkerPoolConfig', 'split_range', 'static_partition',
    'ASCENDING', 'DESCENDING', 'TicketLog', 'check_ticket_log', 'ordered_pipeline',
]
