"""Fan path batches out to worker processes.

A task is a module-level callable ``task(indices, *args)`` that simulates the
paths whose global indices are in ``indices`` and returns one chunk result.
Per-path noise streams are keyed by the global index, so the chunking and the
number of workers never change the values a path receives.
"""
import concurrent.futures
import logging
import math
import multiprocessing


logger = logging.getLogger(__name__)


def iter_chunk_ranges(total, chunk_size):
    start = 0
    while start < total:
        end = min(total, start + chunk_size)
        yield start, end
        start = end


class PathPool:

    def __init__(self, workers=1, chunk_size=None, start_method='spawn'):
        self.workers = max(1, int(workers))
        self.chunk_size = chunk_size
        self.start_method = start_method

    def chunks(self, n_paths):
        size = self.chunk_size or math.ceil(n_paths / self.workers)
        return [range(start, end) for start, end in iter_chunk_ranges(n_paths, max(1, size))]

    def map_paths(self, task, n_paths, *args):
        """Run ``task`` over contiguous index chunks; results come back in index order."""
        chunks = self.chunks(n_paths)
        if self.workers == 1 or len(chunks) == 1:
            return [task(indices, *args) for indices in chunks]

        logger.info(
            "{code}: {paths} paths in {chunks} chunks on {workers} workers",
            extra={'code': 'pool.start', 'paths': n_paths, 'chunks': len(chunks), 'workers': self.workers}
        )
        results = {}
        mp_context = multiprocessing.get_context(self.start_method)
        with concurrent.futures.ProcessPoolExecutor(max_workers=self.workers, mp_context=mp_context) as executor:
            futures = {executor.submit(task, indices, *args): indices.start for indices in chunks}
            for future in concurrent.futures.as_completed(futures):
                results[futures[future]] = future.result()

        return [results[start] for start in sorted(results)]
