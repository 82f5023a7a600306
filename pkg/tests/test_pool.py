import numpy as np

from sddekit.catalog import LinearDelayModel
from sddekit.core.grid import PathGrid, Segment, TimeGrid
from sddekit.main.helpers.path_tasks import simulate_chunk
from sddekit.pool import PathPool, iter_chunk_ranges


def chunk_bounds(indices, offset=0):
    return indices.start + offset, indices.stop + offset


class TestChunks(object):

    def test_iter_chunk_ranges(self):
        assert list(iter_chunk_ranges(10, 4)) == [(0, 4), (4, 8), (8, 10)]
        assert list(iter_chunk_ranges(0, 4)) == []

    def test_chunks_split_over_workers(self):
        assert PathPool(workers=3).chunks(10) == [range(0, 4), range(4, 8), range(8, 10)]

    def test_explicit_chunk_size(self):
        assert len(PathPool(workers=2, chunk_size=3).chunks(10)) == 4

    def test_workers_at_least_one(self):
        assert PathPool(workers=0).workers == 1


class TestMapPaths(object):

    def test_single_worker_runs_in_process(self):
        assert PathPool(workers=1, chunk_size=2).map_paths(chunk_bounds, 5, 100) == [
            (100, 102), (102, 104), (104, 105)
        ]

    def test_results_do_not_depend_on_the_worker_count(self):
        grid = TimeGrid.from_durations(0.1, 0.5)
        init = Segment.constant(grid, 1.0, 1)
        model = LinearDelayModel()

        serial = PathGrid.concatenate(PathPool(workers=1).map_paths(simulate_chunk, 7, model, init, 20, 42))
        pooled = PathGrid.concatenate(PathPool(workers=3).map_paths(simulate_chunk, 7, model, init, 20, 42))

        assert np.array_equal(serial.states, pooled.states)
        assert np.array_equal(serial.noise_increments, pooled.noise_increments)
