import numpy as np


# admissible steps between consecutive path elements
STEPS = {(1, 0), (0, 1), (1, 1)}


class WarpPath:
    """
    The WarpPath class stores the frame pairs a DTW alignment compares, in order.

    Steps are 1-based (i, j) pairs, i indexing the query X and j the template Y. A valid path starts at (1, 1),
    ends at (T_X, T_Y) and advances by (1, 0), (0, 1) or (1, 1) at every step.
    """

    __slots__ = '_steps'

    def __init__(self, steps):
        self._steps = tuple((int(i), int(j)) for i, j in steps)
        if not self._steps:
            raise ValueError("a warp path has at least one step")

    def __iter__(self):
        yield from self._steps

    def __repr__(self):
        return f"WarpPath({list(self._steps)})"

    def __eq__(self, other):
        return isinstance(other, WarpPath) and self._steps == other._steps

    def step_count(self) -> int:
        """
        Return the number of steps in the path.
        The __len__ magic method wasn't overridden to avoid ambiguity between step count and sequence lengths.
        """
        return len(self._steps)

    def get(self, index: int) -> tuple[int, int]:
        """Return the step at a given index"""
        return self._steps[index]

    def indices(self) -> tuple[np.ndarray, np.ndarray]:
        """0-based index arrays (into X, into Y), handy for numpy gathering"""
        steps = np.array(self._steps, dtype=np.int64) - 1
        return steps[:, 0], steps[:, 1]

    def is_valid(self, query_len: int, template_len: int) -> bool:
        """Check boundary, monotonicity and continuity"""
        if self._steps[0] != (1, 1) or self._steps[-1] != (query_len, template_len):
            return False

        return all((i2 - i1, j2 - j1) in STEPS for (i1, j1), (i2, j2) in zip(self._steps, self._steps[1:]))
