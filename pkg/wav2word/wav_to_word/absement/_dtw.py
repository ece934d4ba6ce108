import math
import logging

import numba as nb
import numpy as np

from wav2word.wav_to_word import formulas
from wav2word.wav_to_word.errors import ShapeMismatchError
from wav2word.wav_to_word.frontend import FeatureMatrix
from wav2word.wav_to_word.absement._warp_path import WarpPath

logger = logging.getLogger(__name__)

# no fastmath: the cost must stay exactly symmetric in its arguments
jitkw = {
    "nopython": True,
    "nogil": True,
    "cache": False,
    "error_model": "numpy",
    "fastmath": False,
}


@nb.jit(**jitkw)
def _frame_distance(x, y, i, j):
    total = 0.0
    for c in range(x.shape[1]):
        delta = x[i, c] - y[j, c]
        total += delta * delta
    return math.sqrt(total)


@nb.jit(**jitkw)
def _local_distances(x, y):
    n, m = x.shape[0], y.shape[0]
    local = np.empty((n, m), dtype=np.float64)
    for i in range(n):
        for j in range(m):
            local[i, j] = _frame_distance(x, y, i, j)
    return local


@nb.jit(**jitkw)
def _accumulated_cost(local):
    n, m = local.shape
    acc = np.empty((n, m), dtype=np.float64)
    acc[0, 0] = local[0, 0]
    for j in range(1, m):
        acc[0, j] = acc[0, j - 1] + local[0, j]
    for i in range(1, n):
        acc[i, 0] = acc[i - 1, 0] + local[i, 0]
        for j in range(1, m):
            acc[i, j] = local[i, j] + min(acc[i - 1, j - 1], acc[i - 1, j], acc[i, j - 1])
    return acc


@nb.jit(**jitkw)
def _rolling_cost(x, y):
    # two rows of length len(y); the caller passes the shorter sequence as y
    m = y.shape[0]
    previous = np.empty(m, dtype=np.float64)
    current = np.empty(m, dtype=np.float64)
    previous[0] = _frame_distance(x, y, 0, 0)
    for j in range(1, m):
        previous[j] = previous[j - 1] + _frame_distance(x, y, 0, j)
    for i in range(1, x.shape[0]):
        current[0] = previous[0] + _frame_distance(x, y, i, 0)
        for j in range(1, m):
            current[j] = _frame_distance(x, y, i, j) + min(previous[j - 1], previous[j], current[j - 1])
        previous, current = current, previous
    return previous[m - 1]


def _backtrack(acc: np.ndarray) -> list[tuple[int, int]]:
    """
    Recover one optimal path from the accumulated cost matrix, walking back from the last cell.
    On ties the diagonal step is preferred, then the (0,1) step, then the (1,0) step.
    """
    i, j = acc.shape[0] - 1, acc.shape[1] - 1
    steps = [(i + 1, j + 1)]

    while i > 0 or j > 0:
        if i == 0:
            j -= 1
        elif j == 0:
            i -= 1
        else:
            # candidates in order of preference: diagonal, (0,1), (1,0)
            best_i, best_j = i - 1, j - 1
            if acc[i, j - 1] < acc[best_i, best_j]:
                best_i, best_j = i, j - 1
            if acc[i - 1, j] < acc[best_i, best_j]:
                best_i, best_j = i - 1, j
            i, j = best_i, best_j
        steps.append((i + 1, j + 1))

    steps.reverse()
    return steps


def _check_pair(query: FeatureMatrix, template: FeatureMatrix):
    if query is None or template is None:
        raise ShapeMismatchError("DTW needs two feature matrices")
    if query.coeffs != template.coeffs:
        raise ShapeMismatchError(f"coefficient count mismatch: query has {query.coeffs}, template has {template.coeffs}")


class AbsementResult:
    """
    Outcome of a DTW comparison between a query X and a template Y.

    :param self.cost: the absement a(X, Y), minimal cumulative Euclidean frame distance over all warp paths.
    :param self.path: one optimal WarpPath, None when no path was requested.
    :param self.step_distances: the frame distance at every path step (None without path); they sum to cost.
    :param self.scaled_cost: cost / sqrt(template_len).
    """

    __slots__ = 'cost', 'path', 'step_distances', 'scaled_cost', 'query_len', 'template_len'

    def __init__(self, cost: float, query_len: int, template_len: int, path: WarpPath = None,
                 step_distances: np.ndarray = None):
        self.cost = float(cost)
        self.query_len = query_len
        self.template_len = template_len
        self.path = path
        self.step_distances = step_distances
        self.scaled_cost = formulas.scaled_absement(self.cost, template_len)

    def __repr__(self):
        return (f"AbsementResult(cost:{self.cost}, scaled_cost:{self.scaled_cost}, query_len:{self.query_len}, "
                f"template_len:{self.template_len}, path_steps:{None if self.path is None else self.path.step_count()})")


def local_distances(query: FeatureMatrix, template: FeatureMatrix) -> np.ndarray:
    """Euclidean distance between every query frame and every template frame, shape (T_X, T_Y)"""
    _check_pair(query, template)
    return _local_distances(query.values, template.values)


def dtw_absement(query: FeatureMatrix, template: FeatureMatrix, with_path: bool = True) -> AbsementResult:
    """
    Absement between two feature matrices: unconstrained DTW with steps (1,0), (0,1), (1,1), unit weights and
    Euclidean frame distance.

    :param query: the series X.
    :param template: the series Y; its frame count is the length used for scaling.
    :param with_path: recover the warp path (needs the full T_X x T_Y matrix). Without it only two rows of the
                      shorter dimension are kept.
    """
    _check_pair(query, template)
    x, y = query.values, template.values

    if not with_path:
        cost = _rolling_cost(x, y) if y.shape[0] <= x.shape[0] else _rolling_cost(y, x)
        return AbsementResult(cost, x.shape[0], y.shape[0])

    local = _local_distances(x, y)
    acc = _accumulated_cost(local)
    path = WarpPath(_backtrack(acc))
    rows, columns = path.indices()

    logger.debug(f"dtw: {x.shape[0]} x {y.shape[0]} frames, cost {acc[-1, -1]}, {path.step_count()} steps")

    return AbsementResult(acc[-1, -1], x.shape[0], y.shape[0], path, local[rows, columns])
