import math
import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Sequence

import numpy as np

from wav2word.wav_to_word import DEFAULT_SETTING, TOLERANCES, check_setting
from wav2word.wav_to_word.errors import ShapeMismatchError
from wav2word.wav_to_word.frontend import FeatureMatrix
from wav2word.wav_to_word.absement import dtw_absement

logger = logging.getLogger(__name__)


class DbaConfig:
    """
    Parameters of DTW barycenter averaging.

    :param max_iterations: maximum number of accepted update steps.
    :param rel_tolerance: stop once an update lowers the objective by less than this fraction.
    :param init_index: index of the input used as the initial average; None picks one at random with 'seed'.
    :param seed: seed of the random pick, only used when init_index is None; None draws from fresh entropy.
    """

    __slots__ = 'max_iterations', 'rel_tolerance', 'init_index', 'seed'

    def __init__(self, max_iterations: int = DEFAULT_SETTING["max_iterations"],
                 rel_tolerance: float = DEFAULT_SETTING["rel_tolerance"], init_index: int = None,
                 seed: int = DEFAULT_SETTING["seed"]):
        check_setting({"max_iterations": max_iterations, "rel_tolerance": rel_tolerance})
        if init_index is not None and (isinstance(init_index, bool) or not isinstance(init_index, int) or init_index < 0):
            raise ValueError(f"'init_index' should be None or an integer >= 0, got {init_index}")
        if seed is not None:
            check_setting({"seed": seed})

        self.max_iterations = max_iterations
        self.rel_tolerance = float(rel_tolerance)
        self.init_index = init_index
        self.seed = seed

    @classmethod
    def from_settings(cls, setting: dict[str, Any], init_index: int = None) -> "DbaConfig":
        return cls(max_iterations=setting.get("max_iterations", DEFAULT_SETTING["max_iterations"]),
                   rel_tolerance=setting.get("rel_tolerance", DEFAULT_SETTING["rel_tolerance"]),
                   init_index=init_index, seed=setting.get("seed", DEFAULT_SETTING["seed"]))

    def __repr__(self):
        return (f"DbaConfig(max_iterations:{self.max_iterations}, rel_tolerance:{self.rel_tolerance}, "
                f"init_index:{self.init_index}, seed:{self.seed})")

    def resolve_init(self, n_inputs: int) -> int:
        """Index of the initial average among n_inputs sequences"""
        if self.init_index is None:
            return int(np.random.default_rng(self.seed).integers(n_inputs))
        if self.init_index >= n_inputs:
            raise ValueError(f"'init_index' {self.init_index} is out of range for {n_inputs} inputs")
        return self.init_index


class DbaOutcome:
    """
    Result of dba_average.

    :param self.average: the barycenter, with the frame count of the initial sequence.
    :param self.objective_trace: sum of DTW costs from the average to all inputs, one entry per kept average
                                 (initial first); non-increasing.
    :param self.iterations_run: number of align-and-average passes performed.
    :param self.init_index: index of the input the average started from.
    """

    __slots__ = 'average', 'objective_trace', 'iterations_run', 'init_index'

    def __init__(self, average: FeatureMatrix, objective_trace: list[float], iterations_run: int, init_index: int):
        self.average = average
        self.objective_trace = objective_trace
        self.iterations_run = iterations_run
        self.init_index = init_index

    def __repr__(self):
        return (f"DbaOutcome(frames:{self.average.frames}, objective:{self.objective_trace[-1]}, "
                f"iterations_run:{self.iterations_run}, init_index:{self.init_index})")


def _check_inputs(current: FeatureMatrix, inputs: Sequence[FeatureMatrix]):
    if not inputs:
        raise ShapeMismatchError("barycenter averaging needs at least one input sequence")
    for index, series in enumerate(inputs):
        if series.coeffs != current.coeffs:
            raise ShapeMismatchError(f"input {index} has {series.coeffs} coefficients, expected {current.coeffs}")


def _align(current: FeatureMatrix, series: FeatureMatrix):
    """(cost, average frame index per path step, input frame per path step)"""
    result = dtw_absement(current, series, with_path=True)
    rows, columns = result.path.indices()
    return result.cost, rows, series.values[columns]


def dba_iteration(current: FeatureMatrix, inputs: Sequence[FeatureMatrix],
                  workers: int = 1) -> tuple[FeatureMatrix, float]:
    """
    One align-and-average pass.

    Every input is aligned to 'current'; frame t of the new average is the arithmetic mean of all input frames
    aligned to frame t. The frames aligned to t are summed in sorted order before dividing, so the result does not
    depend on the order of the inputs or on the thread schedule.

    :return: (updated average, objective of 'current', i.e. the sum of DTW costs before the update)
    """
    _check_inputs(current, inputs)

    if workers > 1 and len(inputs) > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            alignments = list(executor.map(lambda series: _align(current, series), inputs))
    else:
        alignments = [_align(current, series) for series in inputs]

    objective = math.fsum(cost for cost, _, _ in alignments)
    targets = np.concatenate([rows for _, rows, _ in alignments])
    aligned = np.concatenate([frames for _, _, frames in alignments])

    # group by target frame, then by frame content (np.lexsort: last key is the primary key)
    order = np.lexsort(tuple(aligned[:, c] for c in reversed(range(aligned.shape[1]))) + (targets,))
    aligned, targets = aligned[order], targets[order]

    starts = np.flatnonzero(np.concatenate(([True], targets[1:] != targets[:-1])))
    counts = np.diff(np.append(starts, targets.shape[0]))
    average = np.add.reduceat(aligned, starts, axis=0) / counts[:, np.newaxis]

    return FeatureMatrix(average, "average", current.metadata), objective


def dba_average(inputs: Sequence[FeatureMatrix], cfg: DbaConfig = None, workers: int = 1) -> DbaOutcome:
    """
    DTW barycenter averaging of a set of sequences.

    Starts from the input chosen by cfg and repeats dba_iteration. Each pass also yields the objective of the
    average it started from, so an update is only kept once its objective is known: an update that would raise the
    objective by more than rounding noise (the frame mean minimizes squared, not plain Euclidean distance) is
    discarded and iteration stops.
    Iteration also stops after cfg.max_iterations kept updates, on a relative decrease below cfg.rel_tolerance, or
    at objective 0.
    """
    cfg = DbaConfig() if cfg is None else cfg
    if not inputs:
        raise ShapeMismatchError("barycenter averaging needs at least one input sequence")

    init_index = cfg.resolve_init(len(inputs))
    average = FeatureMatrix(inputs[init_index].values, "average")

    candidate, objective = dba_iteration(average, inputs, workers)
    trace = [objective]
    passes = 1
    updates = 0

    while updates < cfg.max_iterations and trace[-1] > 0:
        next_candidate, objective = dba_iteration(candidate, inputs, workers)
        passes += 1
        logger.debug(f"dba pass {passes}: objective {objective} (kept {trace[-1]})")

        # equal objectives may differ in the last bits
        if objective > trace[-1] * (1 + TOLERANCES["absement"]):
            logger.debug("dba: update would raise the objective, keeping the previous average")
            break

        average, candidate = candidate, next_candidate
        trace.append(objective)
        updates += 1

        if trace[-2] - trace[-1] < cfg.rel_tolerance * trace[-2]:
            break

    return DbaOutcome(average, trace, passes, init_index)
