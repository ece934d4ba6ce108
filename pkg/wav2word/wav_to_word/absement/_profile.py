import io
import csv

import numpy as np

from wav2word.wav_to_word.frontend import FeatureMatrix
from wav2word.wav_to_word.absement._dtw import AbsementResult, dtw_absement

REFERENCES = {"query", "template"}


class DistanceProfile:
    """
    Distance over time along a DTW alignment, indexed by the frames of one of the two sequences.

    When a reference frame is stretched over several frames of the other sequence, the distances of those steps are
    summed into it; summing the whole profile gives back the DTW cost.
    """

    __slots__ = 'per_frame', 'reference', 'result'

    def __init__(self, per_frame: np.ndarray, reference: str, result: AbsementResult):
        self.per_frame = per_frame
        self.reference = reference
        self.result = result

    def __repr__(self):
        return f"DistanceProfile(reference:{self.reference}, frames:{self.per_frame.shape[0]}, cost:{self.result.cost})"

    def total(self) -> float:
        return float(np.sum(self.per_frame))


def distance_profile(query: FeatureMatrix, template: FeatureMatrix, reference: str) -> DistanceProfile:
    """
    Per-frame absement profile.

    :param reference: "query" indexes the profile by the frames of the query, "template" by those of the template.
    :return: DistanceProfile whose per_frame has the frame count of the reference sequence.
    """
    if reference not in REFERENCES:
        raise ValueError(f"Unknown reference '{reference}'. Please specify one of the following: {REFERENCES}")

    result = dtw_absement(query, template, with_path=True)
    rows, columns = result.path.indices()
    index, length = (rows, result.query_len) if reference == "query" else (columns, result.template_len)

    per_frame = np.bincount(index, weights=result.step_distances, minlength=length)

    return DistanceProfile(per_frame, reference, result)


def _csv_text(header, rows) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buffer.getvalue()


def format_profile_csv(profile: DistanceProfile) -> str:
    """CSV 'frame_index,distance_sum', frame_index 1-based"""
    return _csv_text(("frame_index", "distance_sum"),
                     ((index, repr(float(value))) for index, value in enumerate(profile.per_frame, start=1)))


def format_path_csv(result: AbsementResult) -> str:
    """CSV 'i,j,step_distance' of every warp path step, indices 1-based"""
    if result.path is None:
        raise ValueError("the result holds no warp path, compute it with with_path=True")

    return _csv_text(("i", "j", "step_distance"),
                     ((i, j, repr(float(d))) for (i, j), d in zip(result.path, result.step_distances)))


def format_grid_csv(grid: np.ndarray) -> str:
    """CSV 'i,j,distance' of a full local distance grid, indices 1-based"""
    return _csv_text(("i", "j", "distance"),
                     ((i + 1, j + 1, repr(float(grid[i, j]))) for i in range(grid.shape[0]) for j in range(grid.shape[1])))
