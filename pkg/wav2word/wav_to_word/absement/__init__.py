"""
The absement sub-module measures how far apart two feature sequences stay over time.

Absement here is the DTW cost: the Euclidean frame distance summed along an optimal, monotone and continuous warp
path. It is not a metric, DTW cost does not satisfy the triangle inequality.
"""

from wav2word.wav_to_word.absement._warp_path import WarpPath
from wav2word.wav_to_word.absement._dtw import AbsementResult, dtw_absement, local_distances
from wav2word.wav_to_word.absement._profile import DistanceProfile, distance_profile
from wav2word.wav_to_word.absement._profile import format_profile_csv, format_path_csv, format_grid_csv
from wav2word.wav_to_word.formulas import euclidean_distance, scaled_absement
