"""
This script contains handy mathematical equations.
It's used to limit code repetition and keep the closed-form parts of the pipeline in one place.
"""

import math

import numpy as np

from wav2word.wav_to_word.errors import ShapeMismatchError, SignalTooShortError


def euclidean_distance(x, y) -> float:
    """
    Euclidean distance between two frames.

    :param x: vector of length k >= 1.
    :param y: vector of the same length as x.
    :return: sqrt(sum_i |x_i - y_i|^2)
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)

    if x.ndim != 1 or x.shape != y.shape or x.shape[0] == 0:
        raise ShapeMismatchError(f"frames must be nonempty vectors of equal length, got shapes {x.shape} and {y.shape}")

    return math.sqrt(float(np.sum((x - y) ** 2)))


def scaled_absement(cost: float, template_len: int) -> float:
    """
    Divide an absement value by the square root of the template length (in frames).
    Plain division by the length would turn absement into an average distance; the square root only takes part of
    the duration effect away.
    """
    if template_len < 1:
        raise ValueError(f"template length must be >= 1, got {template_len}")
    if cost < 0:
        raise ValueError(f"absement must be >= 0, got {cost}")

    return cost / math.sqrt(template_len)


def ms_to_samples(ms: float, sample_rate: int) -> int:
    """Number of samples closest to 'ms' milliseconds"""
    return int(round(ms * sample_rate / 1000))


def frame_count(n_samples: int, window_samples: int, hop_samples: int) -> int:
    """
    Number of whole frames in a signal, the final partial frame is dropped.

    :return: floor((n_samples - window_samples) / hop_samples) + 1
    """
    if n_samples < window_samples:
        raise SignalTooShortError(f"signal of {n_samples} samples is shorter than one window of {window_samples} samples")

    return (n_samples - window_samples) // hop_samples + 1


def log_energy(frame, log_floor: float = 1e-10) -> float:
    """Natural log of the frame energy (sum of squares), floored to keep silence finite"""
    frame = np.asarray(frame, dtype=np.float64)

    if frame.size == 0:
        raise ShapeMismatchError("log energy of an empty frame")

    return math.log(max(float(np.sum(frame * frame)), log_floor))


def hz_to_mel(hz):
    """mel(f) = 2595 * log10(1 + f/700)"""
    return 2595.0 * np.log10(1.0 + np.asarray(hz, dtype=np.float64) / 700.0)


def mel_to_hz(mel):
    """Inverse of hz_to_mel"""
    return 700.0 * (10.0 ** (np.asarray(mel, dtype=np.float64) / 2595.0) - 1.0)


def next_power_of_two(n: int) -> int:
    """Smallest power of two >= n"""
    return 1 << max(0, (n - 1).bit_length())
