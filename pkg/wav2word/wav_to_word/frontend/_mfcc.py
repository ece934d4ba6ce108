import logging
from typing import Any

import numpy as np
from scipy import fft

from wav2word.wav_to_word import DEFAULT_SETTING, check_setting
from wav2word.wav_to_word import formulas
from wav2word.wav_to_word.errors import SignalTooShortError
from wav2word.wav_to_word.frontend._waveform import Waveform
from wav2word.wav_to_word.frontend._feature_matrix import FeatureMatrix

logger = logging.getLogger(__name__)

FRONTEND_KEYS = ("window_ms", "hop_ms", "n_coeffs", "n_mel_filters", "pre_emphasis", "mel_low_hz", "mel_high_hz",
                 "log_floor")


class FrontendConfig:
    """
    Parameters of the MFCC frontend. Defaults: 25 ms Hamming window, 10 ms advance, 13 coefficients (the first
    replaced by log energy), 26 mel filters spanning 0 Hz to Nyquist, pre-emphasis 0.97, log floor 1e-10.
    """

    __slots__ = FRONTEND_KEYS

    def __init__(self, **params):
        check_setting(params)
        for key in FRONTEND_KEYS:
            setattr(self, key, params[key] if key in params else DEFAULT_SETTING[key])
        extra = set(params) - set(FRONTEND_KEYS)
        if extra:
            raise ValueError(f"not a frontend setting: {extra}")

    @classmethod
    def from_settings(cls, setting: dict[str, Any]) -> "FrontendConfig":
        """Pick the frontend keys out of a (full) settings dictionary"""
        return cls(**{key: setting[key] for key in FRONTEND_KEYS if key in setting})

    def __repr__(self):
        return "FrontendConfig(" + ", ".join(f"{key}:{getattr(self, key)}" for key in FRONTEND_KEYS) + ")"

    def signature(self) -> str:
        """The settings as one 'key=value' string, kept in the metadata of every feature file"""
        return ",".join(f"{key}={getattr(self, key)}" for key in FRONTEND_KEYS)

    def window_samples(self, sample_rate: int) -> int:
        return formulas.ms_to_samples(self.window_ms, sample_rate)

    def hop_samples(self, sample_rate: int) -> int:
        return formulas.ms_to_samples(self.hop_ms, sample_rate)

    def band(self, sample_rate: int) -> tuple[float, float]:
        """(low, high) edges of the mel filterbank for a given sample rate"""
        nyquist = sample_rate / 2
        high = nyquist if self.mel_high_hz is None else float(self.mel_high_hz)
        if high > nyquist:
            raise ValueError(f"'mel_high_hz' ({high}) exceeds the Nyquist frequency ({nyquist}) of {sample_rate} Hz audio")
        if self.mel_low_hz >= high:
            raise ValueError(f"'mel_low_hz' ({self.mel_low_hz}) should be below the upper band edge ({high})")
        return float(self.mel_low_hz), high

    def validate(self, sample_rate: int):
        """Check the constraints that depend on the sample rate"""
        if self.hop_samples(sample_rate) < 1:
            raise ValueError(f"'hop_ms' ({self.hop_ms}) is shorter than one sample at {sample_rate} Hz")
        self.band(sample_rate)


def frame_count(n_samples: int, sample_rate: int, cfg: FrontendConfig = None) -> int:
    """
    Number of frames the frontend produces for a signal of n_samples.

    :return: floor((n_samples - window_samples) / hop_samples) + 1, the final partial frame is dropped.
    :raises SignalTooShortError: when the signal is shorter than one window.
    """
    cfg = FrontendConfig() if cfg is None else cfg
    return formulas.frame_count(n_samples, cfg.window_samples(sample_rate), cfg.hop_samples(sample_rate))


def log_energy(frame, cfg: FrontendConfig = None) -> float:
    """ln(max(sum(s_i^2), log_floor)) of a frame"""
    cfg = FrontendConfig() if cfg is None else cfg
    return formulas.log_energy(frame, cfg.log_floor)


def mel_filterbank(n_fft: int, sample_rate: int, n_filters: int, low_hz: float, high_hz: float) -> np.ndarray:
    """
    Triangular filters, equally spaced on the mel scale, evaluated at the rfft bin frequencies.

    :return: array of shape (n_filters, n_fft // 2 + 1), peak weight 1 per filter.
    """
    bins = np.arange(n_fft // 2 + 1) * sample_rate / n_fft
    edges = formulas.mel_to_hz(np.linspace(formulas.hz_to_mel(low_hz), formulas.hz_to_mel(high_hz), n_filters + 2))

    left, center, right = edges[:-2, np.newaxis], edges[1:-1, np.newaxis], edges[2:, np.newaxis]
    rising = (bins - left) / (center - left)
    falling = (right - bins) / (right - center)

    return np.maximum(0.0, np.minimum(rising, falling))


def frame_signal(samples: np.ndarray, window_samples: int, hop_samples: int) -> np.ndarray:
    """Cut a signal into overlapping frames, shape (T, window_samples)"""
    n_frames = formulas.frame_count(samples.shape[0], window_samples, hop_samples)
    index = hop_samples * np.arange(n_frames)[:, np.newaxis] + np.arange(window_samples)[np.newaxis, :]
    return samples[index]


def mfcc(waveform: Waveform, cfg: FrontendConfig = None, provenance: str = "") -> FeatureMatrix:
    """
    Convert a waveform to a mel frequency cepstral coefficient matrix.

    Pipeline: pre-emphasis, framing, Hamming window, magnitude spectrum (FFT zero padded to the next power of two
    >= window), triangular mel filterbank, floored log, orthonormal DCT-II, keep n_coeffs, then coefficient 0 is
    overwritten with the log energy of the (pre-emphasized, unwindowed) frame.

    :return: FeatureMatrix of shape (frame_count, n_coeffs)
    """
    cfg = FrontendConfig() if cfg is None else cfg
    sample_rate = waveform.sample_rate
    cfg.validate(sample_rate)

    samples = waveform.samples
    if samples.shape[0] == 0:
        raise SignalTooShortError("empty waveform")

    if cfg.pre_emphasis > 0:
        samples = np.concatenate((samples[:1], samples[1:] - cfg.pre_emphasis * samples[:-1]))

    window_samples = cfg.window_samples(sample_rate)
    frames = frame_signal(samples, window_samples, cfg.hop_samples(sample_rate))

    energy = np.log(np.maximum(np.sum(frames * frames, axis=1), cfg.log_floor))

    n_fft = formulas.next_power_of_two(window_samples)
    spectrum = np.abs(fft.rfft(frames * np.hamming(window_samples), n=n_fft, axis=1))

    low_hz, high_hz = cfg.band(sample_rate)
    filterbank = mel_filterbank(n_fft, sample_rate, cfg.n_mel_filters, low_hz, high_hz)
    log_mel = np.log(np.maximum(spectrum @ filterbank.T, cfg.log_floor))

    cepstra = fft.dct(log_mel, type=2, norm="ortho", axis=1)[:, :cfg.n_coeffs]
    cepstra[:, 0] = energy

    logger.debug(f"mfcc: {samples.shape[0]} samples -> {cepstra.shape[0]} frames x {cepstra.shape[1]} coefficients")

    return FeatureMatrix(cepstra, provenance, {"frontend": cfg.signature()})
