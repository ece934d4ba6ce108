import numpy as np
import pytest

from wav2word.wav_to_word.frontend import FeatureMatrix


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


def random_features(rng: np.random.Generator, frames: int, coeffs: int = 3, scale: float = 1.0) -> FeatureMatrix:
    return FeatureMatrix(scale * rng.standard_normal((frames, coeffs)))


def random_walk(rng: np.random.Generator, frames: int, coeffs: int = 3, step: float = 1.0) -> FeatureMatrix:
    return FeatureMatrix(np.cumsum(step * rng.standard_normal((frames, coeffs)), axis=0))


def tone(frequency: float, seconds: float = 0.5, sample_rate: int = 16000, amplitude: float = 0.5) -> np.ndarray:
    return amplitude * np.sin(2 * np.pi * frequency * np.arange(int(seconds * sample_rate)) / sample_rate)

