import os
import logging

import numpy as np
import soundfile as sf

from wav2word.wav_to_word.errors import WavHeaderError, WavEncodingError

logger = logging.getLogger(__name__)

# PCM 16-bit full scale
PCM16_SCALE = 32768


class Waveform:
    """Decoded mono audio: samples normalized to [-1, 1] and the sample rate in Hz."""

    __slots__ = 'samples', 'sample_rate'

    def __init__(self, samples, sample_rate: int):
        samples = np.asarray(samples, dtype=np.float64)
        if samples.ndim != 1:
            raise ValueError(f"Waveform samples must be one dimensional, got shape {samples.shape}")
        if int(sample_rate) != sample_rate or sample_rate <= 0:
            raise ValueError(f"sample rate must be a positive integer, got {sample_rate}")

        self.samples = samples
        self.sample_rate = int(sample_rate)

    def __repr__(self):
        return f"Waveform(samples:{self.samples.shape[0]}, sample_rate:{self.sample_rate})"

    def duration(self) -> float:
        """Length in seconds"""
        return self.samples.shape[0] / self.sample_rate


def load_wav(path) -> Waveform:
    """
    Decode a RIFF/WAVE PCM 16-bit file (mono or stereo).

    Samples are normalized by 1/32768; stereo channels are averaged to mono.

    :raises FileNotFoundError: the file does not exist.
    :raises WavHeaderError: the file is not a readable RIFF/WAVE container.
    :raises WavEncodingError: the container holds anything but 1 or 2 channels of PCM 16-bit.
    """
    path = os.fspath(path)
    if not os.path.isfile(path):
        raise FileNotFoundError(f"No such audio file: '{path}'")

    try:
        info = sf.info(path)
    except RuntimeError as error:
        # soundfile.LibsndfileError derives from RuntimeError
        raise WavHeaderError(f"'{path}' is not a readable RIFF/WAVE file ({error})") from error

    if info.format not in {"WAV", "WAVEX"}:
        raise WavHeaderError(f"'{path}' is a {info.format} file, not RIFF/WAVE")
    if info.subtype != "PCM_16":
        raise WavEncodingError(f"'{path}' has encoding {info.subtype}, only PCM_16 is supported")
    if info.channels not in {1, 2}:
        raise WavEncodingError(f"'{path}' has {info.channels} channels, only mono and stereo are supported")

    try:
        data, sample_rate = sf.read(path, dtype="int16", always_2d=True)
    except RuntimeError as error:
        raise WavHeaderError(f"'{path}' could not be decoded ({error})") from error

    samples = data.astype(np.float64) / PCM16_SCALE
    samples = samples[:, 0] if samples.shape[1] == 1 else samples.mean(axis=1)

    logger.debug(f"Loaded {path}: {samples.shape[0]} samples at {sample_rate} Hz, {info.channels} channel(s)")

    return Waveform(samples, sample_rate)


def write_wav(path, waveform: Waveform):
    """
    Write a mono PCM 16-bit RIFF/WAVE file, the inverse of load_wav up to quantization.
    Samples are scaled by 32768, rounded and clipped to the int16 range.
    """
    pcm = np.clip(np.round(waveform.samples * PCM16_SCALE), -PCM16_SCALE, PCM16_SCALE - 1).astype(np.int16)
    # explicit format: the path may carry a temporary suffix
    sf.write(os.fspath(path), pcm, waveform.sample_rate, subtype="PCM_16", format="WAV")
