"""
Seeded synthetic corpus: a desk-scale stand-in for a recorded word list.

Every word is a fixed pattern of 2 to 4 chirp segments (with a second partial) lasting 300 to 900 ms. Every speaker
produces each word with a small pitch offset, a gain and a duration stretch of at most 10%.
"""

import logging

import numpy as np

from wav2word.wav_to_word.frontend import Waveform

logger = logging.getLogger(__name__)

# word patterns
DURATION_RANGE = (0.3, 0.9)		# seconds
SEGMENT_RANGE = (2, 4)			# chirp segments per word
FREQUENCY_RANGE = (150.0, 3000.0)	# Hz, segment start frequency (log-uniform)
CHIRP_OCTAVES = 1.0			# a segment ends at most this many octaves from where it starts
PARTIAL_RANGE = (0.2, 0.6)		# level of the second partial
LEVEL_RANGE = (0.5, 1.0)		# per segment loudness
RAMP_SECONDS = 0.02			# fade in and fade out
# speaker variation
PITCH_SEMITONES = 0.5			# +- pitch offset
GAIN_RANGE = (0.6, 0.9)			# peak amplitude
STRETCH_RANGE = (0.9, 1.1)		# duration factor


class WordPattern:
    """Speaker independent description of a synthetic word"""

    __slots__ = 'label', 'duration', 'boundaries', 'start_hz', 'end_hz', 'partials', 'levels'

    def __init__(self, label, duration, boundaries, start_hz, end_hz, partials, levels):
        self.label = label
        self.duration = duration
        # segment boundaries as fractions of the word, from 0 to 1
        self.boundaries = boundaries
        self.start_hz = start_hz
        self.end_hz = end_hz
        self.partials = partials
        self.levels = levels

    def __repr__(self):
        return f"WordPattern(label:{self.label}, duration:{self.duration:.3f}, segments:{len(self.start_hz)})"

    @classmethod
    def draw(cls, label: str, rng: np.random.Generator, sample_rate: int) -> "WordPattern":
        n_segments = int(rng.integers(SEGMENT_RANGE[0], SEGMENT_RANGE[1] + 1))
        duration = rng.uniform(*DURATION_RANGE)
        boundaries = np.concatenate(([0.0], np.cumsum(rng.dirichlet(np.full(n_segments, 4.0)))))
        boundaries[-1] = 1.0

        low, high = np.log2(FREQUENCY_RANGE)
        # keep the second partial below Nyquist
        start_hz = np.minimum(2 ** rng.uniform(low, high, n_segments), 0.2 * sample_rate)
        end_hz = np.clip(start_hz * 2 ** rng.uniform(-CHIRP_OCTAVES, CHIRP_OCTAVES, n_segments),
                         FREQUENCY_RANGE[0] / 2, 0.2 * sample_rate)

        return cls(label, duration, boundaries, start_hz, end_hz,
                   rng.uniform(*PARTIAL_RANGE, n_segments), rng.uniform(*LEVEL_RANGE, n_segments))

    def render(self, sample_rate: int, pitch: float = 1.0, gain: float = 0.8, stretch: float = 1.0) -> np.ndarray:
        """Samples of one production"""
        n = int(round(self.duration * stretch * sample_rate))
        position = np.arange(n) / n

        segment = np.clip(np.searchsorted(self.boundaries, position, side="right") - 1, 0, len(self.start_hz) - 1)
        within = (position - self.boundaries[segment]) / (self.boundaries[segment + 1] - self.boundaries[segment])

        frequency = pitch * (self.start_hz[segment] + within * (self.end_hz[segment] - self.start_hz[segment]))
        phase = 2 * np.pi * np.cumsum(frequency) / sample_rate
        signal = np.sin(phase) + self.partials[segment] * np.sin(2 * phase)

        centers = (self.boundaries[:-1] + self.boundaries[1:]) / 2
        envelope = np.interp(position, centers, self.levels)
        ramp = min(int(RAMP_SECONDS * sample_rate), n // 2)
        fade = 0.5 - 0.5 * np.cos(np.pi * np.arange(ramp) / ramp)
        envelope[:ramp] *= fade
        envelope[n - ramp:] *= fade[::-1]

        signal *= envelope
        return gain * signal / np.max(np.abs(signal))


def word_labels(n_words: int) -> list[str]:
    width = max(3, len(str(n_words)))
    return [f"word{i:0{width}d}" for i in range(1, n_words + 1)]


def speaker_labels(n_speakers: int) -> list[str]:
    return [f"s{i}" for i in range(1, n_speakers + 1)]


def generate_corpus(n_words: int, n_speakers: int, seed: int, sample_rate: int = 16000,
                    noise_level: float = 0.0) -> list[tuple[str, str, Waveform]]:
    """
    Draw a synthetic corpus from one seeded generator.

    :param n_words: number of words, >= 1.
    :param n_speakers: number of speakers, >= 3 (two template speakers and one query speaker).
    :param noise_level: standard deviation of additive white noise, 0 for a noise free corpus.
    :return: (word, speaker, waveform) for every word and speaker, words outer, speakers inner.
    """
    if isinstance(n_words, bool) or not isinstance(n_words, int) or n_words < 1:
        raise ValueError(f"n_words should be an integer >= 1, got {n_words}")
    if isinstance(n_speakers, bool) or not isinstance(n_speakers, int) or n_speakers < 3:
        raise ValueError(f"n_speakers should be an integer >= 3, got {n_speakers}")
    if noise_level < 0:
        raise ValueError(f"noise_level should be >= 0, got {noise_level}")

    rng = np.random.default_rng(seed)
    patterns = [WordPattern.draw(label, rng, sample_rate) for label in word_labels(n_words)]

    corpus = []
    for pattern in patterns:
        for speaker in speaker_labels(n_speakers):
            pitch = 2 ** (rng.uniform(-PITCH_SEMITONES, PITCH_SEMITONES) / 12)
            gain = rng.uniform(*GAIN_RANGE)
            stretch = rng.uniform(*STRETCH_RANGE)
            samples = pattern.render(sample_rate, pitch, gain, stretch)
            if noise_level > 0:
                samples = np.clip(samples + noise_level * rng.standard_normal(samples.shape[0]), -1.0, 1.0)
            corpus.append((pattern.label, speaker, Waveform(samples, sample_rate)))

    logger.debug(f"synthetic corpus: {n_words} words x {n_speakers} speakers, seed {seed}")

    return corpus
