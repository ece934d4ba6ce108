"""The corpus sub-module reads and writes recording manifests and generates seeded synthetic corpora."""

from wav2word.wav_to_word.corpus._manifest import Manifest, ManifestRow, parse_manifest, read_manifest, format_manifest
from wav2word.wav_to_word.corpus._synth import WordPattern, generate_corpus, word_labels, speaker_labels
