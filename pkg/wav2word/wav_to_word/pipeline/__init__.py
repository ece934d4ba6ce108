"""The pipeline sub-module runs the batch steps of an experiment over manifests and writes their output files."""

from wav2word.wav_to_word.pipeline._pipeline import Pipeline, write_atomic, write_text_atomic
from wav2word.wav_to_word.pipeline._pipeline import AVERAGE_SUFFIX, FEATURE_SUFFIX, MANIFEST_FILE, PER_QUERY_FILE, SUMMARY_FILE
