"""The dba sub-module builds one average template out of several productions of a word."""

from wav2word.wav_to_word.dba._dba import DbaConfig, DbaOutcome, dba_iteration, dba_average
