"""
The recognizer sub-module ranks a lexicon of templates against a query by scaled absement, and scores batches of
queries by top-1 and top-k accuracy.
"""

from wav2word.wav_to_word.recognizer._lexicon import Lexicon, build_lexicon
from wav2word.wav_to_word.recognizer._recognizer import RecognitionResult, rank_candidates, recognize
from wav2word.wav_to_word.recognizer._evaluation import EvalReport, evaluate, format_per_query_csv, format_summary_csv
