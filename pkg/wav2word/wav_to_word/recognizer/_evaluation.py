import io
import csv
import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Iterable

from wav2word.wav_to_word.errors import LexiconError
from wav2word.wav_to_word.frontend import FeatureMatrix
from wav2word.wav_to_word.recognizer._lexicon import Lexicon
from wav2word.wav_to_word.recognizer._recognizer import RecognitionResult, check_k, check_scaling, recognize

logger = logging.getLogger(__name__)


class EvalReport:
    """
    Accuracy of a batch of recognitions. Everything is computed from per_query, which keeps the full ranking of
    every query, so a report can be re-scored at another k without new DTW scans.
    """

    __slots__ = 'per_query', 'k', 'template_lengths'

    def __init__(self, per_query: list[RecognitionResult], k: int, template_lengths: dict[str, int] = None):
        self.per_query = [result if result.k == k else result.with_k(k) for result in per_query]
        self.k = k
        self.template_lengths = template_lengths if template_lengths is not None else {}

    def __repr__(self):
        return (f"EvalReport(n_queries:{self.n_queries}, top1_accuracy:{self.top1_accuracy}, "
                f"top{self.k}_accuracy:{self.topk_accuracy})")

    @property
    def n_queries(self) -> int:
        return len(self.per_query)

    @property
    def top1_accuracy(self) -> float:
        if not self.per_query:
            return 0.0
        return sum(result.recognized == result.query_label for result in self.per_query) / self.n_queries

    @property
    def topk_accuracy(self) -> float:
        if not self.per_query:
            return 0.0
        return sum(result.in_top(result.query_label) for result in self.per_query) / self.n_queries

    def rescore(self, k: int) -> "EvalReport":
        """The same recognitions scored at another k"""
        return EvalReport(self.per_query, k, self.template_lengths)

    def mean_recognized_length(self) -> float:
        """Mean template frame count of the rank-1 words"""
        return _mean(self.template_lengths[result.recognized] for result in self.per_query)

    def mean_true_length(self) -> float:
        """Mean template frame count of the words actually spoken"""
        return _mean(self.template_lengths[result.query_label] for result in self.per_query)


def _mean(values) -> float:
    values = list(values)
    return sum(values) / len(values) if values else 0.0


def evaluate(queries: Iterable[tuple[str, FeatureMatrix]], lex: Lexicon, k: int = 10, scaling: str = "sqrt",
             workers: int = 1) -> EvalReport:
    """
    Recognize every labeled query against the lexicon.

    :param queries: (label, features) pairs; the features' provenance names the query in reports.
    :raises LexiconError: a query label is not in the lexicon.
    """
    queries = list(queries)
    check_k(k, lex.size)
    check_scaling(scaling)
    for label, _ in queries:
        if label not in lex:
            raise LexiconError(f"query label '{label}' has no template in the lexicon")

    def recognize_one(query):
        label, features = query
        return recognize(features, lex, k, scaling, query_label=label)

    if workers > 1 and len(queries) > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            per_query = list(executor.map(recognize_one, queries))
    else:
        per_query = [recognize_one(query) for query in queries]

    report = EvalReport(per_query, k, lex.template_lengths())
    logger.debug(f"evaluate: {report}")

    return report


def format_per_query_csv(report: EvalReport) -> str:
    """CSV 'query,rank,word,scaled_absement' with the full ranking of every query"""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(("query", "rank", "word", "scaled_absement"))
    for result in report.per_query:
        for rank, (word, score) in enumerate(result.ranked, start=1):
            writer.writerow((result.query_name, rank, word, repr(float(score))))
    return buffer.getvalue()


def format_summary_csv(report: EvalReport) -> str:
    """CSV 'n,top1,topk,k', one data line"""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(("n", "top1", "topk", "k"))
    writer.writerow((report.n_queries, repr(report.top1_accuracy), repr(report.topk_accuracy), report.k))
    return buffer.getvalue()
