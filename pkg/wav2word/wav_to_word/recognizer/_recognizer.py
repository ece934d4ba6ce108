import logging
from concurrent.futures import ThreadPoolExecutor

from wav2word.wav_to_word import SCALING
from wav2word.wav_to_word import formulas
from wav2word.wav_to_word.errors import ShapeMismatchError
from wav2word.wav_to_word.frontend import FeatureMatrix
from wav2word.wav_to_word.absement import dtw_absement
from wav2word.wav_to_word.recognizer._lexicon import Lexicon

logger = logging.getLogger(__name__)


class RecognitionResult:
    """
    Ranking of all lexicon words for one query.

    :param self.ranked: (word, score) for every lexicon word, ascending by score, ties broken by word.
                        The score is the scaled absement (or the raw absement with scaling 'none').
    :param self.costs: raw absement per word.
    :param self.k: length of the top-k list.
    """

    __slots__ = 'query_label', 'query_name', 'ranked', 'costs', 'k'

    def __init__(self, ranked: list[tuple[str, float]], costs: dict[str, float], k: int, query_label: str = None,
                 query_name: str = ""):
        self.ranked = ranked
        self.costs = costs
        self.k = k
        self.query_label = query_label
        self.query_name = query_name

    def __repr__(self):
        return (f"RecognitionResult(query:{self.query_name}, label:{self.query_label}, "
                f"recognized:{self.recognized}, top_k:{[word for word, _ in self.top_k]})")

    @property
    def top_k(self) -> list[tuple[str, float]]:
        return self.ranked[:self.k]

    @property
    def recognized(self) -> str:
        """The word with the lowest score"""
        return self.ranked[0][0]

    def rank_of(self, word: str) -> int:
        """1-based rank of a word, 0 if it is not ranked"""
        for rank, (candidate, _) in enumerate(self.ranked, start=1):
            if candidate == word:
                return rank
        return 0

    def in_top(self, word: str, k: int = None) -> bool:
        rank = self.rank_of(word)
        return 0 < rank <= (self.k if k is None else k)

    def with_k(self, k: int) -> "RecognitionResult":
        """The same ranking with another top-k size"""
        check_k(k, len(self.ranked))
        return RecognitionResult(self.ranked, self.costs, k, self.query_label, self.query_name)


def check_k(k: int, size: int):
    if isinstance(k, bool) or not isinstance(k, int) or not 1 <= k <= size:
        raise ValueError(f"k should be an integer in [1, {size}], got {k}")


def check_scaling(scaling: str):
    if scaling not in SCALING:
        raise ValueError(f"Unknown scaling '{scaling}'. Please specify one of the following: {SCALING}")


def rank_candidates(costs: dict[str, float], template_lengths: dict[str, int],
                    scaling: str = "sqrt") -> list[tuple[str, float]]:
    """
    Order words by ranking score: cost / sqrt(template length) for scaling 'sqrt', the raw cost for 'none'.
    Equal scores are ordered by word, so the ranking is total.
    """
    check_scaling(scaling)
    if scaling == "sqrt":
        scores = {word: formulas.scaled_absement(cost, template_lengths[word]) for word, cost in costs.items()}
    else:
        scores = dict(costs)

    return sorted(scores.items(), key=lambda item: (item[1], item[0]))


def recognize(query: FeatureMatrix, lex: Lexicon, k: int = 10, scaling: str = "sqrt", workers: int = 1,
              query_label: str = None) -> RecognitionResult:
    """
    Rank every lexicon word by its (scaled) absement to the query.

    :param k: size of the top-k list, 1 <= k <= lex.size.
    :param scaling: 'sqrt' divides the absement by the square root of the template length, 'none' keeps it raw.
    :param workers: threads for the per-template DTW scan; the ranking does not depend on it.
    """
    check_k(k, lex.size)
    check_scaling(scaling)
    if query.coeffs != lex.coeffs:
        raise ShapeMismatchError(f"query has {query.coeffs} coefficients, the lexicon {lex.coeffs}")

    labels = lex.labels()

    def absement(label):
        return dtw_absement(query, lex.get(label), with_path=False).cost

    if workers > 1 and len(labels) > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            costs = dict(zip(labels, executor.map(absement, labels)))
    else:
        costs = {label: absement(label) for label in labels}

    ranked = rank_candidates(costs, lex.template_lengths(), scaling)
    logger.debug(f"recognize {query.provenance or '<query>'}: {ranked[0][0]} ({ranked[0][1]})")

    return RecognitionResult(ranked, costs, k, query_label, query.provenance)
