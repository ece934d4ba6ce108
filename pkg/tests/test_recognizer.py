import csv
import io

import numpy as np
import pytest

from wav2word.wav_to_word.errors import LexiconError, ShapeMismatchError
from wav2word.wav_to_word.frontend import FeatureMatrix, FrontendConfig, Waveform, mfcc
from wav2word.wav_to_word.absement import dtw_absement, scaled_absement
from wav2word.wav_to_word.recognizer import EvalReport, build_lexicon, evaluate, format_per_query_csv
from wav2word.wav_to_word.recognizer import format_summary_csv, rank_candidates, recognize

from conftest import random_features, random_walk, tone


# lexicon

def test_build_lexicon(rng):
    lex = build_lexicon({"one": random_features(rng, 5)})
    assert lex.size == 1
    assert lex.labels() == ["one"]
    assert "one" in lex and "two" not in lex


def test_build_lexicon_of_1000(rng):
    lex = build_lexicon((f"w{i:04d}", random_features(rng, 3)) for i in range(1000))
    assert lex.size == 1000
    assert lex.template_lengths()["w0999"] == 3


def test_build_lexicon_errors(rng):
    x = random_features(rng, 5)
    with pytest.raises(LexiconError):
        build_lexicon([("one", x), ("one", x)])
    with pytest.raises(LexiconError):
        build_lexicon([])
    with pytest.raises(LexiconError):
        build_lexicon([("", x)])
    with pytest.raises(ShapeMismatchError):
        build_lexicon([("one", x), ("two", random_features(rng, 5, 4))])
    with pytest.raises(TypeError):
        build_lexicon([("one", x.values)])
    with pytest.raises(LexiconError):
        build_lexicon([("one", x)]).get("two")


# recognize

def test_identical_template_wins(rng):
    templates = {f"w{i}": random_features(rng, int(rng.integers(8, 20))) for i in range(6)}
    result = recognize(templates["w3"], build_lexicon(templates), k=3)
    assert result.recognized == "w3"
    assert result.ranked[0] == ("w3", 0.0)
    assert len(result.top_k) == 3
    assert len(result.ranked) == 6


def test_single_entry_lexicon(rng):
    result = recognize(random_features(rng, 5), build_lexicon({"only": random_features(rng, 9, scale=50.0)}), k=1)
    assert result.recognized == "only"
    assert result.rank_of("only") == 1


def test_separated_tones():
    cfg = FrontendConfig()
    templates = {f"tone{i}": mfcc(Waveform(tone(frequency), 16000), cfg)
                 for i, frequency in enumerate((200.0, 800.0, 3200.0), start=1)}
    noise = np.random.default_rng(3).normal(0.0, 0.01, 8000)
    query = mfcc(Waveform(tone(800.0) + noise, 16000), cfg)

    result = recognize(query, build_lexicon(templates), k=3)
    assert result.recognized == "tone2"
    expected = sorted(templates, key=lambda word: dtw_absement(query, templates[word]).scaled_cost)
    assert [word for word, _ in result.ranked] == expected


def test_ties_ordered_by_word():
    ranked = rank_candidates({"b": 2.0, "a": 2.0, "c": 1.0}, {"a": 4, "b": 4, "c": 9}, "none")
    assert ranked == [("c", 1.0), ("a", 2.0), ("b", 2.0)]
    ranked = rank_candidates({"b": 2.0, "a": 2.0, "c": 3.0}, {"a": 4, "b": 4, "c": 9}, "sqrt")
    assert ranked == [("a", 1.0), ("b", 1.0), ("c", 1.0)]


def test_ranking_invariant_to_cost_scale(rng):
    for _ in range(50):
        words = [f"w{i}" for i in range(8)]
        costs = dict(zip(words, rng.uniform(0.0, 100.0, 8)))
        lengths = dict(zip(words, (int(n) for n in rng.integers(5, 80, 8))))
        factor = float(rng.uniform(0.01, 100.0))
        ranked = [word for word, _ in rank_candidates(costs, lengths)]
        scaled = [word for word, _ in rank_candidates({w: factor * c for w, c in costs.items()}, lengths)]
        assert ranked == scaled


def test_recognize_arguments(rng):
    lex = build_lexicon({"a": random_features(rng, 4), "b": random_features(rng, 4)})
    with pytest.raises(ValueError):
        recognize(random_features(rng, 4), lex, k=3)
    with pytest.raises(ValueError):
        recognize(random_features(rng, 4), lex, k=0)
    with pytest.raises(ValueError):
        recognize(random_features(rng, 4), lex, k=1, scaling="log")
    with pytest.raises(ShapeMismatchError):
        recognize(random_features(rng, 4, 5), lex, k=1)


def test_parallel_scan_is_identical(rng):
    lex = build_lexicon({f"w{i}": random_features(rng, int(rng.integers(5, 30))) for i in range(12)})
    query = random_features(rng, 17)
    sequential = recognize(query, lex, k=5)
    parallel = recognize(query, lex, k=5, workers=4)
    assert parallel.ranked == sequential.ranked


def test_length_bias(rng):
    """A prefix of the true template attracts the query more often without length scaling"""
    raw_short, scaled_short = 0, 0
    for _ in range(200):
        step = float(10 ** rng.uniform(-4.0, 0.0))
        long = random_walk(rng, 40, 3, step)
        short = FeatureMatrix(long.values[:20])
        query = FeatureMatrix(long.values + rng.standard_normal(long.values.shape))
        lex = build_lexicon({"long": long, "short": short})

        raw_short += recognize(query, lex, k=1, scaling="none").recognized == "short"
        scaled_short += recognize(query, lex, k=1, scaling="sqrt").recognized == "short"

    assert raw_short > scaled_short


# evaluate

def jittered_queries(rng, templates, noise=0.3):
    return [(word, FeatureMatrix(template.values + noise * rng.standard_normal(template.values.shape), f"{word}__q"))
            for word, template in templates.items()]


def test_self_recognition(rng):
    templates = {f"w{i:02d}": random_walk(rng, int(rng.integers(10, 40))) for i in range(10)}
    report = evaluate(((word, template) for word, template in templates.items()), build_lexicon(templates), k=3)
    assert report.n_queries == 10
    assert report.top1_accuracy == 1.0
    assert report.topk_accuracy == 1.0


def test_accuracy_matches_recount(rng):
    templates = {f"w{i:02d}": random_walk(rng, int(rng.integers(10, 40)), 13, 0.5) for i in range(20)}
    lex = build_lexicon(templates)
    report = evaluate(jittered_queries(rng, templates, noise=1.0), lex, k=5)

    rows = list(csv.DictReader(io.StringIO(format_per_query_csv(report))))
    assert len(rows) == 20 * 20
    first = {row["query"]: row["word"] for row in rows if row["rank"] == "1"}
    top = {(row["query"], row["word"]) for row in rows if int(row["rank"]) <= 5}
    top1 = sum(first[f"{word}__q"] == word for word in templates) / 20
    topk = sum((f"{word}__q", word) in top for word in templates) / 20

    assert report.top1_accuracy == top1
    assert report.topk_accuracy == topk

    summary = list(csv.DictReader(io.StringIO(format_summary_csv(report))))
    assert summary == [{"n": "20", "top1": repr(top1), "topk": repr(topk), "k": "5"}]


def test_per_query_scores(rng):
    templates = {"a": random_features(rng, 4), "b": random_features(rng, 9)}
    query = random_features(rng, 6)
    report = evaluate([("b", query)], build_lexicon(templates), k=2)
    result = report.per_query[0]
    for word, score in result.ranked:
        assert score == scaled_absement(dtw_absement(query, templates[word]).cost, templates[word].frames)
    assert result.costs["a"] == dtw_absement(query, templates["a"]).cost


def test_rescore(rng):
    templates = {f"w{i:02d}": random_walk(rng, int(rng.integers(10, 30)), 4, 0.3) for i in range(15)}
    report = evaluate(jittered_queries(rng, templates, noise=1.5), build_lexicon(templates), k=10)

    assert report.rescore(15).topk_accuracy == 1.0
    assert report.rescore(1).topk_accuracy == report.top1_accuracy
    assert report.rescore(3).topk_accuracy <= report.topk_accuracy
    assert isinstance(report.rescore(3), EvalReport)


def test_length_diagnostic(rng):
    templates = {"a": random_features(rng, 4), "b": random_features(rng, 10)}
    report = evaluate([("a", templates["a"]), ("b", templates["b"])], build_lexicon(templates), k=1)
    assert report.mean_true_length() == 7.0
    assert report.mean_recognized_length() == 7.0


def test_unknown_query_label(rng):
    lex = build_lexicon({"a": random_features(rng, 4)})
    with pytest.raises(LexiconError):
        evaluate([("z", random_features(rng, 4))], lex, k=1)


def test_parallel_evaluation_is_identical(rng):
    templates = {f"w{i:02d}": random_walk(rng, int(rng.integers(10, 30))) for i in range(8)}
    queries = jittered_queries(rng, templates)
    lex = build_lexicon(templates)
    sequential = evaluate(queries, lex, k=3)
    parallel = evaluate(queries, lex, k=3, workers=3)
    assert format_per_query_csv(parallel) == format_per_query_csv(sequential)
