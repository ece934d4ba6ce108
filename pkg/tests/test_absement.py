import itertools
from functools import lru_cache

import numpy as np
import pytest

from wav2word.wav_to_word.errors import ShapeMismatchError
from wav2word.wav_to_word.frontend import FeatureMatrix
from wav2word.wav_to_word.absement import WarpPath, distance_profile, dtw_absement, euclidean_distance
from wav2word.wav_to_word.absement import format_grid_csv, format_path_csv, format_profile_csv, local_distances

from conftest import random_features


@lru_cache(maxsize=None)
def monotone_paths(n: int, m: int) -> np.ndarray:
    """Incidence matrix (paths x n*m) of every monotone, continuous path from (0,0) to (n-1,m-1)"""
    paths = []

    def extend(path):
        i, j = path[-1]
        if (i, j) == (n - 1, m - 1):
            paths.append(path)
            return
        for di, dj in ((1, 0), (0, 1), (1, 1)):
            if i + di < n and j + dj < m:
                extend(path + [(i + di, j + dj)])

    extend([(0, 0)])
    incidence = np.zeros((len(paths), n * m))
    for row, path in enumerate(paths):
        for i, j in path:
            incidence[row, i * m + j] = 1.0
    return incidence


def brute_force_cost(x: np.ndarray, y: np.ndarray) -> float:
    local = np.sqrt(((x[:, np.newaxis, :] - y[np.newaxis, :, :]) ** 2).sum(axis=2))
    return float(np.min(monotone_paths(x.shape[0], y.shape[0]) @ local.ravel()))


def series(*values) -> FeatureMatrix:
    return FeatureMatrix(np.array(values, dtype=np.float64))


# small hand-checked cases

def test_identity(rng):
    x = random_features(rng, 12, 13)
    result = dtw_absement(x, x)
    assert result.cost == 0.0
    assert list(result.path) == [(i, i) for i in range(1, 13)]


def test_exact_stretch():
    assert dtw_absement(series(1, 2, 3), series(1, 2, 2, 3)).cost == 0.0


def test_one_frame_template():
    result = dtw_absement(series(0, 0), series(3))
    assert result.cost == 6.0
    assert list(result.path) == [(1, 1), (2, 1)]
    np.testing.assert_array_equal(result.step_distances, [3.0, 3.0])
    assert result.scaled_cost == 6.0


def test_backtrack_prefers_diagonal():
    # every path has cost 0; walking back from the end the diagonal step wins
    result = dtw_absement(series(0, 0, 0), series(0, 0))
    assert list(result.path) == [(1, 1), (2, 1), (3, 2)]


def test_cost_without_path_is_identical(rng):
    for _ in range(50):
        x = random_features(rng, int(rng.integers(1, 30)))
        y = random_features(rng, int(rng.integers(1, 30)))
        with_path, without = dtw_absement(x, y), dtw_absement(x, y, with_path=False)
        assert without.cost == with_path.cost
        assert without.path is None and without.step_distances is None


def test_coefficient_mismatch(rng):
    with pytest.raises(ShapeMismatchError):
        dtw_absement(random_features(rng, 4, 13), random_features(rng, 4, 12))


# oracle equivalence

def all_series(length: int) -> np.ndarray:
    """Every 1-D series of the given length over the values 0, 1, 2, shape (3**length, length)"""
    return np.array(list(itertools.product((0.0, 1.0, 2.0), repeat=length)))


def test_exhaustive_integer_series_up_to_six():
    # local distances are 0, 1 or 2 and a path has at most 11 steps: path sums are exact in float32
    series_by_length = {n: all_series(n) for n in range(1, 7)}
    features_by_length = {n: [FeatureMatrix(x[:, np.newaxis]) for x in xs] for n, xs in series_by_length.items()}

    for n, xs in series_by_length.items():
        for m, ys in series_by_length.items():
            paths = monotone_paths(n, m).T.astype(np.float32)
            for x, fx in zip(xs, features_by_length[n]):
                # local[b, i * m + j] = |x_i - y_bj|, the layout of monotone_paths
                local = np.abs(x[np.newaxis, :, np.newaxis] - ys[:, np.newaxis, :]).reshape(len(ys), n * m)
                expected = (local.astype(np.float32) @ paths).min(axis=1).astype(np.float64)
                actual = [dtw_absement(fx, fy, with_path=False).cost for fy in features_by_length[m]]
                np.testing.assert_array_equal(actual, expected)


def test_small_integer_series_with_path():
    sequences = [np.array(values, dtype=np.float64)[:, np.newaxis]
                 for length in range(1, 5) for values in itertools.product((0, 1, 2), repeat=length)]
    for x in sequences[::3]:
        for y in sequences:
            result = dtw_absement(FeatureMatrix(x), FeatureMatrix(y))
            assert result.cost == brute_force_cost(x, y)
            assert result.path.is_valid(x.shape[0], y.shape[0])


def test_random_real_series(rng):
    for _ in range(200):
        x = rng.standard_normal((int(rng.integers(1, 9)), 3))
        y = rng.standard_normal((int(rng.integers(1, 9)), 3))
        assert dtw_absement(FeatureMatrix(x), FeatureMatrix(y)).cost == pytest.approx(brute_force_cost(x, y), rel=1e-9)


# properties

def test_paths_are_valid(rng):
    for _ in range(1000):
        x = random_features(rng, int(rng.integers(1, 25)))
        y = random_features(rng, int(rng.integers(1, 25)))
        result = dtw_absement(x, y)
        assert result.path.is_valid(x.frames, y.frames)
        assert np.sum(result.step_distances) == pytest.approx(result.cost, rel=1e-9)


def test_symmetry(rng):
    for _ in range(200):
        x = random_features(rng, int(rng.integers(1, 40)))
        y = random_features(rng, int(rng.integers(1, 40)))
        assert dtw_absement(x, y).cost == pytest.approx(dtw_absement(y, x).cost, rel=1e-9)
        assert dtw_absement(x, y, with_path=False).cost == dtw_absement(y, x, with_path=False).cost


def test_lower_bounds(rng):
    for _ in range(200):
        x = random_features(rng, int(rng.integers(2, 20)))
        y = random_features(rng, int(rng.integers(2, 20)))
        first = euclidean_distance(x.values[0], y.values[0])
        last = euclidean_distance(x.values[-1], y.values[-1])
        assert dtw_absement(x, y).cost >= first + last - 1e-12


def test_scaled_cost(rng):
    x, y = random_features(rng, 10), random_features(rng, 16)
    result = dtw_absement(x, y)
    assert result.scaled_cost == pytest.approx(result.cost / 4.0)


def test_warp_path():
    path = WarpPath([(1, 1), (2, 1), (3, 2)])
    assert path.step_count() == 3
    assert path.get(-1) == (3, 2)
    rows, columns = path.indices()
    assert rows.tolist() == [0, 1, 2] and columns.tolist() == [0, 0, 1]
    assert path.is_valid(3, 2)
    assert not path.is_valid(3, 3)
    assert not WarpPath([(1, 1), (3, 2)]).is_valid(3, 2)
    assert not WarpPath([(1, 1), (2, 2), (2, 1), (3, 2)]).is_valid(3, 2)
    with pytest.raises(ValueError):
        WarpPath([])


def test_local_distances(rng):
    x, y = random_features(rng, 5), random_features(rng, 7)
    grid = local_distances(x, y)
    assert grid.shape == (5, 7)
    assert grid[3, 6] == pytest.approx(euclidean_distance(x.values[3], y.values[6]), rel=1e-12)


# distance profile

def test_profile_identity(rng):
    x = random_features(rng, 9)
    profile = distance_profile(x, x, "query")
    np.testing.assert_array_equal(profile.per_frame, np.zeros(9))


def test_profile_stretched_frame():
    np.testing.assert_array_equal(distance_profile(series(0, 0), series(3), "template").per_frame, [6.0])
    np.testing.assert_array_equal(distance_profile(series(0, 0), series(3), "query").per_frame, [3.0, 3.0])


def test_profile_sums_to_cost(rng):
    for _ in range(100):
        x = random_features(rng, int(rng.integers(1, 30)), 13)
        y = random_features(rng, int(rng.integers(1, 30)), 13)
        for reference, length in (("query", x.frames), ("template", y.frames)):
            profile = distance_profile(x, y, reference)
            assert profile.per_frame.shape == (length,)
            assert profile.total() == pytest.approx(dtw_absement(x, y).cost, rel=1e-9)


def test_profile_reference_checked(rng):
    x = random_features(rng, 3)
    with pytest.raises(ValueError):
        distance_profile(x, x, "both")


def test_csv_output():
    profile = distance_profile(series(0, 0), series(3), "query")
    assert format_profile_csv(profile) == "frame_index,distance_sum\n1,3.0\n2,3.0\n"
    assert format_path_csv(profile.result) == "i,j,step_distance\n1,1,3.0\n2,1,3.0\n"
    assert format_grid_csv(np.array([[0.5, 1.0]])) == "i,j,distance\n1,1,0.5\n1,2,1.0\n"

    with pytest.raises(ValueError):
        format_path_csv(dtw_absement(series(0), series(1), with_path=False))
