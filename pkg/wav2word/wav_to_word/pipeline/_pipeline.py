import os
import copy
import logging
import tempfile
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Callable

import numpy as np

from wav2word.wav_to_word import DEFAULT_SETTING, check_setting
from wav2word.wav_to_word.errors import InputError, LexiconError, ManifestError, ProcessingError
from wav2word.wav_to_word.frontend import FeatureMatrix, FrontendConfig, load_wav, mfcc
from wav2word.wav_to_word.frontend import read_feat, write_feat, write_wav
from wav2word.wav_to_word.absement import DistanceProfile, distance_profile, local_distances
from wav2word.wav_to_word.absement import format_grid_csv, format_path_csv, format_profile_csv
from wav2word.wav_to_word.dba import DbaConfig, dba_average
from wav2word.wav_to_word.recognizer import EvalReport, Lexicon, build_lexicon, evaluate
from wav2word.wav_to_word.recognizer import format_per_query_csv, format_summary_csv
from wav2word.wav_to_word.corpus import Manifest, ManifestRow, format_manifest, generate_corpus

from wav2word import __version__

logging.basicConfig(format="[%(levelname)s] %(message)s")
logger = logging.getLogger(__name__)
logging.getLogger("wav2word").setLevel(logging.INFO)

FEATURE_SUFFIX = ".feat"
AVERAGE_SUFFIX = "__avg.feat"
PER_QUERY_FILE = "per_query.csv"
SUMMARY_FILE = "summary.csv"
MANIFEST_FILE = "manifest.tsv"
WAV_DIR = "wav"


def write_atomic(path: str, write: Callable[[str], None]):
    """
    Let 'write' fill a temporary file next to 'path', then move it into place.
    Concurrent runs never see partially written output.
    """
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    handle, temporary = tempfile.mkstemp(dir=directory, prefix="." + os.path.basename(path) + ".", suffix=".tmp")
    os.close(handle)
    try:
        write(temporary)
        os.replace(temporary, path)
    except BaseException:
        if os.path.exists(temporary):
            os.remove(temporary)
        raise


def write_text_atomic(path: str, text: str):
    def write(temporary):
        with open(temporary, 'w', encoding="utf-8", newline="\n") as file:
            file.write(text)

    write_atomic(path, write)


class Pipeline:
    """
    The Pipeline class runs the batch steps of an experiment (featurize, average, evaluate, profile, synth) and
    writes their output files. All randomness of a step comes from one generator seeded with the 'seed' setting.
    """

    def __init__(self, params: dict[str, Any] = None):
        """
        :param params: settings overriding DEFAULT_SETTING, see wav_to_word.SETTING for the keys.
        """
        params = {} if params is None else params
        check_setting(params)

        # save params
        self.params = params
        # get default settings and update
        self.settings = copy.deepcopy(DEFAULT_SETTING)
        self.settings.update(params)

        self.frontend = FrontendConfig.from_settings(self.settings)
        self.workers = self.settings["workers"]

    def __repr__(self):
        return f"Pipeline(settings:{self.settings})"

    def _map(self, function, items) -> list:
        """Apply function to all items, in a thread pool when 'workers' > 1; results keep the item order"""
        if self.workers > 1 and len(items) > 1:
            with ThreadPoolExecutor(max_workers=self.workers) as executor:
                return list(executor.map(function, items))
        return [function(item) for item in items]

    def _for_rows(self, manifest: Manifest, function) -> list:
        """
        Apply function to every manifest row. Input problems are collected and reported together naming their
        rows; anything else aborts with a ProcessingError naming the row.
        """
        def guarded(row: ManifestRow):
            try:
                return function(row), None
            except (InputError, FileNotFoundError) as error:
                logger.error(f"manifest row {row.number} ({row.name()}): {error}")
                return None, (row, error)
            except Exception as error:
                raise ProcessingError(f"manifest row {row.number} ({row.name()}): {error}") from error

        outcomes = self._map(guarded, manifest.rows)
        failures = [failure for _, failure in outcomes if failure is not None]
        if failures:
            row, error = failures[0]
            raise ManifestError(f"{len(failures)} of {len(outcomes)} recordings failed, first: {row.name()}: {error}",
                                row.number)

        return [result for result, _ in outcomes]

    def matches_frontend(self, features: FeatureMatrix) -> bool:
        """False when a feature file records frontend settings other than the current ones"""
        return features.metadata.get("frontend", self.frontend.signature()) == self.frontend.signature()

    def features(self, manifest: Manifest, row: ManifestRow, features_dir: str = None) -> FeatureMatrix:
        """
        Features of a manifest row: '<features_dir>/<word>__<speaker>.feat' when it exists, the row's file itself
        when it is a .feat file, else the MFCCs of the row's WAV file.
        """
        if features_dir is not None:
            cached = os.path.join(features_dir, row.name() + FEATURE_SUFFIX)
            if os.path.isfile(cached):
                features = read_feat(cached)
                if self.matches_frontend(features):
                    return features
                logger.warning(f"{cached} was computed with other frontend settings, recomputing")

        path = manifest.resolve(row)
        if path.endswith(FEATURE_SUFFIX):
            features = read_feat(path)
            if not self.matches_frontend(features):
                logger.warning(f"{path} was computed with other frontend settings ({features.metadata['frontend']})")
            return features

        features = mfcc(load_wav(path), self.frontend, row.name())
        features.metadata.update({"word": row.word, "speaker": row.speaker, "source": os.path.basename(row.path)})
        return features

    def featurize(self, manifest: Manifest, out_dir: str) -> list[str]:
        """Write '<word>__<speaker>.feat' for every manifest row, overwriting earlier output"""
        def featurize_row(row: ManifestRow) -> str:
            file_name = os.path.join(out_dir, row.name() + FEATURE_SUFFIX)
            features = self.features(manifest, row)
            write_atomic(file_name, lambda temporary: write_feat(temporary, features))
            logger.info(f"Generated {file_name}")
            return file_name

        return self._for_rows(manifest, featurize_row)

    def average(self, manifest: Manifest, out_dir: str, features_dir: str = None) -> list[str]:
        """
        Write '<word>__avg.feat' per word: the DTW barycenter of all recordings of the word in the manifest. The
        initial average is picked at random, words in lexicographic order, from one generator seeded by 'seed'.
        """
        groups = manifest.by_word()
        if not groups:
            raise ManifestError("the manifest selects no recordings to average")
        for word, rows in groups.items():
            if len(rows) < 2:
                raise ManifestError(f"word '{word}' has {len(rows)} template recording(s), at least 2 are needed",
                                    rows[0].number)

        features = dict(zip(((row.word, row.speaker) for row in manifest.rows),
                            self._for_rows(manifest, lambda row: self.features(manifest, row, features_dir))))

        seed = self.settings["seed"]
        rng = np.random.default_rng(seed)
        logger.info(f"Averaging {len(groups)} words, seed {seed}")

        file_names = []
        for word, rows in groups.items():
            init_index = int(rng.integers(len(rows)))
            outcome = dba_average([features[(row.word, row.speaker)] for row in rows],
                                  DbaConfig.from_settings(self.settings, init_index=init_index), self.workers)
            logger.debug(f"{word}: init {rows[init_index].name()}, objective trace {outcome.objective_trace}")

            outcome.average.metadata = {
                "word": word,
                "sources": ",".join(os.path.basename(row.path) for row in rows),
                "init": os.path.basename(rows[init_index].path),
                "seed": str(seed),
                "iterations": str(outcome.iterations_run),
                "objective": repr(outcome.objective_trace[-1]),
                "frontend": self.frontend.signature(),
            }
            file_name = os.path.join(out_dir, word + AVERAGE_SUFFIX)
            write_atomic(file_name, lambda temporary: write_feat(temporary, outcome.average))
            logger.info(f"Generated {file_name} (init {rows[init_index].name()})")
            file_names.append(file_name)

        return file_names

    @staticmethod
    def load_lexicon(template_dir: str) -> Lexicon:
        """Lexicon of all '<word>__avg.feat' files in a directory"""
        if not os.path.isdir(template_dir):
            raise FileNotFoundError(f"No such template directory: '{template_dir}'")

        names = sorted(name for name in os.listdir(template_dir) if name.endswith(AVERAGE_SUFFIX))
        if not names:
            raise LexiconError(f"no '*{AVERAGE_SUFFIX}' templates in '{template_dir}'")

        return build_lexicon((name[:-len(AVERAGE_SUFFIX)], read_feat(os.path.join(template_dir, name)))
                             for name in names)

    def evaluate(self, manifest: Manifest, template_dir: str, out_dir: str, features_dir: str = None) -> EvalReport:
        """Recognize every manifest row against the templates, write per_query.csv and summary.csv"""
        lex = self.load_lexicon(template_dir)

        missing = sorted({row.word for row in manifest.rows} - set(lex.labels()))
        if missing:
            raise LexiconError(f"no template for query word(s): {', '.join(missing)}")
        stale = [label for label in lex.labels() if not self.matches_frontend(lex.get(label))]
        if stale:
            logger.warning(f"{len(stale)} template(s) were computed with other frontend settings, first: {stale[0]}")

        queries = self._for_rows(manifest, lambda row: (row.word, self.features(manifest, row, features_dir)))
        report = evaluate(queries, lex, self.settings["k"], self.settings["scaling"], self.workers)

        write_text_atomic(os.path.join(out_dir, PER_QUERY_FILE), format_per_query_csv(report))
        write_text_atomic(os.path.join(out_dir, SUMMARY_FILE), format_summary_csv(report))
        logger.info(f"Generated {os.path.join(out_dir, PER_QUERY_FILE)} and {os.path.join(out_dir, SUMMARY_FILE)}")
        logger.info(f"{report.n_queries} queries, {lex.size} words: top-1 {report.top1_accuracy:.4f}, "
                    f"top-{report.k} {report.topk_accuracy:.4f}")
        logger.info(f"mean template length: recognized {report.mean_recognized_length():.1f} frames, "
                    f"true {report.mean_true_length():.1f} frames")

        return report

    def profile(self, query_file: str, template_file: str, reference: str, out_file: str, path_file: str = None,
                grid_file: str = None) -> DistanceProfile:
        """Write the distance profile (and optionally the warp path and the local distance grid) of two feature files"""
        query, template = read_feat(query_file), read_feat(template_file)
        profile = distance_profile(query, template, reference)

        write_text_atomic(out_file, format_profile_csv(profile))
        logger.info(f"Generated {out_file}")
        if path_file is not None:
            write_text_atomic(path_file, format_path_csv(profile.result))
            logger.info(f"Generated {path_file}")
        if grid_file is not None:
            write_text_atomic(grid_file, format_grid_csv(local_distances(query, template)))
            logger.info(f"Generated {grid_file}")

        return profile

    def synth(self, n_words: int, n_speakers: int, out_dir: str, sample_rate: int = 16000,
              noise_level: float = 0.0) -> str:
        """Write a synthetic corpus ('wav/<word>__<speaker>.wav') and its manifest; return the manifest path"""
        corpus = generate_corpus(n_words, n_speakers, self.settings["seed"], sample_rate, noise_level)

        rows = []
        for word, speaker, waveform in corpus:
            row = ManifestRow(word, speaker, f"{WAV_DIR}/{word}__{speaker}.wav")
            write_atomic(os.path.join(out_dir, WAV_DIR, row.name() + ".wav"),
                         lambda temporary, waveform=waveform: write_wav(temporary, waveform))
            rows.append(row)

        manifest_file = os.path.join(out_dir, MANIFEST_FILE)
        write_text_atomic(manifest_file, format_manifest(Manifest(rows, out_dir)))
        logger.info(f"Generated {len(rows)} recordings and {manifest_file} (seed {self.settings['seed']}, "
                    f"wav2word {__version__})")

        return manifest_file
