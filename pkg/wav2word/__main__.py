"""
wav2word: recognize isolated words by their acoustic absement to averaged templates.
"""

import os
import sys
import logging
try:
    import tomllib
except ImportError:
    print("Import error: cannot import 'tomllib', python version must be 3.11 or higher!")
    sys.exit(1)

import argparse

from wav2word.wav_to_word import SETTING, SCALING
from wav2word.wav_to_word.corpus import read_manifest
from wav2word.wav_to_word.pipeline import Pipeline, PER_QUERY_FILE, SUMMARY_FILE

from wav2word import __version__

config_file = os.path.expanduser('~/.config/wav2word.toml')

# exit codes
EXIT_OK = 0
EXIT_INPUT = 1
EXIT_PROCESSING = 2

# Notes:
# - a typical experiment: synth (or a real corpus manifest) -> featurize -> average (template speakers) -> evaluate (query speakers)
# - 'average' and 'evaluate' take MFCCs from --features when they are there, and compute them from the WAV files otherwise


def init_pipeline(args) -> Pipeline:
    # every argument named after a setting is passed on
    return Pipeline(params={key: getattr(args, key) for key in SETTING if getattr(args, key, None) is not None})


def load_manifest(args):
    manifest = read_manifest(args.manifest)
    if getattr(args, "speakers", None):
        manifest = manifest.select(speakers=[speaker.strip() for speaker in args.speakers.split(",") if speaker.strip()])
    return manifest


def cmd_featurize(args) -> int:
    """
    featurize: one '<word>__<speaker>.feat' file per manifest row
    """
    manifest = load_manifest(args)
    file_names = init_pipeline(args).featurize(manifest, args.out)
    print(f"featurized {len(file_names)} recordings into '{args.out}'")
    return EXIT_OK


def cmd_average(args) -> int:
    """
    average: one '<word>__avg.feat' template per word
    """
    manifest = load_manifest(args)
    file_names = init_pipeline(args).average(manifest, args.out, args.features)
    print(f"averaged {len(file_names)} words into '{args.out}' (seed {args.seed})")
    return EXIT_OK


def cmd_evaluate(args) -> int:
    """
    evaluate: recognize every manifest row against the templates, report top-1 and top-k accuracy
    """
    manifest = load_manifest(args)
    report = init_pipeline(args).evaluate(manifest, args.templates, args.out, args.features)
    print(f"queries: {report.n_queries}")
    print(f"top-1 accuracy: {report.top1_accuracy}")
    print(f"top-{report.k} accuracy: {report.topk_accuracy}")
    print(f"written: {os.path.join(args.out, PER_QUERY_FILE)}, {os.path.join(args.out, SUMMARY_FILE)}")
    return EXIT_OK


def cmd_profile(args) -> int:
    """
    profile: distance over time between a query and a template feature file
    """
    profile = init_pipeline(args).profile(args.query, args.template, args.reference, args.out, args.path, args.grid)
    print(f"cost: {profile.result.cost!r}")
    print(f"scaled cost: {profile.result.scaled_cost!r}")
    return EXIT_OK


def cmd_synth(args) -> int:
    """
    synth: seeded synthetic corpus of WAV files plus its manifest
    """
    manifest_file = init_pipeline(args).synth(args.n_words, args.n_speakers, args.out, args.sample_rate, args.noise)
    print(f"synthesized {args.n_words} words x {args.n_speakers} speakers, manifest '{manifest_file}'")
    return EXIT_OK


def default_metavar(cfg, key) -> str:
    return "<default:" + str(cfg[key + "_default"]) + ">"


def main(argv: list[str] = None) -> int:
    """
    main
    """
    # defaults
    cfg = {
        "window_ms_default": 25.0,
        "hop_ms_default": 10.0,
        "n_coeffs_default": 13,
        "n_mel_filters_default": 26,
        "pre_emphasis_default": 0.97,
        "max_iterations_default": 10,
        "k_default": 10,
        "scaling_default": "sqrt",
        "seed_default": 0,
        "workers_default": 1,
        "sample_rate_default": 16000,
        "noise_default": 0.0,
    }

    if os.path.exists(config_file):
        with open(config_file, 'rb') as f:
            cfg.update({k + '_default': v for k,v in tomllib.load(f).items()})

    # options shared by the subcommands
    frontend = argparse.ArgumentParser(add_help=False)
    frontend.add_argument('--window-ms', dest='window_ms', default=cfg["window_ms_default"], metavar=default_metavar(cfg, "window_ms"),
        type=float, help='analysis window length in milliseconds')
    frontend.add_argument('--hop-ms', dest='hop_ms', default=cfg["hop_ms_default"], metavar=default_metavar(cfg, "hop_ms"),
        type=float, help='frame advance in milliseconds')
    frontend.add_argument('--n-coeffs', dest='n_coeffs', default=cfg["n_coeffs_default"], metavar=default_metavar(cfg, "n_coeffs"),
        type=int, help='number of cepstral coefficients (the first one is replaced by log energy)')
    frontend.add_argument('--n-mel-filters', dest='n_mel_filters', default=cfg["n_mel_filters_default"], metavar=default_metavar(cfg, "n_mel_filters"),
        type=int, help='number of triangular mel filters')
    frontend.add_argument('--pre-emphasis', dest='pre_emphasis', default=cfg["pre_emphasis_default"], metavar=default_metavar(cfg, "pre_emphasis"),
        type=float, help='pre-emphasis coefficient, 0 disables it')

    run = argparse.ArgumentParser(add_help=False)
    run.add_argument('--workers', default=cfg["workers_default"], metavar=default_metavar(cfg, "workers"),
        type=int, help='number of threads for DTW scans and file processing')
    run.add_argument('--verbose', action='store_true', default=False, help='log debug information')

    corpus = argparse.ArgumentParser(add_help=False)
    corpus.add_argument('--manifest', required=True, type=str, help="manifest file (TSV with header 'word<TAB>speaker<TAB>path')")
    corpus.add_argument('--speakers', default=None, type=str, help='comma separated speakers to select from the manifest (default all)')

    # Define command line argument interface
    parser = argparse.ArgumentParser(prog='wav2word', description='Isolated word recognition by acoustic absement (DTW cost) to averaged templates.')
    parser.add_argument('-V', '--version', action='version', version='%(prog)s ' + __version__, help="show version number and exit")
    commands = parser.add_subparsers(dest='command', required=True, metavar='command')

    featurize = commands.add_parser('featurize', parents=[corpus, frontend, run], help='convert manifest recordings to MFCC feature files')
    featurize.add_argument('--out', required=True, type=str, help='output directory of the .feat files')
    featurize.set_defaults(function=cmd_featurize)

    average = commands.add_parser('average', parents=[corpus, frontend, run], help='average the recordings of every word into a template')
    average.add_argument('--out', required=True, type=str, help='output directory of the <word>__avg.feat templates')
    average.add_argument('--features', default=None, type=str, help='directory of featurized recordings (default: compute from the WAV files)')
    average.add_argument('--seed', default=cfg["seed_default"], metavar=default_metavar(cfg, "seed"),
        type=int, help='seed of the random choice of initial averages')
    average.add_argument('--max-iterations', dest='max_iterations', default=cfg["max_iterations_default"], metavar=default_metavar(cfg, "max_iterations"),
        type=int, help='maximum number of averaging passes per word')
    average.set_defaults(function=cmd_average)

    evaluate = commands.add_parser('evaluate', parents=[corpus, frontend, run], help='recognize manifest recordings and report top-1/top-k accuracy')
    evaluate.add_argument('--templates', required=True, type=str, help='directory of <word>__avg.feat templates')
    evaluate.add_argument('--out', required=True, type=str, help='output directory of per_query.csv and summary.csv')
    evaluate.add_argument('--features', default=None, type=str, help='directory of featurized recordings (default: compute from the WAV files)')
    evaluate.add_argument('--k', default=cfg["k_default"], metavar=default_metavar(cfg, "k"),
        type=int, help='size of the top-k list')
    evaluate.add_argument('--scaling', default=cfg["scaling_default"], choices=sorted(SCALING),
        help="'sqrt' divides absement by the square root of the template length, 'none' ranks raw absement")
    evaluate.set_defaults(function=cmd_evaluate)

    profile = commands.add_parser('profile', parents=[run], help='export the distance profile of a query and a template')
    profile.add_argument('--query', required=True, type=str, help='query feature file')
    profile.add_argument('--template', required=True, type=str, help='template feature file')
    profile.add_argument('--reference', required=True, choices=['query', 'template'], help='sequence whose frames index the profile')
    profile.add_argument('--out', required=True, type=str, help="profile CSV file ('frame_index,distance_sum')")
    profile.add_argument('--path', default=None, type=str, help="also write the warp path CSV ('i,j,step_distance')")
    profile.add_argument('--grid', default=None, type=str, help="also write the local distance grid CSV ('i,j,distance')")
    profile.set_defaults(function=cmd_profile)

    synth = commands.add_parser('synth', parents=[run], help='generate a seeded synthetic corpus and its manifest')
    synth.add_argument('--n-words', dest='n_words', required=True, type=int, help='number of words')
    synth.add_argument('--n-speakers', dest='n_speakers', default=3, type=int, help='number of speakers (>= 3)')
    synth.add_argument('--seed', default=cfg["seed_default"], metavar=default_metavar(cfg, "seed"), type=int, help='corpus seed')
    synth.add_argument('--out', required=True, type=str, help='output directory (WAV files go to <out>/wav)')
    synth.add_argument('--sample-rate', dest='sample_rate', default=cfg["sample_rate_default"], metavar=default_metavar(cfg, "sample_rate"),
        type=int, help='sample rate in Hz')
    synth.add_argument('--noise', default=cfg["noise_default"], metavar=default_metavar(cfg, "noise"),
        type=float, help='standard deviation of additive white noise')
    synth.set_defaults(function=cmd_synth)

    args = parser.parse_args(argv)

    if args.verbose:
        logging.getLogger("wav2word").setLevel(logging.DEBUG)

    try:
        return args.function(args)
    except KeyboardInterrupt:
        print("wav2word aborted!")
    except (ValueError, TypeError, FileNotFoundError) as error:
        # InputError derives from ValueError
        print(f"error: {error}")
        return EXIT_INPUT
    except Exception as error:
        print(f"processing error: {error}")

    return EXIT_PROCESSING


if __name__ == '__main__':
    sys.exit(main())
