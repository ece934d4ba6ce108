import os

import numpy as np

from wav2word.wav_to_word.errors import FeatureFormatError

FEAT_MAGIC = "FEAT"
FEAT_VERSION = 1


class FeatureMatrix:
    """
    A frames x coefficients matrix of one recording (or of an average of recordings).

    Column 0 holds the log energy of each frame, columns 1..k-1 the cepstral coefficients.

    :param self.values: float64 array of shape (T, k), T >= 1 and k >= 1, all values finite.
    :param self.provenance: where the matrix came from: a word, a speaker, or "average".
    :param self.metadata: extra key/value strings kept in the FEATv1 comment header (sources, seed, ...).
    """

    __slots__ = 'values', 'provenance', 'metadata'

    def __init__(self, values, provenance: str = "", metadata: dict[str, str] = None):
        values = np.array(values, dtype=np.float64)
        if values.ndim == 1:
            # a 1-D series is a sequence of one-coefficient frames
            values = values[:, np.newaxis]
        if values.ndim != 2 or values.shape[0] < 1 or values.shape[1] < 1:
            raise ValueError(f"feature matrix must be T x k with T >= 1 and k >= 1, got shape {values.shape}")
        if not np.all(np.isfinite(values)):
            raise ValueError("feature matrix holds non-finite values")

        self.values = values
        self.provenance = provenance
        self.metadata = dict(metadata) if metadata else {}

    def __repr__(self):
        return f"FeatureMatrix(frames:{self.frames}, coeffs:{self.coeffs}, provenance:{self.provenance})"

    def __eq__(self, other):
        return isinstance(other, FeatureMatrix) and np.array_equal(self.values, other.values)

    @property
    def frames(self) -> int:
        return self.values.shape[0]

    @property
    def coeffs(self) -> int:
        return self.values.shape[1]


def format_feat(features: FeatureMatrix) -> str:
    """
    Render a FeatureMatrix as FEATv1 text.

    Layout (every line ends with '\\n'):
        # provenance: <label>          (only when provenance is set)
        # <key>: <value>               (one per metadata entry, in insertion order)
        FEAT 1 <T> <k>
        <T lines of k floats separated by one space>

    Floats are written with Python's shortest round-trip repr, so read_feat gives back the exact values.
    """
    lines = []
    if features.provenance:
        lines.append(f"# provenance: {features.provenance}")
    for key, value in features.metadata.items():
        lines.append(f"# {key}: {value}")
    lines.append(f"{FEAT_MAGIC} {FEAT_VERSION} {features.frames} {features.coeffs}")
    lines.extend(" ".join(repr(float(v)) for v in row) for row in features.values)

    return "\n".join(lines) + "\n"


def parse_feat(text: str, name: str = "<string>") -> FeatureMatrix:
    """Parse FEATv1 text, see format_feat"""
    provenance = ""
    metadata = {}
    header = None
    rows = []

    for number, line in enumerate(text.splitlines(), start=1):
        if header is None:
            if line.startswith("#"):
                key, _, value = line[1:].partition(":")
                if key.strip() == "provenance":
                    provenance = value.strip()
                elif key.strip():
                    metadata[key.strip()] = value.strip()
                continue
            if not line.strip():
                continue
            fields = line.split()
            if len(fields) != 4 or fields[0] != FEAT_MAGIC:
                raise FeatureFormatError(f"{name}:{number}: expected header 'FEAT 1 <T> <k>', got '{line}'")
            try:
                version, frames, coeffs = (int(field) for field in fields[1:])
            except ValueError:
                raise FeatureFormatError(f"{name}:{number}: malformed header '{line}'") from None
            if version != FEAT_VERSION:
                raise FeatureFormatError(f"{name}:{number}: unsupported FEAT version {version}")
            if frames < 1 or coeffs < 1:
                raise FeatureFormatError(f"{name}:{number}: header declares an empty matrix ({frames} x {coeffs})")
            header = (frames, coeffs)
            continue

        if not line.strip():
            continue
        try:
            row = [float(field) for field in line.split()]
        except ValueError:
            raise FeatureFormatError(f"{name}:{number}: non numeric value in '{line}'") from None
        if len(row) != header[1]:
            raise FeatureFormatError(f"{name}:{number}: expected {header[1]} values, got {len(row)}")
        rows.append(row)

    if header is None:
        raise FeatureFormatError(f"{name}: missing 'FEAT 1 <T> <k>' header")
    if len(rows) != header[0]:
        raise FeatureFormatError(f"{name}: header declares {header[0]} frames, found {len(rows)}")

    values = np.array(rows, dtype=np.float64)
    if not np.all(np.isfinite(values)):
        raise FeatureFormatError(f"{name}: non-finite values")

    return FeatureMatrix(values, provenance, metadata)


def read_feat(path) -> FeatureMatrix:
    """Read a FEATv1 file"""
    path = os.fspath(path)
    if not os.path.isfile(path):
        raise FileNotFoundError(f"No such feature file: '{path}'")

    with open(path, 'r', encoding="utf-8") as file:
        return parse_feat(file.read(), name=path)


def write_feat(path, features: FeatureMatrix):
    """Write a FEATv1 file (plain, not atomic; see the pipeline for atomic output)"""
    with open(os.fspath(path), 'w', encoding="utf-8", newline="\n") as file:
        file.write(format_feat(features))
