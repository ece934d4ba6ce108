import io
import os
import csv
from collections import defaultdict
from typing import Iterable

from wav2word.wav_to_word.errors import ManifestError

MANIFEST_HEADER = ("word", "speaker", "path")


class ManifestRow:
    """One recording: word label, speaker label and audio (or feature) file path"""

    __slots__ = 'word', 'speaker', 'path', 'number'

    def __init__(self, word: str, speaker: str, path: str, number: int = None):
        self.word = word
        self.speaker = speaker
        self.path = path
        # 1-based data row in the manifest file, None for rows built in memory
        self.number = number

    def __repr__(self):
        return f"ManifestRow(word:{self.word}, speaker:{self.speaker}, path:{self.path})"

    def name(self) -> str:
        """'<word>__<speaker>', the stem of every file derived from this recording"""
        return f"{self.word}__{self.speaker}"


class Manifest:
    """
    The Manifest class lists the recordings of a corpus.
    (word, speaker) pairs are unique; relative paths are relative to base_dir.
    """

    __slots__ = 'rows', 'base_dir'

    def __init__(self, rows: Iterable[ManifestRow], base_dir: str = "."):
        self.rows = list(rows)
        self.base_dir = os.fspath(base_dir)

        seen = set()
        for index, row in enumerate(self.rows, start=1):
            number = row.number if row.number is not None else index
            for field, value in zip(MANIFEST_HEADER, (row.word, row.speaker, row.path)):
                if not value:
                    raise ManifestError(f"empty {field}", number)
            for field, value in (("word", row.word), ("speaker", row.speaker)):
                if "/" in value or "\\" in value or "__" in value:
                    raise ManifestError(f"{field} '{value}' may not contain path separators or '__'", number)
            if (row.word, row.speaker) in seen:
                raise ManifestError(f"duplicate (word, speaker) pair ({row.word}, {row.speaker})", number)
            seen.add((row.word, row.speaker))

    def __repr__(self):
        return f"Manifest(rows:{len(self.rows)}, base_dir:{self.base_dir})"

    def __iter__(self):
        yield from self.rows

    def resolve(self, row: ManifestRow) -> str:
        """Path of a row's file, relative paths taken from base_dir"""
        return row.path if os.path.isabs(row.path) else os.path.join(self.base_dir, row.path)

    def select(self, speakers: Iterable[str] = None, words: Iterable[str] = None) -> "Manifest":
        """Rows of the given speakers and/or words"""
        speakers = None if speakers is None else set(speakers)
        words = None if words is None else set(words)
        return Manifest([row for row in self.rows
                         if (speakers is None or row.speaker in speakers) and (words is None or row.word in words)],
                        self.base_dir)

    def speakers(self) -> list[str]:
        return sorted({row.speaker for row in self.rows})

    def by_word(self) -> dict[str, list[ManifestRow]]:
        """Rows grouped by word, words and speakers in lexicographic order"""
        groups = defaultdict(list)
        for row in self.rows:
            groups[row.word].append(row)
        return {word: sorted(groups[word], key=lambda row: row.speaker) for word in sorted(groups)}


def parse_manifest(text: str, base_dir: str = ".") -> Manifest:
    """Parse tab separated manifest text with header 'word<TAB>speaker<TAB>path'"""
    reader = csv.reader(io.StringIO(text), delimiter="\t")
    header = next(reader, None)
    if header is None or tuple(field.strip() for field in header) != MANIFEST_HEADER:
        raise ManifestError(f"expected header {'<TAB>'.join(MANIFEST_HEADER)}, got {header}")

    rows = []
    for number, fields in enumerate(reader, start=1):
        if not fields or all(not field.strip() for field in fields):
            continue
        if len(fields) != 3:
            raise ManifestError(f"expected 3 tab separated fields, got {len(fields)}", number)
        rows.append(ManifestRow(*(field.strip() for field in fields), number=number))

    return Manifest(rows, base_dir)


def read_manifest(path) -> Manifest:
    """Read a manifest file; relative paths in it are relative to the manifest's directory"""
    path = os.fspath(path)
    if not os.path.isfile(path):
        raise FileNotFoundError(f"No such manifest: '{path}'")

    with open(path, 'r', encoding="utf-8", newline="") as file:
        return parse_manifest(file.read(), os.path.dirname(os.path.abspath(path)))


def format_manifest(manifest: Manifest) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, delimiter="\t", lineterminator="\n")
    writer.writerow(MANIFEST_HEADER)
    writer.writerows((row.word, row.speaker, row.path) for row in manifest.rows)
    return buffer.getvalue()
