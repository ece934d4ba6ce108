from collections.abc import Iterable, Mapping

from wav2word.wav_to_word.errors import LexiconError, ShapeMismatchError
from wav2word.wav_to_word.frontend import FeatureMatrix


class Lexicon:
    """
    The Lexicon class holds the labeled templates a query is compared against.
    Labels are unique and nonempty, all templates share one coefficient count.
    """

    __slots__ = '_entries', 'coeffs'

    def __init__(self, entries: dict[str, FeatureMatrix]):
        self._entries = dict(sorted(entries.items()))
        self.coeffs = next(iter(self._entries.values())).coeffs

    def __repr__(self):
        return f"Lexicon(size:{self.size}, coeffs:{self.coeffs})"

    def __iter__(self):
        yield from self._entries.items()

    def __contains__(self, label: str) -> bool:
        return label in self._entries

    @property
    def size(self) -> int:
        return len(self._entries)

    def labels(self) -> list[str]:
        """Labels in lexicographic order"""
        return list(self._entries)

    def get(self, label: str) -> FeatureMatrix:
        """Return the template of a given label"""
        try:
            return self._entries[label]
        except KeyError:
            raise LexiconError(f"word '{label}' is not in the lexicon") from None

    def template_lengths(self) -> dict[str, int]:
        return {label: template.frames for label, template in self._entries.items()}


def build_lexicon(templates: Mapping[str, FeatureMatrix] | Iterable[tuple[str, FeatureMatrix]]) -> Lexicon:
    """
    Validate labeled templates and collect them in a Lexicon.

    :param templates: a mapping label -> FeatureMatrix, or an iterable of (label, FeatureMatrix) pairs.
    :raises LexiconError: empty set, empty or duplicate label.
    :raises ShapeMismatchError: templates with different coefficient counts.
    """
    pairs = list(templates.items()) if isinstance(templates, Mapping) else list(templates)
    if not pairs:
        raise LexiconError("a lexicon needs at least one template")

    entries = {}
    for label, template in pairs:
        if not isinstance(label, str) or not label:
            raise LexiconError(f"template labels must be nonempty strings, got {label!r}")
        if label in entries:
            raise LexiconError(f"duplicate template label '{label}'")
        if not isinstance(template, FeatureMatrix):
            raise TypeError(f"template '{label}' is of type {type(template)}, expected FeatureMatrix")
        entries[label] = template

    coeffs = {template.coeffs for template in entries.values()}
    if len(coeffs) > 1:
        raise ShapeMismatchError(f"templates have different coefficient counts: {sorted(coeffs)}")

    return Lexicon(entries)
