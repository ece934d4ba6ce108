"""
Exceptions raised by wav2word.

Everything the user can fix by changing the input (a file, a manifest, a setting) derives from InputError, the
command line maps those to exit code 1. ProcessingError marks a failure while processing otherwise valid input.
"""


class InputError(ValueError):
    """Base class of all input problems."""


class WavHeaderError(InputError):
    """The file is not a well formed RIFF/WAVE container."""


class WavEncodingError(InputError):
    """The file is a WAVE container, but not PCM 16-bit mono or stereo."""


class SignalTooShortError(InputError):
    """The signal holds fewer samples than one analysis window."""


class FeatureFormatError(InputError):
    """The file is not a valid FEATv1 feature file."""


class ShapeMismatchError(InputError):
    """Vectors or feature matrices that must share a dimension do not, or an input is empty."""


class LexiconError(InputError):
    """Duplicate, empty, unknown or missing word labels."""


class ManifestError(InputError):
    """A manifest is malformed or inconsistent."""

    def __init__(self, message: str, row: int = None):
        """
        :param message: what is wrong.
        :param row: 1-based data row of the manifest the problem was found in (header not counted), if any.
        """
        self.row = row
        super().__init__(message if row is None else f"manifest row {row}: {message}")


class ProcessingError(RuntimeError):
    """An unexpected failure while processing a (valid) input item."""
