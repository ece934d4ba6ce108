"""
The frontend sub-module turns recordings into the MFCC-by-time matrices every comparison works on.

specific maintenance notes:
    - Column 0 of a FeatureMatrix is log energy, not cepstral coefficient 0.
    - All functions are pure; batch featurization may run them concurrently.
"""

from wav2word.wav_to_word.frontend._waveform import Waveform, load_wav, write_wav
from wav2word.wav_to_word.frontend._feature_matrix import FeatureMatrix, format_feat, parse_feat, read_feat, write_feat
from wav2word.wav_to_word.frontend._mfcc import FrontendConfig, frame_count, log_energy, mel_filterbank, mfcc
