"""
wav2word: recognize isolated words by their acoustic absement to averaged templates.
"""
__version__ = "1.0.0"
