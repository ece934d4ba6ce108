from typing import Any

TOLERANCES 	= {"absement": 10 ** -9}	# relative slack when comparing summed DTW costs
SCALING    	= {"sqrt", "none"}
SETTING 	= {
    # Frontend parameters
    "window_ms",		# positive float	analysis window length in milliseconds
    "hop_ms",			# positive float	frame advance in milliseconds (must not exceed 'window_ms')
    "n_coeffs",			# positive integer	number of cepstral coefficients kept (coefficient 0 becomes log energy)
    "n_mel_filters",		# positive integer	number of triangular mel filters (must be >= 'n_coeffs')
    "pre_emphasis",		# float range [0..1)	first order pre-emphasis coefficient, 0 disables it
    "mel_low_hz",		# float >= 0		lower edge of the mel filterbank
    "mel_high_hz",		# float > 0 or None	upper edge of the mel filterbank, None means Nyquist
    "log_floor",		# positive float	floor applied before every logarithm
    # Averaging parameters
    "max_iterations",		# positive integer	maximum number of barycenter update passes
    "rel_tolerance",		# float >= 0		stop when the relative objective decrease drops below this
    # Recognition parameters
    "k",			# positive integer	size of the top-k list reported per query
    "scaling",			# SCALING		'sqrt' divides absement by sqrt(template length), 'none' ranks raw absement
    "warping_radius",		# None			reserved; a warping radius is not supported
    # Run parameters
    "seed",			# integer >= 0		seeds the one random generator of a run
    "workers",			# positive integer	thread count for DTW scans (1 is sequential)
}

DEFAULT_SETTING 	= {
    # Frontend parameters
    "window_ms":		25.0,		# 25 ms analysis window
    "hop_ms":			10.0,		# 10 ms advance
    "n_coeffs":			13,		# 13 coefficients, the first replaced by log energy
    "n_mel_filters":		26,
    "pre_emphasis":		0.97,
    "mel_low_hz":		0.0,
    "mel_high_hz":		None,		# Nyquist of the signal at hand
    "log_floor":		1e-10,
    # Averaging parameters
    "max_iterations":		10,
    "rel_tolerance":		1e-6,
    # Recognition parameters
    "k":			10,		# top ten
    "scaling":			"sqrt",
    "warping_radius":		None,		# no warping radius
    # Run parameters
    "seed":			0,
    "workers":			1,
}

def check_setting(setting: dict[str,Any] =None) -> bool:

    """
    Check all settings on type and value range.
    :param setting: dictionary containing (a subset of) all settings.
    :return returns True when all settings are of the right type and within range.

    Cross-key constraints ('hop_ms' <= 'window_ms', 'n_coeffs' <= 'n_mel_filters', 'mel_low_hz' < 'mel_high_hz')
    are checked on the merged view of 'setting' and DEFAULT_SETTING.
    """

    if setting is None:
        return False

    for key in setting.keys():
        if key not in SETTING:
            raise ValueError(f"Unknown setting {key}. Please specify one of the following: {SETTING}")
        value = setting[key]
        if key in {"window_ms", "hop_ms", "log_floor"}:
            if isinstance(value, bool) or not isinstance(value, (int, float)) or value <= 0:
                raise ValueError(f"'{key}' has type {type(value)} and value {value}, but should be of type {type(1.0)} and have a value > 0")
        if key in {"n_coeffs", "n_mel_filters", "max_iterations", "k", "workers"}:
            if isinstance(value, bool) or not isinstance(value, int) or value < 1:
                raise ValueError(f"'{key}' has type {type(value)} and value {value}, but should be of type {type(1)} and have a value >= 1")
        if key == "seed" and (isinstance(value, bool) or not isinstance(value, int) or value < 0):
            raise ValueError(f"'{key}' has type {type(value)} and value {value}, but should be of type {type(1)} and have a value >= 0")
        if key == "pre_emphasis":
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise TypeError(f"'{key}' is of type '{type(value)}' but should be of type {type(1.0)}")
            if not 0 <= value < 1:
                raise ValueError(f"'{key}' has value {value}, but should be in range [0, 1)")
        if key in {"mel_low_hz", "rel_tolerance"}:
            if isinstance(value, bool) or not isinstance(value, (int, float)) or value < 0:
                raise ValueError(f"'{key}' has type {type(value)} and value {value}, but should be of type {type(1.0)} and have a value >= 0")
        if key == "mel_high_hz" and value is not None:
            if isinstance(value, bool) or not isinstance(value, (int, float)) or value <= 0:
                raise ValueError(f"'{key}' has type {type(value)} and value {value}, but should be None or of type {type(1.0)} and have a value > 0")
        if key == "scaling" and value not in SCALING:
            raise ValueError(f"Unknown '{key}' value '{value}'. Please specify one of the following: {SCALING}")
        if key == "warping_radius" and value is not None:
            raise ValueError(f"'{key}' is reserved and must be None: a warping radius is not supported")

    merged = {**DEFAULT_SETTING, **setting}
    if merged["hop_ms"] > merged["window_ms"]:
        raise ValueError(f"'hop_ms' ({merged['hop_ms']}) should not exceed 'window_ms' ({merged['window_ms']})")
    if merged["n_coeffs"] > merged["n_mel_filters"]:
        raise ValueError(f"'n_coeffs' ({merged['n_coeffs']}) should not exceed 'n_mel_filters' ({merged['n_mel_filters']})")
    if merged["mel_high_hz"] is not None and merged["mel_low_hz"] >= merged["mel_high_hz"]:
        raise ValueError(f"'mel_low_hz' ({merged['mel_low_hz']}) should be below 'mel_high_hz' ({merged['mel_high_hz']})")

    return True
