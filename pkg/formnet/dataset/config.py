"""
Defaults for dataset generation and storage.
"""

# Noll modes of the difference topographies (piston excluded: not observable as form deviation)
SAMPLING_J_MIN = 2
SAMPLING_J_MAX = 36

# Per-sample in-disc RMS of ΔT ~ LogUniform(RMS_MIN, RMS_MAX) nm; raw coefficients ~ U(−bound, bound)
SAMPLING_RMS_MIN_NM = 50.0
SAMPLING_RMS_MAX_NM = 700.0
SAMPLING_COEFF_BOUND = 1.0

DEFAULT_TEST_FRACTION = 0.10

# Storage layout
META_FILE = "meta"
INPUTS_FILE = "inputs.bin"
TARGETS_FILE = "targets.bin"
STORAGE_DTYPE = "<f4"
