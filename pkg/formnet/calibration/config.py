"""
Defaults for calibration from known spherical specimens.
"""

# Defocus-cap amplitudes A (nm) of the calibration specimens A·(x² + y²)
DEFAULT_AMPLITUDES_NM = [5e3, -5e3, 1e4, -1e4, 2e4]

# Highest Noll index of the estimated offset fields
DEFAULT_J_DIST = 10

# |1 + ĝ| below this is treated as a vanished channel gain
MIN_GAIN_FACTOR = 1e-9
