"""
Calibration of the surrogate instrument from known spherical specimens, and hybrid network inputs.
"""

from .batch import disturbed_inputs, hybrid_inputs
from .estimator import estimate_disturbance
from .hybrid import calibrated_delta_opd, disturbed_delta_opd, hybrid_delta_opd, measure
from .models import CalibrationSpecimen, DisturbanceEstimate
from .specimens import check_identifiable, defocus_cap, generate_calibration_set
from .storage import load_estimate, save_estimate

__all__ = [
    "CalibrationSpecimen",
    "DisturbanceEstimate",
    "defocus_cap",
    "check_identifiable",
    "generate_calibration_set",
    "estimate_disturbance",
    "measure",
    "disturbed_delta_opd",
    "calibrated_delta_opd",
    "hybrid_delta_opd",
    "disturbed_inputs",
    "hybrid_inputs",
    "save_estimate",
    "load_estimate",
]
