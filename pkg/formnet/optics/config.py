"""
Defaults for the surrogate interferometer.
Design sags are in nm on the unit-disc grid; all angles in degrees here, radians in ForwardConfig.
"""

DEFAULT_GRID_SIZE = 64

# Quadratic nonlinearity of the surrogate law L = a·T' + beta·T'^2 (nm^-1)
DEFAULT_BETA = 5e-6

NM_PER_MM = 1e6

# Asphere: z(r) = c r^2 / (1 + sqrt(1 - (1 + kappa) c^2 r^2)) + A4 r^4, r in mm
ASPHERE_CURVATURE_PER_MM = 0.01
ASPHERE_CONIC = -1.5
ASPHERE_A4 = 1e-6
ASPHERE_APERTURE_RADIUS_MM = 10.0

# Asphere channels: obliquity (deg), shear, mask center, mask radius
ASPHERE_CHANNELS = [
    {"theta_deg": 0.0, "shear": (0.0, 0.0), "mask_center": (0.0, 0.0), "mask_radius": 1.0},
    {"theta_deg": 2.0, "shear": (0.15, 0.0), "mask_center": (0.4, 0.4), "mask_radius": 0.45},
    {"theta_deg": 4.0, "shear": (0.0, 0.15), "mask_center": (-0.4, 0.4), "mask_radius": 0.45},
    {"theta_deg": 6.0, "shear": (-0.15, -0.15), "mask_center": (0.4, -0.4), "mask_radius": 0.45},
]

# Freeform: three spherical caps (center in unit coords, curvature in mm^-1), vertex-referenced
FREEFORM_APERTURE_RADIUS_MM = 10.0
FREEFORM_CAPS = [
    {"center": (0.0, 0.0), "curvature_per_mm": 2.0e-4},
    {"center": (0.5, 0.2), "curvature_per_mm": 1.5e-4},
    {"center": (-0.4, -0.4), "curvature_per_mm": 1.0e-4},
]
FREEFORM_CHANNELS = [
    {"theta_deg": 0.0, "shear": (0.0, 0.0), "mask_center": (0.0, 0.0), "mask_radius": 1.0},
]

# Disturbance sampling: gains ~ U(-G, G), offsets ~ U(-O, O) nm for Noll j = 2..DEFAULT_J_DIST.
# O = 300 nm: the offsets alone corrupt Delta L by about 500 nm RMS
DISTURBANCE_GAIN_BOUND = 0.02
DISTURBANCE_OFFSET_BOUND_NM = 300.0
DEFAULT_J_DIST = 10
MAX_ABS_GAIN = 0.5
