"""
Defaults for the Zernike basis.
Noll single index with Noll normalization (orthonormal under the area-averaged disc inner product).
"""

# Relative threshold on |diag(R)| below which a fit design matrix counts as rank deficient
RANK_TOLERANCE = 1e-10

# Size of the rendered-basis cache (keyed by (j_max, M))
BASIS_CACHE_SIZE = 64

# Conventional names for the low orders, keyed by (n, m)
MODE_NAMES = {
    (0, 0): "piston",
    (1, 1): "tilt x",
    (1, -1): "tilt y",
    (2, 0): "defocus",
    (2, -2): "oblique astigmatism",
    (2, 2): "vertical astigmatism",
    (3, -1): "vertical coma",
    (3, 1): "horizontal coma",
    (3, -3): "vertical trefoil",
    (3, 3): "oblique trefoil",
    (4, 0): "primary spherical",
}
