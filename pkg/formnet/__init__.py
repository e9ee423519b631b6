"""
formnet: virtual optical form measurement with a hybrid U-Net / calibration pipeline.
"""

__version__ = "0.1.0"
