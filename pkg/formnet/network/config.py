"""
Default network and training hyperparameters (desk scale).
"""

DEFAULT_DEPTH = 3
DEFAULT_BASE_WIDTH = 16
KERNEL_SIZE = 3

DEFAULT_EPOCHS = 10
DEFAULT_BATCH_SIZE = 32
DEFAULT_LR0 = 5e-4
DEFAULT_DROP_FACTOR = 0.75
DEFAULT_DROP_PERIOD = 5
DEFAULT_WEIGHT_DECAY = 0.004

ADAM_BETA1 = 0.9
ADAM_BETA2 = 0.999
ADAM_EPS = 1e-8

# Finite-difference gradient check
FD_STEP = 1e-5
FD_ABS_THRESHOLD = 1e-8

# Model file: JSON header line, then little-endian binary32 parameter blocks
MODEL_HEADER_END = b"\n"
MODEL_DTYPE = "<f4"
