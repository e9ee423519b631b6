"""Pytest configuration and fixtures."""
import os
import sys
from pathlib import Path

import pytest

# Ensure repository root is on path
repo_root = Path(__file__).parent.parent
if str(repo_root) not in sys.path:
    sys.path.insert(0, str(repo_root))

# No audit output during tests unless a test enables it
os.environ.setdefault("AUDIT_LOG_ENABLED", "false")


@pytest.fixture(autouse=True)
def disable_audit():
    """Audit events are off for every test."""
    from config.toolkit_settings import ToolkitSettings
    from formnet.audit import configure_audit

    configure_audit(ToolkitSettings(AUDIT_LOG_ENABLED=False))
    yield


@pytest.fixture
def freeform_cfg():
    """Freeform forward config on a 16×16 grid."""
    from formnet.optics import default_forward_config

    return default_forward_config("freeform", M=16)


@pytest.fixture
def asphere_cfg():
    """Asphere forward config (K=4) on a 16×16 grid."""
    from formnet.optics import default_forward_config

    return default_forward_config("asphere", M=16)


@pytest.fixture
def tiny_dataset(freeform_cfg):
    """12 freeform samples on a 16×16 grid."""
    from formnet.dataset import generate_dataset

    return generate_dataset("freeform", 12, 7, freeform_cfg)


@pytest.fixture(scope="session", autouse=True)
def single_torch_thread():
    """Run torch single-threaded, as the CLI does, so results are bitwise repeatable."""
    import torch

    previous = torch.get_num_threads()
    torch.set_num_threads(1)
    yield
    torch.set_num_threads(previous)
