"""
Noll single-index ordering of the Zernike modes.
"""

from typing import Tuple

from formnet.errors import InvalidIndexError

from .config import MODE_NAMES


def noll_to_nm(j: int) -> Tuple[int, int]:
    """Return (n, m) for Noll index j (j=1 piston, j=4 defocus, j=11 primary spherical)."""
    if j < 1:
        raise InvalidIndexError(f"Noll index must be >= 1, got {j}")
    n = 0
    j1 = j - 1
    while j1 > n:
        n += 1
        j1 -= n
    m = (-1) ** j * ((n % 2) + 2 * ((j1 + ((n + 1) % 2)) // 2))
    return n, m


def nm_to_noll(n: int, m: int) -> int:
    """Inverse of noll_to_nm."""
    if n < 0 or n < abs(m) or (n - abs(m)) % 2 != 0:
        raise InvalidIndexError(f"Invalid Zernike orders (n={n}, m={m})")
    first = n * (n + 1) // 2 + 1
    for j in range(first, first + n + 1):
        if noll_to_nm(j) == (n, m):
            return j
    raise InvalidIndexError(f"No Noll index for (n={n}, m={m})")


def zernike_name(j: int) -> str:
    n, m = noll_to_nm(j)
    return MODE_NAMES.get((n, m), f"Z{j} (n={n}, m={m})")
