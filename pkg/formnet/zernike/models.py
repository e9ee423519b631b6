"""
Pydantic models for the Zernike basis.
"""

import math
from typing import Dict, Iterable, Tuple

from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from .indexing import noll_to_nm


class ZernikeIndex(BaseModel):
    """One Zernike mode: Noll index j and its radial / azimuthal orders."""

    model_config = ConfigDict(frozen=True)

    j: int
    n: int
    m: int

    @model_validator(mode="after")
    def _check_orders(self) -> "ZernikeIndex":
        if self.j < 1:
            raise ValueError(f"Noll index must be >= 1, got {self.j}")
        if self.n < abs(self.m) or (self.n - abs(self.m)) % 2 != 0:
            raise ValueError(f"Invalid Zernike orders (n={self.n}, m={self.m})")
        return self

    @classmethod
    def from_noll(cls, j: int) -> "ZernikeIndex":
        n, m = noll_to_nm(j)
        return cls(j=j, n=n, m=m)


class ZernikeCoeffs(BaseModel):
    """Coefficients in nm keyed by Noll index."""

    coefficients: Dict[int, float] = {}

    @field_validator("coefficients")
    @classmethod
    def _check_coefficients(cls, v: Dict[int, float]) -> Dict[int, float]:
        for j, c in v.items():
            if j < 1:
                raise ValueError(f"Noll index must be >= 1, got {j}")
            if not math.isfinite(c):
                raise ValueError(f"Coefficient for j={j} is not finite: {c}")
        return dict(sorted(v.items()))

    @classmethod
    def from_pairs(cls, pairs: Iterable[Tuple[int, float]]) -> "ZernikeCoeffs":
        entries: Dict[int, float] = {}
        for j, c in pairs:
            if j in entries:
                raise ValueError(f"Duplicate Noll index {j}")
            entries[j] = float(c)
        return cls(coefficients=entries)

    def get(self, j: int) -> float:
        return self.coefficients.get(j, 0.0)

    @property
    def max_index(self) -> int:
        return max(self.coefficients) if self.coefficients else 0
