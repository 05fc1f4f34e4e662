"""Value types shared by the Kobayashi and Bergman modules."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any


@dataclass(frozen=True)
class UpperHalfPlanePoint:
    """A point ``re + i*im`` with ``im > 0``."""

    re: float
    im: float

    def __post_init__(self):
        if not (self.im > 0) or not math.isfinite(self.im) or not math.isfinite(self.re):
            raise ValueError(f"not in the upper half-plane: {self.re!r} + {self.im!r}i")

    @classmethod
    def coerce(cls, tau) -> "UpperHalfPlanePoint":
        if isinstance(tau, cls):
            return tau
        tau = complex(tau)
        return cls(tau.real, tau.imag)

    def __complex__(self):
        return complex(self.re, self.im)


@dataclass(frozen=True)
class PuncturedDiskPoint:
    """A point of the punctured unit disk ``0 < |z| < 1``."""

    value: complex

    def __post_init__(self):
        mod = abs(self.value)
        if not (0 < mod < 1):
            raise ValueError(f"point {self.value!r} not in the punctured unit disk")

    @classmethod
    def coerce(cls, p) -> "PuncturedDiskPoint":
        return p if isinstance(p, cls) else cls(complex(p))


@dataclass(frozen=True)
class MetricSample:
    """One evaluated metric value with its truncation metadata.

    ``error_bound`` is ``None`` when no bound is available and ``0.0``
    for closed-form values.
    """

    domain: str
    base_point: Any
    direction: Any
    value: float
    truncation: dict = field(default_factory=dict)
    error_bound: float | None = None

    def __post_init__(self):
        if not (self.value >= 0):
            raise ValueError(f"metric value must be nonnegative, got {self.value!r}")
        if self.error_bound is not None and not (self.error_bound >= 0):
            raise ValueError(f"error bound must be nonnegative, got {self.error_bound!r}")
