"""Parameter containers shared by the kernel, transform and operator modules."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .errors import InvalidOrder


@dataclass(frozen=True)
class KernelSpec:
    """Parameters ``(alpha, rho, gamma, omega)`` of a Prabhakar kernel.

    The kernel is ``t**(rho-1) * E^gamma_{alpha,rho}(omega * t**alpha)``.
    ``omega`` carries units of ``t**(-alpha)`` and may be complex.
    """

    alpha: float
    rho: float
    gamma: float = 1.0
    omega: complex = 0.0

    def __post_init__(self) -> None:
        for name in ("alpha", "rho", "gamma"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise InvalidOrder(f"{name} must be finite, got {value!r}")
        if not (math.isfinite(complex(self.omega).real) and math.isfinite(complex(self.omega).imag)):
            raise InvalidOrder(f"omega must be finite, got {self.omega!r}")
        if self.alpha <= 0:
            raise InvalidOrder(f"alpha must be positive, got {self.alpha!r}")

    def with_(self, **changes) -> KernelSpec:
        return replace(self, **changes)


@dataclass(frozen=True)
class HilferSpec:
    """A kernel plus the Hilfer interpolation weight ``nu`` in ``[0, 1]``.

    ``kernel.rho`` plays the role of the derivative order and must lie in
    ``(0, 1]``; ``rho = 1`` is the classical first-derivative limit.
    """

    kernel: KernelSpec
    nu: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.nu <= 1.0:
            raise InvalidOrder(f"nu must lie in [0, 1], got {self.nu!r}")
        if not 0.0 < self.kernel.rho <= 1.0:
            raise InvalidOrder(f"rho must lie in (0, 1], got {self.kernel.rho!r}")

    @property
    def alpha(self) -> float:
        return self.kernel.alpha

    @property
    def rho(self) -> float:
        return self.kernel.rho

    @property
    def gamma(self) -> float:
        return self.kernel.gamma

    @property
    def omega(self) -> complex:
        return self.kernel.omega
