"""Spectral profile, Fabry-Perot cavity description and resonance classification.

All lengths are in metres, times in seconds and angular frequencies in rad/s.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional

SPEED_OF_LIGHT = 299_792_458.0  # m/s, exact SI value

DEFAULT_TOL_RES = 1e-3


@dataclass(frozen=True)
class SpectralProfile:
    """Twin-photon spectrum selected by the interference filters.

    ``delta_lambda`` is the Gaussian width parameter of the filter; it enters
    the angular bandwidth as ``2 pi c delta_lambda / lambda_center**2``.
    """

    lambda_center: float
    lambda_pump: float
    delta_lambda: float

    def __post_init__(self):
        for name in ("lambda_center", "lambda_pump", "delta_lambda"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ValueError(f"{name} must be finite and positive, got {value!r}")

    @classmethod
    def degenerate(cls, lambda_center: float, delta_lambda: float) -> "SpectralProfile":
        """Degenerate down-conversion: the pump sits at half the photon wavelength."""
        return cls(lambda_center, lambda_center / 2.0, delta_lambda)

    @property
    def delta_omega(self) -> float:
        return delta_omega(self)

    @property
    def sigma(self) -> float:
        """Standard deviation (in delay) of a single interference region."""
        return self.lambda_center**2 / (2.0 * math.sqrt(2.0) * math.pi * SPEED_OF_LIGHT * self.delta_lambda)

    @property
    def pump_omega(self) -> float:
        return 2.0 * math.pi * SPEED_OF_LIGHT / self.lambda_pump


@dataclass(frozen=True)
class Cavity:
    """Symmetric Fabry-Perot cavity with power reflectance R and transmittance T.

    When ``transmittance`` is omitted the mirrors are lossless (T = 1 - R).
    """

    length: float
    reflectance: float
    transmittance: Optional[float] = None

    def __post_init__(self):
        if self.transmittance is None:
            object.__setattr__(self, "transmittance", 1.0 - self.reflectance)
        R, T = self.reflectance, self.transmittance
        if not (math.isfinite(self.length) and self.length >= 0):
            raise ValueError(f"cavity length must be non-negative, got {self.length!r}")
        if not 0.0 <= R < 1.0:
            raise ValueError(f"reflectance must lie in [0, 1), got {R!r}")
        if not 0.0 < T <= 1.0:
            raise ValueError(f"transmittance must lie in (0, 1], got {T!r}")
        if R + T > 1.0 + 1e-12:
            raise ValueError(f"R + T must not exceed 1 (got R={R}, T={T})")

    @classmethod
    def absent(cls) -> "Cavity":
        """An empty arm: single pass, no reflections, no transit time."""
        return cls(0.0, 0.0, 1.0)

    @property
    def transit_time(self) -> float:
        return cavity_transit_time(self)

    @property
    def is_absent(self) -> bool:
        return self.reflectance == 0.0 and self.transmittance == 1.0 and self.length == 0.0

    def pump_phase(self, lambda_pump: float) -> float:
        """Single-pass pump phase omega_p * tau_c = 2 pi L / lambda_p, reduced to [-pi, pi]."""
        order = self.length / lambda_pump
        return 2.0 * math.pi * (order - round(order))


class Resonance(enum.Enum):
    RESONANT = "Resonant"
    ANTI_RESONANT = "AntiResonant"
    NEITHER = "Neither"


@dataclass(frozen=True)
class ResonanceClass:
    kind: Resonance
    fractional_order: float


@dataclass(frozen=True)
class InterferometerConfig:
    """HOM interferometer with an optional cavity in each arm.

    The delay convention is delta = delta_i - delta_s.
    """

    profile: SpectralProfile
    idler_cavity: Optional[Cavity] = None
    signal_cavity: Optional[Cavity] = None

    @property
    def idler(self) -> Cavity:
        return self.idler_cavity if self.idler_cavity is not None else Cavity.absent()

    @property
    def signal(self) -> Cavity:
        return self.signal_cavity if self.signal_cavity is not None else Cavity.absent()

    @property
    def n_cavities(self) -> int:
        return sum(c is not None and not c.is_absent for c in (self.idler_cavity, self.signal_cavity))


def delta_omega(profile: SpectralProfile) -> float:
    """Angular bandwidth 2 pi c delta_lambda / lambda**2 in rad/s."""
    return 2.0 * math.pi * SPEED_OF_LIGHT * profile.delta_lambda / profile.lambda_center**2


def cavity_transit_time(cavity: Cavity) -> float:
    return cavity.length / SPEED_OF_LIGHT


def classify_cavity(length: float, lambda_pump: float, tol_res: float = DEFAULT_TOL_RES) -> ResonanceClass:
    """Classify a cavity length against the pump wavelength.

    Integer multiples of ``lambda_pump`` (half the photon wavelength) are
    resonant, half-integer multiples anti-resonant; ``tol_res`` is the allowed
    deviation as a fraction of ``lambda_pump``.
    """
    if not 0.0 < tol_res < 0.25:
        raise ValueError(f"tol_res must lie in (0, 0.25), got {tol_res!r}")
    if not length > 0:
        raise ValueError(f"cavity length must be positive, got {length!r}")
    order = length / lambda_pump
    frac = order - math.floor(order)
    if min(frac, 1.0 - frac) <= tol_res:
        kind = Resonance.RESONANT
    elif abs(frac - 0.5) <= tol_res:
        kind = Resonance.ANTI_RESONANT
    else:
        kind = Resonance.NEITHER
    return ResonanceClass(kind, frac)
