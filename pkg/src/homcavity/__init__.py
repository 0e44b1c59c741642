"""Hong-Ou-Mandel interference with Fabry-Perot cavities in the interferometer arms."""
from .model import (SPEED_OF_LIGHT, Cavity, InterferometerConfig, Resonance, ResonanceClass,
                    SpectralProfile, cavity_transit_time, classify_cavity, delta_omega)
from .series import (CoincidenceCurve, SeriesTolerances, rate, rate_bare, rate_one_cavity,
                     rate_two_cavity, sweep, truncation_order)

__version__ = "0.1.0"
