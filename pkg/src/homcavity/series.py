"""Coincidence rate N_c(delta) from the Gaussian transfer series.

Every rate is normalised so that the bare HOM plateau equals 1.  The
two-cavity rate is the quadruple sum over reflection counts (m, l) in the
signal cavity and (n, q) in the idler cavity,

    (Ti Ts)^2 sum R_s^(m+l) R_i^(n+q) cos(a_s (m-l)) cos(a_i (n-q))
        * [G(tau_s (m-l) - tau_i (n-q)) - G(tau_s (m+l) - tau_i (n+q) + delta)]

with G(x) = exp(-dw^2 x^2) and a_j the single-pass pump phase.  It is
evaluated after reindexing on shells s = m + l and differences d = m - l,
which collapses the sum to two pruned double sums over lattices (see
``kernels``).
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import kernels
from .model import Cavity, InterferometerConfig, SpectralProfile

log = logging.getLogger(__name__)

# negative rates below this are reported, not silently clamped
NEGATIVE_WARN = 1e-9


@dataclass(frozen=True)
class SeriesTolerances:
    eps_weight: float = 1e-10
    eps_envelope: float = 1e-14

    def __post_init__(self):
        if not 0.0 < self.eps_weight <= 1e-6:
            raise ValueError(f"eps_weight must lie in (0, 1e-6], got {self.eps_weight!r}")
        if not 0.0 < self.eps_envelope <= 1e-6:
            raise ValueError(f"eps_envelope must lie in (0, 1e-6], got {self.eps_envelope!r}")


DEFAULT_TOLERANCES = SeriesTolerances()


@dataclass
class CoincidenceCurve:
    delays: np.ndarray
    rates: np.ndarray
    config: Optional[InterferometerConfig] = None
    n_clamped: int = 0

    def __post_init__(self):
        self.delays = np.asarray(self.delays, dtype=float)
        self.rates = np.asarray(self.rates, dtype=float)
        if self.delays.shape != self.rates.shape or self.delays.ndim != 1:
            raise ValueError("delays and rates must be 1-d arrays of equal length")
        if np.any(np.diff(self.delays) <= 0):
            raise ValueError("delays must be strictly increasing")

    def __len__(self):
        return self.delays.size

    @property
    def spacing(self) -> float:
        return float(np.min(np.diff(self.delays))) if len(self) > 1 else math.inf


def truncation_order(R: float, eps_weight: float) -> int:
    """Smallest M with R**M < eps_weight (0 when R == 0)."""
    if not 0.0 <= R < 1.0:
        raise ValueError(f"truncation order diverges for reflectance {R!r} (need 0 <= R < 1)")
    if not 0.0 < eps_weight < 1.0:
        raise ValueError(f"eps_weight must lie in (0, 1), got {eps_weight!r}")
    if R == 0.0:
        return 0
    M = int(math.floor(math.log(eps_weight) / math.log(R))) + 1
    # guard the log ratio against rounding at exact powers
    while R**M >= eps_weight:
        M += 1
    while M > 0 and R ** (M - 1) < eps_weight:
        M -= 1
    return M


@dataclass(frozen=True)
class _Arm:
    """One interferometer arm reindexed on reflection shells and differences."""

    prefactor: float  # transmittance T
    tau: float
    shell_weights: np.ndarray  # A(s) = R^s sum_{d} cos(a d), s = 0..n-1
    diff_weights: np.ndarray  # B(d) = cos(a d) sum_{s >= |d|} R^s, d = -(n-1)..n-1

    @property
    def n_shells(self) -> int:
        return self.shell_weights.size


def _arm(cavity: Cavity, lambda_pump: float, eps_weight: float) -> _Arm:
    R = cavity.reflectance
    n = max(truncation_order(R, eps_weight), 1)
    a = cavity.pump_phase(lambda_pump)
    s = np.arange(n)
    powers = R ** s.astype(float)
    shell = np.empty(n)
    for k in range(n):
        shell[k] = powers[k] * np.cos(a * np.arange(-k, k + 1, 2)).sum()
    d = np.arange(-(n - 1), n)
    diff = np.empty(d.size)
    for idx, dd in enumerate(d):
        diff[idx] = powers[abs(dd)::2].sum() * math.cos(a * dd)
    return _Arm(cavity.transmittance, cavity.transit_time, shell, diff)


def _check_delays(delta):
    delays = np.asarray(delta, dtype=float)
    if not np.all(np.isfinite(delays)):
        raise ValueError("delays must be finite")
    return delays


def _clamp(raw: np.ndarray) -> tuple[np.ndarray, int]:
    negative = raw < 0
    n = int(np.count_nonzero(negative))
    if n:
        worst = float(raw.min())
        if worst < -NEGATIVE_WARN:
            log.warning("clamped %d negative rates (most negative %.3g)", n, worst)
        raw = np.where(negative, 0.0, raw)
    return raw, n


def _as_output(delta, rates):
    return float(rates) if np.ndim(delta) == 0 else rates


def rate_bare(profile: SpectralProfile, delta):
    """Bare HOM dip 1 - exp(-dw^2 delta^2)."""
    delays = _check_delays(delta)
    dw = profile.delta_omega
    return _as_output(delta, -np.expm1(-(dw * delays) ** 2))


def _one_cavity_raw(cavity: Cavity, profile: SpectralProfile, delays: np.ndarray,
                    tol: SeriesTolerances) -> np.ndarray:
    arm = _arm(cavity, profile.lambda_pump, tol.eps_weight)
    dw = profile.delta_omega
    cutoff = kernels.cutoff_for(dw, tol.eps_envelope)
    tau = arm.tau
    n = arm.n_shells
    # delay-independent term: only differences with |tau d| inside the envelope
    d = np.arange(-(n - 1), n)
    x = tau * d
    keep = np.abs(x) <= cutoff
    first = float(np.dot(arm.diff_weights[keep], np.exp(-(dw * x[keep]) ** 2)))
    flat = delays.ravel()
    second = np.zeros(flat.size)
    centers = tau * np.arange(n)
    for k, dl in enumerate(flat):
        if tau > 0:
            lo = max(int(math.ceil((dl - cutoff) / tau)), 0)
            hi = min(int(math.floor((dl + cutoff) / tau)), n - 1)
            if hi < lo:
                continue
            sl = slice(lo, hi + 1)
        else:
            if abs(dl) > cutoff:
                continue
            sl = slice(0, n)
        y = centers[sl] - dl
        second[k] = float(np.dot(arm.shell_weights[sl], np.exp(-(dw * y) ** 2)))
    return (arm.prefactor**2 * (first - second)).reshape(delays.shape)


def rate_one_cavity(cavity: Cavity, profile: SpectralProfile, delta,
                    tol: SeriesTolerances = DEFAULT_TOLERANCES):
    """Coincidence rate with a single cavity in the idler arm.

    Interference regions sit at delta = (L/c)(n + q).  ``delta`` may be a
    scalar or an array of delays in seconds.
    """
    delays = _check_delays(delta)
    rates, _ = _clamp(_one_cavity_raw(cavity, profile, delays, tol))
    return _as_output(delta, rates)


def _two_cavity_parts(config: InterferometerConfig, tol: SeriesTolerances):
    prof = config.profile
    sig = _arm(config.signal, prof.lambda_pump, tol.eps_weight)
    idl = _arm(config.idler, prof.lambda_pump, tol.eps_weight)
    dw = prof.delta_omega
    cutoff = kernels.cutoff_for(dw, tol.eps_envelope)
    ns, ni = sig.n_shells, idl.n_shells
    first = kernels.pair_envelope_sum(
        sig.diff_weights, -(ns - 1) * sig.tau, sig.tau,
        idl.diff_weights, -(ni - 1) * idl.tau, idl.tau,
        np.zeros(1), dw, cutoff)[0]
    scale = (sig.prefactor * idl.prefactor) ** 2
    return sig, idl, dw, cutoff, scale, first


def _two_cavity_raw(config: InterferometerConfig, delays: np.ndarray,
                    tol: SeriesTolerances) -> np.ndarray:
    sig, idl, dw, cutoff, scale, first = _two_cavity_parts(config, tol)
    second = kernels.pair_envelope_sum(
        sig.shell_weights, 0.0, sig.tau, idl.shell_weights, 0.0, idl.tau,
        delays.ravel(), dw, cutoff)
    return (scale * (first - second)).reshape(delays.shape)


def rate_two_cavity(config: InterferometerConfig, delta,
                    tol: SeriesTolerances = DEFAULT_TOLERANCES):
    """Coincidence rate with a cavity in each arm.

    A missing cavity is replaced by the empty arm (R=0, T=1, L=0), so the
    result reduces to ``rate_one_cavity`` / ``rate_bare``.
    """
    delays = _check_delays(delta)
    rates, _ = _clamp(_two_cavity_raw(config, delays, tol))
    return _as_output(delta, rates)


def platform_term(config: InterferometerConfig, tol: SeriesTolerances = DEFAULT_TOLERANCES) -> float:
    """Delay-independent part of the series (the level far from every region)."""
    *_, scale, first = _two_cavity_parts(config, tol)
    return float(scale * first)


def rate_two_cavity_bruteforce(config: InterferometerConfig, delta, n_shells_signal: int,
                               n_shells_idler: int) -> np.ndarray:
    """Unpruned quadruple sum over m + l < n_shells_signal, n + q < n_shells_idler.

    Reference implementation for small truncation orders; cost grows as the
    fourth power of the order.
    """
    prof = config.profile
    sig, idl = config.signal, config.idler
    dw = prof.delta_omega

    def pairs(cav, n):
        m, l = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
        keep = (m + l) < n
        m, l = m[keep], l[keep]
        a = cav.pump_phase(prof.lambda_pump)
        R = cav.reflectance
        w = R ** (m + l).astype(float) * np.cos(a * (m - l))
        return m - l, m + l, w

    d1, s1, w1 = pairs(sig, n_shells_signal)
    d2, s2, w2 = pairs(idl, n_shells_idler)
    ts, ti = sig.transit_time, idl.transit_time
    weight = w1[:, None] * w2[None, :]
    env1 = np.exp(-(dw * (ts * d1[:, None] - ti * d2[None, :])) ** 2)
    first = float((weight * env1).sum())
    xs = ts * s1[:, None] - ti * s2[None, :]
    delays = _check_delays(delta)
    out = np.empty(delays.size)
    for k, dl in enumerate(delays.ravel()):
        out[k] = first - float((weight * np.exp(-(dw * (xs + dl)) ** 2)).sum())
    out *= (sig.transmittance * idl.transmittance) ** 2
    return _as_output(delta, out.reshape(delays.shape))


def evaluate(config: InterferometerConfig, delta, tol: SeriesTolerances = DEFAULT_TOLERANCES):
    """Dispatch to the cheapest applicable rate for ``config`` (unclamped array, clamp count)."""
    delays = _check_delays(delta)
    if config.n_cavities == 0:
        raw = np.asarray(rate_bare(config.profile, delays), dtype=float)
    elif config.signal_cavity is None or config.signal_cavity.is_absent:
        raw = _one_cavity_raw(config.idler, config.profile, delays, tol)
    else:
        raw = _two_cavity_raw(config, delays, tol)
    return _clamp(raw)


def rate(config: InterferometerConfig, delta, tol: SeriesTolerances = DEFAULT_TOLERANCES):
    rates, _ = evaluate(config, delta, tol)
    return _as_output(delta, rates)


def sweep(config: InterferometerConfig, delta_min: float, delta_max: float, n_samples: int,
          tol: SeriesTolerances = DEFAULT_TOLERANCES) -> CoincidenceCurve:
    """Sample N_c on a uniform delay grid including both endpoints."""
    if not delta_min < delta_max:
        raise ValueError(f"need delta_min < delta_max, got {delta_min!r} >= {delta_max!r}")
    if n_samples < 2:
        raise ValueError(f"n_samples must be >= 2, got {n_samples!r}")
    delays = np.linspace(delta_min, delta_max, int(n_samples))
    rates, n_clamped = evaluate(config, delays, tol)
    return CoincidenceCurve(delays, rates, config, n_clamped)
