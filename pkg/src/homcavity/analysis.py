"""Platform values, interference regions, pattern symmetry and the XOR gate."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from .model import (DEFAULT_TOL_RES, Cavity, InterferometerConfig, Resonance, classify_cavity)
from .series import DEFAULT_TOLERANCES, CoincidenceCurve, SeriesTolerances, platform_term, sweep, truncation_order

SYM_THRESHOLD = 0.05
FLAT_TOL_FRACTION = 1e-3
MIN_SAMPLES_PER_SIGMA = 5


class UndersampledError(ValueError):
    pass


class RegionKind(enum.Enum):
    PEAK = "Peak"
    VALLEY = "Valley"
    FLAT = "Flat"


@dataclass(frozen=True)
class RegionReport:
    order: int
    center_delay: float
    extremum_rate: float
    kind: RegionKind
    closed_form_rate: Optional[float] = None
    extremum_delay: Optional[float] = None
    n_paths: int = 1
    unresolved: bool = False

    def to_dict(self) -> dict:
        return {
            "order": self.order,
            "center_delay_ps": self.center_delay * 1e12,
            "extremum_delay_ps": None if self.extremum_delay is None else self.extremum_delay * 1e12,
            "extremum_rate": self.extremum_rate,
            "kind": self.kind.value,
            "closed_form_rate": self.closed_form_rate,
            "n_paths": self.n_paths,
            "unresolved": self.unresolved,
        }


@dataclass(frozen=True)
class XorResult:
    input_idler: int
    input_signal: int
    symmetry_score: float
    output: int
    pattern: str

    def to_dict(self) -> dict:
        return {
            "input_idler": self.input_idler,
            "input_signal": self.input_signal,
            "output": self.output,
            "pattern": self.pattern,
            "symmetry_score": self.symmetry_score,
        }


def platform_one_cavity(cavity: Cavity) -> float:
    """T^2 / (1 - R^2): the level between regions with one cavity."""
    R, T = cavity.reflectance, cavity.transmittance
    if not 0.0 <= R < 1.0:
        raise ValueError(f"platform diverges for R={R!r}")
    return T * T / (1.0 - R * R)


def region_amplitude(j: int, cavity: Cavity, lambda_pump: float,
                     tol_res: float = DEFAULT_TOL_RES) -> float:
    """Rate at the center of interference region j for one cavity.

    Sums the j reflection histories with n + q = j - 1; exactly resonant or
    anti-resonant cavities use the closed forms with R^(j-1) j and (-R)^(j-1) j.
    """
    if j < 1:
        raise ValueError(f"region order must be >= 1, got {j!r}")
    R, T = cavity.reflectance, cavity.transmittance
    platform = platform_one_cavity(cavity)
    if cavity.length > 0:
        kind = classify_cavity(cavity.length, lambda_pump, tol_res).kind
        if kind is Resonance.RESONANT:
            return platform - T * T * R ** (j - 1) * j
        if kind is Resonance.ANTI_RESONANT:
            return platform - T * T * (-R) ** (j - 1) * j
    a = cavity.pump_phase(lambda_pump)
    diffs = np.arange(-(j - 1), j, 2)
    return platform - T * T * R ** (j - 1) * float(np.cos(a * diffs).sum())


def deepest_region_order(R: float, j_max: int) -> int:
    """argmax over j in [1, j_max] of j R^(j-1), ties going to the smaller j."""
    if not 0.0 < R < 1.0:
        raise ValueError(f"R must lie in (0, 1), got {R!r}")
    if j_max < 1:
        raise ValueError(f"j_max must be >= 1, got {j_max!r}")
    j = np.arange(1, j_max + 1)
    # log form avoids underflow for large j_max
    score = np.log(j) + (j - 1) * math.log(R)
    best = score.max()
    return int(j[np.nonzero(score >= best - 1e-12)[0][0]])


def gaussian_overlap(sigma: float, spacing: float) -> float:
    """Overlap integral sqrt(pi) sigma exp(-(spacing / 2 sigma)^2) of two regions."""
    if not sigma > 0:
        raise ValueError(f"sigma must be positive, got {sigma!r}")
    if math.isinf(spacing):
        return 0.0
    return math.sqrt(math.pi) * sigma * math.exp(-((spacing / (2.0 * sigma)) ** 2))


def _candidate_centers(config: InterferometerConfig, lo: float, hi: float, tol: SeriesTolerances):
    """(center, path order) pairs for every retained reflection shell pair in [lo, hi]."""
    sig, idl = config.signal, config.idler
    ns = max(truncation_order(sig.reflectance, tol.eps_weight), 1)
    ni = max(truncation_order(idl.reflectance, tol.eps_weight), 1)
    s1, s2 = np.meshgrid(np.arange(ns), np.arange(ni), indexing="ij")
    centers = idl.transit_time * s2 - sig.transit_time * s1
    orders = s1 + s2 + 1
    keep = (centers >= lo) & (centers <= hi)
    return centers[keep], orders[keep]


def _cluster(centers: np.ndarray, orders: np.ndarray, min_gap: float):
    order_idx = np.argsort(centers, kind="stable")
    centers, orders = centers[order_idx], orders[order_idx]
    groups = []
    start = 0
    for k in range(1, centers.size + 1):
        if k == centers.size or centers[k] - centers[k - 1] >= min_gap:
            groups.append((centers[start:k], orders[start:k]))
            start = k
    return groups


def _refine(delays: np.ndarray, rates: np.ndarray, k: int) -> tuple[float, float]:
    """Vertex of the parabola through samples k-1, k, k+1 (falls back to the sample)."""
    if k == 0 or k == delays.size - 1:
        return float(delays[k]), float(rates[k])
    y0, y1, y2 = rates[k - 1], rates[k], rates[k + 1]
    denom = y0 - 2.0 * y1 + y2
    if denom == 0.0:
        return float(delays[k]), float(y1)
    h = delays[k + 1] - delays[k]
    shift = 0.5 * (y0 - y2) / denom
    if abs(shift) > 1.0:
        return float(delays[k]), float(y1)
    return float(delays[k] + shift * h), float(y1 - 0.25 * (y0 - y2) * shift)


def estimate_platform(curve: CoincidenceCurve, centers: np.ndarray, sigma: float,
                      config: InterferometerConfig, tol: SeriesTolerances = DEFAULT_TOLERANCES) -> float:
    """Median rate over samples farther than 4 sigma from every candidate center.

    Falls back to the delay-independent series term when no sample qualifies.
    """
    if centers.size:
        dist = np.min(np.abs(curve.delays[:, None] - centers[None, :]), axis=1)
        far = dist > 4.0 * sigma
    else:
        far = np.ones(len(curve), dtype=bool)
    if np.any(far):
        return float(np.median(curve.rates[far]))
    return platform_term(config, tol)


def detect_regions(curve: CoincidenceCurve, config: Optional[InterferometerConfig] = None,
                   flat_tol: Optional[float] = None,
                   tol: SeriesTolerances = DEFAULT_TOLERANCES) -> list[RegionReport]:
    """Locate and classify the interference regions covered by ``curve``.

    Candidate centers come from the cavity transit times; the extremum is read
    from the samples within 2 sigma of each center (refined by a three-point
    parabola).  Candidates closer than 4 sigma are merged into one region and
    flagged ``unresolved``.
    """
    config = config if config is not None else curve.config
    if config is None:
        raise ValueError("detect_regions needs the interferometer configuration")
    prof = config.profile
    sigma = prof.sigma
    lo, hi = float(curve.delays[0]), float(curve.delays[-1])
    centers, orders = _candidate_centers(config, lo, hi, tol)
    groups = _cluster(centers, orders, 4.0 * sigma)
    platform = estimate_platform(curve, centers, sigma, config, tol)
    if flat_tol is None:
        flat_tol = FLAT_TOL_FRACTION * platform
    one_cavity = config.n_cavities <= 1 and (config.signal_cavity is None or config.signal_cavity.is_absent)

    reports = []
    for members, member_orders in groups:
        center = float(members.mean())
        inside_sigma = np.count_nonzero(np.abs(curve.delays - center) <= sigma)
        if inside_sigma < MIN_SAMPLES_PER_SIGMA:
            raise UndersampledError(
                f"only {inside_sigma} samples within one sigma ({sigma * 1e15:.1f} fs) of the region "
                f"at {center * 1e12:.5f} ps; need {MIN_SAMPLES_PER_SIGMA}")
        window = np.nonzero(np.abs(curve.delays - center) <= 2.0 * sigma)[0]
        k = int(window[np.argmax(np.abs(curve.rates[window] - platform))])
        ext_delay, ext_rate = _refine(curve.delays, curve.rates, k)
        deviation = ext_rate - platform
        if deviation > flat_tol:
            kind = RegionKind.PEAK
        elif deviation < -flat_tol:
            kind = RegionKind.VALLEY
        else:
            kind = RegionKind.FLAT
        j = int(member_orders.min())
        closed = None
        if one_cavity:
            if config.n_cavities == 0:
                closed = 0.0
            else:
                closed = region_amplitude(j, config.idler, prof.lambda_pump)
        reports.append(RegionReport(j, center, ext_rate, kind, closed, ext_delay,
                                    int(members.size), bool(members.max() - members.min() > 0)))
    return reports


def deepest_valley(regions: list[RegionReport], tie_tol: float = 1e-4) -> RegionReport:
    """Valley with the lowest extremum; valleys within ``tie_tol`` of it count as tied
    and the lowest order among them wins."""
    valleys = [r for r in regions if r.kind is RegionKind.VALLEY]
    if not valleys:
        raise ValueError("no valleys among the regions")
    lowest = min(r.extremum_rate for r in valleys)
    tied = [r for r in valleys if r.extremum_rate <= lowest + tie_tol]
    return min(tied, key=lambda r: r.order)


def region_fwhm(curve: CoincidenceCurve, center: float, platform: float, sigma: float) -> float:
    """Full width at half deviation from the platform of the region around ``center``."""
    d, y = curve.delays, np.abs(curve.rates - platform)
    window = np.nonzero(np.abs(d - center) <= 4.0 * sigma)[0]
    k = int(window[np.argmax(y[window])])
    half = 0.5 * y[k]

    def crossing(step):
        i = k
        while 0 <= i + step < d.size and y[i + step] > half:
            i += step
        j = i + step
        if not 0 <= j < d.size:
            raise UndersampledError("region half-maximum lies outside the sweep")
        return d[i] + (half - y[i]) * (d[j] - d[i]) / (y[j] - y[i])

    return float(crossing(1) - crossing(-1))


def symmetry_score(curve: CoincidenceCurve) -> float:
    """max |N(delta) - N(-delta)| normalised by the pattern's full range."""
    d = curve.delays
    if d.size % 2 == 0:
        raise ValueError("symmetry_score needs an odd sample count (a sample at delta = 0)")
    span = d[-1] - d[0]
    if abs(d[0] + d[-1]) > 1e-9 * span or abs(d[d.size // 2]) > 1e-9 * span:
        raise ValueError("symmetry_score needs a sweep range symmetric about delta = 0")
    r = curve.rates
    spread = max(float(r.max() - r.min()), 1e-12)
    return float(np.max(np.abs(r - r[::-1]))) / spread


def xor_gate(bit_i: int, bit_s: int, base: InterferometerConfig, resonant_length: float,
             antiresonant_length: float, delta_max: float = 8e-12, n_samples: int = 1601,
             threshold: float = SYM_THRESHOLD,
             tol: SeriesTolerances = DEFAULT_TOLERANCES) -> XorResult:
    """Encode bit 0 as a resonant and bit 1 as an anti-resonant cavity in each arm.

    The output is read from the symmetry of the coincidence pattern:
    symmetric (SY) is 0, not symmetric (NS) is 1.
    """
    for b in (bit_i, bit_s):
        if b not in (0, 1):
            raise ValueError(f"input bits must be 0 or 1, got {b!r}")
    if n_samples % 2 == 0:
        n_samples += 1
    if base.idler_cavity is None or base.signal_cavity is None:
        raise ValueError("the XOR gate needs a cavity in each arm")
    lengths = (resonant_length, antiresonant_length)
    idler = replace(base.idler_cavity, length=lengths[bit_i])
    signal = replace(base.signal_cavity, length=lengths[bit_s])
    config = replace(base, idler_cavity=idler, signal_cavity=signal)
    curve = sweep(config, -delta_max, delta_max, n_samples, tol)
    score = symmetry_score(curve)
    symmetric = score < threshold
    return XorResult(int(bit_i), int(bit_s), score, 0 if symmetric else 1, "SY" if symmetric else "NS")
