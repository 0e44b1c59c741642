"""Command-line front end.

Usage::

    homcavity MODE [--config FILE] [--key value ...]

MODE is one of sweep, cavity-sweep, reflectance-sweep, regions, platform,
xor, verify.  Settings come from a flat ``key = value`` file and are
overridden by flags of the same name.  Units are carried in the key suffix
(nm, mm, ps).  Exit status: 0 ok, 1 usage or configuration error, 2 numerical
failure.
"""
from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from . import analysis, io, kernels, oracle, series
from .model import Cavity, InterferometerConfig, SpectralProfile

log = logging.getLogger("homcavity")

MODES = ("sweep", "cavity-sweep", "reflectance-sweep", "regions", "platform", "xor", "verify")

VERIFY_TOLERANCE = 1e-6

# key -> (type, default)
KEYS = {
    "mode": (str, None),
    "lambda_nm": (float, 826.2),
    "pump_lambda_nm": (float, None),
    "delta_lambda_nm": (float, 8.0),
    "idler_L_mm": (float, None),
    "idler_R": (float, None),
    "idler_T": (float, None),
    "signal_L_mm": (float, None),
    "signal_R": (float, None),
    "signal_T": (float, None),
    "delta_min_ps": (float, None),
    "delta_max_ps": (float, None),
    "samples": (int, None),
    "delay_ps": (float, None),
    "L_min_mm": (float, None),
    "L_max_mm": (float, None),
    "R_min": (float, None),
    "R_max": (float, None),
    "bit_idler": (int, None),
    "bit_signal": (int, None),
    "L_res_mm": (float, None),
    "L_anti_mm": (float, None),
    "flat_tol": (float, None),
    "sym_threshold": (float, analysis.SYM_THRESHOLD),
    "eps_weight": (float, series.DEFAULT_TOLERANCES.eps_weight),
    "eps_envelope": (float, series.DEFAULT_TOLERANCES.eps_envelope),
    "quad_points": (int, oracle.QuadratureSpec().n_points),
    "perturb": (float, 0.0),
    "output": (str, None),
}

REQUIRED = {
    "sweep": ("delta_min_ps", "delta_max_ps", "samples"),
    "regions": ("delta_min_ps", "delta_max_ps", "samples"),
    "cavity-sweep": ("idler_R", "L_min_mm", "L_max_mm", "samples", "delay_ps"),
    "reflectance-sweep": ("idler_L_mm", "R_min", "R_max", "samples", "delay_ps"),
    "platform": ("idler_L_mm", "idler_R", "delay_ps"),
    "xor": ("bit_idler", "bit_signal", "L_res_mm", "L_anti_mm", "idler_R"),
    "verify": (),
}


class ConfigError(ValueError):
    pass


class NumericalFailure(RuntimeError):
    pass


def parse_config_text(text: str) -> dict:
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    values = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key = value, got {raw.strip()!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        values[key.replace("-", "_")] = value
    return values


def coerce(values: dict) -> dict:
    out = {key: default for key, (_, default) in KEYS.items()}
    for key, value in values.items():
        if value is None:
            continue
        if key not in KEYS:
            raise ConfigError(f"unknown key {key!r}")
        kind = KEYS[key][0]
        try:
            out[key] = kind(value)
        except ValueError:
            raise ConfigError(f"{key}: cannot parse {value!r} as {kind.__name__}") from None
    return out


@dataclass(frozen=True)
class RunConfig:
    mode: str
    values: dict

    def __getattr__(self, key):
        try:
            return self.__dict__["values"][key]
        except KeyError:
            raise AttributeError(key) from None

    @classmethod
    def from_values(cls, values: dict) -> "RunConfig":
        merged = coerce(values)
        mode = merged["mode"]
        if mode not in MODES:
            raise ConfigError(f"mode must be one of {', '.join(MODES)}; got {mode!r}")
        missing = [k for k in REQUIRED[mode] if merged[k] is None]
        if missing:
            raise ConfigError(f"mode {mode} requires {', '.join(missing)}")
        return cls(mode, merged)

    def profile(self) -> SpectralProfile:
        lam = self.lambda_nm * 1e-9
        pump = self.pump_lambda_nm * 1e-9 if self.pump_lambda_nm is not None else lam / 2.0
        return SpectralProfile(lam, pump, self.delta_lambda_nm * 1e-9)

    def _cavity(self, arm: str) -> Optional[Cavity]:
        L, R, T = (self.values[f"{arm}_{k}"] for k in ("L_mm", "R", "T"))
        if L is None and R is None:
            return None
        if R is None:
            raise ConfigError(f"{arm}_L_mm given without {arm}_R")
        return Cavity((L or 0.0) * 1e-3, R, T)

    def interferometer(self) -> InterferometerConfig:
        return InterferometerConfig(self.profile(), self._cavity("idler"), self._cavity("signal"))

    def tolerances(self) -> series.SeriesTolerances:
        return series.SeriesTolerances(self.eps_weight, self.eps_envelope)

    def delay_grid(self) -> tuple[float, float, int]:
        return self.delta_min_ps * 1e-12, self.delta_max_ps * 1e-12, self.samples


def _sweep(run: RunConfig):
    curve = series.sweep(run.interferometer(), *run.delay_grid(), run.tolerances())
    return io.curve_csv(curve)


def _cavity_sweep(run: RunConfig):
    config = run.interferometer()
    lengths = np.linspace(run.L_min_mm, run.L_max_mm, run.samples)
    base = config.idler_cavity or Cavity(0.0, run.idler_R, run.idler_T)
    rates = [series.rate(replace(config, idler_cavity=replace(base, length=L * 1e-3)),
                         run.delay_ps * 1e-12, run.tolerances()) for L in lengths]
    return io.table_csv(("cavity_length_mm", "rate"), lengths, rates)


def _reflectance_sweep(run: RunConfig):
    config = InterferometerConfig(run.profile(), None, run._cavity("signal"))
    refl = np.linspace(run.R_min, run.R_max, run.samples)
    L = run.idler_L_mm * 1e-3
    rates = [series.rate(replace(config, idler_cavity=Cavity(L, R)), run.delay_ps * 1e-12,
                         run.tolerances()) for R in refl]
    return io.table_csv(("reflectance", "rate"), refl, rates)


def _regions(run: RunConfig):
    config = run.interferometer()
    curve = series.sweep(config, *run.delay_grid(), run.tolerances())
    regions = analysis.detect_regions(curve, config, run.flat_tol, run.tolerances())
    return io.to_json({"regions": [r.to_dict() for r in regions]})


def _platform(run: RunConfig):
    config = run.interferometer()
    value = series.rate(config, run.delay_ps * 1e-12, run.tolerances())
    single = config.signal_cavity is None
    closed = analysis.platform_one_cavity(config.idler) if single else None
    return io.to_json({"closed_form": closed, "delay_ps": run.delay_ps, "platform": value})


def _xor(run: RunConfig):
    signal_R = run.signal_R if run.signal_R is not None else run.idler_R
    profile = run.profile()
    base = InterferometerConfig(profile, Cavity(run.L_res_mm * 1e-3, run.idler_R, run.idler_T),
                                Cavity(run.L_res_mm * 1e-3, signal_R, run.signal_T))
    kwargs = {}
    if run.delta_max_ps is not None:
        kwargs["delta_max"] = run.delta_max_ps * 1e-12
    if run.samples is not None:
        kwargs["n_samples"] = run.samples
    result = analysis.xor_gate(run.bit_idler, run.bit_signal, base, run.L_res_mm * 1e-3,
                               run.L_anti_mm * 1e-3, threshold=run.sym_threshold,
                               tol=run.tolerances(), **kwargs)
    return io.to_json(result.to_dict())


def _verify(run: RunConfig):
    config = run.interferometer()
    lo = run.delta_min_ps if run.delta_min_ps is not None else -2.0
    hi = run.delta_max_ps if run.delta_max_ps is not None else 8.0
    n = run.samples if run.samples is not None else 50
    delays = np.linspace(lo, hi, n) * 1e-12
    spec = oracle.QuadratureSpec(run.quad_points)
    expected = np.asarray(series.rate(config, delays, run.tolerances())) * (1.0 + run.perturb)
    try:
        spectral = oracle.rate_spectral(config, delays, spec)
    except oracle.QuadratureConvergenceError as exc:
        raise NumericalFailure(str(exc)) from exc
    rel = np.abs(spectral - expected) / np.maximum(expected, 1e-6)
    worst = float(rel.max())
    report = {
        "backend": kernels.BACKEND,
        "max_relative_error": worst,
        "n_delays": int(n),
        "oracle": oracle.metadata(spec),
        "passed": worst <= VERIFY_TOLERANCE,
        "perturb": run.perturb,
        "tolerance": VERIFY_TOLERANCE,
        "worst_delay_ps": float(delays[int(rel.argmax())] * 1e12),
    }
    text = io.to_json(report)
    if not report["passed"]:
        raise NumericalFailure(f"oracle mismatch {worst:.3g} exceeds {VERIFY_TOLERANCE:g}", text)
    return text


HANDLERS = {
    "sweep": _sweep,
    "cavity-sweep": _cavity_sweep,
    "reflectance-sweep": _reflectance_sweep,
    "regions": _regions,
    "platform": _platform,
    "xor": _xor,
    "verify": _verify,
}


def _emit(text: str, output: Optional[str]):
    if output is None:
        sys.stdout.write(text)
    else:
        with open(output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def run(config: RunConfig) -> int:
    """Execute one mode; returns the process exit status."""
    try:
        text = HANDLERS[config.mode](config)
    except NumericalFailure as exc:
        if len(exc.args) > 1:
            _emit(exc.args[1], config.output)
        print(f"homcavity: {exc.args[0]}", file=sys.stderr)
        return 2
    except (analysis.UndersampledError, oracle.QuadratureConvergenceError) as exc:
        print(f"homcavity: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"homcavity: invalid configuration: {exc}", file=sys.stderr)
        return 1
    _emit(text, config.output)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="homcavity", description=__doc__.split("\n\n")[0])
    parser.add_argument("mode", nargs="?", choices=MODES)
    parser.add_argument("--config", help="key = value settings file")
    for key, (kind, _) in KEYS.items():
        if key == "mode":
            continue
        parser.add_argument(f"--{key}", type=str, default=None, metavar=kind.__name__.upper())
    return parser


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(name)s: %(message)s")
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code else 0
    values = {}
    try:
        if args.config:
            with open(args.config, encoding="utf-8") as fh:
                values.update(parse_config_text(fh.read()))
        flags = {k: v for k, v in vars(args).items() if k not in ("config", "mode") and v is not None}
        values.update(flags)
        if args.mode is not None:
            values["mode"] = args.mode
        config = RunConfig.from_values(values)
    except (OSError, ConfigError) as exc:
        print(f"homcavity: {exc}", file=sys.stderr)
        return 1
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
