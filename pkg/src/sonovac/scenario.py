"""Scenario files, result envelopes and the computations behind each CLI command.

A scenario file is flat ``key = value`` text::

    # water bubble, Lorentzian collapse
    n = 1.3
    profile = model
    R0_um = 55.2
    Rmin_um = 0.5
    gamma_fs = 1

Keys carry their units (um, fs); everything is converted to SI on load.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Iterable

import numpy as np

from . import __version__, radiation
from .errors import InputError
from .numerics import DEFAULT_SPEC, QuadratureSpec
from .radiation import CollapseScenario, Medium
from .trajectory import TabulatedProfile, Trajectory

PROFILE_KEYS = {
    "model": ("R0_um", "Rmin_um", "gamma_fs"),
    "table": ("table_path",),
    "static": ("R_um",),
}
COMMON_KEYS = ("n", "profile", "window_scale", "omega_min", "omega_max", "samples")
ALL_KEYS = COMMON_KEYS + tuple(k for keys in PROFILE_KEYS.values() for k in keys)
SWEEP_KEYS = ("gamma_fs", "R0_um", "n")
SCALAR_FIELDS = ("W_total_J", "N_photons", "T_eff_K", "omega_peak_rad_s", "max_beta")
SPECTRUM_HEADER = "omega_rad_per_s,P_J_s,N_photons_s"

UM = 1e-6
FS = 1e-15


def fmt(x: float) -> str:
    """Fixed scientific notation, 9 significant digits."""
    return f"{x:.8e}"


@dataclass(frozen=True)
class ScenarioFile:
    n: float
    profile: str
    R0_um: float | None = None
    Rmin_um: float | None = None
    gamma_fs: float | None = None
    table_path: str | None = None
    R_um: float | None = None
    window_scale: float = 5.0
    omega_min: float | None = None
    omega_max: float | None = None
    samples: int = 512
    base_dir: Path = dataclasses.field(default=Path("."), compare=False)

    def __post_init__(self) -> None:
        if self.profile not in PROFILE_KEYS:
            raise InputError(f"profile must be one of {sorted(PROFILE_KEYS)}, got {self.profile!r}")
        for kind, keys in PROFILE_KEYS.items():
            for key in keys:
                present = getattr(self, key) is not None
                if kind == self.profile and not present:
                    raise InputError(f"profile {self.profile!r} requires key {key!r}")
                if kind != self.profile and present:
                    raise InputError(f"key {key!r} does not belong to profile {self.profile!r}")
        positive = ["n", "window_scale", "R0_um", "Rmin_um", "gamma_fs", "R_um", "omega_min", "omega_max"]
        for key in positive:
            value = getattr(self, key)
            if value is not None and not (math.isfinite(value) and value > 0):
                raise InputError(f"{key} must be positive and finite, got {value}")
        if self.n < 1:
            raise InputError(f"n must be >= 1, got {self.n}")
        if self.profile == "model" and not self.R0_um > self.Rmin_um:
            raise InputError(f"R0_um must exceed Rmin_um, got {self.R0_um} <= {self.Rmin_um}")
        if self.samples < 1:
            raise InputError(f"samples must be >= 1, got {self.samples}")
        if (self.omega_min is not None and self.omega_max is not None
                and not self.omega_min < self.omega_max):
            raise InputError("omega_min must be below omega_max")

    def canonical(self) -> dict[str, Any]:
        """Keys in file order with values as parsed, omitting unset optionals."""
        out: dict[str, Any] = {}
        for key in ALL_KEYS:
            value = getattr(self, key)
            if value is not None:
                out[key] = value
        return out

    def with_value(self, key: str, value: float) -> "ScenarioFile":
        if key not in SWEEP_KEYS:
            raise InputError(f"cannot sweep {key!r}; choose one of {SWEEP_KEYS}")
        if key != "n" and key not in PROFILE_KEYS[self.profile]:
            raise InputError(f"key {key!r} is not defined for profile {self.profile!r}")
        return dataclasses.replace(self, **{key: float(value)})

    def table_file(self) -> Path:
        path = Path(self.table_path)
        return path if path.is_absolute() else self.base_dir / path

    def to_scenario(self) -> CollapseScenario:
        medium = Medium(self.n)
        if self.profile == "model":
            traj = Trajectory.model(self.R0_um * UM, self.Rmin_um * UM, self.gamma_fs * FS,
                                    self.window_scale)
        elif self.profile == "table":
            try:
                traj = Trajectory.tabulated(TabulatedProfile.from_file(self.table_file()))
            except OSError as exc:
                raise InputError(f"cannot read table: {exc}") from None
        else:
            half = 5.0 * self.window_scale * FS
            traj = Trajectory.static(self.R_um * UM, (-half, half))
        return CollapseScenario(medium, traj)

    def input_hash(self) -> str:
        h = hashlib.sha256()
        for key, value in self.canonical().items():
            h.update(f"{key}={value!r}\n".encode())
        if self.profile == "table":
            try:
                h.update(self.table_file().read_bytes())
            except OSError as exc:
                raise InputError(f"cannot read table: {exc}") from None
        return h.hexdigest()


def _convert(key: str, raw: str, where: str):
    if key in ("profile", "table_path"):
        return raw
    try:
        if key == "samples":
            return int(raw)
        return float(raw)
    except ValueError:
        raise InputError(f"{where}: {key} expects a number, got {raw!r}") from None


def parse_scenario_text(text: str, base_dir: Path | str = ".", source: str = "<scenario>") -> ScenarioFile:
    values: dict[str, Any] = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        where = f"{source}:{lineno}"
        if "=" not in stripped:
            raise InputError(f"{where}: expected 'key = value'")
        key, raw = (part.strip() for part in stripped.split("=", 1))
        if key not in ALL_KEYS:
            raise InputError(f"{where}: unknown key {key!r}")
        if key in values:
            raise InputError(f"{where}: duplicate key {key!r}")
        values[key] = _convert(key, raw, where)
    for key in ("n", "profile"):
        if key not in values:
            raise InputError(f"{source}: missing required key {key!r}")
    return ScenarioFile(base_dir=Path(base_dir), **values)


def load_scenario(path: Path | str) -> ScenarioFile:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read scenario: {exc}") from None
    return parse_scenario_text(text, path.parent, str(path))


def compute_energy(sf: ScenarioFile, spec: QuadratureSpec = DEFAULT_SPEC) -> dict[str, Any]:
    """Envelope for the ``energy`` command."""
    scenario = sf.to_scenario()
    warnings = radiation.beta_warnings(scenario)
    energy = radiation.total_energy_trajectory(scenario, spec)
    scalars: dict[str, Any] = {"W_total_J": energy.W_trajectory}
    extra: dict[str, Any] = {}
    if scenario.trajectory.is_model:
        gamma = scenario.trajectory.profile.gamma
        w_spec = radiation.total_energy_spectral(scenario)
        scalars.update(
            N_photons=radiation.photon_count(scenario),
            T_eff_K=radiation.effective_temperature(gamma),
            omega_peak_rad_s=radiation.spectral_peak(gamma),
        )
        rel = abs(energy.W_trajectory - w_spec) / w_spec if w_spec else 0.0
        extra = {"W_spectral_J": w_spec, "W_relative_difference": rel}
    else:
        for key in ("N_photons", "T_eff_K", "omega_peak_rad_s"):
            scalars[key] = None
            warnings.append(f"{key} unavailable: closed-form spectrum requires profile = model")
    scalars["max_beta"] = scenario.trajectory.max_beta()
    return _envelope(sf, scalars, warnings, extra)


def compute_spectrum(sf: ScenarioFile) -> tuple[dict[str, Any], list[tuple[float, float, float]]]:
    """Envelope and table rows for the ``spectrum`` command."""
    scenario = sf.to_scenario()
    profile = scenario.model_profile()
    grid = radiation.default_omega_grid(profile.gamma, sf.samples, sf.omega_min, sf.omega_max)
    result = radiation.spectrum(scenario, grid)
    warnings = radiation.beta_warnings(scenario)
    scalars = {
        "W_total_J": result.W_spectral,
        "N_photons": result.N_total,
        "T_eff_K": result.T_eff,
        "omega_peak_rad_s": result.omega_peak,
        "max_beta": scenario.trajectory.max_beta(),
    }
    rows = list(zip(result.omega.tolist(), result.P.tolist(), result.N.tolist()))
    return _envelope(sf, scalars, warnings), rows


def parse_sweep(text: str) -> tuple[str, np.ndarray]:
    """``KEY=START:STOP:COUNT[:log]`` to ``(key, grid)``."""
    try:
        key, rng = text.split("=", 1)
        parts = rng.split(":")
        if len(parts) not in (3, 4) or (len(parts) == 4 and parts[3] != "log"):
            raise ValueError
        start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise InputError(f"sweep must look like KEY=START:STOP:COUNT[:log], got {text!r}") from None
    key = key.strip()
    if key not in SWEEP_KEYS:
        raise InputError(f"unknown sweep parameter {key!r}; choose one of {SWEEP_KEYS}")
    if not 1 <= count <= 10_000:
        raise InputError(f"sweep count must be in 1..10000, got {count}")
    if len(parts) == 4:
        if not (start > 0 and stop > 0):
            raise InputError("log sweeps need positive bounds")
        grid = np.geomspace(start, stop, count)
    else:
        grid = np.linspace(start, stop, count)
    return key, grid


def run_sweep(sf: ScenarioFile, key: str, grid: Iterable[float], spec: QuadratureSpec = DEFAULT_SPEC,
              jobs: int = 1) -> list[dict[str, Any]]:
    """Energy envelopes for each grid value, in grid order."""
    points = [sf.with_value(key, v) for v in grid]
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(lambda p: compute_energy(p, spec), points))
    return [compute_energy(p, spec) for p in points]


def _envelope(sf: ScenarioFile, scalars: dict[str, Any], warnings: list[str],
              extra: dict[str, Any] | None = None) -> dict[str, Any]:
    for key in SCALAR_FIELDS:
        value = scalars.get(key)
        if value is not None and not math.isfinite(value):
            scalars[key] = None
            warnings.append(f"{key} is not finite")
    env: dict[str, Any] = {"inputs": sf.canonical()}
    env.update({key: scalars.get(key) for key in SCALAR_FIELDS})
    env.update(extra or {})
    env["warnings"] = warnings
    env["version"] = __version__
    env["input_hash"] = sf.input_hash()
    return env


def render_json(value: Any, indent: int = 0) -> str:
    """JSON text with floats in fixed 9-digit scientific notation."""
    pad = "  " * (indent + 1)
    if isinstance(value, dict):
        if not value:
            return "{}"
        items = [f'{pad}{render_json(str(k))}: {render_json(v, indent + 1)}' for k, v in value.items()]
        return "{\n" + ",\n".join(items) + "\n" + "  " * indent + "}"
    if isinstance(value, (list, tuple)):
        if not value:
            return "[]"
        items = [pad + render_json(v, indent + 1) for v in value]
        return "[\n" + ",\n".join(items) + "\n" + "  " * indent + "]"
    if value is None:
        return "null"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return fmt(value)
    return json.dumps(str(value))


def write_spectrum_table(path: Path | str, rows: Iterable[tuple[float, float, float]]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(SPECTRUM_HEADER + "\n")
        for omega, p, n in rows:
            fh.write(f"{fmt(omega)},{fmt(p)},{fmt(n)}\n")


def write_sweep_table(path: Path | str, key: str, grid: Iterable[float], envelopes: list[dict[str, Any]]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join((key,) + SCALAR_FIELDS) + "\n")
        for value, env in zip(grid, envelopes):
            cells = [fmt(float(value))]
            cells += ["null" if env[f] is None else fmt(env[f]) for f in SCALAR_FIELDS]
            fh.write(",".join(cells) + "\n")
