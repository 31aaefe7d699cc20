"""Strict parsing of the sectioned key-value run configuration.

Every key is validated against a fixed schema: unknown sections or keys
are rejected by name, and every physical invariant violation reports the
offending key together with the violated bound.  See the README for the
full key reference.
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .lattice import CouplingCalibration, OpticalConstants
from .model import FullState, RabiParams

OUTPUT_KINDS = ("timeseries", "intensity_map", "recipe")

_MODEL_KEYS = {"omega0", "omega", "g", "n_trunc", "initial", "initial_e", "initial_g"}
_GRID_KEYS = {"t_max", "dt"}
_OUTPUT_KEYS = {"outputs", "dir"}
_DESIGN_KEYS = {
    "n_guides",
    "kappa0", "gamma", "d_ref", "d_min", "d_max",
    "n_eff_base", "wavelength_nm", "radius_mm", "dn_dv",
    "v_base", "v_min", "v_max",
}
_SECTIONS = {
    "model": _MODEL_KEYS,
    "grid": _GRID_KEYS,
    "output": _OUTPUT_KEYS,
    "design": _DESIGN_KEYS,
}


class ConfigError(ValueError):
    """Malformed or invalid run configuration."""


@dataclass(frozen=True)
class DesignConfig:
    calibration: CouplingCalibration
    optics: OpticalConstants
    n_guides: int


@dataclass(frozen=True)
class RunConfig:
    params: RabiParams
    initial: FullState
    t_max: float
    dt: float | None              # None: command-specific default applies
    outputs: frozenset[str]
    output_dir: Path
    design: DesignConfig | None


def _float(section: str, key: str, raw: str) -> float:
    try:
        return float(raw)
    except ValueError:
        raise ConfigError(f"{section}.{key}: not a number: {raw!r}") from None


def _int(section: str, key: str, raw: str) -> int:
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"{section}.{key}: not an integer: {raw!r}") from None


def _amplitudes(section: str, key: str, raw: str, n_trunc: int) -> np.ndarray:
    out = np.zeros(n_trunc, dtype=complex)
    items = [s.strip() for s in raw.split(",") if s.strip()]
    if len(items) > n_trunc:
        raise ConfigError(
            f"{section}.{key}: {len(items)} amplitudes exceed n_trunc = {n_trunc}"
        )
    for i, item in enumerate(items):
        try:
            out[i] = complex(item)
        except ValueError:
            raise ConfigError(f"{section}.{key}: bad complex number: {item!r}") from None
    return out


def _build_initial(section: dict[str, str], params: RabiParams) -> FullState:
    has_label = "initial" in section
    has_lists = "initial_e" in section or "initial_g" in section
    if has_label and has_lists:
        raise ConfigError("model.initial and model.initial_e/initial_g are exclusive")
    if has_lists:
        amp_e = _amplitudes("model", "initial_e", section.get("initial_e", ""), params.n_trunc)
        amp_g = _amplitudes("model", "initial_g", section.get("initial_g", ""), params.n_trunc)
        try:
            return FullState(amp_e, amp_g)
        except ValueError as exc:
            raise ConfigError(f"model.initial_e/initial_g: {exc}") from None
    label = section.get("initial", "e0").strip()
    branch, idx = label[:1], label[1:]
    if branch not in ("e", "g") or not idx.isdigit():
        raise ConfigError(
            f"model.initial: expected a qubit branch plus Fock index "
            f"(e.g. 'e0', 'g3'), got {label!r}"
        )
    m = int(idx)
    if m >= params.n_trunc:
        raise ConfigError(
            f"model.initial: Fock index {m} must be < n_trunc = {params.n_trunc}"
        )
    return FullState.basis_state(branch, m, params.n_trunc)


def parse_config(text: str) -> RunConfig:
    """Parse and fully validate a configuration; raises ConfigError."""
    parser = configparser.ConfigParser(interpolation=None)
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"syntax error: {exc}") from None

    for name in parser.sections():
        if name not in _SECTIONS:
            raise ConfigError(f"unknown section [{name}]")
        for key in parser[name]:
            if key not in _SECTIONS[name]:
                raise ConfigError(f"unknown key {key!r} in [{name}]")

    if not parser.has_section("model"):
        raise ConfigError("missing required section [model]")
    model = dict(parser["model"])
    for key in ("omega", "g", "n_trunc"):
        if key not in model:
            raise ConfigError(f"model.{key} is required")

    omega = _float("model", "omega", model["omega"])
    if not omega > 0:
        raise ConfigError(f"model.omega: must be > 0, got {omega}")
    g = _float("model", "g", model["g"])
    if g < 0:
        raise ConfigError(f"model.g: must be >= 0, got {g}")
    n_trunc = _int("model", "n_trunc", model["n_trunc"])
    if n_trunc < 2:
        raise ConfigError(f"model.n_trunc: must be >= 2, got {n_trunc}")
    omega0 = _float("model", "omega0", model.get("omega0", "0"))
    params = RabiParams(omega0=omega0, omega=omega, g=g, n_trunc=n_trunc)
    initial = _build_initial(model, params)

    grid = dict(parser["grid"]) if parser.has_section("grid") else {}
    if "t_max" not in grid:
        raise ConfigError("grid.t_max is required")
    t_max = _float("grid", "t_max", grid["t_max"])
    if not t_max > 0:
        raise ConfigError(f"grid.t_max: must be > 0, got {t_max}")
    dt = None
    if "dt" in grid:
        dt = _float("grid", "dt", grid["dt"])
        if not dt > 0:
            raise ConfigError(f"grid.dt: must be > 0, got {dt}")
        if t_max < dt:
            raise ConfigError(f"grid.t_max: must be >= dt, got t_max={t_max}, dt={dt}")

    out = dict(parser["output"]) if parser.has_section("output") else {}
    if "outputs" in out:
        kinds = [s.strip() for s in out["outputs"].split(",") if s.strip()]
        for kind in kinds:
            if kind not in OUTPUT_KINDS:
                raise ConfigError(
                    f"output.outputs: unknown kind {kind!r}, expected one of {OUTPUT_KINDS}"
                )
        outputs = frozenset(kinds)
    else:
        outputs = frozenset({"timeseries", "intensity_map"})
    output_dir = Path(out.get("dir", "out"))

    design = None
    if parser.has_section("design"):
        d = dict(parser["design"])
        if "n_guides" not in d:
            raise ConfigError("design.n_guides is required when [design] is present")
        n_guides = _int("design", "n_guides", d["n_guides"])
        if n_guides < 2:
            raise ConfigError(f"design.n_guides: must be >= 2, got {n_guides}")
        cal_default = CouplingCalibration.default()
        oc_default = OpticalConstants()
        try:
            cal = CouplingCalibration(
                kappa0=_float("design", "kappa0", d["kappa0"]) if "kappa0" in d else cal_default.kappa0,
                gamma=_float("design", "gamma", d["gamma"]) if "gamma" in d else cal_default.gamma,
                d_ref=_float("design", "d_ref", d["d_ref"]) if "d_ref" in d else cal_default.d_ref,
                d_min=_float("design", "d_min", d["d_min"]) if "d_min" in d else cal_default.d_min,
                d_max=_float("design", "d_max", d["d_max"]) if "d_max" in d else cal_default.d_max,
            )
            oc = OpticalConstants(
                n_eff_base=_float("design", "n_eff_base", d["n_eff_base"]) if "n_eff_base" in d else oc_default.n_eff_base,
                wavelength_nm=_float("design", "wavelength_nm", d["wavelength_nm"]) if "wavelength_nm" in d else oc_default.wavelength_nm,
                radius_mm=_float("design", "radius_mm", d["radius_mm"]) if "radius_mm" in d else oc_default.radius_mm,
                dn_dv=_float("design", "dn_dv", d["dn_dv"]) if "dn_dv" in d else oc_default.dn_dv,
                v_base=_float("design", "v_base", d["v_base"]) if "v_base" in d else oc_default.v_base,
                v_min=_float("design", "v_min", d["v_min"]) if "v_min" in d else oc_default.v_min,
                v_max=_float("design", "v_max", d["v_max"]) if "v_max" in d else oc_default.v_max,
            )
        except ValueError as exc:
            raise ConfigError(f"design: {exc}") from None
        design = DesignConfig(calibration=cal, optics=oc, n_guides=n_guides)

    return RunConfig(
        params=params,
        initial=initial,
        t_max=t_max,
        dt=dt,
        outputs=outputs,
        output_dir=output_dir,
        design=design,
    )


def load_config(path: str | Path) -> RunConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from None
    return parse_config(text)
