"""Key/value run configuration: parsing, validation, and serialization.

Config files are plain text, one ``key = value`` per line, with ``#``
comments and blank lines ignored.  Unknown keys are rejected by name.
Relative paths inside a config (catalog, profile, measurement files) are
resolved against the directory containing the config file.
"""

from __future__ import annotations

from dataclasses import dataclass, field, fields
from pathlib import Path

from .fdsolver import GridSpec
from .model import InitialProfile, ProblemSpec, SeriesControl

__all__ = [
    "ConfigError",
    "RunConfig",
    "build_grid",
    "build_problem",
    "build_series_control",
    "load_catalog",
    "load_profile_file",
    "parse_config",
    "parse_config_text",
    "resolve_alpha2",
    "resolve_path",
    "serialize_config",
]


class ConfigError(ValueError):
    """Malformed, unknown, or inconsistent configuration input."""


@dataclass
class RunConfig:
    """Parsed configuration; None means the key was not given.

    Keys with built-in defaults (series controls, search bracket, noise
    level, forward model) always carry a value so the serialized form is
    the effective configuration.
    """

    length_m: float | None = None
    hot_end_C: float | None = None
    cold_end_C: float | None = None
    initial_C: float | None = None
    initial_profile_file: str | None = None
    dx_m: float | None = None
    dt_s: float | None = None
    t_final_s: float | None = None
    alpha2_m2s: float | None = None
    material: str | None = None
    catalog_file: str | None = None
    abs_term_tol: float = 1e-10
    min_terms: int = 10
    max_terms: int = 10000
    x0_m: float | None = None
    times_s: tuple[float, ...] | None = None
    sigma_C: float = 0.0
    seed: int | None = None
    bracket_lo: float = 1e-7
    bracket_hi: float = 1e-3
    rel_tol: float = 1e-6
    forward: str = "analytic"
    measurements_file: str | None = None
    base_dir: Path = field(default_factory=Path, compare=False)


def _parse_float(key: str, raw: str) -> float:
    try:
        return float(raw)
    except ValueError:
        raise ConfigError(f"key {key!r}: cannot parse {raw!r} as a number") from None


def _parse_int(key: str, raw: str) -> int:
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"key {key!r}: cannot parse {raw!r} as an integer") from None


def _parse_times(key: str, raw: str) -> tuple[float, ...]:
    parts = [p.strip() for p in raw.split(",") if p.strip()]
    if not parts:
        raise ConfigError(f"key {key!r}: needs at least one time value")
    return tuple(_parse_float(key, p) for p in parts)


_FLOAT_KEYS = {
    "length_m", "hot_end_C", "cold_end_C", "initial_C", "dx_m", "dt_s",
    "t_final_s", "alpha2_m2s", "abs_term_tol", "x0_m", "sigma_C",
    "bracket_lo", "bracket_hi", "rel_tol",
}
_INT_KEYS = {"min_terms", "max_terms", "seed"}
_STR_KEYS = {"material", "forward", "initial_profile_file", "catalog_file",
             "measurements_file"}

# Serialization order; every known key appears here exactly once.
_KEY_ORDER = (
    "length_m", "hot_end_C", "cold_end_C", "initial_C", "initial_profile_file",
    "dx_m", "dt_s", "t_final_s", "alpha2_m2s", "material", "catalog_file",
    "abs_term_tol", "min_terms", "max_terms", "x0_m", "times_s", "sigma_C",
    "seed", "bracket_lo", "bracket_hi", "rel_tol", "forward",
    "measurements_file",
)


def parse_config_text(text: str, base_dir: Path | str = ".") -> RunConfig:
    """Parse config content; see parse_config for the file-based wrapper."""
    cfg = RunConfig(base_dir=Path(base_dir))
    seen: set[str] = set()
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {line.strip()!r}")
        key, raw = (part.strip() for part in stripped.split("=", 1))
        if key in seen:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        seen.add(key)
        if key in _FLOAT_KEYS:
            setattr(cfg, key, _parse_float(key, raw))
        elif key in _INT_KEYS:
            setattr(cfg, key, _parse_int(key, raw))
        elif key in _STR_KEYS:
            setattr(cfg, key, raw)
        elif key == "times_s":
            cfg.times_s = _parse_times(key, raw)
        else:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
    _validate(cfg)
    return cfg


def parse_config(path: Path | str) -> RunConfig:
    """Parse a config file, resolving relative paths against its directory."""
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {p}: {exc}") from None
    return parse_config_text(text, base_dir=p.resolve().parent)


def _validate(cfg: RunConfig) -> None:
    if cfg.initial_C is not None and cfg.initial_profile_file is not None:
        raise ConfigError("give either initial_C or initial_profile_file, not both")
    if cfg.alpha2_m2s is not None and cfg.material is not None:
        raise ConfigError("give either alpha2_m2s or material, not both")
    if cfg.forward not in ("analytic", "fd"):
        raise ConfigError(f"key 'forward': must be 'analytic' or 'fd', got {cfg.forward!r}")
    if cfg.seed is not None and cfg.seed < 0:
        raise ConfigError("key 'seed': must be nonnegative")
    if cfg.sigma_C < 0.0:
        raise ConfigError("key 'sigma_C': must be nonnegative")


def _format_value(value) -> str:
    if isinstance(value, tuple):
        return ", ".join(repr(v) for v in value)
    if isinstance(value, float):
        return repr(value)
    return str(value)


def serialize_config(cfg: RunConfig) -> str:
    """Render the effective configuration; parses back to equal values."""
    lines = []
    for key in _KEY_ORDER:
        value = getattr(cfg, key)
        if value is None:
            continue
        lines.append(f"{key} = {_format_value(value)}")
    return "\n".join(lines) + "\n"


def resolve_path(cfg: RunConfig, name: str) -> Path:
    """Absolute path for a file-valued key, anchored at the config's dir."""
    raw = getattr(cfg, name)
    p = Path(raw)
    if not p.is_absolute():
        p = cfg.base_dir / p
    return p


def load_profile_file(path: Path | str) -> InitialProfile:
    """Read a tabulated initial profile from a CSV with header x_m,u_C."""
    p = Path(path)
    try:
        lines = p.read_text().splitlines()
    except OSError as exc:
        raise ConfigError(f"cannot read profile file {p}: {exc}") from None
    if not lines or lines[0].strip() != "x_m,u_C":
        raise ConfigError(f"profile file {p}: first line must be 'x_m,u_C'")
    points = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        cells = line.split(",")
        if len(cells) != 2:
            raise ConfigError(f"profile file {p} line {lineno}: expected two columns")
        try:
            points.append((float(cells[0]), float(cells[1])))
        except ValueError:
            raise ConfigError(f"profile file {p} line {lineno}: non-numeric cell") from None
    try:
        return InitialProfile.tabulated(points)
    except ValueError as exc:
        raise ConfigError(f"profile file {p}: {exc}") from None


def load_catalog(path: Path | str) -> dict[str, float]:
    """Read a material catalog: one ``name = alpha2_m2s`` per line."""
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read catalog file {p}: {exc}") from None
    catalog: dict[str, float] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigError(f"catalog {p} line {lineno}: expected 'name = value'")
        name, raw = (part.strip() for part in stripped.split("=", 1))
        if not name:
            raise ConfigError(f"catalog {p} line {lineno}: empty material name")
        if name in catalog:
            raise ConfigError(f"catalog {p} line {lineno}: duplicate material {name!r}")
        try:
            value = float(raw)
        except ValueError:
            raise ConfigError(
                f"catalog {p} line {lineno}: cannot parse {raw!r} as a number"
            ) from None
        if value <= 0.0:
            raise ConfigError(f"catalog {p} line {lineno}: alpha2 must be positive")
        catalog[name] = value
    if not catalog:
        raise ConfigError(f"catalog {p}: no materials found")
    return catalog


def _require(cfg: RunConfig, *keys: str) -> None:
    missing = [k for k in keys if getattr(cfg, k) is None]
    if missing:
        raise ConfigError("missing required key(s): " + ", ".join(missing))


def build_problem(cfg: RunConfig) -> ProblemSpec:
    """ProblemSpec from the geometry, boundary, and initial-condition keys."""
    _require(cfg, "length_m", "hot_end_C", "cold_end_C")
    if cfg.initial_C is not None:
        initial = InitialProfile.uniform(cfg.initial_C)
    elif cfg.initial_profile_file is not None:
        initial = load_profile_file(resolve_path(cfg, "initial_profile_file"))
    else:
        raise ConfigError("missing required key(s): initial_C or initial_profile_file")
    try:
        return ProblemSpec(
            length=cfg.length_m,
            hot_end=cfg.hot_end_C,
            cold_end=cfg.cold_end_C,
            initial=initial,
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def build_grid(cfg: RunConfig) -> GridSpec:
    """GridSpec from the lattice keys."""
    _require(cfg, "length_m", "dx_m", "dt_s", "t_final_s")
    try:
        return GridSpec(length=cfg.length_m, dx=cfg.dx_m, dt=cfg.dt_s,
                        t_final=cfg.t_final_s)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def build_series_control(cfg: RunConfig) -> SeriesControl:
    try:
        return SeriesControl(abs_term_tol=cfg.abs_term_tol,
                             min_terms=cfg.min_terms, max_terms=cfg.max_terms)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def resolve_alpha2(cfg: RunConfig) -> tuple[float, str]:
    """Diffusivity from alpha2_m2s or from a material catalog lookup.

    Returns the value and a short provenance string for reports.
    """
    if cfg.alpha2_m2s is not None:
        if cfg.alpha2_m2s <= 0.0:
            raise ConfigError("key 'alpha2_m2s': must be positive")
        return cfg.alpha2_m2s, "alpha2_m2s"
    if cfg.material is not None:
        if cfg.catalog_file is None:
            raise ConfigError("key 'material' needs catalog_file")
        catalog = load_catalog(resolve_path(cfg, "catalog_file"))
        if cfg.material not in catalog:
            known = ", ".join(sorted(catalog))
            raise ConfigError(f"material {cfg.material!r} not in catalog ({known})")
        return catalog[cfg.material], f"material {cfg.material}"
    raise ConfigError("missing required key(s): alpha2_m2s or material")


def _check_key_order() -> None:
    # Keeps _KEY_ORDER honest against the dataclass definition.
    declared = {f.name for f in fields(RunConfig)} - {"base_dir"}
    if declared != set(_KEY_ORDER):
        raise RuntimeError(f"config key tables out of sync: {declared ^ set(_KEY_ORDER)}")


_check_key_order()
