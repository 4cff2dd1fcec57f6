"""Run configuration: desk defaults, INI files (one section per example) and flag overrides."""

from __future__ import annotations

import configparser
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import ConfigError

EXAMPLES = ("cylinder", "rigid-fluid-added", "rigid-fluid-shape", "pendulum", "regularity-so4", "sweep")
SWEEPABLE = ("cylinder", "rigid-fluid-added", "rigid-fluid-shape", "pendulum")


def parse_vector(text, length: int | None = None) -> list[float]:
    if isinstance(text, (list, tuple, np.ndarray)):
        vals = [float(v) for v in text]
    else:
        vals = [float(v) for v in str(text).replace(" ", "").split(",") if v != ""]
    if length is not None and len(vals) != length:
        raise ValueError(f"expected {length} comma-separated numbers, got {len(vals)}")
    if not all(np.isfinite(vals)):
        raise ValueError("non-finite entry")
    return vals


def parse_grid(text) -> list[float]:
    """'a:b:n' -> n equally spaced values from a to b; must be nondecreasing and start at 0."""
    if isinstance(text, (list, tuple)):
        grid = [float(v) for v in text]
    else:
        parts = str(text).split(":")
        if len(parts) != 3:
            raise ValueError(f"grid must look like a:b:n, got {text!r}")
        a, b, n = float(parts[0]), float(parts[1]), int(parts[2])
        if n < 0:
            raise ValueError("grid size must be nonnegative")
        grid = np.linspace(a, b, n).tolist()
    if not grid:
        raise ValueError("empty lambda grid")
    if grid[0] != 0.0:
        raise ValueError("lambda grid must start at 0")
    if any(y < x for x, y in zip(grid, grid[1:])):
        raise ValueError("lambda grid must be nondecreasing")
    return grid


def _pos(v):
    v = float(v)
    if not v > 0:
        raise ValueError("must be positive")
    return v


def _posint(v):
    f = float(v)
    if f != int(f) or f < 1:
        raise ValueError("must be a positive integer")
    return int(f)


def _nonneg_int(v):
    f = float(v)
    if f != int(f) or f < 0:
        raise ValueError("must be a nonnegative integer")
    return int(f)


def _finite(v):
    v = float(v)
    if not np.isfinite(v):
        raise ValueError("must be finite")
    return v


def _choice(*options):
    def parse(v):
        v = str(v).strip()
        if v not in options:
            raise ValueError(f"must be one of {', '.join(options)}")
        return v
    return parse


def _vec3(v):
    return parse_vector(v, 3)


def _optional_vec3(v):
    return None if v in (None, "", "none") else parse_vector(v, 3)


# key -> (parser, desk default); a default of None marks a required key
_SOLVER = {
    "tube": (_pos, 0.5),
    "seeds": (_posint, None),
    "seed": (_nonneg_int, 0),
    "tol": (_pos, 1e-10),
}
_FLUID = {
    "lambda": (_finite, 0.1),
    "casimir": (_pos, 1.0),
    "T": (_pos, 50.0),
    "dt": (_pos, 1e-2),
    "nu0": (_vec3, [0.2, 0.8, 0.6]),
    "offset": (_pos, 1e-6),
    "ball": (_pos, 1e-4),
}
SCHEMA: dict[str, dict] = {
    "cylinder": {"n": (_posint, 3), "lambda": (_finite, 0.05), **_SOLVER},
    "rigid-fluid-added": {"m": (_pos, 1.0), "I_B": (_pos, 1.0), "A": (_pos, 2.0), "B": (_pos, 1.0), **_FLUID, **_SOLVER},
    "rigid-fluid-shape": {"m": (_pos, 1.0), "I_B": (_pos, 1.0), "B": (_pos, 1.0), "rho": (_pos, 1.0), **_FLUID, **_SOLVER},
    "pendulum": {
        "s": (_pos, 1.0),
        "lambda": (_finite, 0.1),
        "s_min": (_pos, 0.2),
        "s_max": (_pos, 4.0),
        "samples": (_posint, 200),
        **_SOLVER,
    },
    "regularity-so4": {
        "subalgebra": (_choice("rot", "diag"), None),
        "chi": (_vec3, None),
        "rho": (_vec3, None),
        "xi": (_optional_vec3, "none"),
    },
}
# seeds has no default: None means "solver default"
_NO_DEFAULT_OK = {"seeds"}


def sweep_schema(example: str) -> dict:
    base = {k: v for k, v in SCHEMA[example].items() if k != "lambda"}
    return {"example": (_choice(*SWEEPABLE), None), "lambda_grid": (parse_grid, None), **base}


@dataclass
class RunConfig:
    example: str
    params: dict
    output_dir: Path
    defaulted: list[str] = field(default_factory=list)


def read_section(path, example: str) -> dict:
    """Raw key/value strings of section [example]; keys keep their case."""
    parser = configparser.ConfigParser()
    parser.optionxform = str
    try:
        ok = parser.read(path)
    except configparser.Error as exc:
        raise ConfigError(f"{path}: {exc}") from None
    if not ok:
        raise ConfigError(f"cannot read config file {path}")
    problems = [f"unknown section [{s}]" for s in parser.sections() if s not in EXAMPLES]
    if problems:
        raise ConfigError(problems)
    return dict(parser[example]) if parser.has_section(example) else {}


def build(example: str, file_values: dict, flag_values: dict, output_dir=".") -> RunConfig:
    """Merge desk defaults < file values < flags, validating every key; all problems are reported together."""
    if example not in EXAMPLES:
        raise ConfigError(f"unknown example {example!r}")
    if example == "sweep":
        target = flag_values.get("example") or file_values.get("example")
        if target not in SWEEPABLE:
            raise ConfigError(f"sweep needs example = one of {', '.join(SWEEPABLE)}")
        schema = sweep_schema(str(target).strip())
    else:
        schema = SCHEMA[example]
    problems = [f"unknown key {k!r}" for k in file_values if k not in schema]
    problems += [f"unknown option {k!r} for {example}" for k, v in flag_values.items() if v is not None and k not in schema]
    params, defaulted = {}, []
    for key, (parse, default) in schema.items():
        raw = flag_values.get(key)
        if raw is None:
            raw = file_values.get(key)
        if raw is None:
            if default is None and key not in _NO_DEFAULT_OK:
                problems.append(f"missing required key {key!r}")
                continue
            params[key] = parse(default) if default is not None else None
            defaulted.append(key)
            continue
        try:
            params[key] = parse(raw)
        except (TypeError, ValueError) as exc:
            problems.append(f"bad value for {key!r} ({raw!r}): {exc}")
    if not problems:
        problems += _cross_checks(example, params)
    if problems:
        raise ConfigError(problems)
    return RunConfig(example, params, Path(output_dir), defaulted)


def _cross_checks(example, p) -> list[str]:
    out = []
    target = p.get("example", example)
    if target == "rigid-fluid-added" and not p["A"] > p["B"]:
        out.append("rigid-fluid-added needs A > B")
    if target == "pendulum" and not p["s_max"] > p["s_min"]:
        out.append("s_max must exceed s_min")
    return out
