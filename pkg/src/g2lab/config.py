"""Scenario configuration: a single JSON file validated against a schema."""

import json
from dataclasses import dataclass, field, replace

import jsonschema

from .catalog import CATALOG, default_model
from .errors import ConfigError
from .report import VERDICTS

CHECKS = ("algebra", "grassmann", "theorem", "w_bundle")
DEFAULT_GRID = (64, 64)
DEFAULT_STEP = 1e-3

_NUMBER = {"type": "number"}

SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["surface"],
    "properties": {
        "model": {"enum": ["flat_r7", "cy_x_s1"]},
        "surface": {
            "type": "object",
            "additionalProperties": False,
            "required": ["name"],
            "properties": {
                "name": {"enum": sorted(CATALOG) + ["custom"]},
                "params": {"type": "object", "additionalProperties": _NUMBER},
                "expressions": {"type": "array", "items": {"type": "string"}, "minItems": 7, "maxItems": 7},
            },
        },
        "domain": {"type": "array", "items": _NUMBER, "minItems": 4, "maxItems": 4},
        "grid": {
            "oneOf": [
                {"type": "integer", "minimum": 4},
                {"type": "array", "items": {"type": "integer", "minimum": 4}, "minItems": 2, "maxItems": 2},
            ]
        },
        "fd_step": {"type": "number", "exclusiveMinimum": 0},
        "output": {"type": "string"},
        "checks": {"type": "array", "items": {"enum": list(CHECKS)}, "uniqueItems": True},
        "expect_verdict": {"enum": list(VERDICTS)},
    },
}


@dataclass(frozen=True)
class ScenarioConfig:
    surface: str
    model: str = "flat_r7"
    params: dict = field(default_factory=dict)
    expressions: tuple = None
    domain: tuple = None
    grid: tuple = DEFAULT_GRID
    fd_step: float = DEFAULT_STEP
    output: str = None
    checks: tuple = ("theorem",)
    expect_verdict: str = None

    def with_overrides(self, grid=None, step=None, out=None):
        cfg = self
        if grid is not None:
            cfg = replace(cfg, grid=_grid(grid))
        if step is not None:
            if not step > 0:
                raise ConfigError("fd_step must be positive")
            cfg = replace(cfg, fd_step=float(step))
        if out is not None:
            cfg = replace(cfg, output=out)
        return cfg


def _grid(g):
    g = (g, g) if isinstance(g, int) else tuple(g)
    if len(g) != 2 or any(not isinstance(x, int) or x < 4 for x in g):
        raise ConfigError("grid must be ≥ 4 per axis")
    return g


def _path(err):
    return "/".join(str(p) for p in err.absolute_path) or "<root>"


def validate_config(data):
    """Validate a decoded JSON object and apply defaults."""
    errors = sorted(jsonschema.Draft202012Validator(SCHEMA).iter_errors(data), key=lambda e: list(e.absolute_path))
    if errors:
        err = errors[0]
        if err.absolute_path and err.absolute_path[0] == "grid":
            raise ConfigError("grid must be ≥ 4 per axis")
        raise ConfigError(f"config error at {_path(err)}: {err.message}")
    surf = data["surface"]
    name = surf["name"]
    if name == "custom" and "expressions" not in surf:
        raise ConfigError("config error at surface: custom surface needs 'expressions'")
    if name != "custom" and "expressions" in surf:
        raise ConfigError("config error at surface: 'expressions' is only allowed with name 'custom'")
    if name != "custom":
        unknown = sorted(set(surf.get("params", {})) - set(CATALOG[name].defaults))
        if unknown:
            raise ConfigError(f"config error at surface/params: unknown parameter {unknown[0]!r} for {name!r}")
    domain = data.get("domain")
    if domain is not None and not (domain[0] < domain[1] and domain[2] < domain[3]):
        raise ConfigError("config error at domain: need u0 < u1 and v0 < v1")
    return ScenarioConfig(
        surface=name,
        model=data.get("model", default_model(name)),
        params=dict(surf.get("params", {})),
        expressions=tuple(surf["expressions"]) if "expressions" in surf else None,
        domain=tuple(domain) if domain is not None else None,
        grid=_grid(data.get("grid", list(DEFAULT_GRID))),
        fd_step=float(data.get("fd_step", DEFAULT_STEP)),
        output=data.get("output"),
        checks=tuple(data.get("checks", ["theorem"])),
        expect_verdict=data.get("expect_verdict"),
    )


def load_config(path):
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON in {path}: {exc}") from None
    return validate_config(data)
