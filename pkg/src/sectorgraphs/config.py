"""Flat key = value run configuration with a lossless round trip.

The file format is one ``key = value`` pair per line, ``#`` comments and
blank lines ignored. List values (``a_sets``, ``n_grid``, ``r_grid``) are
comma separated. ``alpha`` accepts plain radians or ``pi`` expressions
such as ``pi``, ``2pi``, ``pi/2`` or ``0.5pi``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, fields, replace

from .degree_sets import DegreeSet
from .model import ModelParams
from .theory import radius_for_mean_degree


class ConfigError(ValueError):
    """Invalid or inconsistent run configuration."""


_PI_FORM = re.compile(r"^\s*([0-9.]*)\s*\*?\s*pi\s*(?:/\s*([0-9.]+))?\s*$", re.IGNORECASE)


def parse_alpha(text: str) -> float:
    m = _PI_FORM.match(text)
    if m:
        coef = float(m.group(1)) if m.group(1) else 1.0
        div = float(m.group(2)) if m.group(2) else 1.0
        return coef * math.pi / div
    try:
        return float(text)
    except ValueError as exc:
        raise ConfigError(f"alpha: cannot parse {text!r}") from exc


@dataclass(frozen=True)
class RunConfig:
    n: int = 1000
    alpha: float = math.pi
    r: float | None = None
    mu_target: float | None = None
    v: float = 0.0
    q: float = 0.0
    mode: str = "binomial"
    seed: int = 0
    trials: int = 1000
    parallelism: int = 1
    epsilon: float = 1.0
    slack: float = 0.08
    side: str = "both"
    a_sets: tuple[str, ...] = ()
    out: str | None = None
    outer_samples: int = 2000
    area_samples: int = 4000
    ew_samples: int = 20000
    trunc_cap: float = 1e-8
    n_grid: tuple[int, ...] = ()
    r_grid: tuple[float, ...] = ()

    def sides(self) -> tuple[str, ...]:
        return ("out", "in") if self.side == "both" else (self.side,)

    def modes(self) -> tuple[str, ...]:
        return ("binomial", "poisson") if self.mode == "both" else (self.mode,)


_INT_FIELDS = {"n", "seed", "trials", "parallelism", "outer_samples", "area_samples", "ew_samples"}
_FLOAT_FIELDS = {"r", "mu_target", "v", "q", "epsilon", "slack", "trunc_cap"}
_STR_FIELDS = {"mode", "side", "out"}


def _parse_value(key: str, raw: str):
    raw = raw.strip()
    if key == "alpha":
        return parse_alpha(raw)
    if key in _INT_FIELDS:
        return int(raw)
    if key in _FLOAT_FIELDS:
        return float(raw)
    if key in _STR_FIELDS:
        return raw
    if key == "a_sets":
        return tuple(s.strip() for s in raw.split(",") if s.strip())
    if key == "n_grid":
        return tuple(int(s) for s in raw.split(",") if s.strip())
    if key == "r_grid":
        return tuple(float(s) for s in raw.split(",") if s.strip())
    raise ConfigError(f"unknown configuration key {key!r}")


def parse_config_text(text: str) -> RunConfig:
    values = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        if "=" not in body:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {line!r}")
        key, raw = body.split("=", 1)
        key = key.strip()
        try:
            values[key] = _parse_value(key, raw)
        except ConfigError:
            raise
        except ValueError as exc:
            raise ConfigError(f"{key}: cannot parse {raw.strip()!r}") from exc
    try:
        return RunConfig(**values)
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc


def load_config(path) -> RunConfig:
    with open(path) as fh:
        return parse_config_text(fh.read())


def serialize_config(cfg: RunConfig) -> str:
    """Canonical text form; ``parse_config_text`` inverts it exactly."""
    lines = []
    for f in fields(cfg):
        val = getattr(cfg, f.name)
        if val is None:
            continue
        if f.name in ("a_sets",):
            if not val:
                continue
            rendered = ",".join(val)
        elif f.name in ("n_grid", "r_grid"):
            if not val:
                continue
            rendered = ",".join(repr(v) if isinstance(v, float) else str(v) for v in val)
        elif isinstance(val, float):
            rendered = repr(val)
        else:
            rendered = str(val)
        lines.append(f"{f.name} = {rendered}")
    return "\n".join(lines) + "\n"


def apply_overrides(cfg: RunConfig, overrides: dict) -> RunConfig:
    clean = {k: v for k, v in overrides.items() if v is not None}
    if not clean:
        return cfg
    return replace(cfg, **clean)


def validate_config(cfg: RunConfig, need_radius: bool = True) -> None:
    """Field-specific validation; raises ConfigError naming the field."""
    if need_radius and (cfg.r is None) == (cfg.mu_target is None):
        raise ConfigError("exactly one of 'r' and 'mu_target' must be provided")
    if cfg.mode not in ("binomial", "poisson", "both"):
        raise ConfigError("mode: must be binomial, poisson or both")
    if cfg.side not in ("out", "in", "both"):
        raise ConfigError("side: must be out, in or both")
    if cfg.trials < 1:
        raise ConfigError("trials: must be >= 1")
    if cfg.parallelism < 1:
        raise ConfigError("parallelism: must be >= 1")
    if cfg.slack < 0:
        raise ConfigError("slack: must be >= 0")
    if cfg.epsilon <= 0:
        raise ConfigError("epsilon: must be > 0")
    if not (0 < cfg.trunc_cap < 1):
        raise ConfigError("trunc_cap: must lie in (0, 1)")
    for descriptor in cfg.a_sets:
        try:
            DegreeSet.parse(descriptor)
        except ValueError as exc:
            raise ConfigError(f"a_sets: {exc}") from exc
    probe = cfg.r if cfg.r is not None else 0.01
    try:
        ModelParams(
            n=cfg.n,
            alpha=cfg.alpha,
            r=probe,
            v=cfg.v,
            q=cfg.q,
            mode="binomial",
            master_seed=cfg.seed,
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def resolve_params(cfg: RunConfig, mode: str) -> ModelParams:
    """Build ModelParams, deriving the radius from ``mu_target`` if needed."""
    if cfg.r is not None:
        r = cfg.r
    else:
        r = radius_for_mean_degree(cfg.n, cfg.alpha, cfg.v, cfg.q, cfg.mu_target)
    try:
        return ModelParams(
            n=cfg.n, alpha=cfg.alpha, r=r, v=cfg.v, q=cfg.q, mode=mode,
            master_seed=cfg.seed,
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
