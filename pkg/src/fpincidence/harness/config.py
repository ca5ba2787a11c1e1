"""Experiment configuration and its flat key=value file format.

A config file has one ``key = value`` per line; ``#`` starts a comment.
Keys are the ExperimentConfig field names.  List-valued keys take
comma-separated values, and list-valued sizes sweep (one instance per
value, or per pair for size_a x size_b).

    prime = 101
    generator = cartesian
    size_a = 4, 8, 16
    family = conics
    curves = 500
    seed = 7
    trials = 3
    bounds = conic-small, trivial-conic
"""

from __future__ import annotations

from dataclasses import dataclass, fields
from pathlib import Path
from typing import Any

from ..bounds import BoundId
from ..errors import UsageError
from ..field import is_prime

GENERATORS = ("uniform", "cartesian", "oncurve", "coset")
FAMILIES = ("lines", "conics", "cartesian-conics", "circles", "parabolas", "hyperbolas",
            "mobius", "spheres", "hyperplanes")


@dataclass(frozen=True)
class ExperimentConfig:
    prime: int = 101
    generator: str = "uniform"
    points: tuple[int, ...] = (100,)
    size_a: tuple[int, ...] = (8,)
    size_b: tuple[int, ...] = ()  # empty: same as size_a
    curve: tuple[int, ...] = ()  # conic coefficients for the oncurve generator; empty: random
    subgroup: tuple[int, ...] = (10,)  # order of the multiplicative subgroup for coset
    family: str = "conics"
    curves: int = 100
    coeff_set: int = 0  # size of the coefficient sets for cartesian-conics; 0: same as size_a
    dim: int = 2
    seed: int = 0
    trials: int = 1
    bounds: tuple[str, ...] = ()
    k: int = 5

    def __post_init__(self) -> None:
        validate(self)

    def bound_ids(self) -> list[BoundId]:
        return [BoundId.from_name(b) for b in self.bounds]


_LIST_FIELDS = {f.name for f in fields(ExperimentConfig) if f.name in
                ("points", "size_a", "size_b", "curve", "subgroup", "bounds")}


def validate(cfg: ExperimentConfig) -> None:
    if not is_prime(cfg.prime) or cfg.prime == 2:
        raise UsageError(f"prime must be an odd prime, got {cfg.prime}")
    if cfg.generator not in GENERATORS:
        raise UsageError(f"generator must be one of {', '.join(GENERATORS)}")
    if cfg.family not in FAMILIES:
        raise UsageError(f"family must be one of {', '.join(FAMILIES)}")
    for name in ("points", "size_a", "size_b", "subgroup"):
        if any(v <= 0 for v in getattr(cfg, name)):
            raise UsageError(f"{name} values must be positive")
    if cfg.curves < 0 or cfg.coeff_set < 0:
        raise UsageError("curve counts must be nonnegative")
    if cfg.trials < 0:
        raise UsageError("trials must be nonnegative")
    if cfg.dim < 1:
        raise UsageError("dim must be positive")
    if not 0 <= cfg.seed < 2 ** 64:
        raise UsageError("seed must fit in 64 bits")
    cfg.bound_ids()  # unknown names raise with the valid list


def _parse_value(name: str, raw: str) -> Any:
    raw = raw.strip()
    kind = {f.name: f.type for f in fields(ExperimentConfig)}[name]
    if name in _LIST_FIELDS:
        items = [s.strip() for s in raw.split(",") if s.strip()]
        if name == "bounds":
            return tuple(items)
        try:
            return tuple(int(s) for s in items)
        except ValueError:
            raise UsageError(f"{name} expects integers, got {raw!r}") from None
    if kind == "int":
        try:
            return int(raw, 0)
        except ValueError:
            raise UsageError(f"{name} expects an integer, got {raw!r}") from None
    return raw


def parse_config_text(text: str) -> dict[str, Any]:
    known = {f.name for f in fields(ExperimentConfig)}
    out: dict[str, Any] = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"config line {lineno}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in known:
            raise UsageError(f"config line {lineno}: unknown key {key!r}")
        out[key] = _parse_value(key, value)
    return out


def load_config(path: str | Path | None = None, **overrides: Any) -> ExperimentConfig:
    """Config from a file (optional) with keyword overrides applied on top; None overrides are ignored."""
    values: dict[str, Any] = {}
    if path is not None:
        try:
            text = Path(path).read_text()
        except OSError as e:
            raise UsageError(f"cannot read config {path}: {e}") from None
        values.update(parse_config_text(text))
    for k, v in overrides.items():
        if v is None:
            continue
        if k in _LIST_FIELDS and isinstance(v, (int, str)):
            v = _parse_value(k, str(v))
        values[k] = tuple(v) if isinstance(v, list) else v
    return ExperimentConfig(**values)


def dump_config(cfg: ExperimentConfig) -> str:
    lines = []
    for f in fields(cfg):
        v = getattr(cfg, f.name)
        lines.append(f"{f.name} = {', '.join(map(str, v)) if isinstance(v, tuple) else v}")
    return "\n".join(lines) + "\n"
