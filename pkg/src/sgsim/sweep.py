"""Sweep declarations, flat config files and deterministic table output.

Tables are emitted with fixed formatting (17 significant digits,
scientific notation, "\n" line endings) so identical run configurations
produce byte-identical files.  Linear columns that underflow (overlaps of
order exp(-1e8)) are always accompanied by a log-domain column upstream,
so nothing is lost to serialization.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

__all__ = [
    "ConfigError",
    "SweepSpec",
    "parse_sweep",
    "parse_config_file",
    "sweep_points",
    "evaluate_rows",
    "thread_count",
    "format_cell",
    "rows_to_csv",
    "rows_to_json",
]

CONFIG_KEYS = ("lambda", "sigma0", "T", "k", "alpha2", "rho", "out", "format")


class ConfigError(ValueError):
    """A run configuration (flags, file or sweep spec) is invalid."""


@dataclass(frozen=True)
class SweepSpec:
    """One swept parameter: inclusive range, sample count, linear or log."""

    param: str
    start: float
    stop: float
    count: int
    log: bool = False

    def __post_init__(self):
        if self.count < 2:
            raise ConfigError(f"sweep over {self.param!r} needs count >= 2, got {self.count}")
        if not self.start < self.stop:
            raise ConfigError(
                f"sweep over {self.param!r} needs start < stop, got {self.start}..{self.stop}")
        if self.log and self.start <= 0.0:
            raise ConfigError(f"log sweep over {self.param!r} needs start > 0")

    def values(self) -> list[float]:
        if self.log:
            grid = np.logspace(math.log10(self.start), math.log10(self.stop), self.count)
        else:
            grid = np.linspace(self.start, self.stop, self.count)
        return [float(v) for v in grid]


def parse_sweep(text: str, param: str | None = None) -> SweepSpec:
    """Parse "param:start:stop:count[:log]" (or "start:stop:count[:log]")."""
    parts = text.split(":")
    if param is None:
        if len(parts) < 4:
            raise ConfigError(f"sweep spec {text!r} must be param:start:stop:count[:log]")
        param, parts = parts[0], parts[1:]
    if len(parts) not in (3, 4):
        raise ConfigError(f"sweep spec {text!r} must be start:stop:count[:log]")
    log = False
    if len(parts) == 4:
        if parts[3] != "log":
            raise ConfigError(f"sweep spec {text!r}: trailing token must be 'log'")
        log = True
    try:
        start, stop = float(parts[0]), float(parts[1])
        count = int(parts[2])
    except ValueError as exc:
        raise ConfigError(f"sweep spec {text!r}: {exc}") from None
    return SweepSpec(param, start, stop, count, log)


def parse_config_file(path: str) -> tuple[dict[str, str], list[SweepSpec]]:
    """Read a flat key = value file; sweep.<param> keys declare sweeps."""
    values: dict[str, str] = {}
    sweeps: list[SweepSpec] = []
    try:
        with open(path, "r", encoding="utf-8") as handle:
            lines = handle.readlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config file: {exc}") from None
    for lineno, line in enumerate(lines, start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
        key, _, value = stripped.partition("=")
        key, value = key.strip(), value.strip()
        if key.startswith("sweep."):
            sweeps.append(parse_sweep(value, param=key[len("sweep."):]))
        elif key in CONFIG_KEYS:
            values[key] = value
        else:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
    return values, sweeps


def sweep_points(sweeps: Sequence[SweepSpec],
                 integer_params: Iterable[str] = ("k",)) -> list[dict]:
    """Cartesian product of the sweeps, first sweep outermost."""
    integer_params = set(integer_params)
    points: list[dict] = [{}]
    for spec in sweeps:
        expanded = []
        for point in points:
            for value in spec.values():
                if spec.param in integer_params:
                    value = int(round(value))
                expanded.append({**point, spec.param: value})
        points = expanded
    return points


def thread_count() -> int:
    """Worker cap: SG_THREADS when set, else a small machine-based default."""
    env = os.environ.get("SG_THREADS")
    if env is not None:
        try:
            return max(1, int(env))
        except ValueError:
            raise ConfigError(f"SG_THREADS must be an integer, got {env!r}") from None
    return min(8, os.cpu_count() or 1)


def evaluate_rows(row_fn: Callable[[dict], dict], points: Sequence[dict],
                  max_workers: int | None = None) -> list[dict]:
    """Evaluate one row per sweep point; output order matches sweep order.

    Row functions are pure, so a thread pool only reorders the work, never
    the results: ``Executor.map`` returns in submission order regardless of
    completion order.
    """
    workers = thread_count() if max_workers is None else max_workers
    if workers <= 1 or len(points) < 2:
        return [row_fn(p) for p in points]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(row_fn, points))


def format_cell(value) -> str:
    """Fixed-width cell text: floats as 17 significant digits, scientific."""
    if isinstance(value, bool):
        return str(value)
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return f"{float(value) + 0.0:.16e}"  # + 0.0 normalizes -0.0
    return str(value)


def _json_cell(value) -> str:
    if isinstance(value, str):
        return '"' + value.replace("\\", "\\\\").replace('"', '\\"') + '"'
    return format_cell(value)


def rows_to_csv(fieldnames: Sequence[str], rows: Sequence[dict]) -> str:
    lines = [",".join(fieldnames)]
    lines.extend(",".join(format_cell(row[name]) for name in fieldnames) for row in rows)
    return "\n".join(lines) + "\n"


def rows_to_json(fieldnames: Sequence[str], rows: Sequence[dict]) -> str:
    """Array of flat row objects, serialized with the same cell formatting."""
    lines = ["["]
    last = len(rows) - 1
    for index, row in enumerate(rows):
        cells = ", ".join(f'"{name}": {_json_cell(row[name])}' for name in fieldnames)
        lines.append("  {" + cells + "}" + ("," if index != last else ""))
    lines.append("]")
    return "\n".join(lines) + "\n"
