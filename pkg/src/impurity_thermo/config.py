"""Run configuration: INI file with sections mirroring :class:`RunConfig`.

Example::

    [system]
    statistics = both        ; bose | fermi | both
    omega_s = 1.0            ; bosonic oscillator frequency
    epsilon_s = -1.0         ; fermionic level energy

    [bath]
    eta = 0.4
    gamma = 4.0

    [grids]
    omega_min = -6
    omega_max = 6
    omega_points = 2401
    varpi_max = 6
    varpi_points = 601
    t_min = 0.02
    t_max = 100
    t_points = 200
    t_spacing = log          ; log | linear
    jump_epsilon = 1e-9      ; in units of omega_s

    [tolerances]
    route_equiv = 1e-6
    equal_area = 1e-6
    third_law = 1e-3
    third_law_temperature = 1e-3

    [sum]
    n_terms = auto           ; auto | positive integer
    tail = euler_maclaurin   ; euler_maclaurin | power_law | none
"""
from __future__ import annotations

import configparser
import math
import re
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Optional

import numpy as np

from .bath import DrudeBath
from .bo_bosonic import BosonicBO
from .bo_fermionic import FermionicBO
from .errors import ConfigError, Unstable
from .statfun import Statistics
from .thermo import SumConfig

__all__ = ["RunConfig", "load_config", "parse_config"]

_SCHEMA = {
    "system": {"statistics", "omega_s", "epsilon_s"},
    "bath": {"eta", "gamma"},
    "grids": {"omega_min", "omega_max", "omega_points", "varpi_max", "varpi_points",
              "t_min", "t_max", "t_points", "t_spacing", "jump_epsilon"},
    "tolerances": {"route_equiv", "equal_area", "third_law", "third_law_temperature"},
    "sum": {"n_terms", "tail"},
}


@dataclass(frozen=True)
class RunConfig:
    statistics: tuple[Statistics, ...] = (Statistics.BOSE, Statistics.FERMI)
    omega_s: float = 1.0
    epsilon_s: float = -1.0
    eta: float = 0.4
    gamma: float = 4.0
    omega_min: float = -6.0
    omega_max: float = 6.0
    omega_points: int = 2401
    varpi_max: float = 6.0
    varpi_points: int = 601
    t_min: float = 0.02
    t_max: float = 100.0
    t_points: int = 200
    t_spacing: str = "log"
    jump_epsilon: float = 1e-9
    route_equiv: float = 1e-6
    equal_area: float = 1e-6
    third_law: float = 1e-3
    third_law_temperature: float = 1e-3
    sum: SumConfig = field(default_factory=SumConfig)

    @property
    def bath(self) -> DrudeBath:
        return DrudeBath(self.eta, self.gamma)

    def system(self, statistics: Statistics):
        if statistics is Statistics.BOSE:
            return BosonicBO(self.omega_s, self.bath)
        return FermionicBO(self.epsilon_s, self.bath)

    def omega_grid(self) -> np.ndarray:
        return np.linspace(self.omega_min, self.omega_max, self.omega_points)

    def varpi_grid(self) -> np.ndarray:
        return np.linspace(0.0, self.varpi_max, self.varpi_points)

    def temperatures(self) -> np.ndarray:
        if self.t_spacing == "log":
            return np.geomspace(self.t_min, self.t_max, self.t_points)
        return np.linspace(self.t_min, self.t_max, self.t_points)

    def with_overrides(self, **kw) -> "RunConfig":
        kw = {k: v for k, v in kw.items() if v is not None}
        return _validated(replace(self, **kw), {})


def _parse_statistics(text: str) -> tuple[Statistics, ...]:
    if text.strip().lower() == "both":
        return (Statistics.BOSE, Statistics.FERMI)
    return (Statistics.parse(text),)


def _key_lines(text: str) -> dict[tuple[str, str], int]:
    """Map (section, key) to its 1-based line number in the file."""
    where, section = {}, None
    for n, line in enumerate(text.splitlines(), start=1):
        s = line.strip()
        m = re.match(r"^\[([^\]]+)\]", s)
        if m:
            section = m.group(1).strip().lower()
            continue
        m = re.match(r"^([A-Za-z_][A-Za-z0-9_]*)\s*[=:]", s)
        if m and section is not None:
            where.setdefault((section, m.group(1).lower()), n)
    return where


def parse_config(text: str, source: str = "<config>") -> RunConfig:
    parser = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    try:
        parser.read_string(text, source=source)
    except configparser.Error as exc:
        raise ConfigError(f"{source}: {exc}") from None
    lines = _key_lines(text)
    values = {}
    for section in parser.sections():
        sec = section.lower()
        if sec not in _SCHEMA:
            raise ConfigError(f"unknown section [{section}]", field=sec,
                              line=_section_line(text, section))
        for key, raw in parser.items(section):
            where = lines.get((sec, key))
            if key not in _SCHEMA[sec]:
                raise ConfigError(f"unknown key {key!r}", field=f"{sec}.{key}", line=where)
            values[key] = (_convert(sec, key, raw, where), where)
    cfg = RunConfig()
    fields = {}
    for key, (val, _) in values.items():
        if key in ("n_terms", "tail"):
            continue
        fields[key] = val
    n_terms = values.get("n_terms", (cfg.sum.n_terms, None))[0]
    tail = values.get("tail", (cfg.sum.tail, None))[0]
    try:
        fields["sum"] = SumConfig(n_terms=n_terms, tail=tail)
    except ValueError as exc:
        raise ConfigError(str(exc), field="sum", line=values.get("tail", (0, None))[1]) from None
    return _validated(replace(cfg, **fields), {k: w for k, (_, w) in values.items()})


def _section_line(text, section):
    for n, line in enumerate(text.splitlines(), start=1):
        if line.strip().lower().startswith(f"[{section.lower()}]"):
            return n
    return None


def _convert(section, key, raw, where):
    name = f"{section}.{key}"
    raw = raw.strip()
    try:
        if key == "statistics":
            return _parse_statistics(raw)
        if key == "t_spacing":
            if raw.lower() not in ("log", "linear"):
                raise ValueError("expected 'log' or 'linear'")
            return raw.lower()
        if key == "tail":
            return raw.lower()
        if key == "n_terms":
            return None if raw.lower() == "auto" else int(raw)
        if key.endswith("_points"):
            return int(raw)
        x = float(raw)
        if not math.isfinite(x):
            raise ValueError("value must be finite")
        return x
    except ValueError as exc:
        raise ConfigError(f"cannot parse {raw!r}: {exc}", field=name, line=where) from None


def _validated(cfg: RunConfig, lines: dict) -> RunConfig:
    def fail(key, msg, section):
        raise ConfigError(msg, field=f"{section}.{key}", line=lines.get(key))

    for key, section in (("omega_points", "grids"), ("varpi_points", "grids"), ("t_points", "grids")):
        if getattr(cfg, key) < 2:
            fail(key, "points must be >= 2", section)
    if not cfg.omega_min < cfg.omega_max:
        fail("omega_max", "omega_min must be < omega_max", "grids")
    if not cfg.varpi_max > 0:
        fail("varpi_max", "varpi_max must be > 0", "grids")
    if not 0 < cfg.t_min < cfg.t_max:
        fail("t_max", "need 0 < t_min < t_max", "grids")
    if not cfg.jump_epsilon > 0:
        fail("jump_epsilon", "jump_epsilon must be > 0", "grids")
    for key in ("route_equiv", "equal_area", "third_law", "third_law_temperature"):
        if not getattr(cfg, key) > 0:
            fail(key, "must be > 0", "tolerances")
    if not cfg.gamma > 0:
        fail("gamma", "gamma must be > 0", "bath")
    if not cfg.eta >= 0:
        fail("eta", "eta must be >= 0", "bath")
    for stat in cfg.statistics:
        try:
            cfg.system(stat)
        except Unstable as exc:
            raise ConfigError(f"stability invariant violated: {exc}", field="bath.eta",
                              line=lines.get("eta")) from None
        except ValueError as exc:
            key = "omega_s" if stat is Statistics.BOSE else "epsilon_s"
            fail(key, str(exc), "system")
    return cfg


def load_config(path: Optional[str | Path]) -> RunConfig:
    """Read a config file; ``None`` gives the default (paper-parameter) run."""
    if path is None:
        return RunConfig()
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from None
    return parse_config(text, str(path))
