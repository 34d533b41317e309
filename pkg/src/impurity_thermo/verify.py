"""Invariant suite behind ``impurity-thermo verify``.

Every check records ``measured`` against ``tolerance``; a non-finite
measurement or any raised library error counts as a failure.
"""
from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import integrate

from . import thermo
from .bo_bosonic import BosonicBO
from .config import RunConfig
from .entangle import (LambdaGrid, MatrixFn, chi_sb_trace, gsb_trace,
                       varphi_by_lambda_quadrature, vartheta_by_lambda_quadrature)
from .errors import ImpurityThermoError
from .parallel import ordered_map
from .statfun import Statistics

__all__ = ["Check", "VerificationReport", "run_checks", "ROUTE_TEMPERATURES"]

ROUTE_TEMPERATURES = (0.05, 0.1, 0.5, 1.0, 2.0, 10.0, 100.0)
HIGH_T = 100.0
DECAY_TEMPERATURES = tuple(np.geomspace(20.0, 100.0, 9))
VARPHI_ORACLE_GAP = 0.25


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    measured: float | None
    tolerance: float

    def as_dict(self) -> dict:
        return {"name": self.name, "pass": self.passed,
                "measured": self.measured, "tolerance": self.tolerance}


@dataclass(frozen=True)
class VerificationReport:
    checks: tuple[Check, ...]

    @property
    def overall(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_json(self) -> str:
        doc = {"overall": self.overall, "checks": [c.as_dict() for c in self.checks]}
        return json.dumps(doc, indent=2, allow_nan=False) + "\n"


def _check(name: str, tolerance: float, measure: Callable[[], float],
           strict: bool = False) -> Check:
    """Pass when ``measured <= tolerance`` (``<`` if ``strict``)."""
    try:
        value = float(measure())
    except (ImpurityThermoError, ArithmeticError, ValueError):
        return Check(name, False, None, tolerance)
    if not math.isfinite(value):
        return Check(name, False, None, tolerance)
    ok = value < tolerance if strict else value <= tolerance
    return Check(name, bool(ok), value, tolerance)


def _half_line_integral(f, edges) -> float:
    total = 0.0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        for a, b in zip(edges[:-1], edges[1:]):
            total += integrate.quad(f, a, b, limit=500, epsabs=1e-13, epsrel=1e-12)[0]
    return total


def _route_equivalence(sp, cfg: RunConfig) -> float:
    def one(T):
        a_int = thermo.a_by_integral(sp, T)
        a_sum = thermo.a_by_matsubara(sp, T, cfg.sum)
        return abs(a_int - a_sum) / max(1.0, abs(a_int))
    return max(ordered_map(one, ROUTE_TEMPERATURES))


def _zero_temperature(sp, cfg: RunConfig) -> float:
    a0 = thermo.zero_temperature_free_energy(sp)
    a1 = thermo.a_by_matsubara(sp, 0.02, cfg.sum)
    a2 = thermo.a_by_matsubara(sp, 0.04, cfg.sum)
    # A(T) - A(0) is O(T^2) at low T
    return abs(a0 - (4 * a1 - a2) / 3)


def _kramers_kronig(system) -> float:
    ws = system.omega_s
    integral = _half_line_integral(lambda w: float(np.imag(system.chi_sb(w))) / w,
                                   [0.0, ws, 10 * ws, np.inf])
    return abs(float(np.real(system.chi_sb(0.0))) - 2.0 / np.pi * integral)


def _sb_sum_rule(system) -> float:
    """``|int Re G_SB dw|`` over the real axis, folded onto the half line."""
    ws = system.omega_s

    def folded(w):
        return float(system.spectral_density_sb(w)) + float(system.spectral_density_sb(-w))
    return abs(_half_line_integral(folded, [0.0, ws, 10 * ws, np.inf]))


def _trace_oracle(system, omega) -> float:
    lg_one = 1.0  # full coupling
    bath = system.bath_fn(omega)
    if isinstance(system, BosonicBO):
        local = MatrixFn.scalar(omega, system.chi_ss(omega, lg_one))
        generic = chi_sb_trace(bath, local)
        exact = system.chi_sb(omega, lg_one)
    else:
        local = MatrixFn.scalar(omega, system.g_ss(omega, lg_one))
        generic = gsb_trace(bath, local)
        exact = system.g_sb(omega, lg_one)
    return float(np.max(np.abs(generic - exact)))


def _vartheta_oracle(system, stat, varpi, lg) -> float:
    generic = vartheta_by_lambda_quadrature(
        stat, system.bath_fn(varpi, True), system.local_family(varpi, lg, True), lg)
    return float(np.max(np.abs(generic - system.vartheta(varpi))))


def _varphi_oracle(system, stat, omega, lg) -> float:
    generic = varphi_by_lambda_quadrature(stat, system.bath_fn(omega), system.local_family(omega, lg), lg)
    away = np.abs(np.abs(omega) - system.omega_s) >= VARPHI_ORACLE_GAP * system.omega_s
    exact = system.varphi(omega[away])
    return float(np.max(np.abs(generic[away] - exact)))


def _symmetric_grid(cfg: RunConfig, system) -> np.ndarray:
    half = max(abs(cfg.omega_min), abs(cfg.omega_max))
    grid = np.linspace(-half, half, 2 * (cfg.omega_points // 2) + 1)
    # the jump point itself has no two-sided value
    return grid[np.abs(grid) != system.omega_s]


def _parity(system, omega) -> float:
    phi = system.varphi(omega)
    theta_p, theta_m = system.vartheta(omega), system.vartheta(-omega)
    return float(max(np.max(np.abs(phi + system.varphi(-omega))),
                     np.max(np.abs(theta_p - theta_m))))


def _checks_for(stat: Statistics, cfg: RunConfig) -> list[Check]:
    system = cfg.system(stat)
    sp = system.provider()
    p = stat.name.lower() + "."
    out = [
        _check(p + "route_equivalence", cfg.route_equiv, lambda: _route_equivalence(sp, cfg)),
        _check(p + "equal_area", cfg.equal_area, lambda: thermo.equal_area_check(sp).rel_diff),
        _check(p + "zero_temperature_free_energy", 1e-4, lambda: _zero_temperature(sp, cfg)),
        _check(p + "third_law", cfg.third_law,
               lambda: abs(thermo.entropy(sp, cfg.third_law_temperature, cfg.sum)), strict=True),
    ]
    v0 = float(system.vartheta(0.0))
    if stat is Statistics.BOSE:
        def high_t():
            pt = thermo.thermo_point(sp, HIGH_T, cfg.sum)
            return max(abs(pt.A / HIGH_T + v0), abs(pt.S - v0)) / abs(v0)
        out.append(_check(p + "high_temperature_limit", 1e-2, high_t))
        out.append(_check(p + "kramers_kronig", 1e-5, lambda: _kramers_kronig(system)))
    else:
        def high_t():
            pt = thermo.thermo_point(sp, HIGH_T, cfg.sum)
            return max(abs(pt.A), abs(pt.U), abs(pt.S))

        def decay():
            pts = ordered_map(lambda T: thermo.thermo_point(sp, T, cfg.sum), DECAY_TEMPERATURES)
            mags = np.abs([[q.A, q.U, q.S] for q in pts])
            # largest step-to-step growth of |A|, |U|, |S|; must be negative
            return float(np.max(np.diff(mags, axis=0)))
        out.append(_check(p + "high_temperature_limit", 1e-2, high_t, strict=True))
        out.append(_check(p + "high_temperature_decay", 0.0, decay, strict=True))
        out.append(_check(p + "sb_spectral_sum_rule", 1e-6, lambda: _sb_sum_rule(system)))
    omega = _symmetric_grid(cfg, system)
    varpi = cfg.varpi_grid()
    lg = LambdaGrid.gauss_legendre(20)

    def jump():
        return abs(abs(system.varphi_sided(-1) - system.varphi_sided(1)) - np.pi / 2)
    out += [
        _check(p + "varphi_jump", 1e-9, jump),
        _check(p + "trace_oracle", 1e-12, lambda: _trace_oracle(system, omega)),
        _check(p + "vartheta_lambda_quadrature", 1e-10,
               lambda: _vartheta_oracle(system, stat, varpi, lg)),
        _check(p + "varphi_lambda_quadrature", 1e-8,
               lambda: _varphi_oracle(system, stat, omega, lg)),
        _check(p + "parity", 1e-12, lambda: _parity(system, omega)),
    ]
    return out


def run_checks(cfg: RunConfig) -> VerificationReport:
    checks: list[Check] = []
    for stat in cfg.statistics:
        checks += _checks_for(stat, cfg)
    return VerificationReport(tuple(checks))
