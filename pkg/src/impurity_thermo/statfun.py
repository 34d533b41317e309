"""Occupation factors, Matsubara grids and high-temperature Fermi approximants."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import expit

from ._util import scalar_or_array
from .errors import BoseAtZero, InvalidCount

__all__ = [
    "Statistics",
    "MatsubaraGrid",
    "occupation",
    "fermi_pade01",
    "fermi_lowest_matsubara",
    "matsubara_grid",
    "PADE_KAPPA",
    "PADE_XI",
    "LOWEST_MATSUBARA_KAPPA",
]

PADE_KAPPA = 3.0
PADE_XI = math.sqrt(12.0)
LOWEST_MATSUBARA_KAPPA = math.pi ** 2 / 4


class Statistics(enum.Enum):
    """Particle statistics; the value is the Matsubara offset ``delta``."""

    BOSE = 1
    FERMI = 0

    @property
    def delta(self) -> int:
        return self.value

    @classmethod
    def parse(cls, text):
        if isinstance(text, cls):
            return text
        key = str(text).strip().lower()
        if key in ("bose", "bosonic", "boson"):
            return cls.BOSE
        if key in ("fermi", "fermionic", "fermion"):
            return cls.FERMI
        raise ValueError(f"unknown statistics {text!r}; expected 'bose' or 'fermi'")

    def matsubara(self, n, beta):
        """``(2n - 1 + delta) * pi / beta`` for ``n >= 1``."""
        n = np.asarray(n)
        return scalar_or_array((2 * n - 1 + self.delta) * np.pi / beta)

    def __str__(self):
        return self.name.lower()


@dataclass(frozen=True)
class MatsubaraGrid:
    statistics: Statistics
    beta: float
    frequencies: np.ndarray

    @property
    def count(self) -> int:
        return len(self.frequencies)


def matsubara_grid(statistics: Statistics, beta: float, count: int) -> MatsubaraGrid:
    if count < 1:
        raise InvalidCount(f"count must be >= 1, got {count}")
    if not beta > 0:
        raise ValueError("beta must be > 0")
    n = np.arange(1, count + 1)
    freqs = (2 * n - 1 + statistics.delta) * np.pi / beta
    return MatsubaraGrid(statistics, float(beta), freqs.astype(float))


def occupation(statistics: Statistics, beta, omega):
    """Bose ``1/(1 - exp(-beta w))`` or Fermi ``1/(1 + exp(beta w))``.

    Only exponentials of non-positive arguments are formed, so any finite
    ``beta*omega`` is safe.
    """
    x = np.asarray(beta * np.asarray(omega, dtype=float), dtype=float)
    if statistics is Statistics.FERMI:
        return scalar_or_array(expit(-x))
    if np.any(x == 0):
        raise BoseAtZero("Bose occupation is singular at omega = 0")
    with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
        pos = 1.0 / -np.expm1(-np.abs(x))
        neg = np.exp(-np.abs(x)) / np.expm1(-np.abs(x))
    return scalar_or_array(np.where(x > 0, pos, neg))


def _single_pole(beta, omega, kappa, pole):
    w = np.asarray(omega, dtype=float)
    return scalar_or_array(0.5 - kappa * (w / beta) / (w ** 2 + (pole / beta) ** 2))


def fermi_pade01(beta, omega):
    """[0/1] Pade approximant of the Fermi function; error O((beta w)^5)."""
    return _single_pole(beta, omega, PADE_KAPPA, PADE_XI)


def fermi_lowest_matsubara(beta, omega):
    """Lowest-Matsubara single-pole scheme with weight pi^2/4; error O((beta w)^3)."""
    return _single_pole(beta, omega, LOWEST_MATSUBARA_KAPPA, math.pi)
