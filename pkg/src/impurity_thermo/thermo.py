"""Hybridization thermodynamics from the two spectral representations.

Free energy is available by two independent routes:

* frequency integral of the odd spectral density ``varphi`` weighted by the
  occupation factor, and
* Matsubara sum of the even Laplace-axis spectrum ``vartheta``.

Temperatures and energies are in units of the impurity frequency, k_B = 1.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable, NamedTuple, Optional

import numpy as np
from scipy import integrate
from scipy.special import zeta

from .errors import NotConverged, QuadratureFailure, WrongStatistics
from .statfun import (LOWEST_MATSUBARA_KAPPA, PADE_KAPPA, PADE_XI, Statistics,
                      matsubara_grid)

__all__ = [
    "SpectralProvider",
    "ThermoPoint",
    "SumConfig",
    "MatsubaraResult",
    "EqualArea",
    "HighTApprox",
    "a_by_integral",
    "a_by_matsubara",
    "matsubara_sum",
    "entropy",
    "internal_energy",
    "thermo_point",
    "equal_area_check",
    "zero_temperature_free_energy",
    "high_t_asymptotics",
    "kappa_lowest_matsubara_a",
]

INTEGRAL_RTOL = 1e-8
_QUAD = dict(epsabs=1e-14, epsrel=1e-12, limit=1000)


@dataclass(frozen=True)
class SpectralProvider:
    """Spectral functions of one impurity model.

    ``varphi`` must be odd and ``vartheta`` even; both accept scalars or arrays.
    ``jump_location`` is the positive frequency where ``varphi`` jumps, with
    ``varphi_sided(side)`` returning the limit from below (``side=-1``) or
    above (``side=+1``).  Tails are ``(coefficient, exponent)`` pairs meaning
    ``f(x) ~ coefficient * x**-exponent``.
    """

    statistics: Statistics
    varphi: Callable
    vartheta: Callable
    jump_location: Optional[float] = None
    varphi_sided: Optional[Callable[[int], float]] = None
    varphi_tail: Optional[tuple[float, float]] = None
    vartheta_tail: Optional[tuple[float, float]] = None
    scale: float = 1.0

    @classmethod
    def zero(cls, statistics: Statistics) -> "SpectralProvider":
        def nil(x):
            return np.zeros_like(np.asarray(x, dtype=float)) + 0.0
        return cls(statistics, nil, nil)

    def varphi_safe(self, omega: float) -> float:
        """Scalar ``varphi`` that maps the exact jump point to its lower limit."""
        if self.jump_location is not None and abs(omega) == self.jump_location:
            return math.copysign(self.varphi_sided(-1), omega)
        return float(self.varphi(omega))


class ThermoPoint(NamedTuple):
    T: float
    A: float
    U: float
    S: float

    @property
    def identity_residual(self) -> float:
        return self.A - (self.U - self.T * self.S)


@dataclass(frozen=True)
class SumConfig:
    """Matsubara truncation settings.

    ``n_terms=None`` picks ``max(200, ceil(50/(beta*scale)))``.  ``tail`` is one
    of ``"euler_maclaurin"`` (integral of the spectrum beyond the last term
    plus the first derivative correction), ``"power_law"`` (Hurwitz-zeta sum of
    the provider's leading tail) or ``"none"``.  Unless ``tail == "none"``,
    the term count doubles until the remainder estimate of ``A`` drops below
    ``tolerance * max(1, |A|)``.
    """

    n_terms: Optional[int] = None
    tail: str = "euler_maclaurin"
    tolerance: float = 1e-9
    max_terms: int = 1 << 22

    def __post_init__(self):
        if self.n_terms is not None and self.n_terms < 1:
            raise ValueError("n_terms must be >= 1")
        if self.tail not in ("euler_maclaurin", "power_law", "none"):
            raise ValueError(f"unknown tail kind {self.tail!r}")

    def initial_terms(self, beta: float, scale: float) -> int:
        if self.n_terms is not None:
            return self.n_terms
        return max(200, math.ceil(50.0 / (beta * scale)))


class MatsubaraResult(NamedTuple):
    A: float
    n_terms: int
    remainder: float


class EqualArea(NamedTuple):
    varphi_area: float
    vartheta_area: float
    rel_diff: float


class HighTApprox(NamedTuple):
    A: float
    U: float
    S: float


def _beta(T: float) -> float:
    if not T > 0:
        raise ValueError(f"temperature must be > 0, got {T!r}")
    return 1.0 / T


def _quad(f, a, b):
    """Adaptive quadrature; a semi-infinite range is mapped by ``x = a/u``
    so that power-law tails of any scale become smooth on ``(0, 1]``."""
    if np.isinf(b):
        if not a > 0:
            raise ValueError("semi-infinite panels must start at a positive abscissa")
        lo = a

        def g(u):
            return f(lo / u) * lo / (u * u)

        a, b = 0.0, 1.0
    else:
        g = f
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        val, err, *_ = integrate.quad(g, a, b, full_output=1, **_QUAD)
    return val, err


def _panels(edges, f):
    total, err = 0.0, 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        v, e = _quad(f, a, b)
        total += v
        err += e
    return total, err


def _edges(sp: SpectralProvider, upper, extra=()):
    pts = {0.0}
    s = sp.scale
    if sp.jump_location is not None:
        pts.add(sp.jump_location)
        s = max(s, sp.jump_location)
    for k in (2.0, 10.0, 100.0, 1e3, 1e4, 1e5):
        if k * s < upper:
            pts.add(k * s)
    pts.update(p for p in extra if 0 < p < upper)
    return sorted(pts) + [upper]


# -- frequency-integral route ----------------------------------------------------

def a_by_integral(sp: SpectralProvider, T: float) -> float:
    """``-(1/pi) int varphi(w) occupation(w) dw`` over the whole real axis.

    Oddness of ``varphi`` folds the integral onto ``(0, inf)`` with weight
    ``occupation(w) - occupation(-w)``; panels split at the jump.
    """
    beta = _beta(T)
    stat = sp.statistics
    slope_h = 1e-7 * sp.scale

    def weight(w):
        # occupation(w) - occupation(-w): coth(beta w/2) for Bose, -tanh(beta w/2) for Fermi
        t = math.tanh(0.5 * beta * w)
        return 1.0 / t if stat is Statistics.BOSE else -t

    def integrand(w):
        if w == 0.0:
            if stat is Statistics.FERMI:
                return 0.0
            # varphi(w) * 2/(beta w) -> 2 varphi'(0)/beta
            return -2.0 * sp.varphi_safe(slope_h) / slope_h / beta / np.pi
        return -sp.varphi_safe(w) * weight(w) / np.pi

    edges = _edges(sp, np.inf, extra=(10.0 * T, 100.0 * T))
    val, err = _panels(edges, integrand)
    if not np.isfinite(val) or err > INTEGRAL_RTOL * max(1.0, abs(val)):
        raise QuadratureFailure(
            f"frequency integral at T={T}: error estimate {err:.3e} for value {val:.6e}")
    return val


# -- Matsubara route -------------------------------------------------------------

def _em_tail(sp, stat, beta, n):
    """Sum of ``vartheta`` over Matsubara points beyond the ``n``-th, by midpoint
    Euler-Maclaurin.  Returns (value, remainder estimate of the sum)."""
    h = 2 * np.pi / beta
    a = stat.matsubara(n, beta) + h / 2
    integral, qerr = _quad(lambda x: float(sp.vartheta(x)), a, np.inf)
    d = 1e-3 * a
    f1 = (float(sp.vartheta(a + d)) - float(sp.vartheta(a - d))) / (2 * d)
    d3 = 0.05 * a
    f3 = (float(sp.vartheta(a + 2 * d3)) - 2 * float(sp.vartheta(a + d3))
          + 2 * float(sp.vartheta(a - d3)) - float(sp.vartheta(a - 2 * d3))) / (2 * d3 ** 3)
    value = integral / h + h * f1 / 24
    remainder = 7 * h ** 3 * abs(f3) / 5760 + qerr / h
    return value, remainder


def _power_tail(sp, stat, beta, n, last_value):
    if sp.vartheta_tail is None:
        raise ValueError("power_law tail needs provider.vartheta_tail")
    coef, p = sp.vartheta_tail
    h = 2 * np.pi / beta
    # varpi_m = h * (m - (1 - delta)/2); sum over m > n
    q = n + 1 - (1 - stat.delta) / 2
    value = coef * h ** (-p) * float(zeta(p, q))
    w_n = stat.matsubara(n, beta)
    deviation = last_value - coef * w_n ** (-p)
    remainder = abs(deviation) * w_n / (p * h)
    return value, remainder


def _sum_fixed(sp, T, n, tail):
    beta = _beta(T)
    stat = sp.statistics
    grid = matsubara_grid(stat, beta, n)
    terms = np.asarray(sp.vartheta(grid.frequencies), dtype=float)
    partial = math.fsum(terms)
    if tail == "euler_maclaurin":
        tail_sum, rem = _em_tail(sp, stat, beta, n)
    elif tail == "power_law":
        tail_sum, rem = _power_tail(sp, stat, beta, n, terms[-1])
    else:
        tail_sum, rem = 0.0, math.nan
    s = partial + tail_sum
    if stat is Statistics.BOSE:
        A = -float(sp.vartheta(0.0)) / beta - 2.0 / beta * s
    else:
        A = 2.0 / beta * s
    return A, 2.0 / beta * rem


def matsubara_sum(sp: SpectralProvider, T: float, cfg: SumConfig | None = None) -> MatsubaraResult:
    """Matsubara-route free energy with its term count and remainder estimate."""
    cfg = cfg or SumConfig()
    beta = _beta(T)
    n = cfg.initial_terms(beta, sp.scale)
    while True:
        A, rem = _sum_fixed(sp, T, n, cfg.tail)
        if cfg.tail == "none" or rem <= cfg.tolerance * max(1.0, abs(A)):
            return MatsubaraResult(A, n, rem)
        if 2 * n > cfg.max_terms:
            raise NotConverged(
                f"Matsubara sum at T={T}: remainder {rem:.3e} after {n} terms")
        n *= 2


def a_by_matsubara(sp: SpectralProvider, T: float, cfg: SumConfig | None = None) -> float:
    """Bosonic ``-vartheta(0)/beta - (2/beta) sum vartheta(2 pi n/beta)``;
    fermionic ``(2/beta) sum vartheta((2n-1) pi/beta)``."""
    return matsubara_sum(sp, T, cfg).A


def _entropy_fixed(sp, T, n, tail):
    delta = min(max(1e-3 * T, 1e-6), 0.5 * T)

    def derivative(h):
        return -(_sum_fixed(sp, T + h, n, tail)[0] - _sum_fixed(sp, T - h, n, tail)[0]) / (2 * h)

    return (4 * derivative(delta / 2) - derivative(delta)) / 3


def entropy(sp: SpectralProvider, T: float, cfg: SumConfig | None = None) -> float:
    """``S = -dA/dT`` by Richardson-extrapolated central differences.

    The term count is fixed at the value resolved for ``T`` so the stencil
    sees one smooth function of temperature.
    """
    res = matsubara_sum(sp, T, cfg)
    return _entropy_fixed(sp, T, res.n_terms, (cfg or SumConfig()).tail)


def thermo_point(sp: SpectralProvider, T: float, cfg: SumConfig | None = None) -> ThermoPoint:
    res = matsubara_sum(sp, T, cfg)
    S = _entropy_fixed(sp, T, res.n_terms, (cfg or SumConfig()).tail)
    return ThermoPoint(T, res.A, res.A + T * S, S)


def internal_energy(sp: SpectralProvider, T: float, cfg: SumConfig | None = None) -> float:
    return thermo_point(sp, T, cfg).U


# -- equal area and zero temperature ---------------------------------------------

def _tail_integral(tail, cutoff):
    coef, p = tail
    return coef * cutoff ** (1 - p) / (p - 1)


def equal_area_check(sp: SpectralProvider, cutoff: float | None = None) -> EqualArea:
    """Half-axis areas of ``varphi`` and ``vartheta`` and their relative difference.

    Quadrature runs to ``cutoff`` (default ``1e6 * scale``); beyond it the
    provider's power-law tails are integrated analytically, or quadrature
    continues to infinity when a tail is unknown.
    """
    cutoff = 1e6 * sp.scale if cutoff is None else cutoff
    if sp.jump_location is not None and cutoff <= sp.jump_location:
        raise ValueError("cutoff must lie beyond the jump")

    def areas(f, tail):
        val, err = _panels(_edges(sp, cutoff), f)
        if tail is not None:
            val += _tail_integral(tail, cutoff)
        else:
            v, e = _quad(f, cutoff, np.inf)
            val, err = val + v, err + e
        if not np.isfinite(val) or err > INTEGRAL_RTOL * max(1e-3, abs(val)):
            raise QuadratureFailure(f"area quadrature error {err:.3e}")
        return val

    phi_area = areas(sp.varphi_safe, sp.varphi_tail)
    theta_area = areas(lambda x: float(sp.vartheta(x)), sp.vartheta_tail)
    denom = max(abs(phi_area), abs(theta_area))
    rel = abs(phi_area - theta_area) / denom if denom > 0 else 0.0
    return EqualArea(phi_area, theta_area, rel)


def zero_temperature_free_energy(sp: SpectralProvider, cutoff: float | None = None) -> float:
    """``A(T=0)`` from the area of ``vartheta``: ``-area/pi`` (Bose), ``+area/pi`` (Fermi)."""
    area = equal_area_check(sp, cutoff).vartheta_area
    sign = -1.0 if sp.statistics is Statistics.BOSE else 1.0
    return sign * area / np.pi


# -- high-temperature approximants -----------------------------------------------

def high_t_asymptotics(sp: SpectralProvider, T: float) -> HighTApprox:
    """High-temperature forms for temperature-independent spectra.

    Bose: ``A = -T vartheta(0)``, ``S = vartheta(0)``, ``U = 0``.
    Fermi: single Pade pole at ``varpi_a = sqrt(12) T`` with weight 3.
    """
    _beta(T)
    if sp.statistics is Statistics.BOSE:
        v0 = float(sp.vartheta(0.0))
        return HighTApprox(-T * v0, 0.0, v0)
    wa = PADE_XI * T
    ratio = PADE_KAPPA / PADE_XI
    step = 1e-4 * max(1.0, wa)
    v = float(sp.vartheta(wa))
    dv = (float(sp.vartheta(wa + step)) - float(sp.vartheta(wa - step))) / (2 * step)
    A = ratio * wa * v
    U = -ratio * wa ** 2 * dv
    S = -ratio / T * (wa * v + wa ** 2 * dv)
    return HighTApprox(A, U, S)


def kappa_lowest_matsubara_a(sp: SpectralProvider, T: float) -> float:
    """Fermionic ``(pi^2/4) T vartheta(pi T)``, the lowest-Matsubara approximant."""
    if sp.statistics is not Statistics.FERMI:
        raise WrongStatistics("lowest-Matsubara scheme is defined for fermions only")
    beta = _beta(T)
    return LOWEST_MATSUBARA_KAPPA / beta * float(sp.vartheta(np.pi / beta))
