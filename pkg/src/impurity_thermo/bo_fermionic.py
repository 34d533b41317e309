"""Fermionic Brownian oscillator: a spinless level hybridized with a Gaussian
electron reservoir."""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from ._util import scalar_or_array
from .bath import DrudeBath
from .entangle import LambdaGrid, MatrixFn
from .errors import AtDiscontinuity, PoleOnAxis
from .statfun import Statistics
from .thermo import SpectralProvider

__all__ = ["FermionicBO"]


@dataclass(frozen=True)
class FermionicBO:
    epsilon_s: float = -1.0
    bath: DrudeBath = DrudeBath(0.4, 4.0)

    def __post_init__(self):
        if self.epsilon_s == 0 or not np.isfinite(self.epsilon_s):
            raise ValueError("epsilon_s must be finite and nonzero (|epsilon_s| sets the energy unit)")

    @property
    def omega_s(self) -> float:
        return abs(self.epsilon_s)

    @property
    def coupled(self) -> bool:
        return self.bath.eta > 0

    def _denominator(self, omega, lambda2):
        if not 0 <= lambda2 <= 1:
            raise ValueError(f"lambda2 must lie in [0, 1], got {lambda2!r}")
        w = np.asarray(omega)
        den = w - self.epsilon_s + 1j * lambda2 * np.asarray(self.bath.g_tilde(w))
        if np.any(den == 0):
            raise PoleOnAxis(f"Green's function pole on the real axis at {self.epsilon_s}")
        return den

    def g_ss(self, omega, lambda2=1.0):
        """Local Green's function ``i / (w - eps + i lambda2 g(w))``."""
        return scalar_or_array(1j / self._denominator(omega, lambda2))

    def g_sb(self, omega, lambda2=1.0):
        """Total system-bath Green's function ``2 lambda2 g / (w - eps + i lambda2 g)``."""
        den = self._denominator(omega, lambda2)
        return scalar_or_array(2 * lambda2 * np.asarray(self.bath.g_tilde(omega)) / den)

    def g_ss_laplace(self, varpi, lambda2=1.0):
        v = np.asarray(varpi, dtype=float)
        g = np.asarray(self.bath.g_tilde_laplace(np.abs(v)))
        return scalar_or_array(1j / (1j * v - self.epsilon_s + 1j * lambda2 * g))

    def _r(self, w):
        """``1 - g(w) Gss(w) = (w - eps) / (w - eps + i g(w))``."""
        b = w - self.epsilon_s
        return b / (b + 1j * self.bath.g_tilde(w))

    def varphi(self, omega):
        """Odd spectral density; phase of ``r(w)/r(-w)`` taken after forming the ratio."""
        if isinstance(omega, (int, float)):
            return self._varphi_scalar(float(omega))
        w = np.asarray(omega, dtype=float)
        aw = np.abs(w)
        if not self.coupled:
            return scalar_or_array(np.zeros_like(aw))
        if np.any(aw == self.omega_s):
            raise AtDiscontinuity("varphi jumps at |epsilon_s|; use varphi_sided")
        return scalar_or_array(np.sign(w) * 0.5 * np.angle(self._r(aw) / self._r(-aw)))

    def _varphi_scalar(self, w: float) -> float:
        aw = abs(w)
        if not self.coupled:
            return 0.0
        if aw == self.omega_s:
            raise AtDiscontinuity("varphi jumps at |epsilon_s|; use varphi_sided")
        return math.copysign(0.5, w) * cmath.phase(self._r(aw) / self._r(-aw))

    def varphi_sided(self, side: int) -> float:
        """Limit at ``omega_s`` from below (``-1``) or above (``+1``).

        The factor ``x - eps`` that vanishes at the jump is replaced by its sign.
        """
        if side not in (-1, 1):
            raise ValueError("side must be -1 (below) or +1 (above)")
        ws, eps = self.omega_s, self.epsilon_s
        ig = 1j * complex(self.bath.g_tilde(eps))
        if eps < 0:
            # r(-w) vanishes; -w - eps = ws - w
            z = complex(self._r(ws)) * ig / (-side)
        else:
            z = side / ig / complex(self._r(-ws))
        return 0.5 * float(np.angle(z))

    def vartheta(self, varpi):
        """``ln| (i v - eps) / (i v - eps + i g(i v)) |``, even in ``varpi``."""
        v = np.abs(np.asarray(varpi, dtype=float))
        z = 1j * np.asarray(self.bath.g_tilde_laplace(v)) / (1j * v - self.epsilon_s)
        # -ln|1 + z| via log1p; z -> 0 in the tail
        return scalar_or_array(-0.5 * np.log1p(2 * np.real(z) + np.abs(z) ** 2))

    def x_functions(self, omega):
        """Real-time-symmetrized ``(X_SS, X_SB)`` resolutions.

        ``X(w) = (i/2) [G(w) - conj(G(-w))]``; real part even, imaginary part odd.
        """
        w = np.asarray(omega, dtype=float)
        gss_p, gss_m = np.asarray(self.g_ss(w)), np.asarray(self.g_ss(-w))
        gsb_p, gsb_m = np.asarray(self.g_sb(w)), np.asarray(self.g_sb(-w))
        xss = 0.5j * (gss_p - np.conj(gss_m))
        xsb = 0.5j * (gsb_p - np.conj(gsb_m))
        return scalar_or_array(xss), scalar_or_array(xsb)

    def spectral_density_sb(self, omega):
        """``Re G_SB(w)``; integrates to zero over the real axis."""
        return scalar_or_array(np.real(self.g_sb(omega)))

    def spectral_density_sb_odd(self, omega):
        w = np.asarray(omega, dtype=float)
        return scalar_or_array(0.5 * (np.real(self.g_sb(w)) - np.real(self.g_sb(-w))))

    def provider(self) -> SpectralProvider:
        eta, gamma = self.bath.eta, self.bath.gamma
        return SpectralProvider(
            Statistics.FERMI,
            self.varphi,
            self.vartheta,
            jump_location=self.omega_s if self.coupled else None,
            varphi_sided=self.varphi_sided if self.coupled else None,
            varphi_tail=(-eta * gamma ** 2, 3.0),
            vartheta_tail=(-eta * gamma, 2.0),
            scale=self.omega_s,
        )

    def bath_fn(self, grid, laplace=False) -> MatrixFn:
        f = self.bath.g_tilde_laplace if laplace else self.bath.g_tilde
        return MatrixFn.scalar(grid, f(np.asarray(grid, dtype=float)))

    def local_family(self, grid, lg: LambdaGrid, laplace=False) -> list[MatrixFn]:
        f = self.g_ss_laplace if laplace else self.g_ss
        grid = np.asarray(grid, dtype=float)
        return [MatrixFn.scalar(grid, f(grid, x)) for x in lg.nodes]
