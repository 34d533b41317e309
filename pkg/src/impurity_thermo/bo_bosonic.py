"""Bosonic Brownian oscillator coupled linearly to a Gaussian bath.

Closed forms for the local susceptibility, the nonlocal system-bath
response at coupling ``lambda**2``, and the coupling-integrated spectral
functions.  ``varphi`` jumps by pi/2 at the oscillator frequency.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from ._util import scalar_or_array
from .bath import DrudeBath
from .entangle import LambdaGrid, MatrixFn
from .errors import AtDiscontinuity, Unstable
from .statfun import Statistics
from .thermo import SpectralProvider

__all__ = ["BosonicBO"]


@dataclass(frozen=True)
class BosonicBO:
    omega_s: float = 1.0
    bath: DrudeBath = DrudeBath(0.4, 4.0)

    def __post_init__(self):
        if not self.omega_s > 0:
            raise ValueError(f"omega_s must be > 0, got {self.omega_s!r}")
        renorm = self.omega_s ** 2 - self.omega_s * self.bath.coupling_eta0()
        if not renorm > 0:
            raise Unstable(
                f"stability requires eta < omega_s (omega_s^2 - omega_s*eta > 0); "
                f"got eta={self.bath.eta}, omega_s={self.omega_s}")

    @property
    def coupled(self) -> bool:
        return self.bath.eta > 0

    def _check_lambda2(self, lambda2):
        if not 0 <= lambda2 <= 1:
            raise ValueError(f"lambda2 must lie in [0, 1], got {lambda2!r}")

    def chi_ss(self, omega, lambda2=1.0):
        """Local susceptibility ``w_s / (w_s^2 - w^2 - lambda2 w_s phi(w))``."""
        self._check_lambda2(lambda2)
        w = np.asarray(omega)
        ws = self.omega_s
        return scalar_or_array(ws / (ws ** 2 - w ** 2 - lambda2 * ws * self.bath.phi_tilde(w)))

    def chi_sb(self, omega, lambda2=1.0):
        """Symmetrized system-bath response at coupling ``lambda2``."""
        self._check_lambda2(lambda2)
        w = np.asarray(omega)
        ws = self.omega_s
        num = lambda2 * ws * np.asarray(self.bath.phi_tilde(w))
        den = ws ** 2 - w ** 2 - num
        # zero coupling gives exactly zero, including at the bare pole
        out = np.divide(-num, den, out=np.zeros(np.broadcast(num, den).shape, dtype=complex),
                        where=num != 0)
        return scalar_or_array(out)

    def chi_ss_laplace(self, varpi, lambda2=1.0):
        self._check_lambda2(lambda2)
        v = np.asarray(varpi, dtype=float)
        ws = self.omega_s
        return scalar_or_array(
            ws / (ws ** 2 + v ** 2 - lambda2 * ws * self.bath.phi_tilde_laplace(np.abs(v))))

    def varphi(self, omega):
        """Odd free-energy spectral density, principal-branch phase.

        Raises ``AtDiscontinuity`` exactly at ``|omega| = omega_s``.
        """
        if isinstance(omega, (int, float)):
            return self._varphi_scalar(float(omega))
        w = np.asarray(omega, dtype=float)
        aw = np.abs(w)
        if not self.coupled:
            return scalar_or_array(np.zeros_like(aw))
        if np.any(aw == self.omega_s):
            raise AtDiscontinuity("varphi jumps at omega_s; use varphi_sided")
        b = self.omega_s ** 2 - aw ** 2
        a = self.omega_s * np.asarray(self.bath.phi_tilde(aw))
        return scalar_or_array(np.sign(w) * 0.5 * np.angle(b / (b - a)))

    def _varphi_scalar(self, w: float) -> float:
        aw = abs(w)
        if not self.coupled:
            return 0.0
        if aw == self.omega_s:
            raise AtDiscontinuity("varphi jumps at omega_s; use varphi_sided")
        b = self.omega_s ** 2 - aw ** 2
        a = self.omega_s * self.bath.phi_tilde(aw)
        return math.copysign(0.5, w) * cmath.phase(b / (b - a))

    def varphi_sided(self, side: int) -> float:
        """Limit of ``varphi`` at ``omega_s`` from below (``-1``) or above (``+1``).

        Near the jump ``b/(b-a) ~ b/(-a)``, so only the sign of ``b`` survives.
        """
        if side not in (-1, 1):
            raise ValueError("side must be -1 (below) or +1 (above)")
        a = self.omega_s * complex(self.bath.phi_tilde(self.omega_s))
        sign_b = -side
        return 0.5 * float(np.angle(sign_b / -a))

    def vartheta(self, varpi):
        """Even thermodynamic spectrum on the Laplace axis."""
        v = np.abs(np.asarray(varpi, dtype=float))
        ws = self.omega_s
        u = ws * np.asarray(self.bath.phi_tilde_laplace(v)) / (ws ** 2 + v ** 2)
        # -1/2 ln|1 - u| via log1p; u -> 0 in the tail
        return scalar_or_array(-0.25 * np.log1p(-2 * np.real(u) + np.abs(u) ** 2))

    def provider(self) -> SpectralProvider:
        c = self.omega_s * self.bath.eta * self.bath.gamma / 2
        return SpectralProvider(
            Statistics.BOSE,
            self.varphi,
            self.vartheta,
            jump_location=self.omega_s if self.coupled else None,
            varphi_sided=self.varphi_sided if self.coupled else None,
            varphi_tail=(-c, 3.0),
            vartheta_tail=(c, 3.0),
            scale=self.omega_s,
        )

    # sampled inputs for the generic entanglement relations

    def bath_fn(self, grid, laplace=False) -> MatrixFn:
        f = self.bath.phi_tilde_laplace if laplace else self.bath.phi_tilde
        return MatrixFn.scalar(grid, f(np.asarray(grid, dtype=float)))

    def local_family(self, grid, lg: LambdaGrid, laplace=False) -> list[MatrixFn]:
        f = self.chi_ss_laplace if laplace else self.chi_ss
        grid = np.asarray(grid, dtype=float)
        return [MatrixFn.scalar(grid, f(grid, x)) for x in lg.nodes]
