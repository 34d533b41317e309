"""Analytic bare-bath models.

Energies and frequencies are in units of the impurity frequency, with
hbar = k_B = 1.  Only the Drude form is built in:

.. math:: \\tilde\\phi(\\omega) = \\frac{i\\eta\\gamma}{\\omega + i\\gamma}

The same function serves as the bosonic response resolution
:math:`\\tilde\\phi(\\omega)` and the fermionic hybridization
:math:`\\tilde g(\\omega)`.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._util import scalar_or_array
from .statfun import Statistics

__all__ = ["DrudeBath", "BathModel"]


@dataclass(frozen=True)
class DrudeBath:
    """Drude (Lorentzian-cutoff) bath.

    Parameters
    ----------
    eta : float
        Coupling strength, ``eta >= 0``.  Equals the response at zero frequency.
    gamma : float
        Cutoff rate, ``gamma > 0``.
    """

    eta: float
    gamma: float

    kind = "drude"

    def __post_init__(self):
        if not np.isfinite(self.eta) or self.eta < 0:
            raise ValueError(f"eta must be finite and >= 0, got {self.eta!r}")
        if not np.isfinite(self.gamma) or self.gamma <= 0:
            raise ValueError(f"gamma must be finite and > 0, got {self.gamma!r}")

    def phi_tilde(self, omega):
        """Frequency resolution on the real axis (also accepts complex ``omega``)."""
        if isinstance(omega, (int, float, complex)):
            # plain-scalar path keeps adaptive quadrature cheap
            return 1j * self.eta * self.gamma / (omega + 1j * self.gamma)
        omega = np.asarray(omega)
        return scalar_or_array(1j * self.eta * self.gamma / (omega + 1j * self.gamma))

    g_tilde = phi_tilde

    def phi_tilde_laplace(self, varpi):
        """Continuation to ``z = i*varpi``; real for the Drude form.

        Tail is ``eta*gamma/varpi``.
        """
        varpi = np.asarray(varpi, dtype=float)
        if np.any(varpi < 0):
            raise ValueError("Laplace variable must be >= 0")
        return scalar_or_array(self.eta * self.gamma / (varpi + self.gamma))

    g_tilde_laplace = phi_tilde_laplace

    def coupling_eta0(self):
        return float(np.real(self.phi_tilde(0.0)))

    def spectral_density_J(self, omega, statistics: Statistics):
        """Scalar bare-bath spectral density.

        Bosonic: the odd part ``[phi(w) - phi(-w)]/2`` divided by ``i``, i.e.
        ``Im phi(w)``.  Fermionic: ``Re g(w)``, even for this bath.
        """
        w = np.asarray(omega, dtype=float)
        if statistics is Statistics.BOSE:
            out = ((self.phi_tilde(w) - self.phi_tilde(-w)) / 2j).real
        else:
            g = np.asarray(self.g_tilde(w))
            out = (0.5 * (g + np.conj(g))).real
        return scalar_or_array(out)


BathModel = DrudeBath
