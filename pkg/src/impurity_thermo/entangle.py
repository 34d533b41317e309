"""Gaussian-environment entanglement relations on sampled matrix data.

Inputs are bare-bath resolutions (``g`` for fermions, ``phi`` for bosons) and
local impurity Green's/response functions, sampled on a common grid.  The
coupling integral runs over ``x = lambda**2`` in ``(0, 1)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import AsymmetricGrid, GridMismatch, NonRealResult, ShapeMismatch
from .statfun import Statistics

__all__ = [
    "MatrixFn",
    "LambdaGrid",
    "QMeanTrace",
    "gbb_from_local",
    "gsb_matrices",
    "gsb_trace",
    "chi_sb_matrices",
    "chi_sb_trace",
    "vartheta_by_lambda_quadrature",
    "varphi_by_lambda_quadrature",
    "f_mean_from_q",
    "a_nen",
]

NONREAL_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class MatrixFn:
    """Square complex matrices sampled on a strictly increasing grid.

    ``values`` has shape ``(len(grid), d, d)``.
    """

    grid: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        grid = np.asarray(self.grid, dtype=float)
        values = np.asarray(self.values, dtype=complex)
        if grid.ndim != 1 or grid.size == 0:
            raise ShapeMismatch("grid must be a non-empty 1-d array")
        if np.any(np.diff(grid) <= 0):
            raise ShapeMismatch("grid must be strictly increasing")
        if values.ndim != 3 or values.shape[0] != grid.size or values.shape[1] != values.shape[2]:
            raise ShapeMismatch(
                f"values must have shape ({grid.size}, d, d), got {values.shape}")
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "values", values)

    @classmethod
    def scalar(cls, grid, values):
        values = np.asarray(values, dtype=complex)
        return cls(grid, values.reshape(-1, 1, 1))

    @property
    def dim(self) -> int:
        return self.values.shape[1]

    def __len__(self):
        return self.grid.size

    def scaled(self, factor) -> "MatrixFn":
        return MatrixFn(self.grid, factor * self.values)


@dataclass(frozen=True, eq=False)
class LambdaGrid:
    """Quadrature nodes and weights for an integral over ``lambda**2`` in (0, 1)."""

    nodes: np.ndarray
    weights: np.ndarray
    rule: str = "gauss-legendre"

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=float)
        weights = np.asarray(self.weights, dtype=float)
        if nodes.shape != weights.shape or nodes.ndim != 1:
            raise ShapeMismatch("nodes and weights must be 1-d arrays of equal length")
        if np.any(nodes <= 0) or np.any(nodes >= 1):
            raise ValueError("nodes must lie strictly inside (0, 1)")
        if abs(weights.sum() - 1.0) > 1e-14:
            raise ValueError(f"weights must sum to 1, got {weights.sum()!r}")
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)

    @classmethod
    def gauss_legendre(cls, n: int = 20) -> "LambdaGrid":
        t, w = np.polynomial.legendre.leggauss(n)
        weights = w / 2
        # leggauss weights sum to 2 only up to rounding; renormalize exactly
        weights = weights / weights.sum()
        return cls((t + 1) / 2, weights)

    def __len__(self):
        return self.nodes.size


@dataclass(frozen=True)
class QMeanTrace:
    """Mean system coordinates at one coupling value ``lambda2``."""

    lambda2: float
    means: np.ndarray = field(default_factory=lambda: np.zeros(1))


def _check_pair(a: MatrixFn, b: MatrixFn):
    if a.values.shape != b.values.shape:
        raise ShapeMismatch(f"shape {a.values.shape} vs {b.values.shape}")
    if not np.array_equal(a.grid, b.grid):
        raise GridMismatch("sampled functions live on different grids")


def _trace_product(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.einsum("nij,nji->n", a, b)


def gbb_from_local(g: MatrixFn, gss: MatrixFn) -> MatrixFn:
    """Nonlocal bath Green's function ``g - g Gss g`` at every grid point."""
    _check_pair(g, gss)
    return MatrixFn(g.grid, g.values - g.values @ gss.values @ g.values)


def gsb_matrices(g: MatrixFn, gss: MatrixFn) -> tuple[MatrixFn, MatrixFn]:
    """``(G_SB, G_BS) = (-i Gss g, -i g Gss)``."""
    _check_pair(g, gss)
    return (MatrixFn(g.grid, -1j * gss.values @ g.values),
            MatrixFn(g.grid, -1j * g.values @ gss.values))


def gsb_trace(g: MatrixFn, gss: MatrixFn) -> np.ndarray:
    """Total system-bath Green's function ``-2i tr[g Gss]`` (SB plus BS)."""
    _check_pair(g, gss)
    return -2j * _trace_product(g.values, gss.values)


def chi_sb_matrices(phi: MatrixFn, chiss: MatrixFn) -> tuple[MatrixFn, MatrixFn]:
    """``(chi_SB, chi_BS) = (-chiSS phi, -phi chiSS)``."""
    _check_pair(phi, chiss)
    return (MatrixFn(phi.grid, -chiss.values @ phi.values),
            MatrixFn(phi.grid, -phi.values @ chiss.values))


def chi_sb_trace(phi: MatrixFn, chiss: MatrixFn) -> np.ndarray:
    """Symmetrized system-bath response ``-tr[phi chiSS]``."""
    _check_pair(phi, chiss)
    return -_trace_product(phi.values, chiss.values)


def _weighted_traces(bath: MatrixFn, family: Sequence[MatrixFn], lg: LambdaGrid) -> np.ndarray:
    if len(family) != len(lg):
        raise GridMismatch(
            f"local family has {len(family)} members but the lambda grid has {len(lg)} nodes")
    total = np.zeros(len(bath), dtype=complex)
    # fixed summation order keeps results bitwise reproducible
    for w, local in zip(lg.weights, family):
        _check_pair(bath, local)
        total += w * _trace_product(bath.values, local.values)
    return total


def vartheta_by_lambda_quadrature(kind: Statistics, bath_laplace: MatrixFn,
                                  local_laplace: Sequence[MatrixFn],
                                  lg: LambdaGrid) -> np.ndarray:
    """Thermodynamic spectrum on the Laplace grid of ``bath_laplace``.

    ``local_laplace[k]`` holds the local function at ``i*varpi`` for coupling
    ``lg.nodes[k]``.  Returns the real spectrum; raises ``NonRealResult`` when
    the bosonic sum carries an imaginary part above ``1e-8``.
    """
    traced = _weighted_traces(bath_laplace, local_laplace, lg)
    if kind is Statistics.FERMI:
        return -traced.real
    residual = np.max(np.abs(traced.imag)) / 2 if traced.size else 0.0
    if residual > NONREAL_TOL:
        raise NonRealResult(f"imaginary residual {residual:.3e} exceeds {NONREAL_TOL}")
    return 0.5 * traced.real


def _is_symmetric(grid: np.ndarray) -> bool:
    scale = max(1.0, float(np.max(np.abs(grid))))
    return np.allclose(grid, -grid[::-1], rtol=0, atol=1e-12 * scale)


def varphi_by_lambda_quadrature(kind: Statistics, bath_real: MatrixFn,
                                local_real: Sequence[MatrixFn],
                                lg: LambdaGrid) -> np.ndarray:
    """Free-energy spectral density on the (symmetric) real grid of ``bath_real``."""
    if not _is_symmetric(bath_real.grid):
        raise AsymmetricGrid("real-frequency grid must be symmetric about zero")
    traced = _weighted_traces(bath_real, local_real, lg)
    if kind is Statistics.FERMI:
        return -0.5 * (traced - traced[::-1]).imag
    return 0.5 * traced.imag


def f_mean_from_q(eta, q_means) -> np.ndarray:
    """Mean bath mode from mean system mode: ``<F> = -eta <Q>``."""
    eta = np.atleast_2d(np.asarray(eta, dtype=float))
    q = np.atleast_1d(np.asarray(q_means, dtype=float))
    if eta.shape != (q.size, q.size):
        raise ShapeMismatch(f"eta shape {eta.shape} incompatible with {q.size} means")
    return -eta @ q


def a_nen(eta, samples: Sequence[QMeanTrace], lg: LambdaGrid) -> float:
    """Nonentanglement free energy ``-1/2 sum_uv eta_uv int dlambda^2 <Q_u><Q_v>``."""
    eta = np.atleast_2d(np.asarray(eta, dtype=float))
    if len(samples) != len(lg):
        raise GridMismatch(f"{len(samples)} samples for {len(lg)} lambda nodes")
    total = 0.0
    for node, w, sample in zip(lg.nodes, lg.weights, samples):
        if not np.isclose(sample.lambda2, node, rtol=0, atol=1e-14):
            raise GridMismatch(f"sample at lambda2={sample.lambda2} does not match node {node}")
        q = np.atleast_1d(np.asarray(sample.means, dtype=float))
        if eta.shape != (q.size, q.size):
            raise ShapeMismatch(f"eta shape {eta.shape} incompatible with {q.size} means")
        total += w * float(q @ eta @ q)
    return -0.5 * total
