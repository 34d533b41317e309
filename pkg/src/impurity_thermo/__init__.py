"""Hybridization thermodynamics of quantum impurities in Gaussian baths."""
from .bath import BathModel, DrudeBath
from .bo_bosonic import BosonicBO
from .bo_fermionic import FermionicBO
from .entangle import LambdaGrid, MatrixFn, QMeanTrace
from .statfun import Statistics
from .thermo import SpectralProvider, SumConfig, ThermoPoint

__version__ = "0.1.0"

__all__ = [
    "BathModel",
    "DrudeBath",
    "BosonicBO",
    "FermionicBO",
    "LambdaGrid",
    "MatrixFn",
    "QMeanTrace",
    "Statistics",
    "SpectralProvider",
    "SumConfig",
    "ThermoPoint",
]
