"""Newton-Wigner localization for a neutral massive scalar field on the
2+1-dimensional de Sitter hyperboloid: mode functions, the conserved
Klein-Gordon form, symmetry actions, the unitary localization transform
family, and the position operator."""

from .geometry import DeSitterParams, Series, SpacetimePoint, params_from_physical
from .modes import SphereGrid, StateCoefficients
from .newton_wigner import NWState, PhaseTable

__all__ = [
    "DeSitterParams",
    "Series",
    "SpacetimePoint",
    "params_from_physical",
    "SphereGrid",
    "StateCoefficients",
    "NWState",
    "PhaseTable",
]

__version__ = "0.1.0"
