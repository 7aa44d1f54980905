"""Geometric measure of entanglement for pure states with nonnegative amplitudes.

G(psi) is the Z-spectral radius of the amplitude tensor (symmetric states) or
its largest singular value (general states).  Qubit and qutrit symmetric
tensors are solved exactly by elimination; everything else goes through a
shifted power iteration with randomized restarts.
"""
__version__ = "0.1.0"

from .errors import (CapabilityError, DegenerateSpectrumError, DimensionMismatchError,
                     GeoMeasureError, ValidationError)
from .tensor_core import (GenTensor, SingularTuple, SymTensor, ZEigenpair, contract_full,
                          contract_once, frobenius_norm, is_irreducible, symmetric_embedding)
from .elim import ZSpectrum, qubit_spectrum, qutrit_spectrum, radius_elim, spectrum
from .shopm import ShopmConfig, gap_estimate, restart_radius, shopm_run
from .states import (MeasureResult, PureState, dicke, general_ghz_qutrit, geometric_measure, ghz,
                     inverted_w, singular_radius, to_tensor, w_state)

__all__ = [
    "CapabilityError", "DegenerateSpectrumError", "DimensionMismatchError", "GeoMeasureError",
    "ValidationError", "GenTensor", "SingularTuple", "SymTensor", "ZEigenpair", "contract_full",
    "contract_once", "frobenius_norm", "is_irreducible", "symmetric_embedding", "ZSpectrum",
    "qubit_spectrum", "qutrit_spectrum", "radius_elim", "spectrum", "ShopmConfig", "gap_estimate",
    "restart_radius", "shopm_run", "MeasureResult", "PureState", "dicke", "general_ghz_qutrit",
    "geometric_measure", "ghz", "inverted_w", "singular_radius", "to_tensor", "w_state",
]
