"""Average fidelity of single-qubit channels against a target unitary."""
from ._kernel import BACKEND
from .channels import (AffineBlochMap, KrausChannel, UnitaryGate, apply, choi, compose,
                       is_cptp, is_unital, kraus_to_affine, preset, random_cptp,
                       random_unital, random_unitary, to_affine, to_kraus)
from .errors import QfidError
from .fidelity import (FidelityReport, average_fidelity, avg_fidelity_mc,
                       avg_fidelity_pauli, avg_fidelity_quadrature, avg_fidelity_six,
                       avg_fidelity_three, pure_state_fidelity, state_fidelity)
from .states import (Axis, axial_state, bloch_to_density, density_to_bloch, make_rng,
                     maximally_mixed, sample_pure_uniform, validate_density)

__version__ = "0.1.0"
