"""Page curves of charge-constrained two-qubit lattices with commuting and noncommuting charges."""

from .asymptotics import (catalan, closed_form_counting, exact_counting_commuting,
                          exact_counting_noncommuting, exact_page, unconstrained_page)
from .charges import c_charge, q_charge, spin_squared_a, verify_criteria
from .entanglement import PageCurveEstimate, entanglement_entropy, page_curve, state_counting_entropy
from .lattice import SparseOperator, SparseState, apply_pauli_string, bipartition_split
from .sampler import SamplerConfig, sample_state
from .sectors import (SectorBasis, SectorEmptyError, SectorLabel, amc_commuting_analog,
                      amc_noncommuting, commuting_sector, microcanonical_commuting,
                      microcanonical_noncommuting, outcome_distribution, single_charge_sector,
                      wigner_d_distribution)

__version__ = "0.1.0"

__all__ = [
    "PageCurveEstimate", "SamplerConfig", "SectorBasis", "SectorEmptyError", "SectorLabel",
    "SparseOperator", "SparseState", "amc_commuting_analog", "amc_noncommuting",
    "apply_pauli_string", "bipartition_split", "c_charge", "catalan", "closed_form_counting",
    "commuting_sector", "entanglement_entropy", "exact_counting_commuting",
    "exact_counting_noncommuting", "exact_page", "microcanonical_commuting",
    "microcanonical_noncommuting", "outcome_distribution", "page_curve", "q_charge",
    "sample_state", "single_charge_sector", "spin_squared_a", "state_counting_entropy",
    "unconstrained_page", "verify_criteria", "wigner_d_distribution",
]
