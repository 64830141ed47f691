"""Numerical laboratory for Lesche (alpha-) stability of generalized entropies."""

from .adversary import (
    ProbeResult,
    WitnessPair,
    probe,
    renyi_instability_witness,
    sample_within,
    stability_ratio,
    theorem12c_witness,
    verify_by_sampling,
    verify_certificate,
)
from .certificates import (
    StabilityCertificate,
    bound_constant,
    certificate_for,
    combine_certificates,
    delta_for,
    downgrade_certificate,
    lemma10_bounds,
)
from .errors import DomainError, LescheError, ParameterError, ShapeError, UnsupportedRegimeError
from .functionals import (
    Functional,
    MaxValue,
    functional_max,
    incomplete_entropy,
    incomplete_q_expectation,
    kappa_entropy,
    quantum_group_entropy,
    renyi_entropy,
    tsallis_entropy,
)
from .metric import alpha_distance, power_sum, quasi_triangle_factor
from .simplex import (
    CompleteDistribution,
    IncompleteDistribution,
    normalize_complete,
    normalize_incomplete,
    perturb_within,
    sample_distribution,
    uniform_complete,
    uniform_incomplete,
)

__version__ = "0.1.0"
