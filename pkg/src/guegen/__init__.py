"""Exact random variate generation for GUE eigenvalues.

A sublinear-expected-time sampler for one uniformly chosen eigenvalue of
an n x n Gaussian Unitary Ensemble matrix (by squeeze-accelerated
rejection from squared Hermite function densities), a rejection sampler
for the full ordered spectrum, and the verification machinery backing
both.
"""

from .dominator import DominatorSpec, make_spec
from .errors import (
    BudgetError,
    ConvergenceError,
    GuegenError,
    OracleError,
    ParameterError,
)
from .hermite import (
    HermiteEval,
    ScaledValue,
    hermite_poly,
    mixture_density,
    phi_sq_cdf,
    phi_squared,
)
from .joint import (
    JointProposal,
    JointSample,
    sample_joint,
    sample_joint_many,
    vandermonde_max,
)
from .rng import RandomStream
from .samplers import (
    SampleBatch,
    SamplerConfig,
    SamplerStats,
    benchmark,
    sample_gue_eigenvalue,
    sample_gue_eigenvalues,
    sample_phi_sq_many,
    sample_phi_sq_plain,
    sample_phi_sq_squeeze,
)
from .vanveen import VanVeenTerms, delta_eps, evaluate as vanveen_terms

__version__ = "0.1.0"

__all__ = [
    "BudgetError",
    "ConvergenceError",
    "DominatorSpec",
    "GuegenError",
    "HermiteEval",
    "JointProposal",
    "JointSample",
    "OracleError",
    "ParameterError",
    "RandomStream",
    "SampleBatch",
    "SamplerConfig",
    "SamplerStats",
    "ScaledValue",
    "VanVeenTerms",
    "benchmark",
    "delta_eps",
    "hermite_poly",
    "make_spec",
    "mixture_density",
    "phi_sq_cdf",
    "phi_squared",
    "sample_gue_eigenvalue",
    "sample_gue_eigenvalues",
    "sample_joint",
    "sample_joint_many",
    "sample_phi_sq_many",
    "sample_phi_sq_plain",
    "sample_phi_sq_squeeze",
    "vandermonde_max",
    "__version__",
]
