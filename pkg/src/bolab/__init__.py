"""Numerical laboratory for Benjamin-Ono multisolitons.

Exact N-soliton profiles from the determinant formula, the discretized Lax
operator and its spectral identities (Wu relations, generating function,
variational identity), an ETDRK4 pseudospectral integrator, and distance-to-
manifold fitting for orbital-stability experiments.
"""

from .grid import (
    Grid,
    GridMismatchError,
    HardyField,
    L2_NORM,
    NormSpec,
    RealField,
    band_limited_noise,
    default_grid,
    from_coefficients,
    hilbert,
    inner,
    project_hardy,
    reconstruct,
    sobolev_norm,
    szego,
    to_coefficients,
)
from .solitons import (
    DecayReport,
    SolitonConfig,
    decay_report,
    exact_evolution,
    molecular_superposition,
    profile,
    representation_check,
    single_soliton,
    soliton_matrix,
)
from .lax import (
    BetaCurve,
    LaxSystem,
    ResolutionError,
    SpectralData,
    WuReport,
    assemble,
    beta,
    beta_curve,
    conserved_energies,
    eigenfunction_decay_probe,
    eigenfunction_field,
    eigensolve,
    grid_energy,
    kappa_floor,
    residue_probe,
    second_wu_check,
    span_residual,
    variational_gap,
    wu_check,
)
from .flow import (
    BlowUpError,
    FlowConfig,
    Stepper,
    Trajectory,
    conservation_report,
    evolve,
    rhs_nonlinear,
    step,
)
from .fitting import DEFAULT_FIT_NORM, FitResult, distance, fit, initial_centers
from .experiments import (
    ConfigError,
    ExperimentSpec,
    Report,
    default_spec,
    load_spec,
    run_experiment,
)

__version__ = "0.1.0"
