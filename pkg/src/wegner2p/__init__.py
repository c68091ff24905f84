"""Two-particle lattice disorder models and spectral concentration experiments.

The package builds finite-volume Hamiltonians for a pair of interacting
particles hopping on Z^d in an IID random potential, computes their spectra,
and checks concentration-of-spectra bounds (single box and pairs of distant
boxes) against exact enumeration or seeded Monte Carlo.

Modules
-------
lattice      pair points, boxes, projection cubes, separation classifier
potential    disorder laws, concentration function, field sampling
hamiltonian  hopping + interaction + potential assembly
stollmann    diagonally monotone functions and Stollmann-type bounds
spectral     spectra, distances, eigenvalue monotonicity checks
experiments  single-volume and two-volume bound experiments
cli          command line front end
"""

from ._version import __version__

from .lattice import (
    BoxSpec,
    Cube,
    PairPoint,
    SeparationClass,
    SeparationSurvey,
    apply_symmetry,
    classify_separation,
    distance_condition,
    make_box,
    projections,
    sup_norm_pair,
    survey_separation_line,
    survey_separation_plane,
)
from .potential import (
    DistributionSpec,
    PotentialField,
    RngStream,
    concentration,
    sample_field,
    validate_distribution,
)
from .hamiltonian import (
    HamiltonianSpec,
    HamiltonianTemplate,
    InteractionSpec,
    build_hamiltonian,
    neighbors,
)
from .stollmann import (
    DMFunctionSpec,
    DMReport,
    IntervalSpec,
    check_dm_function,
    layer_sets_check,
    stollmann_exact,
    stollmann_mc,
)
from .spectral import (
    Spectrum,
    dist_between_spectra,
    dist_to_energy,
    eigenvalues,
    verify_dm_eigenvalues,
)
from .experiments import (
    ExperimentConfig,
    TwoVolumeBound,
    TwoVolumeReport,
    WegnerReport,
    derive_trial_rng,
    run_single_volume,
    run_two_volume,
    single_volume_bound,
    two_volume_bound,
)

__all__ = [
    "__version__",
    "BoxSpec",
    "Cube",
    "PairPoint",
    "SeparationClass",
    "SeparationSurvey",
    "apply_symmetry",
    "classify_separation",
    "distance_condition",
    "make_box",
    "projections",
    "sup_norm_pair",
    "survey_separation_line",
    "survey_separation_plane",
    "DistributionSpec",
    "PotentialField",
    "RngStream",
    "concentration",
    "sample_field",
    "validate_distribution",
    "HamiltonianSpec",
    "HamiltonianTemplate",
    "InteractionSpec",
    "build_hamiltonian",
    "neighbors",
    "DMFunctionSpec",
    "DMReport",
    "IntervalSpec",
    "check_dm_function",
    "layer_sets_check",
    "stollmann_exact",
    "stollmann_mc",
    "Spectrum",
    "dist_between_spectra",
    "dist_to_energy",
    "eigenvalues",
    "verify_dm_eigenvalues",
    "ExperimentConfig",
    "TwoVolumeBound",
    "TwoVolumeReport",
    "WegnerReport",
    "derive_trial_rng",
    "run_single_volume",
    "run_two_volume",
    "single_volume_bound",
    "two_volume_bound",
]
