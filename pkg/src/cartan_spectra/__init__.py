"""Cartan-subspace-valued Lyapunov and Morse spectra of matrix cocycles on flag manifolds."""

from .cocycle import (
    BundlePoint,
    CocycleTrace,
    DrivingSystem,
    evolve,
    finite_time_lyapunov,
    norm_cocycle,
    polar_exponent,
    regularity_diagnostic,
)
from .flag_manifold import FlagPoint, bruhat_cell, coordinate_flag, fixed_by, flag_distance
from .flag_manifold import act as act_on_flag
from .hull import Hull, convex_hull, hausdorff
from .lie_core import (
    DecompositionError,
    GroupElement,
    IwasawaTriple,
    PolarTriple,
    Tolerances,
    exp_diag,
    hyperbolic_log,
    iwasawa,
    iwasawa_a,
    polar,
)
from .root_system import (
    RootSystem,
    WeylElement,
    chamber_locate,
    cone_contains,
    coset_equal,
    dual_theta,
    enumerate_weyl,
    lambda_k,
    stabilizer_subgroup,
    theta_of,
    type_a,
    type_c,
    weyl_act,
)
from .spectrum import (
    BlockFormEstimate,
    ChainError,
    ChainSpec,
    SpectrumCloud,
    block_form_estimate,
    chamber_localization_check,
    component_count,
    grassmann_spectrum,
    morse_exponent,
    morse_spectrum_estimate,
    sample_all_components,
    sample_lyapunov_cloud,
    validate_chain,
    weyl_symmetry_check,
)

__version__ = "0.1.0"
