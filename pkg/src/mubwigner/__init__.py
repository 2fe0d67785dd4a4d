"""Discrete quantum phase space for dimension p^n.

Spin-matrix algebra, mutually unbiased bases, discrete Wigner and
characteristic functions with separability-preserving phase conventions,
state reconstruction, and Hamiltonian dynamics in phase space.
"""

from .fields import (
    FieldElement,
    FieldError,
    GaloisField,
    default_poly,
    is_prime,
    is_quadratic_nonresidue,
    is_irreducible,
    make_extension,
    prime_inverse,
    smallest_nonresidue,
)
from .geometry import (
    GeneratorSet,
    PhaseGeometry,
    all_lines,
    generating_vectors,
    generator_set,
    line_points,
    m_map,
    phase_geometry,
    subspace_points,
    symplectic,
    vector_symplectic,
)
from .spins import (
    PhasedOperator,
    alpha_factor,
    eta,
    phased_spin,
    spin_basis,
    spin_decompose,
    spin_matrix,
    spin_power,
    spin_product,
    spin_projector,
    spin_recompose,
    tensor_spin,
)
from .mub import (
    CommutingClass,
    MubProjector,
    MubReport,
    commuting_class,
    full_mub,
    mub_projector,
    verify_mub,
)
from .wigner import (
    CONVENTIONS,
    CharTable,
    ConventionError,
    FactorizationReport,
    PositivityResult,
    SupportStats,
    WignerTable,
    a_operator,
    char_from_wigner,
    char_function,
    check_complete_factorization,
    check_product_factorization,
    default_convention,
    density_from_char,
    marginal_along,
    max_entangled_density,
    partial_transpose_matrix,
    plancherel_inner,
    positivity_check,
    random_density,
    random_pure_density,
    reconstruct_density,
    support_stats,
    wigner_from_char,
    wigner_function,
    wigner_kernel,
    wigner_maximally_entangled,
    wigner_partial_transpose,
)
from .dynamics import (
    GeneratorMatrix,
    UnsupportedDynamicsError,
    build_char_generator,
    build_wigner_generator,
    char_dynamics_table,
    density_from_dynamics_char,
    density_from_spin_coeffs,
    evolve,
    evolve_trajectory,
    spin_coeff_bridge,
)

__version__ = "0.1.0"
