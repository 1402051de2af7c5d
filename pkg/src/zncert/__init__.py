"""Additive-energy uncertainty certificates and sparse recovery on Z_N^d."""

from ._version import __version__
from .errors import CapacityError, StructureError
from .lattice import (
    GroupParams,
    RingVector,
    SupportSet,
    all_cyclic_subgroups,
    annihilator,
    complement,
    load_set,
    make_cyclic_subgroup,
    make_interval_grid,
    negate_set,
    product_set,
    save_set,
    shift_set,
)
from .spectral import (
    ANALYST_PLUS,
    UNITARY_MINUS,
    Convention,
    Signal,
    convert_convention,
    dft,
    idft,
    indicator,
    indicator_spectrum,
    load_signal,
    save_signal,
    support_of,
)
from .energy import (
    EnergyCertificate,
    GrowthCertificate,
    RepresentationFunction,
    energy_certificate,
    energy_fourier_check,
    energy_growth_certificate,
    energy_quadruple,
    energy_representation,
    grid_energy_closed_form,
    nontrivial_parallelogram_count,
    representation_function,
)
from .bounds import (
    RecoveryCertificate,
    UncertaintyCertificate,
    additive_bound,
    bound_comparison_table,
    classical_bound,
    correction_term,
    recovery_condition,
    refined_bound,
)
from .recovery import (
    RecoveryProblem,
    RecoverySolution,
    SolverConfig,
    concentration_check,
    l1_objective_profile,
    l1_recover,
    least_squares_recover,
    load_problem,
    save_problem,
    uniqueness_check,
)
from .gowers import ConjectureScanReport, GowersReport, conjecture_scan, gowers_norm
from .harness import (
    ExperimentConfig,
    RunReport,
    run_example1,
    run_example2,
    run_extremal_cosets,
    run_recovery_sweep,
    run_soundness_sweep,
)

__all__ = [
    "__version__",
    "CapacityError",
    "StructureError",
    "GroupParams",
    "RingVector",
    "SupportSet",
    "all_cyclic_subgroups",
    "annihilator",
    "complement",
    "load_set",
    "make_cyclic_subgroup",
    "make_interval_grid",
    "negate_set",
    "product_set",
    "save_set",
    "shift_set",
    "ANALYST_PLUS",
    "UNITARY_MINUS",
    "Convention",
    "Signal",
    "convert_convention",
    "dft",
    "idft",
    "indicator",
    "indicator_spectrum",
    "load_signal",
    "save_signal",
    "support_of",
    "EnergyCertificate",
    "GrowthCertificate",
    "RepresentationFunction",
    "energy_certificate",
    "energy_fourier_check",
    "energy_growth_certificate",
    "energy_quadruple",
    "energy_representation",
    "grid_energy_closed_form",
    "nontrivial_parallelogram_count",
    "representation_function",
    "RecoveryCertificate",
    "UncertaintyCertificate",
    "additive_bound",
    "bound_comparison_table",
    "classical_bound",
    "correction_term",
    "recovery_condition",
    "refined_bound",
    "RecoveryProblem",
    "RecoverySolution",
    "SolverConfig",
    "concentration_check",
    "l1_objective_profile",
    "l1_recover",
    "least_squares_recover",
    "load_problem",
    "save_problem",
    "uniqueness_check",
    "ConjectureScanReport",
    "GowersReport",
    "conjecture_scan",
    "gowers_norm",
    "ExperimentConfig",
    "RunReport",
    "run_example1",
    "run_example2",
    "run_extremal_cosets",
    "run_recovery_sweep",
    "run_soundness_sweep",
]
