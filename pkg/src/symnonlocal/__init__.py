"""Nonlocality of permutation-symmetric qubit states via the Majorana representation."""

from .bell import (
    BellFunctional,
    LhvStrategy,
    ProbabilityError,
    SettingsAssignment,
    Term,
    evaluate_functional,
    hardy_functional,
    joint_probability,
    lhv_max,
    persistence_functional,
    strategy_value,
)
from .hardy import (
    HardyConditionReport,
    HardyMeasurements,
    SeparableStateError,
    check_hardy_conditions,
    construct_hardy_measurements,
    dicke_measurements,
)
from .majorana import (
    MajoranaSpectrum,
    MpResidualReport,
    NumericalError,
    degeneracy_profile,
    is_dicke_up_to_rotation,
    is_majorana_point,
    majorana_polynomial,
    points_to_state,
    state_to_points,
)
from .optimize import (
    OptimizationConfig,
    OptimizationResult,
    closed_form_thetas,
    dicke_theta_search,
    optimize_settings,
    rescaled_dicke_value,
)
from .symcore import (
    DomainError,
    MeasurementBasis,
    PureQubit,
    ResourceError,
    SymmetricState,
    antipode,
    dicke_state,
    from_named,
    product_state,
    project_qubit,
    rotate,
    symmetrize_product,
    to_statevector,
)

__version__ = "0.1.0"
