"""Small dense matrix pencils, implicit difference systems, and the
multiplier-accelerator model built on top of them.

The layers stack cleanly: ``pencil`` knows nothing about dynamics,
``descriptor`` solves ``F Y[k+1] = G Y[k] + V[k]`` given a Weierstrass
form, ``samuelson`` instantiates the income model three independent ways,
and ``scenario``/``cli`` wrap the lot for batch use.
"""

from .exceptions import (
    ConfigError,
    InconsistentInitialCondition,
    InsufficientExpenditureData,
    IrregularPencil,
    MissingInput,
    NonSquarePencil,
    NumericalBreakdown,
    ToolkitError,
    UnsupportedJordanStructure,
    ValidationError,
    VerificationFailure,
)
from .pencil import (
    DetPolynomial,
    EigenStructure,
    EigenvalueGroup,
    MatrixPencil,
    RegularityVerdict,
    WeierstrassForm,
    eigenstructure,
    is_regular,
    pencil_det_poly,
    weierstrass_decompose,
)
from .descriptor import (
    ConsistencyReport,
    DescriptorSystem,
    ForcedTerm,
    InitialCondition,
    InputSequence,
    Trajectory,
    check_consistency,
    forced_term,
    solve_general,
    solve_ivp,
)
from .samuelson import (
    ClosedForm,
    ConstantExpenditure,
    EconomicState,
    GovernmentExpenditure,
    Regime,
    Roots,
    SamuelsonParams,
    SequenceExpenditure,
    START_INDEX,
    build_system,
    classify_regime,
    closed_form_trajectory,
    closed_form_weights,
    consistent_initial_state,
    impulse_response,
    recursion_oracle,
    roots,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # exceptions
    "ToolkitError",
    "NonSquarePencil",
    "IrregularPencil",
    "NumericalBreakdown",
    "UnsupportedJordanStructure",
    "MissingInput",
    "InconsistentInitialCondition",
    "InsufficientExpenditureData",
    "ConfigError",
    "ValidationError",
    "VerificationFailure",
    # pencils
    "MatrixPencil",
    "DetPolynomial",
    "RegularityVerdict",
    "EigenvalueGroup",
    "EigenStructure",
    "WeierstrassForm",
    "pencil_det_poly",
    "is_regular",
    "eigenstructure",
    "weierstrass_decompose",
    # descriptor systems
    "InputSequence",
    "DescriptorSystem",
    "Trajectory",
    "ForcedTerm",
    "InitialCondition",
    "ConsistencyReport",
    "forced_term",
    "solve_general",
    "check_consistency",
    "solve_ivp",
    # the income model
    "START_INDEX",
    "ConstantExpenditure",
    "SequenceExpenditure",
    "GovernmentExpenditure",
    "SamuelsonParams",
    "EconomicState",
    "Roots",
    "ClosedForm",
    "Regime",
    "build_system",
    "recursion_oracle",
    "roots",
    "impulse_response",
    "closed_form_weights",
    "closed_form_trajectory",
    "consistent_initial_state",
    "classify_regime",
]
