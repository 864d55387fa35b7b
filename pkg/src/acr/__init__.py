"""Absolute concentration robustness in mass-action reaction networks."""

__version__ = "0.1.0"

from .analysis import (  # noqa: E402
    AcrOptions,
    CompatibilityContext,
    acr_network_sweep,
    analyze_acr,
    classify_basin,
    compatible,
    compatible_with_hyperplane,
    detect_dynamic_acr,
    detect_static_acr,
)
from .complex_balance import (  # noqa: E402
    cb_acr_classification,
    complex_balance_report,
    guaranteed_complex_balanced,
    verify_complex_balance_at,
)
from .dynamics import (  # noqa: E402
    classify_stability,
    find_steady_state,
    integrate,
    jacobian,
    rhs,
)
from .network import MassActionSystem, ReactionNetwork, stoichiometric_matrix  # noqa: E402
from .parser import ParseError, format_network, parse_document, parse_network  # noqa: E402
from .structure import (  # noqa: E402
    conservation_laws,
    deficiency,
    is_weakly_reversible,
    linkage_classes,
    shinar_feinberg,
    structural_report,
    terminal_structure,
    unit_vector_in_S,
)

__all__ = [
    "AcrOptions", "CompatibilityContext", "MassActionSystem", "ParseError", "ReactionNetwork",
    "acr_network_sweep", "analyze_acr", "cb_acr_classification", "classify_basin",
    "classify_stability", "compatible", "compatible_with_hyperplane", "complex_balance_report",
    "conservation_laws", "deficiency", "detect_dynamic_acr", "detect_static_acr",
    "find_steady_state", "format_network", "guaranteed_complex_balanced", "integrate",
    "is_weakly_reversible", "jacobian", "linkage_classes", "parse_document", "parse_network",
    "rhs", "shinar_feinberg", "stoichiometric_matrix", "structural_report", "terminal_structure",
    "unit_vector_in_S", "verify_complex_balance_at",
]
