"""Representations by floor quadratic forms floor(x^2/a) + floor(y^2/b) + floor(z^2/c)."""

__version__ = "0.1.0"

from .arith import squarefree_part  # noqa: E402
from .coset import (  # noqa: E402
    ABC_FORM,
    M_FORM,
    CosetDescriptor,
    ResidueTriple,
    build_coset,
    coset_represents_global,
    floor_to_coset,
    l_value,
)
from .floorform import (  # noqa: E402
    FloorForm,
    Representation,
    ScanReport,
    eval_form,
    representation_count,
    scan_range,
    search_representation,
)
from .padic import LocalProblem, LocalStatus, shifted_quadratic_solvable  # noqa: E402
from .planner import (  # noqa: E402
    PlanVerification,
    ResiduePlan,
    plan_residues_abc,
    plan_residues_m,
    verify_plan,
)
from .theta import (  # noqa: E402
    ThetaSeries,
    coset_theta_coefficients,
    obstruction_sets,
    unary_theta_coefficients,
)
