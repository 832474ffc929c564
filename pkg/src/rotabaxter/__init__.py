"""Exact homogeneous Rota-Baxter operators on the Witt and Virasoro algebras."""

from .algebra import (
    ZERO,
    BasisSymbol,
    C,
    Cd,
    DomainError,
    Element,
    Kind,
    L,
    Ld,
    Signature,
    WindowError,
    bracket,
    cocycle,
    jacobi_defect,
    parse_element,
    parse_symbol,
    structure_bracket,
)
from .catalog import FAMILIES, GRID, Member, grid_members, make_operator, parse_member
from .operators import (
    HomogeneousOperator,
    apply,
    companion,
    lift_to_virasoro,
    lifting_obstruction,
    rb_defect,
    restrict_to_witt,
    verify_rb,
)

__version__ = "0.1.0"
