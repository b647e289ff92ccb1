"""Drinfeld's upper half space over finite fields, its Deligne-Lusztig
cover, and Lusztig's unipotent quotient maps, computed exactly."""

from .errors import BudgetExceeded, CheckFailed, ContextMismatch, NotOnVariety
from .fields import FieldCtx, FieldElem, make_field
from .geometry import ProjectivePoint, VarietyCtx, enumerate_dl, enumerate_omega
from .counting import count_row, omega_count_closed

__version__ = "0.1.0"

__all__ = [
    "BudgetExceeded",
    "CheckFailed",
    "ContextMismatch",
    "FieldCtx",
    "FieldElem",
    "NotOnVariety",
    "ProjectivePoint",
    "VarietyCtx",
    "count_row",
    "enumerate_dl",
    "enumerate_omega",
    "make_field",
    "omega_count_closed",
]
