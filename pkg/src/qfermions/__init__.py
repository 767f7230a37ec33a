"""q-deformed fermions: exact Fock-space algebra, Jackson derivatives and
the thermostatistics of the exclusion-obeying q-fermion gas."""

from .fock import AlgebraKind, FockRep, build_rep, solve_recurrence
from .jackson import DerivKind, PolyFunc, jd_apply
from .qcore import Deformation, LaurentPoly, basic_boson, basic_factorial, basic_fermion
from .thermo import GasState, f_nu

__version__ = "0.1.0"

__all__ = [
    "AlgebraKind",
    "Deformation",
    "DerivKind",
    "FockRep",
    "GasState",
    "LaurentPoly",
    "PolyFunc",
    "basic_boson",
    "basic_factorial",
    "basic_fermion",
    "build_rep",
    "f_nu",
    "jd_apply",
    "solve_recurrence",
]
