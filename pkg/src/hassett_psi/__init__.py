"""Exact psi-hat intersection numbers on genus-0 Hassett spaces with all weights 1/2."""
from .arith import factorial, falling_factorial, multinomial, telephone_number
from .intersections import (
    DimensionMismatchError,
    DomainError,
    EmptyModuliSpaceError,
    PsiHatMonomial,
    expand_class,
    integrate_direct,
    integrate_pk,
    integrate_reduced,
    psi_integral_m0n,
)
from .series import FormalSeries, build_G, build_witten_F, intersection_from_G

__version__ = "0.1.0"
