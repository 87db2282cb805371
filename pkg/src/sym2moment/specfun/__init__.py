"""Arbitrary-precision special functions and contour quadrature."""

from .bessel import bessel_j, bessel_j_float, bessel_j_mb
from .contour import ContourSpec, inverse_mellin, line_integral, line_integral_vector
from .gamma import digamma, gamma_ratio, log_gamma
from .hyper import hyp2f1, legendre_p
from .zeta import (
    CHI_M3,
    CHI_M4,
    DirichletCharacter,
    completed_dirichlet_l,
    dirichlet_l,
    gauss_sum,
    hurwitz_zeta,
    periodic_zeta,
    riemann_zeta,
    root_number,
)

__all__ = [
    "CHI_M3",
    "CHI_M4",
    "ContourSpec",
    "DirichletCharacter",
    "bessel_j",
    "bessel_j_float",
    "bessel_j_mb",
    "completed_dirichlet_l",
    "digamma",
    "dirichlet_l",
    "gamma_ratio",
    "gauss_sum",
    "hurwitz_zeta",
    "hyp2f1",
    "inverse_mellin",
    "legendre_p",
    "line_integral",
    "line_integral_vector",
    "log_gamma",
    "periodic_zeta",
    "riemann_zeta",
    "root_number",
]
