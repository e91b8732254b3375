from .linalg import (
    HermitianEigensystem,
    LUFactorization,
    hermitian_eig,
    lu_solve,
    max_norm,
)
from .specfun import BesselPair, bessel_jy, hankel1_orders01

__all__ = [
    "HermitianEigensystem",
    "LUFactorization",
    "hermitian_eig",
    "lu_solve",
    "max_norm",
    "BesselPair",
    "bessel_jy",
    "hankel1_orders01",
]
