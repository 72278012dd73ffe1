"""Fast multipoint evaluation of dense bivariate polynomials over prime fields."""

from .bipoly import (
    BiPoly,
    PointSet,
    ShearTransform,
    affine_substitute,
    batch_modular_compose,
    find_shear_theta,
    grid_multieval,
    kronecker_mul,
    modular_compose,
    multieval_any,
    multieval_generic,
    multieval_grid_blocks,
    naive_multieval,
)
from .config import ArithmeticConfig, override
from .errors import *  # noqa: F401,F403
from .field import NTT_PRIME_62, FieldElement, PrimeField, field_new, is_prime, ntt_forward, ntt_inverse
from .linalg import FieldMatrix, MatMulStrategy, PolyMatrix, mat_mul, mat_times_longvec, polymat_mul
from .unipoly import (
    SubproductTree,
    UniPoly,
    build_subproduct_tree,
    interpolate,
    multipoint_eval,
    poly_divrem,
    poly_mul,
    pow_mod,
    powers_mod,
    taylor_shift,
)

__version__ = "0.1.0"
