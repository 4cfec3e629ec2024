"""Projection solver for 2D sound-soft scattering with a bounded-condition basis.

The single-layer equation ``T h = f`` for the normal derivative ``h = u_N``
is discretised by Nyström quadrature and solved by a least-squares
projection on a trial basis; the weighted trigonometric basis keeps the
Gram matrix uniformly conditioned while radial Hankel/Bessel bases do not.
"""

__version__ = "0.1.0"

from .basis import (
    BasisFamily,
    InnerProduct,
    RieszBounds,
    basis_gram,
    basis_samples,
    estimate_riesz_bounds,
    eval_basis,
    inner_h0,
    inner_h1,
)
from .fields import FarFieldPattern, boundary_residual, far_field, far_field_at, near_field
from .galerkin import (
    DensitySolution,
    GalerkinSystem,
    assemble_system,
    condition_number,
    gram_condition_number,
    solve_system,
)
from .geometry import BoundaryCurve, CurveKind, CurveSpec, Grid, curve_diameter, make_curve, quadrature_grid
from .iterative import estimate_operator_norm, neumann_solve, solve_by_iteration, solve_Q
from .operators import (
    OperatorMatrices,
    ProblemConfig,
    assemble_K,
    assemble_operators,
    assemble_Q,
    assemble_T,
    kernel_g,
    kernel_split,
)
from .oracle import circle_operator_eigs, disk_density, disk_far_field, disk_total_field
