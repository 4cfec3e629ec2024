r"""Q-preconditioned fixed-point solver for the single-layer equation.

Splitting ``T = Q + K`` with the positive log-kernel operator ``Q`` turns
``T h = f`` into ``h + A h = F`` with ``A = Q^{-1} K`` and ``F = Q^{-1} f``,
which is solved by the Neumann iteration ``h <- F - A h`` when ``||A|| < 1``.

The constant ``a`` inside ``Q`` (kernel ``ln(a / r) / 2 pi``) matters for
contraction: the constant mode of ``K`` has kernel value about
``i/4 - (ln(k a / 2) + gamma) / 2 pi``, so with ``a = diam`` its real part
grows like ``-ln(k diam)`` for small obstacles and ``||A||`` stays above 1.
:func:`contraction_log_scale` picks ``a = max(diam, 2 e^{-gamma} / k)``,
which cancels that real part while keeping ``a / r >= 1``.
"""

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .galerkin import DensitySolution, incident_wave
from .geometry import curve_diameter
from .operators import assemble_operators
from .specfun import EULER_GAMMA


class NotPositiveDefiniteError(np.linalg.LinAlgError):
    """Q failed the symmetric positive definite check."""


class NonContractionError(RuntimeError):
    def __init__(self, norm_estimate):
        super().__init__(
            f"estimated ||A|| = {norm_estimate:.4g} >= 1: Neumann iteration would not "
            "converge; use the Galerkin solver instead"
        )
        self.norm_estimate = norm_estimate


class IterationLimitError(RuntimeError):
    def __init__(self, iterations, last_step):
        super().__init__(f"no convergence after {iterations} iterations (last step {last_step:.3e})")
        self.iterations = iterations
        self.last_step = last_step


@dataclass
class IterationState:
    A: np.ndarray = field(repr=False)
    F: np.ndarray = field(repr=False)
    h: np.ndarray = field(default=None, repr=False)
    iteration_count: int = 0
    last_step_norm: float = np.inf
    estimated_A_norm: float = np.nan
    step_norms: list = field(default_factory=list, repr=False)


def contraction_log_scale(curve, k):
    return max(curve_diameter(curve), 2.0 * math.exp(-EULER_GAMMA) / k)


def _symmetric_part(Q, arc_elements):
    S = Q if arc_elements is None else Q / np.asarray(arc_elements)[None, :]
    return 0.5 * (S + S.T)


def check_spd(Q, arc_elements=None):
    """Smallest eigenvalue of the symmetric kernel part of Q (must be > 0)."""
    lam = float(np.linalg.eigvalsh(_symmetric_part(Q, arc_elements))[0])
    if not lam > 0:
        raise NotPositiveDefiniteError(f"Q is not positive definite (min eigenvalue {lam:.3e})")
    return lam


def factor_Q(Q, arc_elements=None):
    """Cholesky factor of the symmetric part ``S`` where ``Q = S diag(arc)``."""
    check_spd(Q, arc_elements)
    try:
        return scipy.linalg.cho_factor(_symmetric_part(Q, arc_elements))
    except np.linalg.LinAlgError as exc:
        raise NotPositiveDefiniteError(str(exc)) from exc


def solve_Q(Q, rhs, arc_elements=None, factor=None):
    """Solve Q x = rhs.

    Nyström matrices carry the arc element in each column, ``Q = S D``; pass
    ``arc_elements`` (the diagonal of ``D``) so the symmetric ``S`` is
    factorised.  Without it ``Q`` itself must be symmetric.
    """
    cf = factor_Q(Q, arc_elements) if factor is None else factor
    y = scipy.linalg.cho_solve(cf, rhs)
    if arc_elements is None:
        return y
    arc = np.asarray(arc_elements).reshape((-1,) + (1,) * (np.ndim(rhs) - 1))
    return y / arc


def estimate_operator_norm(A):
    """Largest singular value of A."""
    A = np.asarray(A)
    if not np.any(A):
        return 0.0
    return float(np.linalg.norm(A, 2))


def build_iteration(ops, f):
    """Form A = Q^{-1} K and F = Q^{-1} f from assembled operators."""
    arc = ops.grid.arc_elements
    cf = factor_Q(ops.Q, arc)
    A = solve_Q(ops.Q, ops.K, arc, factor=cf)
    F = solve_Q(ops.Q, f, arc, factor=cf)
    return IterationState(A=A, F=F, estimated_A_norm=estimate_operator_norm(A))


def neumann_solve(A, F, tol=1e-10, max_iter=500, norm_estimate=None):
    """h_{m+1} = F - A h_m from h_0 = F until the relative step is below ``tol``."""
    norm = estimate_operator_norm(A) if norm_estimate is None else norm_estimate
    if norm >= 1.0:
        raise NonContractionError(norm)
    state = IterationState(A=A, F=F, h=np.array(F, dtype=complex), estimated_A_norm=norm)
    for it in range(1, max_iter + 1):
        new = F - A @ state.h
        step = float(np.linalg.norm(new - state.h))
        state.h = new
        state.iteration_count = it
        state.step_norms.append(step)
        state.last_step_norm = step / max(float(np.linalg.norm(new)), np.finfo(float).tiny)
        if state.last_step_norm <= tol:
            return state
    raise IterationLimitError(max_iter, state.last_step_norm)


def solve_by_iteration(curve, grid, k, alpha=(1.0, 0.0), tol=1e-10, max_iter=500, log_scale=None):
    """Full pipeline: assemble, precondition by Q, iterate."""
    a = contraction_log_scale(curve, k) if log_scale is None else log_scale
    ops = assemble_operators(curve, grid, k, log_scale=a)
    f = incident_wave(grid.points, k, alpha)
    state = build_iteration(ops, f)
    state = neumann_solve(state.A, state.F, tol, max_iter, state.estimated_A_norm)
    residual = float(np.linalg.norm(ops.T @ state.h - f) / np.linalg.norm(f))
    sol = DensitySolution(None, state.h, residual, "iteration", grid, state.iteration_count)
    return sol, state


def projected_system(A, F, phi, grid):
    """Matrices of (I + A) h = F projected on an L2-orthonormal basis.

    Returns ``B = I + [(A phi_j, phi_i)]`` and ``[(F, phi_i)]``.
    """
    w = grid.weights[:, None]
    Aphi = A @ phi
    Aij = (np.conj(phi) * w).T @ Aphi
    Fi = (np.conj(phi) * w).T @ F
    return np.eye(phi.shape[1]) + Aij, Fi
