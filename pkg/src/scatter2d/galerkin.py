"""Projection (least-squares) solution of the single-layer equation T h = f.

With trial functions ``phi_j`` the coefficients solve the normal equations
``sum_j a_ij c_j = f_i`` where ``a_ij = (T phi_j, T phi_i)`` and
``f_i = (f, T phi_i)`` in the chosen L2 or H1 pairing, so ``c`` minimises
``|| sum_j c_j T phi_j - f ||``.
"""

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .basis import (
    BasisFamily,
    InnerProduct,
    basis_samples,
    check_resolution,
    gram_factor,
    gram_from_factor,
)
from .operators import assemble_T
from .specfun import BesselOverflowError


class AssemblyOverflowError(BesselOverflowError):
    """Basis values overflowed; the Gram matrix is effectively singular."""


class NearResonanceError(np.linalg.LinAlgError):
    """The Gram matrix could not be factorised."""


@dataclass
class GalerkinSystem:
    J: int
    inner: InnerProduct
    a: np.ndarray
    f: np.ndarray
    family: BasisFamily
    curve: object
    k: float
    grid: object = field(repr=False)
    phi: np.ndarray = field(repr=False)
    Tphi: np.ndarray = field(repr=False)
    incident: np.ndarray = field(repr=False)
    factor: np.ndarray = field(repr=False)
    rhs_factor: np.ndarray = field(repr=False)

    def gram_singular_values(self):
        """Singular values of ``a`` (descending), from the factor's SVD."""
        return np.linalg.svd(self.factor, compute_uv=False) ** 2


@dataclass
class DensitySolution:
    coefficients: np.ndarray
    h: np.ndarray
    residual_h1: float
    method: str
    grid: object = field(repr=False)
    iterations: int = 0


def incident_wave(points, k, alpha):
    """Plane wave exp(i k alpha . x) at ``points`` (shape (..., 2))."""
    return np.exp(1j * k * (points @ np.asarray(alpha, float)))


def system_from_samples(phi, Tphi, incident, grid, inner, family, curve, k):
    """Build the normal equations from basis and image samples on ``grid``."""
    inner = InnerProduct(inner)
    F = gram_factor(Tphi, grid, inner)
    Ff = gram_factor(incident[:, None], grid, inner)[:, 0]
    return GalerkinSystem(
        J=phi.shape[1],
        inner=inner,
        a=gram_from_factor(F),
        f=F.conj().T @ Ff,
        family=BasisFamily(family),
        curve=curve,
        k=float(k),
        grid=grid,
        phi=phi,
        Tphi=Tphi,
        incident=incident,
        factor=F,
        rhs_factor=Ff,
    )


def assemble_system(curve, grid, family, k, J, inner=InnerProduct.H1, alpha=(1.0, 0.0), T=None):
    """Assemble a_ij and f_i; ``T`` may be passed to reuse an assembled matrix."""
    check_resolution(J, grid.n)
    try:
        phi = basis_samples(family, curve, k, J, grid.nodes)
    except BesselOverflowError as exc:
        raise AssemblyOverflowError(f"overflow in {BasisFamily(family).value} basis: {exc}") from exc
    if T is None:
        T = assemble_T(curve, grid, k)
    Tphi = T @ phi
    if not np.all(np.isfinite(Tphi)):
        raise AssemblyOverflowError("non-finite T phi_j")
    f = incident_wave(grid.points, k, alpha)
    return system_from_samples(phi, Tphi, f, grid, inner, family, curve, k)


def with_incidence(sys, alpha):
    """Same system with a new incident direction (a_ij is reused)."""
    f = incident_wave(sys.grid.points, sys.k, alpha)
    Ff = gram_factor(f[:, None], sys.grid, sys.inner)[:, 0]
    out = GalerkinSystem(**{**sys.__dict__})
    out.incident, out.rhs_factor, out.f = f, Ff, sys.factor.conj().T @ Ff
    return out


def solve_system(sys):
    """Cholesky solve of the Hermitian positive definite system."""
    try:
        cf = scipy.linalg.cho_factor(sys.a)
    except np.linalg.LinAlgError as exc:
        raise NearResonanceError(
            "Gram matrix not numerically positive definite; "
            "check for interior resonance or an ill-conditioned basis"
        ) from exc
    c = scipy.linalg.cho_solve(cf, sys.f)
    return DensitySolution(c, sys.phi @ c, residual_norm(sys, c), "galerkin", sys.grid)


def residual_norm(sys, c):
    """|| sum_j c_j T phi_j - f || in the system's inner product."""
    return float(np.linalg.norm(sys.factor @ c - sys.rhs_factor))


def condition_number(matrix):
    """sigma_max / sigma_min by SVD; ``inf`` if singular or non-finite."""
    matrix = np.asarray(matrix)
    if not np.all(np.isfinite(matrix)):
        return np.inf
    s = np.linalg.svd(matrix, compute_uv=False)
    if s[-1] == 0.0:
        return np.inf
    return float(s[0] / s[-1])


def gram_condition_number(sys):
    """cond(a) computed as cond(factor)^2, valid past double-precision cond(a)."""
    s = np.linalg.svd(sys.factor, compute_uv=False)
    if s[-1] == 0.0:
        return np.inf
    return float((s[0] / s[-1]) ** 2)
