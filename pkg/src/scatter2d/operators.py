r"""Nyström discretisation of the single-layer operator and its log splitting.

The kernel :math:`g = \tfrac{i}{4} H^{(1)}_0(k r)` is written as

.. math::
    g(\theta, \tau) = L(\theta, \tau) \ln\bigl(4 \sin^2\tfrac{\theta - \tau}{2}\bigr)
                      + M(\theta, \tau),
    \qquad L = -\frac{J_0(k r)}{4 \pi},

with :math:`M` smooth.  The log factor is integrated with the periodic
product rule

.. math::
    R_j(t) = -\frac{4\pi}{n} \sum_{m=1}^{n/2-1} \frac{\cos m (t - t_j)}{m}
             - \frac{4\pi}{n^2} \cos\bigl(\tfrac{n}{2} (t - t_j)\bigr)

and :math:`M` with the trapezoid rule.  Every matrix acts on grid samples,
so column ``j`` carries the arc element ``a(theta_j)``.
"""

import warnings
from dataclasses import dataclass

import numpy as np

from .geometry import curve_diameter
from .specfun import EULER_GAMMA, bessel_table, hankel1_table

RESONANCE_RATIO = 1e-8


class ResonanceWarning(RuntimeWarning):
    """The discrete single-layer operator is numerically singular."""


@dataclass(frozen=True)
class ProblemConfig:
    k: float = 1.0
    alpha: tuple = (1.0, 0.0)

    def __post_init__(self):
        if not self.k > 0:
            raise ValueError("wavenumber must be positive")
        a = np.asarray(self.alpha, dtype=float)
        if a.shape != (2,) or abs(np.hypot(*a) - 1.0) > 1e-12:
            raise ValueError("incident direction must be a unit vector in R^2")

    @classmethod
    def from_degrees(cls, k=1.0, degrees=0.0):
        t = np.deg2rad(degrees)
        return cls(k, (float(np.cos(t)), float(np.sin(t))))


@dataclass(frozen=True)
class OperatorMatrices:
    grid: object
    k: float
    T: np.ndarray
    Q: np.ndarray
    K: np.ndarray
    log_scale: float

    @property
    def Q_symmetric(self):
        """Q with the arc-element column factor removed (symmetric)."""
        return self.Q / self.grid.arc_elements[None, :]


def kernel_g(curve, k, theta, tau):
    """(i/4) H_0^(1)(k |x(theta) - x(tau)|) for distinct boundary points."""
    d = np.linalg.norm(curve.point(theta) - curve.point(tau), axis=-1)
    if np.any(d == 0.0):
        raise ValueError("kernel_g is singular at coincident points; use kernel_split")
    return 0.25j * hankel1_table(0, np.atleast_1d(k * d))[0].reshape(np.shape(d))[()]


def kernel_split(curve, k, theta, tau):
    """Return ``(log_coefficient, smooth_part)`` of the kernel at (theta, tau).

    The diagonal ``theta == tau`` (mod 2 pi) is handled by its limit.
    """
    theta, tau = np.broadcast_arrays(np.asarray(theta, float), np.asarray(tau, float))
    d = np.linalg.norm(curve.point(theta) - curve.point(tau), axis=-1)
    diag = d == 0.0
    L = np.full(theta.shape, -1.0 / (4 * np.pi), dtype=complex)
    M = np.empty(theta.shape, dtype=complex)
    if np.any(~diag):
        J, Y = bessel_table(0, k * d[~diag])
        L[~diag] = -J[0] / (4 * np.pi)
        logfac = np.log(4 * np.sin(0.5 * (theta[~diag] - tau[~diag])) ** 2)
        M[~diag] = 0.25j * (J[0] + 1j * Y[0]) - L[~diag] * logfac
    if np.any(diag):
        a = curve.arc_element(theta[diag])
        M[diag] = 0.25j - (EULER_GAMMA + np.log(0.5 * k * a)) / (2 * np.pi)
    return L[()], M[()]


def log_weights(n, t, nodes):
    """Product-quadrature weights R_j(t) for the ln(4 sin^2) factor.

    ``t`` may be an array of targets; the result has shape ``t.shape + (n,)``.
    """
    diff = np.asarray(t, float)[..., None] - nodes
    m = np.arange(1, n // 2)
    c = np.cos(diff[..., None] * m) @ (1.0 / m)
    return -(4 * np.pi / n) * c - (4 * np.pi / n**2) * np.cos(0.5 * n * diff)


def _circulant_log_weights(n):
    """R_{(i-j) mod n} on the grid, built exactly symmetric."""
    k = np.arange(n)
    half = np.minimum(k, n - k)
    base = log_weights(n, 2 * np.pi * half / n, np.zeros(1))[:, 0]
    return base[(k[:, None] - k[None, :]) % n]


def _grid_geometry(grid):
    n = grid.n
    idx = np.arange(n)
    steps = np.minimum((idx[:, None] - idx[None, :]) % n, (idx[None, :] - idx[:, None]) % n)
    half_sin = np.abs(np.sin(np.pi * steps / n))
    diff = grid.points[:, None, :] - grid.points[None, :, :]
    dist = np.sqrt(np.sum(diff * diff, axis=-1))
    return dist, half_sin


def _kernel_pieces(grid, k):
    """Log coefficient L and smooth part M of g on the grid (n x n)."""
    dist, half_sin = _grid_geometry(grid)
    off = ~np.eye(grid.n, dtype=bool)
    L = np.full((grid.n, grid.n), -1.0 / (4 * np.pi), dtype=complex)
    M = np.empty((grid.n, grid.n), dtype=complex)
    J, Y = bessel_table(0, k * dist[off])
    L[off] = -J[0] / (4 * np.pi)
    M[off] = 0.25j * (J[0] + 1j * Y[0]) - L[off] * np.log(4 * half_sin[off] ** 2)
    M[~off] = 0.25j - (EULER_GAMMA + np.log(0.5 * k * grid.arc_elements)) / (2 * np.pi)
    return L, M


def assemble_T(curve, grid, k):
    """Nyström matrix of T h = int_S g h ds on ``grid`` (acts on samples)."""
    L, M = _kernel_pieces(grid, k)
    R = _circulant_log_weights(grid.n)
    return (R * L + grid.weight * M) * grid.arc_elements[None, :]


def assemble_Q(curve, grid, log_scale=None):
    """Nyström matrix of Q h = int_S (1/2pi) ln(a / r) h ds.

    ``log_scale`` is the constant ``a``; it defaults to the curve diameter,
    which keeps ``a / r >= 1`` on the whole boundary.
    """
    a = curve_diameter(curve) if log_scale is None else float(log_scale)
    dist, half_sin = _grid_geometry(grid)
    off = ~np.eye(grid.n, dtype=bool)
    ratio = np.empty_like(dist)
    ratio[off] = dist[off] / (2 * half_sin[off])
    ratio[~off] = grid.arc_elements
    smooth = (np.log(a) - np.log(ratio)) / (2 * np.pi)
    R = _circulant_log_weights(grid.n)
    return (-R / (4 * np.pi) + grid.weight * smooth) * grid.arc_elements[None, :]


def assemble_K(curve, grid, k, log_scale=None):
    """K := T - Q, so the splitting T = Q + K holds exactly."""
    return assemble_T(curve, grid, k) - assemble_Q(curve, grid, log_scale)


def assemble_operators(curve, grid, k, log_scale=None, check_resonance=True):
    """Assemble T, Q and K together; optionally warn near interior resonance."""
    a = curve_diameter(curve) if log_scale is None else float(log_scale)
    T = assemble_T(curve, grid, k)
    Q = assemble_Q(curve, grid, a)
    if check_resonance:
        resonance_check(T)
    return OperatorMatrices(grid, float(k), T, Q, T - Q, a)


def resonance_check(T):
    """Warn if sigma_min(T) < 1e-8 sigma_max(T); return that ratio."""
    s = np.linalg.svd(T, compute_uv=False)
    ratio = s[-1] / s[0]
    if ratio < RESONANCE_RATIO:
        warnings.warn(
            f"single-layer matrix nearly singular (sigma_min/sigma_max = {ratio:.2e}); "
            "k^2 is close to an interior Dirichlet eigenvalue",
            ResonanceWarning,
            stacklevel=2,
        )
    return ratio


def apply_T_at(curve, grid, k, h, targets):
    """(T h)(t) at arbitrary off-grid parameters ``t`` with target-centred weights."""
    targets = np.atleast_1d(np.asarray(targets, float))
    pts = curve.point(targets)
    diff = pts[:, None, :] - grid.points[None, :, :]
    dist = np.sqrt(np.sum(diff * diff, axis=-1))
    J, Y = bessel_table(0, k * dist)
    L = -J[0] / (4 * np.pi)
    logfac = np.log(4 * np.sin(0.5 * (targets[:, None] - grid.nodes[None, :])) ** 2)
    M = 0.25j * (J[0] + 1j * Y[0]) - L * logfac
    R = log_weights(grid.n, targets, grid.nodes)
    return ((R * L + grid.weight * M) * grid.arc_elements[None, :]) @ h
