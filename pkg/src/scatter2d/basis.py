"""Trial bases on the boundary, L2/H1 pairings and Gram diagnostics.

Index ``j = 1`` is the constant (m = 0) mode; after that each m >= 1
contributes two functions, cosine then sine for the weighted trigonometric
basis and ``e^{+im theta}`` then ``e^{-im theta}`` for the radial wave bases.
A truncation ``J = 2M + 1`` therefore covers modes up to ``M``.
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .specfun import bessel_table


class BasisFamily(str, Enum):
    WEIGHTED_TRIG = "weighted-trig"
    HANKEL = "hankel"
    BESSEL = "bessel"


class InnerProduct(str, Enum):
    H0 = "h0"
    H1 = "h1"


class ResolutionError(ValueError):
    """Truncation too large for the grid (aliasing in the H1 derivative)."""


@dataclass(frozen=True)
class RieszBounds:
    lower: float
    upper: float
    family: BasisFamily
    J: int

    @property
    def ratio(self):
        return self.upper / self.lower


def mode_of_index(j):
    """Map 1-based index to ``(m, branch)``; branch is +1 (cos / e^{+}) or -1."""
    if j < 1:
        raise ValueError("basis indices start at 1")
    if j == 1:
        return 0, 1
    return j // 2, 1 if j % 2 == 0 else -1


def check_resolution(J, n):
    if J > n // 2 - 1:
        raise ResolutionError(f"J = {J} exceeds n/2 - 1 = {n // 2 - 1} for n = {n}")


def basis_samples(family, curve, k, J, theta):
    """Columns phi_1 .. phi_J evaluated at ``theta``; shape ``(len(theta), J)``.

    Radial families raise :class:`~scatter2d.specfun.BesselOverflowError`
    when ``|Y_m(k r)|`` overflows.
    """
    family = BasisFamily(family)
    theta = np.atleast_1d(np.asarray(theta, float))
    modes = [mode_of_index(j) for j in range(1, J + 1)]
    out = np.empty((theta.size, J), dtype=complex)
    if family is BasisFamily.WEIGHTED_TRIG:
        a = curve.arc_element(theta)
        for col, (m, branch) in enumerate(modes):
            if m == 0:
                out[:, col] = 1.0 / np.sqrt(2 * np.pi * a)
            elif branch > 0:
                out[:, col] = np.cos(m * theta) / np.sqrt(np.pi * a)
            else:
                out[:, col] = np.sin(m * theta) / np.sqrt(np.pi * a)
        return out

    r, polar = curve.radius(theta)
    mmax = max(m for m, _ in modes)
    Jt, Yt = bessel_table(mmax, k * r)
    radial = Jt + 1j * Yt if family is BasisFamily.HANKEL else Jt.astype(complex)
    for col, (m, branch) in enumerate(modes):
        # Z_{-m} = (-1)^m Z_m for J, Y and H^(1)
        sign = (-1.0) ** m if branch < 0 else 1.0
        out[:, col] = sign * radial[m] * np.exp(1j * branch * m * polar)
    return out


def eval_basis(family, curve, k, j, theta):
    """Value of the ``j``-th basis function (1-based) at ``theta``."""
    return basis_samples(family, curve, k, j, theta)[:, j - 1].reshape(np.shape(theta))[()]


def spectral_derivative(u, n):
    """d/dtheta of periodic samples (along axis 0), Nyquist mode dropped."""
    freq = np.fft.fftfreq(n, d=1.0 / n)
    freq[n // 2] = 0.0
    shape = (n,) + (1,) * (np.ndim(u) - 1)
    return np.fft.ifft(1j * freq.reshape(shape) * np.fft.fft(u, axis=0), axis=0)


def _check_pair(u, v, grid):
    if np.shape(u)[0] != grid.n or np.shape(v)[0] != grid.n:
        raise ValueError("samples must have one value per grid node")


def inner_h0(u, v, grid):
    """(u, v)_0 = int_S u conj(v) ds by the trapezoid rule."""
    _check_pair(u, v, grid)
    return np.sum(grid.weights * np.asarray(u) * np.conj(v))


def arc_derivative(u, grid):
    """Arc-length derivative (du/dtheta) / a(theta) of grid samples."""
    a = grid.arc_elements.reshape((grid.n,) + (1,) * (np.ndim(u) - 1))
    return spectral_derivative(u, grid.n) / a


def inner_h1(u, v, grid):
    """(u, v)_1 = (u, v)_0 + (u_s, v_s)_0 with arc-length derivatives."""
    _check_pair(u, v, grid)
    return inner_h0(u, v, grid) + inner_h0(arc_derivative(u, grid), arc_derivative(v, grid), grid)


def gram_factor(samples, grid, inner):
    """Matrix F with F^H F equal to the Gram matrix of the sample columns.

    Keeping the factor lets the Gram spectrum be read off from the singular
    values of F, which stays accurate far beyond cond = 1e16.
    """
    w = np.sqrt(grid.weights)[:, None]
    F = w * samples
    if InnerProduct(inner) is InnerProduct.H1:
        F = np.vstack([F, w * arc_derivative(samples, grid)])
    return F


def gram_from_factor(F):
    G = F.conj().T @ F
    return 0.5 * (G + G.conj().T)


def basis_gram(family, curve, k, J, inner, grid):
    """G[i, j] = (phi_j, phi_i) in the chosen inner product."""
    check_resolution(J, grid.n)
    phi = basis_samples(family, curve, k, J, grid.nodes)
    return gram_from_factor(gram_factor(phi, grid, inner))


def estimate_riesz_bounds(family, curve, k, J, grid):
    """Extreme eigenvalues of the L2 Gram matrix of phi_1 .. phi_J."""
    check_resolution(J, grid.n)
    phi = basis_samples(family, curve, k, J, grid.nodes)
    s = np.linalg.svd(gram_factor(phi, grid, InnerProduct.H0), compute_uv=False)
    return RieszBounds(float(s[-1] ** 2), float(s[0] ** 2), BasisFamily(family), J)
