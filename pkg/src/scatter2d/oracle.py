r"""Closed-form reference solutions for the sound-soft disk.

For a disk of radius ``R`` and incidence angle ``theta_a`` the total field is

.. math::
    u = \sum_m i^m \Bigl[J_m(kr) - \frac{J_m(kR)}{H_m(kR)} H_m(kr)\Bigr]
        e^{i m (\theta - \theta_a)} .

Differentiating at ``r = R`` and using the Wronskian
:math:`J_m H_m' - J_m' H_m = 2i/(\pi z)` collapses the normal derivative to

.. math::
    u_N = -\frac{2i}{\pi R} \sum_m \frac{i^{|m|} e^{i m (\theta - \theta_a)}}{H_{|m|}(kR)},

and the large-argument form of :math:`H_m` gives the scattering amplitude

.. math::
    A = -\sqrt{\tfrac{2}{\pi k}}\, e^{-i\pi/4}
        \sum_m \frac{J_{|m|}(kR)}{H_{|m|}(kR)} e^{i m (\theta' - \theta_a)} .
"""

import numpy as np

from .specfun import bessel_table

TAIL_TOLERANCE = 1e-14
DEFAULT_MODES = 40


class TruncationError(ValueError):
    pass


def _angle(alpha):
    return float(np.arctan2(alpha[1], alpha[0]))


def _modal_sum(coef, psi):
    """sum_{m=-M}^{M} c_|m| e^{i m psi} = c_0 + 2 sum_{m>=1} c_m cos(m psi)."""
    m = np.arange(1, coef.size)
    return coef[0] + 2 * np.cos(np.multiply.outer(psi, m)) @ coef[1:]


def _check_tail(coef, M):
    head = np.max(np.abs(coef))
    if np.abs(coef[-1]) > TAIL_TOLERANCE * head:
        raise TruncationError(
            f"{M} modes leave a tail term {abs(coef[-1]):.2e} > {TAIL_TOLERANCE:g} of the head"
        )


def _hankel_ratio_modes(R, k, M):
    J, Y = bessel_table(M, np.array([k * R]))
    return J[:, 0], (J + 1j * Y)[:, 0]


def _auto_modes(R, k, weights_fn):
    for M in range(4, 61):
        coef = weights_fn(M)
        if np.abs(coef[-1]) <= 0.1 * TAIL_TOLERANCE * np.max(np.abs(coef)):
            return M
    return 60


def disk_density_coefficients(R, k, M):
    _, H = _hankel_ratio_modes(R, k, M)
    m = np.arange(M + 1)
    return -(2j / (np.pi * R)) * (1j**m) / H


def disk_density(R, k, alpha, theta, M_modes=None):
    """Normal derivative u_N of the total field on the circle of radius R."""
    M = M_modes or _auto_modes(R, k, lambda M: disk_density_coefficients(R, k, M))
    coef = disk_density_coefficients(R, k, M)
    _check_tail(coef, M)
    return _modal_sum(coef, np.asarray(theta, float) - _angle(alpha))


def disk_far_field(R, k, alpha, angles, M_modes=None):
    """Scattering amplitude A(alpha', alpha) for alpha' at the given angles."""

    def coefs(M):
        J, H = _hankel_ratio_modes(R, k, M)
        return J / H

    M = M_modes or _auto_modes(R, k, coefs)
    coef = coefs(M)
    _check_tail(coef, M)
    pref = -np.sqrt(2 / (np.pi * k)) * np.exp(-0.25j * np.pi)
    return pref * _modal_sum(coef, np.asarray(angles, float) - _angle(alpha))


def disk_total_field(R, k, alpha, x, M_modes=DEFAULT_MODES):
    """Total field u at exterior points ``x`` (shape (..., 2))."""
    x = np.asarray(x, float)
    r = np.hypot(x[..., 0], x[..., 1])
    if np.any(r <= R):
        raise ValueError("evaluation points must lie outside the disk")
    psi = np.arctan2(x[..., 1], x[..., 0]) - _angle(alpha)
    Jr, Yr = bessel_table(M_modes, k * r)
    JR, HR = _hankel_ratio_modes(R, k, M_modes)
    m = np.arange(M_modes + 1).reshape((-1,) + (1,) * r.ndim)
    radial = (1j**m) * (Jr - (JR / HR).reshape(m.shape) * (Jr + 1j * Yr))
    total = radial[0] + 2 * np.sum(radial[1:] * np.cos(m[1:] * psi), axis=0)
    return total


def circle_operator_eigs(k, m):
    """Eigenvalue (i pi / 2) J_m(k) H_m(k) of T on e^{i m theta}, unit circle."""
    m = abs(int(m))
    if m > 40:
        raise ValueError("order limited to |m| <= 40")
    J, Y = bessel_table(m, np.array([float(k)]))
    return complex(0.5j * np.pi * J[m, 0] * (J[m, 0] + 1j * Y[m, 0]))
