"""Far field, exterior field and boundary defect of a computed density."""

from dataclasses import dataclass, field

import numpy as np

from .galerkin import incident_wave
from .operators import apply_T_at
from .specfun import hankel1_table


def farfield_constant(k=1.0):
    """c in v ~ -c e^{ikr}/sqrt(r) int e^{-ik x'.y} h ds; e^{i pi/4}/sqrt(8 pi k)."""
    return np.exp(0.25j * np.pi) / np.sqrt(8 * np.pi * k)


@dataclass
class FarFieldPattern:
    alpha: tuple
    k: float
    angles: np.ndarray
    amplitudes: np.ndarray
    constant: complex = field(default=0j)

    @property
    def directions(self):
        return np.stack([np.cos(self.angles), np.sin(self.angles)], axis=-1)


@dataclass
class ExteriorFieldSample:
    x: np.ndarray
    total: complex
    scattered: complex


class EvaluationTooCloseError(ValueError):
    pass


def uniform_angles(L):
    return 2 * np.pi * np.arange(L) / L


def far_field_at(solution, k, angles):
    """A(alpha') for arbitrary observation angles."""
    grid = solution.grid
    angles = np.atleast_1d(np.asarray(angles, float))
    dirs = np.stack([np.cos(angles), np.sin(angles)], axis=-1)
    phase = np.exp(-1j * k * (dirs @ grid.points.T))
    return -farfield_constant(k) * (phase @ (grid.weights * solution.h))


def far_field(solution, curve, k, alpha, L):
    """Scattering amplitude at L uniformly spaced directions."""
    angles = uniform_angles(L)
    return FarFieldPattern(tuple(alpha), float(k), angles, far_field_at(solution, k, angles),
                           farfield_constant(k))


def near_field(solution, curve, k, alpha, x):
    """Total and scattered field at an exterior point ``x``."""
    grid = solution.grid
    x = np.asarray(x, float)
    dist = np.linalg.norm(grid.points - x, axis=-1)
    guard = 2 * grid.spacing
    if np.min(dist) < guard:
        raise EvaluationTooCloseError(
            f"point is {np.min(dist):.3g} from the boundary; need at least {guard:.3g}"
        )
    g = 0.25j * hankel1_table(0, k * dist)[0]
    v = -np.sum(g * grid.weights * solution.h)
    u = incident_wave(x, k, alpha) + v
    return ExteriorFieldSample(x, complex(u), complex(v))


def boundary_residual(solution, curve, k, alpha, n_test=64):
    """max |f - T h| at n_test boundary points half a grid cell off the nodes."""
    grid = solution.grid
    targets = 2 * np.pi * np.arange(n_test) / n_test + np.pi / grid.n
    Th = apply_T_at(curve, grid, k, solution.h, targets)
    f = incident_wave(curve.point(targets), k, alpha)
    return float(np.max(np.abs(f - Th)))
