"""Smooth closed boundary curves and the periodic quadrature grid on them.

Radial curves (circle, cosine star) are given by ``r(theta)`` and sampled
as ``r(theta) * (cos theta, sin theta)``.  The ellipse ``(p cos, q sin)``
and the kite are parametric; ``theta`` is then a parameter, not the polar
angle.  All parameterisations run counter-clockwise over ``[0, 2 pi)``.
"""

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

MAX_STAR_EPS = 0.95
DIAMETER_NODES = 512
KITE_C = 0.65
KITE_B = 1.5


class CurveKind(str, Enum):
    CIRCLE = "circle"
    ELLIPSE = "ellipse"
    KITE = "kite"
    STAR = "star"


class GeometryError(ValueError):
    pass


@dataclass(frozen=True)
class CurveSpec:
    """Shape parameters.

    ``params`` holds ``(R,)`` for a circle, ``(p, q)`` semi-axes for an
    ellipse, ``()`` for the kite and ``(R, eps, lobes)`` for the cosine star
    ``r = R (1 + eps cos(lobes theta))``.  ``scale`` multiplies every point.
    """

    kind: CurveKind
    params: tuple = ()
    scale: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "kind", CurveKind(self.kind))
        object.__setattr__(self, "params", tuple(float(p) for p in self.params))
        p = self.params
        expected = {CurveKind.CIRCLE: 1, CurveKind.ELLIPSE: 2, CurveKind.KITE: 0, CurveKind.STAR: 3}
        if len(p) != expected[self.kind]:
            raise GeometryError(f"{self.kind.value} takes {expected[self.kind]} parameters, got {len(p)}")
        if not self.scale > 0:
            raise GeometryError("scale must be positive")
        if self.kind is CurveKind.CIRCLE and not p[0] > 0:
            raise GeometryError("circle radius must be positive")
        if self.kind is CurveKind.ELLIPSE and not (p[0] > 0 and p[1] > 0):
            raise GeometryError("ellipse semi-axes must be positive")
        if self.kind is CurveKind.STAR:
            R, eps, lobes = p
            if not R > 0:
                raise GeometryError("star radius must be positive")
            if not abs(eps) < MAX_STAR_EPS:
                raise GeometryError(f"star needs |eps| < {MAX_STAR_EPS}, got {eps}")
            if lobes != int(lobes) or lobes < 1:
                raise GeometryError("star lobe count must be a positive integer")

    @classmethod
    def circle(cls, R=1.0):
        return cls(CurveKind.CIRCLE, (R,))

    @classmethod
    def ellipse(cls, p, q):
        return cls(CurveKind.ELLIPSE, (p, q))

    @classmethod
    def kite(cls, scale=1.0):
        return cls(CurveKind.KITE, (), scale)

    @classmethod
    def star(cls, R=1.0, eps=0.3, lobes=5):
        return cls(CurveKind.STAR, (R, eps, lobes))

    @property
    def is_radial(self):
        return self.kind in (CurveKind.CIRCLE, CurveKind.STAR)

    @property
    def label(self):
        if self.kind is CurveKind.KITE:
            return "kite" if self.scale == 1.0 else f"kite(scale={self.scale:g})"
        args = ",".join(f"{v:g}" for v in self.params)
        s = f"{self.kind.value}({args})"
        return s if self.scale == 1.0 else f"{s}*{self.scale:g}"


def _radial(spec, theta):
    """r, r', r'' for circle and star (before scaling)."""
    kind, p = spec.kind, spec.params
    if kind is CurveKind.CIRCLE:
        r = np.full_like(theta, p[0])
        return r, np.zeros_like(theta), np.zeros_like(theta)
    R, eps, lobes = p
    r = R * (1 + eps * np.cos(lobes * theta))
    dr = -R * eps * lobes * np.sin(lobes * theta)
    d2r = -R * eps * lobes**2 * np.cos(lobes * theta)
    return r, dr, d2r


@dataclass(frozen=True)
class BoundaryCurve:
    """Evaluable boundary curve built from a :class:`CurveSpec`."""

    spec: CurveSpec
    diameter: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "diameter", _fine_grid_diameter(self))

    def point(self, theta):
        """Boundary points, shape ``theta.shape + (2,)``."""
        theta = np.asarray(theta, dtype=float)
        if self.spec.kind is CurveKind.KITE:
            x = np.cos(theta) + KITE_C * np.cos(2 * theta) - KITE_C
            y = KITE_B * np.sin(theta)
        elif self.spec.kind is CurveKind.ELLIPSE:
            x, y = self.spec.params[0] * np.cos(theta), self.spec.params[1] * np.sin(theta)
        else:
            r, _, _ = _radial(self.spec, theta)
            x, y = r * np.cos(theta), r * np.sin(theta)
        return self.spec.scale * np.stack([x, y], axis=-1)

    def tangent(self, theta):
        """d point / d theta (not normalised)."""
        theta = np.asarray(theta, dtype=float)
        if self.spec.kind is CurveKind.KITE:
            dx = -np.sin(theta) - 2 * KITE_C * np.sin(2 * theta)
            dy = KITE_B * np.cos(theta)
        elif self.spec.kind is CurveKind.ELLIPSE:
            dx, dy = -self.spec.params[0] * np.sin(theta), self.spec.params[1] * np.cos(theta)
        else:
            r, dr, _ = _radial(self.spec, theta)
            c, s = np.cos(theta), np.sin(theta)
            dx, dy = dr * c - r * s, dr * s + r * c
        return self.spec.scale * np.stack([dx, dy], axis=-1)

    def arc_element(self, theta):
        """a(theta) = |d point / d theta|."""
        theta = np.asarray(theta, dtype=float)
        if self.spec.is_radial:
            r, dr, _ = _radial(self.spec, theta)
            return self.spec.scale * np.sqrt(dr * dr + r * r)
        return np.linalg.norm(self.tangent(theta), axis=-1)

    def outward_normal(self, theta):
        t = self.tangent(theta)
        nrm = np.stack([t[..., 1], -t[..., 0]], axis=-1)
        return nrm / np.linalg.norm(nrm, axis=-1, keepdims=True)

    def radius(self, theta):
        """Polar radius and angle of the boundary point at ``theta``."""
        p = self.point(theta)
        return np.hypot(p[..., 0], p[..., 1]), np.arctan2(p[..., 1], p[..., 0])


def _fine_grid_diameter(curve, n=DIAMETER_NODES):
    pts = curve.point(2 * np.pi * np.arange(n) / n)
    diff = pts[:, None, :] - pts[None, :, :]
    return float(np.sqrt(np.max(np.sum(diff * diff, axis=-1))))


def make_curve(spec):
    """Build a :class:`BoundaryCurve`; accepts a :class:`CurveSpec`."""
    return BoundaryCurve(spec)


def curve_diameter(curve):
    """Max pairwise boundary distance, from a 512-node sample."""
    return curve.diameter


def scaled_to_diameter(spec, diameter):
    """Return ``spec`` rescaled so the curve has the given diameter."""
    current = make_curve(spec).diameter
    return CurveSpec(spec.kind, spec.params, spec.scale * diameter / current)


@dataclass(frozen=True)
class Grid:
    """Uniform periodic grid ``theta_j = 2 pi j / n`` on a curve."""

    curve: BoundaryCurve
    n: int
    nodes: np.ndarray = field(repr=False)
    points: np.ndarray = field(repr=False)
    arc_elements: np.ndarray = field(repr=False)

    @property
    def weight(self):
        return 2 * np.pi / self.n

    @property
    def weights(self):
        """Trapezoid weights times arc elements, the discrete ds."""
        return self.weight * self.arc_elements

    @property
    def spacing(self):
        return self.weight * float(np.max(self.arc_elements))


def quadrature_grid(curve, n):
    if int(n) != n or n < 8 or n % 2:
        raise GeometryError(f"grid size must be an even integer >= 8, got {n}")
    n = int(n)
    nodes = 2 * np.pi * np.arange(n) / n
    pts = curve.point(nodes)
    arc = curve.arc_element(nodes)
    for arr in (nodes, pts, arc):
        arr.setflags(write=False)
    return Grid(curve, n, nodes, pts, arc)
