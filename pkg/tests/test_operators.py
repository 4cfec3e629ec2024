import warnings

import mpmath as mp
import numpy as np
import pytest
import scipy.special as sp

from scatter2d import CurveSpec, make_curve, quadrature_grid
from scatter2d.operators import (
    ProblemConfig,
    ResonanceWarning,
    apply_T_at,
    assemble_K,
    assemble_operators,
    assemble_Q,
    assemble_T,
    kernel_g,
    kernel_split,
    resonance_check,
)
from scatter2d.oracle import disk_density

from conftest import TEST_CURVES, setup

GAMMA = 0.5772156649015329


def lam(m, k=1.0):
    """Independent (scipy) evaluation of the circle eigenvalue."""
    return 0.5j * np.pi * sp.jv(m, k) * sp.hankel1(m, k)


def test_kernel_antipodal_on_unit_circle(unit_circle):
    curve, _, _ = unit_circle
    g = kernel_g(curve, 1.0, 0.0, np.pi)
    assert g == pytest.approx(0.25j * (0.2238908 + 0.5103757j), abs=1e-7)
    assert g == pytest.approx(-0.1275939 + 0.0559727j, abs=1e-7)


def test_kernel_depends_only_on_distance():
    circle = make_curve(CurveSpec.circle(1.0))
    big = make_curve(CurveSpec.circle(3.0))
    # chord 2 sin(0.6) on the unit circle; same chord on the R=3 circle
    d = 2 * np.sin(0.6)
    t2 = 2 * np.arcsin(d / 6)
    assert kernel_g(circle, 1.0, 0.4, 1.6) == pytest.approx(kernel_g(big, 1.0, 2.0, 2.0 + t2), rel=1e-13)


def test_kernel_near_diagonal_log_behaviour(unit_circle):
    curve, _, _ = unit_circle
    d = np.linalg.norm(curve.point(0.3) - curve.point(0.3 + 1e-4))
    value = kernel_g(curve, 1.0, 0.3, 0.3 + 1e-4) + np.log(d) / (2 * np.pi)
    assert abs(value - (0.018451 + 0.25j)) <= 2e-8 + 5e-7  # quoted constant has 6 digits
    assert abs(value - ((np.log(2) - GAMMA) / (2 * np.pi) + 0.25j)) <= 2e-8


def test_kernel_rejects_coincident_points(unit_circle):
    with pytest.raises(ValueError):
        kernel_g(unit_circle[0], 1.0, 1.0, 1.0)


def test_split_diagonal_on_unit_circle(unit_circle):
    L, M = kernel_split(unit_circle[0], 1.0, 0.7, 0.7)
    assert L == pytest.approx(-1 / (4 * np.pi))
    assert M == pytest.approx(0.25j - (GAMMA - np.log(2)) / (2 * np.pi), abs=1e-15)
    assert M == pytest.approx(0.0184510 + 0.25j, abs=1e-7)


def test_split_antipodal_log_coefficient(unit_circle):
    L, _ = kernel_split(unit_circle[0], 1.0, np.pi, 0.0)
    assert L == pytest.approx(-sp.j0(2.0) / (4 * np.pi), rel=1e-13)
    assert L.real == pytest.approx(-0.0178167, abs=1e-7)
    assert L.real == pytest.approx(-0.0178157, abs=1.5e-6)  # quoted figure has a slipped digit


@pytest.mark.parametrize("name", sorted(TEST_CURVES))
def test_split_recombines_to_kernel(name, rng):
    curve = make_curve(TEST_CURVES[name])
    t, s = rng.uniform(0, 2 * np.pi, (2, 50))
    L, M = kernel_split(curve, 1.3, t, s)
    assert np.max(np.abs(L * np.log(4 * np.sin((t - s) / 2) ** 2) + M - kernel_g(curve, 1.3, t, s))) <= 1e-13


@pytest.mark.parametrize("name", sorted(TEST_CURVES))
def test_split_is_continuous_across_diagonal(name):
    curve = make_curve(TEST_CURVES[name])
    _, on = kernel_split(curve, 1.0, 1.1, 1.1)
    _, near = kernel_split(curve, 1.0, 1.1, 1.1 + 1e-6)
    assert abs(on - near) < 1e-5


@pytest.mark.parametrize("m", range(-8, 9))
def test_T_diagonalises_on_unit_circle(unit_circle, m):
    _, grid, T = unit_circle
    v = np.exp(1j * m * grid.nodes)
    expected = lam(abs(m))
    assert np.max(np.abs(T @ v - expected * v)) / abs(expected) <= 1e-8


def test_circle_eigenvalues_against_mpmath():
    mp.mp.dps = 30
    for m in (0, 1):
        exact = complex(0.5j * mp.pi * mp.besselj(m, 1) * mp.hankel1(m, 1))
        assert lam(m) == pytest.approx(exact, rel=1e-13)
    # commonly quoted 7-digit values, good to ~1.5e-5 only
    assert lam(0) == pytest.approx(-0.1060810 + 0.9197304j, abs=5e-5)
    assert lam(1) == pytest.approx(0.540014 + 0.304179j, abs=5e-5)
    assert lam(0) == pytest.approx(-0.10608220 + 0.91974445j, abs=1e-8)


def test_constant_density_gives_constant_potential(unit_circle):
    _, grid, T = unit_circle
    out = T @ np.ones(grid.n)
    assert np.max(np.abs(out - out[0])) <= 1e-12


def test_spectral_convergence_on_circle():
    curve = make_curve(CurveSpec.circle(1.0))
    errs = []
    for n in (16, 32):
        grid = quadrature_grid(curve, n)
        v = np.exp(2j * grid.nodes)
        errs.append(np.max(np.abs(assemble_T(curve, grid, 1.0) @ v - lam(2) * v)))
    assert errs[1] <= 1e-3 * errs[0] or errs[1] < 1e-14


def test_spectral_self_convergence_on_ellipse():
    curve = make_curve(CurveSpec.ellipse(2.0, 1.0))
    t_eval = 2 * np.pi * np.arange(16) / 16
    vals = []
    for n in (16, 32, 64, 128):
        grid = quadrature_grid(curve, n)
        h = np.cos(grid.nodes) + 0.5 * np.sin(3 * grid.nodes)
        Th = assemble_T(curve, grid, 1.0) @ h
        vals.append(Th[:: n // 16])
    errs = [np.max(np.abs(v - vals[-1])) for v in vals[:-1]]
    assert errs[1] < 1e-2 * errs[0] and errs[2] < 1e-3 * errs[1]


@pytest.mark.parametrize("m", [1, 2, 4, 8, 20])
def test_Q_symbol_on_unit_circle(unit_circle, m):
    curve, grid, _ = unit_circle
    Q = assemble_Q(curve, grid)
    v = np.exp(1j * m * grid.nodes)
    assert np.max(np.abs(Q @ v - v / (2 * m))) <= 1e-10


def test_Q_constant_mode_on_unit_circle(unit_circle):
    curve, grid, _ = unit_circle
    Q = assemble_Q(curve, grid)
    assert np.allclose(Q @ np.ones(grid.n), np.log(2), atol=1e-13)


@pytest.mark.parametrize("name", sorted(TEST_CURVES))
def test_splitting_exact(name):
    curve, grid, T = setup(name)
    Q = assemble_Q(curve, grid)
    K = assemble_K(curve, grid, 1.0)
    assert np.max(np.abs(T - (Q + K))) <= 1e-12


@pytest.mark.parametrize("name", sorted(TEST_CURVES))
def test_Q_kernel_symmetric_and_positive(name):
    curve, grid, _ = setup(name)
    ops = assemble_operators(curve, grid, 1.0)
    S = ops.Q_symmetric
    assert np.max(np.abs(S - S.T)) <= 1e-13
    assert np.linalg.eigvalsh(S)[0] > 0
    assert np.all(np.linalg.eigvals(ops.Q).real > 0)


def test_Q_itself_symmetric_on_circle(unit_circle):
    curve, grid, _ = unit_circle
    Q = assemble_Q(curve, grid)
    assert np.max(np.abs(Q - Q.T)) <= 1e-13


@pytest.mark.parametrize("name", sorted(TEST_CURVES))
def test_T_weighted_symmetry(name):
    _, grid, T = setup(name)
    S = T / grid.arc_elements[None, :]
    assert np.max(np.abs(S - S.T)) <= 1e-12


def test_assembly_is_deterministic():
    curve, grid, T = setup("kite")
    assert np.array_equal(assemble_T(curve, grid, 1.0), T)


def test_problem_config_validation():
    cfg = ProblemConfig.from_degrees(1.0, 90.0)
    assert cfg.alpha == pytest.approx((0.0, 1.0), abs=1e-15)
    with pytest.raises(ValueError):
        ProblemConfig(0.0)
    with pytest.raises(ValueError):
        ProblemConfig(1.0, (1.0, 1.0))


def test_resonance_warning_at_interior_eigenvalue():
    j01 = 2.404825557695773
    curve = make_curve(CurveSpec.circle(j01))
    grid = quadrature_grid(curve, 128)
    with pytest.warns(ResonanceWarning):
        assemble_operators(curve, grid, 1.0)


def test_no_resonance_warning_off_resonance():
    for R in (1.0, 2.3):
        curve = make_curve(CurveSpec.circle(R))
        grid = quadrature_grid(curve, 128)
        with warnings.catch_warnings():
            warnings.simplefilter("error", ResonanceWarning)
            ratio = resonance_check(assemble_T(curve, grid, 1.0))
        assert ratio > 1e-8


def test_off_grid_application_on_exact_density(unit_circle):
    curve, grid, _ = unit_circle
    h = disk_density(1.0, 1.0, (1.0, 0.0), grid.nodes)
    targets = np.linspace(0.01, 6.2, 23)
    Th = apply_T_at(curve, grid, 1.0, h, targets)
    assert np.max(np.abs(Th - np.exp(1j * np.cos(targets)))) <= 1e-10
