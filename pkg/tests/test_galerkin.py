import numpy as np
import pytest
import scipy.special as sp

from scatter2d.basis import basis_samples, mode_of_index
from scatter2d.galerkin import (
    assemble_system,
    condition_number,
    gram_condition_number,
    residual_norm,
    solve_system,
    system_from_samples,
)
from scatter2d.oracle import disk_density

from conftest import setup


def lam(m, k=1.0):
    return 0.5j * np.pi * sp.jv(m, k) * sp.hankel1(m, k)


def circle_diagonal(J, h1):
    modes = np.array([mode_of_index(j)[0] for j in range(1, J + 1)])
    d = np.abs(lam(modes)) ** 2
    return d * (1 + modes**2) if h1 else d


@pytest.mark.parametrize("inner", ["h0", "h1"])
def test_circle_system_is_diagonal(inner):
    curve, grid, T = setup("circle")
    sys = assemble_system(curve, grid, "weighted-trig", 1.0, 17, inner, T=T)
    expected = circle_diagonal(17, inner == "h1")
    assert np.max(np.abs(np.diag(sys.a) - expected)) <= 1e-8
    assert np.max(np.abs(sys.a - np.diag(np.diag(sys.a)))) <= 1e-8
    assert sys.a[0, 0].real == pytest.approx(0.8571832, abs=1e-7)


def test_sine_mode_loads_vanish():
    curve, grid, T = setup("circle")
    sys = assemble_system(curve, grid, "weighted-trig", 1.0, 17, "h1", T=T)
    assert np.max(np.abs(sys.f[2::2])) <= 1e-12


def test_disk_density_recovered():
    curve, grid, T = setup("circle")
    sol = solve_system(assemble_system(curve, grid, "weighted-trig", 1.0, 21, T=T))
    ref = disk_density(1.0, 1.0, (1.0, 0.0), grid.nodes)
    assert np.linalg.norm(sol.h - ref) / np.linalg.norm(ref) <= 1e-6


def test_reconstruction_matches_expansion():
    curve, grid, T = setup("ellipse")
    sol = solve_system(assemble_system(curve, grid, "weighted-trig", 1.0, 17, T=T))
    assert np.max(np.abs(sol.h - grid_expansion(sol, curve, grid))) <= 1e-13


def grid_expansion(sol, curve, grid):
    return basis_samples("weighted-trig", curve, 1.0, len(sol.coefficients), grid.nodes) @ sol.coefficients


@pytest.mark.slow
def test_kite_residual_decreases():
    curve, grid, T = setup("kite")
    res = [solve_system(assemble_system(curve, grid, "weighted-trig", 1.0, J, T=T)).residual_h1 for J in (9, 17, 33)]
    assert res[1] <= res[0] / 2 and res[2] <= res[1] / 2


def test_modes_beyond_bandlimit_vanish():
    # f = exp(i k x) on the unit circle has Fourier content ~ J_m(1)/m!, so
    # modes past ~20 are below roundoff; solve with J=65
    curve, grid, T = setup("circle")
    sol = solve_system(assemble_system(curve, grid, "weighted-trig", 1.0, 65, T=T))
    assert np.max(np.abs(sol.coefficients[45:])) <= 1e-10


def test_condition_number_examples():
    assert condition_number(np.eye(4)) == pytest.approx(1.0)
    assert condition_number(np.diag([1.0, 1e-6])) == pytest.approx(1e6)
    assert condition_number(np.zeros((2, 2))) == np.inf
    assert condition_number(np.array([[np.inf, 0], [0, 1]])) == np.inf


def test_circle_h1_condition_matches_analytic():
    curve, grid, T = setup("circle")
    sys = assemble_system(curve, grid, "weighted-trig", 1.0, 33, "h1", T=T)
    d = circle_diagonal(33, True)
    expected = d.max() / d.min()
    assert condition_number(sys.a) == pytest.approx(expected, rel=1e-8)
    assert gram_condition_number(sys) == pytest.approx(expected, rel=1e-8)
    assert 1 < expected < 10


def test_least_squares_minimality():
    curve, grid, T = setup("kite")
    sys = assemble_system(curve, grid, "weighted-trig", 1.0, 17, T=T)
    sol = solve_system(sys)
    base = residual_norm(sys, sol.coefficients)
    for j in range(sys.J):
        for delta in (1e-4, -1e-4, 1e-4j, -1e-4j):
            c = sol.coefficients.copy()
            c[j] += delta
            assert residual_norm(sys, c) > base


def test_solution_invariant_under_reordering(rng):
    curve, grid, T = setup("star")
    sys = assemble_system(curve, grid, "weighted-trig", 1.0, 17, T=T)
    perm = rng.permutation(sys.J)
    shuffled = system_from_samples(sys.phi[:, perm], sys.Tphi[:, perm], sys.incident, grid, sys.inner, sys.family, curve, 1.0)
    assert np.max(np.abs(solve_system(shuffled).h - solve_system(sys).h)) <= 1e-10


@pytest.mark.parametrize("name", ["circle", "ellipse", "kite"])
def test_system_is_hermitian_and_nonsingular(name):
    curve, grid, T = setup(name)
    for J in (9, 17, 33):
        sys = assemble_system(curve, grid, "weighted-trig", 1.0, J, T=T)
        assert np.max(np.abs(sys.a - sys.a.conj().T)) <= 1e-13 * np.max(np.abs(sys.a))
        assert sys.gram_singular_values()[-1] > 0


@pytest.mark.slow
@pytest.mark.parametrize("name", ["circle", "ellipse", "kite"])
def test_conditioning_dichotomy(name):
    curve, grid, T = setup(name)
    wt = [gram_condition_number(assemble_system(curve, grid, "weighted-trig", 1.0, J, "h1", T=T)) for J in (9, 17, 33, 65)]
    assert max(wt) / min(wt) < 10
    hk = gram_condition_number(assemble_system(curve, grid, "hankel", 1.0, 21, "h0", T=T))
    assert hk > 1e10


def test_h0_condition_grows_on_circle():
    curve, grid, T = setup("circle")
    c = [gram_condition_number(assemble_system(curve, grid, "weighted-trig", 1.0, J, "h0", T=T)) for J in (9, 17, 33)]
    # |lambda_m|^2 ~ 1/(4 m^2): doubling J roughly quadruples cond
    assert 3 < c[1] / c[0] < 5 and 3 < c[2] / c[1] < 5
