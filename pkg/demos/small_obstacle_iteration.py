# # Neumann iteration for a small obstacle
#
# Split T = Q + K where Q has the positive kernel ln(a/r)/(2 pi).  Then
# T h = f becomes h + A h = F with A = Q^{-1} K and F = Q^{-1} f.  When the
# obstacle is small compared with the wavelength, ||A|| < 1 and the fixed
# point iteration h <- F - A h converges geometrically.

import numpy as np

from scatter2d import CurveSpec, assemble_system, make_curve, quadrature_grid, solve_system
from scatter2d.geometry import scaled_to_diameter
from scatter2d.iterative import NonContractionError, solve_by_iteration

for diameter in (0.05, 0.2, 0.5, 1.0, 2.0):
    curve = make_curve(scaled_to_diameter(CurveSpec.star(1.0, 0.05, 3), diameter))
    grid = quadrature_grid(curve, 128)
    try:
        sol, state = solve_by_iteration(curve, grid, 1.0, tol=1e-10)
    except NonContractionError as exc:
        print(f"diam {diameter:4.2f}: ||A|| = {exc.norm_estimate:.3f}, iteration refused")
        continue
    gal = solve_system(assemble_system(curve, grid, "weighted-trig", 1.0, 33))
    diff = np.linalg.norm(sol.h - gal.h) / np.linalg.norm(gal.h)
    print(f"diam {diameter:4.2f}: ||A|| = {state.estimated_A_norm:.3f}, "
          f"{state.iteration_count:3d} iterations, difference from Galerkin {diff:.1e}")

# ## Step norms
#
# The successive step sizes shrink at roughly the rate ||A||.

curve = make_curve(scaled_to_diameter(CurveSpec.star(1.0, 0.05, 3), 0.2))
_, state = solve_by_iteration(curve, quadrature_grid(curve, 128), 1.0)
steps = np.array(state.step_norms)
print("observed contraction ratios:", np.round(steps[1:8] / steps[:7], 3))
