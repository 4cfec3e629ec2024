# # Conditioning of the projection matrix
#
# The least-squares projection solves a_ij c_j = f_i with
# a_ij = (T phi_j, T phi_i).  How well conditioned a_ij is depends entirely
# on the trial functions.  Radial Hankel functions H_m(kr) e^{im theta}
# restricted to the boundary differ in size by factors like m!, and the
# Gram matrix inherits that spread.  Trigonometric functions weighted by
# 1/sqrt(a(theta)) are orthonormal in L2(S); with the H1 pairing their
# images under T stay uniformly conditioned.

from scatter2d import CurveSpec, assemble_system, assemble_T, make_curve, quadrature_grid
from scatter2d.galerkin import AssemblyOverflowError, gram_condition_number

curves = {
    "circle": CurveSpec.circle(1.0),
    "ellipse(2,1)": CurveSpec.ellipse(2.0, 1.0),
    "kite": CurveSpec.kite(),
    "star(1,0.3,5)": CurveSpec.star(1.0, 0.3, 5),
}
cases = [("weighted-trig", "h1"), ("weighted-trig", "h0"), ("hankel", "h0")]
Js = (9, 13, 17, 21, 33)

for label, spec in curves.items():
    curve = make_curve(spec)
    grid = quadrature_grid(curve, 256)
    T = assemble_T(curve, grid, 1.0)
    print(f"\n{label}")
    print(f"{'family/inner':>20} " + " ".join(f"J={J:<8}" for J in Js))
    for family, inner in cases:
        row = []
        for J in Js:
            try:
                c = gram_condition_number(assemble_system(curve, grid, family, 1.0, J, inner, T=T))
            except AssemblyOverflowError:
                c = float("inf")
            row.append(f"{c:10.2e}")
        print(f"{family + '/' + inner:>20} " + " ".join(row))

# The weighted-trig/h1 row stays O(1-10).  The h0 pairing grows like J^2
# because the eigenvalues of T on the circle decay like 1/(2m).  The Hankel
# row grows by several orders of magnitude per step of four in J.
