#pragma once

#include <stdexcept>
#include <vector>

#include "gmcf/field.hpp"
#include "gmcf/geometry.hpp"

namespace gmcf {

struct NotLagrangianError : std::runtime_error {
  explicit NotLagrangianError(const std::string& what) : std::runtime_error(what) {}
};

// Builds the gradient map f = grad(x^T Q x / 2 + phi) as a MapField: affine
// part Q, perturbation = spectral gradient of the periodic potential phi.
// The result has an exactly symmetric Jacobian. Q must be symmetric; the
// grid must be square (L1 = L2) for the standard almost-complex structure
// to be an isometry.
MapField from_potential(const PeriodicGrid& grid, const Sym2& Q, const std::vector<double>& phi);

// sup |d1 f^2 - d2 f^1|: zero iff the graph is Lagrangian for the standard
// symplectic structure. Codim 2 only.
double lagrangian_residual(const MapField& field);

// Frames with the normal basis the almost-complex rotation of the tangent
// basis: a_nor[i] = J(a_tan[i]), e_nor[i] = J(e_tan[i]). lambda holds the
// signed eigenvalues of the symmetrized Jacobian, ordered by decreasing
// magnitude. Throws NotLagrangianError when the antisymmetric part of J
// exceeds tol.
AdaptedFrame lagrangian_frames(const Mat2& J, double tol, double tol_degenerate = kDegenerateTol);

struct HSymmetryStats {
  double sup_sym_residual = 0.0;      // sup |h_{3c2} - h_{4c1}|
  double sup_estimate_excess = 0.0;   // sup of |sum_c(h_{3c1}^2 - h_{4c2}^2)| - 2 sqrt2 |A||H|
  int skipped_degenerate = 0;
};

// Checks the frame symmetry h_{3c2} = h_{4c1} and its pointwise consequence
// |sum_c (h_{3c1}^2 - h_{4c2}^2)| <= 2 sqrt(2) |A||H| on a snapshot built
// with Lagrangian frames.
HSymmetryStats check_h_symmetry(const GeometrySnapshot& snapshot);

}  // namespace gmcf
