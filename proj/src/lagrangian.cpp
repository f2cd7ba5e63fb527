#include "gmcf/lagrangian.hpp"

#include <cmath>

#include "gmcf/spectral.hpp"

namespace gmcf {

MapField from_potential(const PeriodicGrid& grid, const Sym2& Q, const std::vector<double>& phi) {
  require_valid(grid);
  if (grid.L1 != grid.L2) {
    throw NotLagrangianError("potential maps require a square torus (L1 == L2)");
  }
  if (static_cast<int>(phi.size()) != grid.size()) {
    throw std::invalid_argument("potential field size does not match the grid");
  }
  for (double val : phi) {
    if (!std::isfinite(val)) throw InvalidFieldError("non-finite potential values");
  }

  MapField f = MapField::zero(grid, 2);
  f.affine = {{{Q.xx, Q.xy}, {Q.xy, Q.yy}}};

  Spectral& sp = spectral_for(grid);
  std::vector<std::complex<double>> spectrum;
  sp.forward(phi, spectrum);
  sp.derivative(spectrum, 1, 0, f.u[0]);
  sp.derivative(spectrum, 0, 1, f.u[1]);
  return f;
}

double lagrangian_residual(const MapField& field) {
  if (field.codim != 2) {
    throw std::invalid_argument("lagrangian_residual needs a codimension-2 field");
  }
  const JacobianField jac = jacobian(field);
  double sup = 0.0;
  for (const Mat2& J : jac.df) {
    sup = std::max(sup, std::abs(J.a[1][0] - J.a[0][1]));
  }
  return sup;
}

AdaptedFrame lagrangian_frames(const Mat2& J, double tol, double tol_degenerate) {
  const double asym = std::abs(J.a[1][0] - J.a[0][1]);
  if (!(asym <= tol)) {
    throw NotLagrangianError("Jacobian is not symmetric: |d1 f^2 - d2 f^1| = " +
                             std::to_string(asym));
  }
  // Eigendecomposition of the symmetrized Jacobian (a self-adjoint map on the
  // base); eigenvalues are signed, ordered by decreasing magnitude.
  Sym2 M{J.a[0][0], 0.5 * (J.a[0][1] + J.a[1][0]), J.a[1][1]};
  const double mean = 0.5 * (M.xx + M.yy);
  const double disc = std::hypot(0.5 * (M.xx - M.yy), M.xy);
  double nu1 = mean + disc;
  double nu2 = mean - disc;

  Vec2 v1;
  {
    // Columns of (M - nu2 I) span the nu1-eigendirection.
    const Vec2 c1{M.xx - nu2, M.xy};
    const Vec2 c2{M.xy, M.yy - nu2};
    Vec2 v = (dot(c1, c1) >= dot(c2, c2)) ? c1 : c2;
    const double len = norm(v);
    v1 = (len > 1e-300 && disc != 0.0) ? (1.0 / len) * v : Vec2{1.0, 0.0};
  }
  Vec2 a1 = v1;
  Vec2 a2 = perp(a1);
  if (std::abs(nu2) > std::abs(nu1)) {
    std::swap(nu1, nu2);
    std::swap(a1, a2);
  }
  if (a1.x < 0.0 || (a1.x == 0.0 && a1.y < 0.0)) a1 = -1.0 * a1;
  if (a2.x < 0.0 || (a2.x == 0.0 && a2.y < 0.0)) a2 = -1.0 * a2;

  AdaptedFrame f;
  f.lagrangian = true;
  f.lambda = {nu1, nu2};
  f.rank = (std::abs(nu1) >= kRankTol) + (std::abs(nu2) >= kRankTol);
  f.degenerate = std::abs(nu1 - nu2) < tol_degenerate;
  f.a_tan = {a1, a2};
  // a_nor[i] = J(a_tan[i]): the almost-complex structure copies base
  // components to fiber components.
  f.a_nor = {a1, a2};
  for (int i = 0; i < 2; ++i) {
    const double ni = f.lambda[i];
    const double inv_n = 1.0 / std::sqrt(1.0 + ni * ni);
    f.e_tan[i] = Ambient{inv_n * f.a_tan[i], (ni * inv_n) * f.a_nor[i]};
    f.e_nor[i] = Ambient{(-ni * inv_n) * f.a_tan[i], inv_n * f.a_nor[i]};
  }
  return f;
}

HSymmetryStats check_h_symmetry(const GeometrySnapshot& snapshot) {
  if (snapshot.codim != 2) {
    throw std::invalid_argument("h-symmetry check needs a codimension-2 snapshot");
  }
  HSymmetryStats stats;
  const double sqrt8 = 2.0 * std::sqrt(2.0);
  for (const PointGeometry& pt : snapshot.pts) {
    if (!pt.frame.lagrangian) {
      throw NotLagrangianError("h-symmetry check needs Lagrangian frames");
    }
    if (pt.frame.degenerate) {
      ++stats.skipped_degenerate;
      continue;
    }
    for (int c = 0; c < 2; ++c) {
      stats.sup_sym_residual =
          std::max(stats.sup_sym_residual, std::abs(pt.h[0][c][1] - pt.h[1][c][0]));
    }
    double sum = 0.0;
    for (int c = 0; c < 2; ++c) {
      sum += pt.h[0][c][0] * pt.h[0][c][0] - pt.h[1][c][1] * pt.h[1][c][1];
    }
    const double bound = sqrt8 * std::sqrt(pt.A2) * std::sqrt(pt.H2);
    stats.sup_estimate_excess = std::max(stats.sup_estimate_excess, std::abs(sum) - bound);
  }
  return stats;
}

}  // namespace gmcf
