#pragma once

#include <array>
#include <stdexcept>
#include <vector>

#include "gmcf/field.hpp"
#include "gmcf/grid.hpp"
#include "gmcf/linalg.hpp"

namespace gmcf {

// Points with lambda1 - lambda2 below this are flagged frame-degenerate;
// frame-dependent identity checks skip them (frame-invariant quantities are
// still computed there).
inline constexpr double kDegenerateTol = 1e-8;

// Singular values below this count as rank deficiency for the rank-dependent
// frame branches.
inline constexpr double kRankTol = 1e-12;

// Orthonormal frames adapted to the singular value decomposition of df.
//   df(a_tan[i]) = lambda[i] * a_nor[i]            (i < rank)
//   e_tan[i] = (a_tan[i] + lambda[i] a_nor[i]) / sqrt(1 + lambda[i]^2)
//   e_nor[p] = (a_nor[p] - lambda[p] a_tan[p]) / sqrt(1 + lambda[p]^2)
// Sign ambiguity is fixed by making the first nonzero component of each
// a_tan[i] positive, so frames are deterministic.
//
// In Lagrangian mode (see lagrangian.hpp) `lambda` holds the signed
// eigenvalues of the self-adjoint J df, ordered by decreasing magnitude, and
// a_nor[i] is the almost-complex rotation of a_tan[i].
struct AdaptedFrame {
  std::array<double, 2> lambda = {0.0, 0.0};
  int rank = 0;
  bool degenerate = false;
  bool lagrangian = false;
  std::array<Vec2, 2> a_tan;
  std::array<Vec2, 2> a_nor;   // fiber directions; m = 1 uses slot 0 with y = 0
  std::array<Ambient, 2> e_tan;
  std::array<Ambient, 2> e_nor;  // first m entries meaningful
};

// Pointwise values of the parallel two-tensor S restricted to the adapted
// frames. All entries are functions of the nonnegative singular values.
struct TensorSPoint {
  double s11 = 1.0;   // S(e_1, e_1) = (1 - l1^2) / (1 + l1^2)
  double s22 = 1.0;
  double d11 = 0.0;   // S(e_1, e_3) = -2 l1 / (1 + l1^2)
  double d22 = 0.0;
  double tr_s = 2.0;  // s11 + s22 = 2 (1 - l1^2 l2^2) / ((1+l1^2)(1+l2^2))
  double t11 = 0.0;   // 2 l1 / (1 + l1^2);  s11^2 + t11^2 = 1
  double t22 = 0.0;
};

struct PointGeometry {
  Mat2 df;
  std::array<Sym2, 2> d2f;
  Sym2 g;
  Sym2 g_inv;
  double sqrt_det_g = 1.0;
  AdaptedFrame frame;
  double h[2][2][2] = {};        // h[alpha][i][j], alpha < codim
  std::array<double, 2> H = {0.0, 0.0};
  double A2 = 0.0;               // |A|^2
  double H2 = 0.0;               // |H|^2
  double v = 1.0;                // sqrt(1 + |Df|^2); the codim-1 gradient quantity
};

struct GeometrySnapshot {
  PeriodicGrid grid;
  int codim = 2;
  std::vector<PointGeometry> pts;
  std::vector<double> tr_s;      // grid field of Tr(S), for spectral operators

  double sup_A2 = 0.0;
  double sup_H2 = 0.0;
  double inf_tr_s = 2.0;
  double sup_v = 1.0;
  int degenerate_count = 0;
};

using TensorSField = std::vector<TensorSPoint>;

enum class FrameMode { Svd, Lagrangian };

// --- pointwise operations ---------------------------------------------------

// Singular values of the m x 2 matrix J, lambda1 >= lambda2 >= 0, via the
// closed-form symmetric 2x2 eigensolver on J^T J. For m = 1: (|J|, 0).
std::array<double, 2> singular_values(const Mat2& J, int m);

AdaptedFrame adapted_frames(const Mat2& J, int m, double tol_degenerate = kDegenerateTol);

// g = I + J^T J, its inverse, and sqrt(det g).
void induced_metric(const Mat2& J, int m, Sym2& g, Sym2& g_inv, double& sqrt_det);

// h[alpha][i][j] = < D^2 f(b_i, b_j), pi2(e_nor[alpha]) > with b_i the base
// projection of e_tan[i]; exactly symmetric in (i, j) by construction.
void second_fundamental_form(const std::array<Sym2, 2>& d2f, int m, const AdaptedFrame& frame,
                             double h[2][2][2]);

void curvature_norms(const double h[2][2][2], int m, std::array<double, 2>& H, double& A2,
                     double& H2);

// Accepts signed eigenvalues (Lagrangian frames); uses their magnitudes.
TensorSPoint tensor_s_point(double lambda1, double lambda2);

// --- field-level operations --------------------------------------------------

// Computes every pointwise quantity of the snapshot. Lagrangian mode builds
// J-adapted frames and requires a symmetric Jacobian (throws NotLagrangianError
// from lagrangian.hpp otherwise).
GeometrySnapshot analyze(const MapField& field, FrameMode mode = FrameMode::Svd,
                         double tol_degenerate = kDegenerateTol);

TensorSField tensor_s(const GeometrySnapshot& snapshot);

// |grad w|^2 = g^{ij} d_i w d_j w with spectral derivatives.
std::vector<double> surface_gradient_norm(const PeriodicGrid& grid, const std::vector<double>& w,
                                          const std::vector<PointGeometry>& pts);

// Laplace-Beltrami: (1/sqrt g) d_i (sqrt g g^{ij} d_j w), all derivatives spectral.
std::vector<double> laplace_beltrami(const PeriodicGrid& grid, const std::vector<double>& w,
                                     const std::vector<PointGeometry>& pts);

// Integral over the surface with area element sqrt(det g) (uniform-grid
// quadrature, exact for band-limited integrands).
double surface_integral(const PeriodicGrid& grid, const std::vector<double>& w,
                        const std::vector<PointGeometry>& pts);

}  // namespace gmcf
