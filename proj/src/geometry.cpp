#include "gmcf/geometry.hpp"

#include <cassert>
#include <cmath>

#include "gmcf/lagrangian.hpp"
#include "gmcf/spectral.hpp"

namespace gmcf {

namespace {

// First nonzero component positive (deterministic singular directions).
Vec2 sign_fixed(Vec2 v) {
  if (v.x != 0.0) return (v.x > 0.0) ? v : Vec2{-v.x, -v.y};
  return (v.y >= 0.0) ? v : Vec2{-v.x, -v.y};
}

// Eigenvalues mu1 >= mu2 >= 0 of a symmetric PSD 2x2 matrix, and a unit
// eigenvector for mu1. mu2 comes from det/mu1 to avoid cancellation.
void sym2_eigen_psd(const Sym2& C, double& mu1, double& mu2, Vec2& v1) {
  const double tr = C.xx + C.yy;
  const double disc = std::hypot(C.xx - C.yy, 2.0 * C.xy);
  mu1 = 0.5 * (tr + disc);
  const double det = C.xx * C.yy - C.xy * C.xy;
  mu2 = (mu1 > 0.0) ? std::max(det, 0.0) / mu1 : 0.0;
  // Columns of (C - mu2 I) span the mu1-eigendirection; take the larger one.
  const Vec2 c1{C.xx - mu2, C.xy};
  const Vec2 c2{C.xy, C.yy - mu2};
  Vec2 v = (dot(c1, c1) >= dot(c2, c2)) ? c1 : c2;
  const double len = norm(v);
  if (len < 1e-300 || disc == 0.0) {
    v1 = Vec2{1.0, 0.0};  // isotropic: any direction works
    return;
  }
  v1 = (1.0 / len) * v;
}

}  // namespace

std::array<double, 2> singular_values(const Mat2& J, int m) {
  if (m == 1) {
    return {std::hypot(J.a[0][0], J.a[0][1]), 0.0};
  }
  Sym2 C;  // J^T J
  C.xx = J.a[0][0] * J.a[0][0] + J.a[1][0] * J.a[1][0];
  C.xy = J.a[0][0] * J.a[0][1] + J.a[1][0] * J.a[1][1];
  C.yy = J.a[0][1] * J.a[0][1] + J.a[1][1] * J.a[1][1];
  double mu1 = 0.0, mu2 = 0.0;
  Vec2 unused;
  sym2_eigen_psd(C, mu1, mu2, unused);
  return {std::sqrt(mu1), std::sqrt(mu2)};
}

AdaptedFrame adapted_frames(const Mat2& J, int m, double tol_degenerate) {
  AdaptedFrame f;

  if (m == 1) {
    const Vec2 row{J.a[0][0], J.a[0][1]};
    const double l1 = norm(row);
    f.lambda = {l1, 0.0};
    f.rank = (l1 >= kRankTol) ? 1 : 0;
    if (f.rank == 1) {
      f.a_tan[0] = sign_fixed((1.0 / l1) * row);
      // target is 1-dimensional: a_nor[0] = df(a_tan[0]) / l1 = +-1
      f.a_nor[0] = Vec2{dot(row, f.a_tan[0]) > 0.0 ? 1.0 : -1.0, 0.0};
    } else {
      f.a_tan[0] = Vec2{1.0, 0.0};
      f.a_nor[0] = Vec2{1.0, 0.0};
    }
    f.a_tan[1] = sign_fixed(perp(f.a_tan[0]));
    f.a_nor[1] = Vec2{0.0, 0.0};
    f.degenerate = (f.lambda[0] - f.lambda[1]) < tol_degenerate;
  } else {
    Sym2 C;
    C.xx = J.a[0][0] * J.a[0][0] + J.a[1][0] * J.a[1][0];
    C.xy = J.a[0][0] * J.a[0][1] + J.a[1][0] * J.a[1][1];
    C.yy = J.a[0][1] * J.a[0][1] + J.a[1][1] * J.a[1][1];
    double mu1 = 0.0, mu2 = 0.0;
    Vec2 v1;
    sym2_eigen_psd(C, mu1, mu2, v1);
    const double l1 = std::sqrt(mu1);
    const double l2 = std::sqrt(mu2);
    f.lambda = {l1, l2};
    f.rank = (l1 >= kRankTol) + (l2 >= kRankTol);
    f.degenerate = (l1 - l2) < tol_degenerate;

    if (f.rank == 0) {
      f.a_tan = {Vec2{1.0, 0.0}, Vec2{0.0, 1.0}};
      f.a_nor = {Vec2{1.0, 0.0}, Vec2{0.0, 1.0}};
    } else {
      f.a_tan[0] = sign_fixed(v1);
      f.a_tan[1] = sign_fixed(perp(f.a_tan[0]));
      const Vec2 w1 = mat_vec(J, f.a_tan[0]);
      f.a_nor[0] = (1.0 / norm(w1)) * w1;  // = df(a_1)/l1 up to roundoff
      if (f.rank == 2) {
        // Exactly perpendicular completion, oriented along df(a_2); dividing
        // df(a_2) by a small l2 would degrade the Gram matrix instead.
        const Vec2 cand = perp(f.a_nor[0]);
        f.a_nor[1] = (dot(mat_vec(J, f.a_tan[1]), cand) >= 0.0) ? cand : -1.0 * cand;
      } else {
        f.a_nor[1] = sign_fixed(perp(f.a_nor[0]));
      }
    }
  }

  for (int i = 0; i < 2; ++i) {
    const double li = f.lambda[i];
    if (i < f.rank) {
      const double inv_n = 1.0 / std::sqrt(1.0 + li * li);
      f.e_tan[i] = Ambient{inv_n * f.a_tan[i], (li * inv_n) * f.a_nor[i]};
    } else {
      f.e_tan[i] = Ambient{f.a_tan[i], Vec2{0.0, 0.0}};
    }
  }
  for (int p = 0; p < m; ++p) {
    const double lp = f.lambda[p];
    if (p < f.rank) {
      const double inv_n = 1.0 / std::sqrt(1.0 + lp * lp);
      f.e_nor[p] = Ambient{(-lp * inv_n) * f.a_tan[p], inv_n * f.a_nor[p]};
    } else {
      f.e_nor[p] = Ambient{Vec2{0.0, 0.0}, f.a_nor[p]};
    }
  }
  return f;
}

void induced_metric(const Mat2& J, int m, Sym2& g, Sym2& g_inv, double& sqrt_det) {
  g.xx = 1.0;
  g.xy = 0.0;
  g.yy = 1.0;
  for (int a = 0; a < m; ++a) {
    g.xx += J.a[a][0] * J.a[a][0];
    g.xy += J.a[a][0] * J.a[a][1];
    g.yy += J.a[a][1] * J.a[a][1];
  }
  const double det = g.xx * g.yy - g.xy * g.xy;  // >= 1
  g_inv.xx = g.yy / det;
  g_inv.xy = -g.xy / det;
  g_inv.yy = g.xx / det;
  sqrt_det = std::sqrt(det);
}

void second_fundamental_form(const std::array<Sym2, 2>& d2f, int m, const AdaptedFrame& frame,
                             double h[2][2][2]) {
  Vec2 b[2];
  for (int i = 0; i < 2; ++i) b[i] = frame.e_tan[i].base;
  for (int a = 0; a < m; ++a) {
    const Vec2 nu = frame.e_nor[a].fiber;  // only the target component of the
                                           // normal meets the embedding Hessian
    for (int i = 0; i < 2; ++i) {
      for (int j = i; j < 2; ++j) {
        double val = quad_form(d2f[0], b[i], b[j]) * nu.x;
        if (m == 2) val += quad_form(d2f[1], b[i], b[j]) * nu.y;
        h[a][i][j] = val;
        h[a][j][i] = val;
      }
    }
  }
  if (m == 1) {
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) h[1][i][j] = 0.0;
  }
}

void curvature_norms(const double h[2][2][2], int m, std::array<double, 2>& H, double& A2,
                     double& H2) {
  A2 = 0.0;
  H2 = 0.0;
  for (int a = 0; a < m; ++a) {
    H[a] = h[a][0][0] + h[a][1][1];
    H2 += H[a] * H[a];
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) A2 += h[a][i][j] * h[a][i][j];
  }
  if (m == 1) H[1] = 0.0;
}

TensorSPoint tensor_s_point(double lambda1, double lambda2) {
  const double l1 = std::abs(lambda1);
  const double l2 = std::abs(lambda2);
  TensorSPoint s;
  const double q1 = 1.0 + l1 * l1;
  const double q2 = 1.0 + l2 * l2;
  s.s11 = (1.0 - l1 * l1) / q1;
  s.s22 = (1.0 - l2 * l2) / q2;
  s.d11 = -2.0 * l1 / q1;
  s.d22 = -2.0 * l2 / q2;
  s.t11 = 2.0 * l1 / q1;
  s.t22 = 2.0 * l2 / q2;
  s.tr_s = s.s11 + s.s22;
  return s;
}

GeometrySnapshot analyze(const MapField& field, FrameMode mode, double tol_degenerate) {
  if (mode == FrameMode::Lagrangian && field.codim != 2) {
    throw NotLagrangianError("Lagrangian frames need a codimension-2 field");
  }
  GeometrySnapshot snap;
  snap.grid = field.grid;
  snap.codim = field.codim;
  const int n = field.grid.size();
  const int m = field.codim;
  snap.pts.resize(static_cast<size_t>(n));
  snap.tr_s.resize(static_cast<size_t>(n));

  JacobianField jac;
  jacobian_into(field, jac);

  snap.sup_A2 = 0.0;
  snap.sup_H2 = 0.0;
  snap.inf_tr_s = 2.0;
  snap.sup_v = 1.0;
  snap.degenerate_count = 0;

  for (int p = 0; p < n; ++p) {
    PointGeometry& pt = snap.pts[static_cast<size_t>(p)];
    pt.df = jac.df[static_cast<size_t>(p)];
    pt.d2f = jac.d2f[static_cast<size_t>(p)];
    induced_metric(pt.df, m, pt.g, pt.g_inv, pt.sqrt_det_g);
    if (mode == FrameMode::Lagrangian) {
      pt.frame = lagrangian_frames(pt.df, 1e-6, tol_degenerate);
    } else {
      pt.frame = adapted_frames(pt.df, m, tol_degenerate);
    }
    second_fundamental_form(pt.d2f, m, pt.frame, pt.h);
    curvature_norms(pt.h, m, pt.H, pt.A2, pt.H2);

    double df2 = 0.0;
    for (int a = 0; a < m; ++a)
      for (int i = 0; i < 2; ++i) df2 += pt.df.a[a][i] * pt.df.a[a][i];
    pt.v = std::sqrt(1.0 + df2);

    const TensorSPoint s = tensor_s_point(pt.frame.lambda[0], pt.frame.lambda[1]);
    snap.tr_s[static_cast<size_t>(p)] = s.tr_s;

    snap.sup_A2 = std::max(snap.sup_A2, pt.A2);
    snap.sup_H2 = std::max(snap.sup_H2, pt.H2);
    snap.inf_tr_s = std::min(snap.inf_tr_s, s.tr_s);
    snap.sup_v = std::max(snap.sup_v, pt.v);
    if (pt.frame.degenerate) ++snap.degenerate_count;
  }
  return snap;
}

TensorSField tensor_s(const GeometrySnapshot& snapshot) {
  TensorSField out(snapshot.pts.size());
  for (size_t p = 0; p < snapshot.pts.size(); ++p) {
    out[p] = tensor_s_point(snapshot.pts[p].frame.lambda[0], snapshot.pts[p].frame.lambda[1]);
  }
  return out;
}

std::vector<double> surface_gradient_norm(const PeriodicGrid& grid, const std::vector<double>& w,
                                          const std::vector<PointGeometry>& pts) {
  Spectral& sp = spectral_for(grid);
  std::vector<std::complex<double>> spectrum;
  sp.forward(w, spectrum);
  const size_t n = static_cast<size_t>(grid.size());
  std::vector<double> d1(n), d2(n), out(n);
  sp.derivative(spectrum, 1, 0, d1);
  sp.derivative(spectrum, 0, 1, d2);
  for (size_t p = 0; p < n; ++p) {
    const Sym2& gi = pts[p].g_inv;
    out[p] = gi.xx * d1[p] * d1[p] + 2.0 * gi.xy * d1[p] * d2[p] + gi.yy * d2[p] * d2[p];
  }
  return out;
}

std::vector<double> laplace_beltrami(const PeriodicGrid& grid, const std::vector<double>& w,
                                     const std::vector<PointGeometry>& pts) {
  Spectral& sp = spectral_for(grid);
  std::vector<std::complex<double>> spectrum;
  sp.forward(w, spectrum);
  const size_t n = static_cast<size_t>(grid.size());
  std::vector<double> d1(n), d2(n), flux1(n), flux2(n), out(n);
  sp.derivative(spectrum, 1, 0, d1);
  sp.derivative(spectrum, 0, 1, d2);
  for (size_t p = 0; p < n; ++p) {
    const Sym2& gi = pts[p].g_inv;
    const double sg = pts[p].sqrt_det_g;
    flux1[p] = sg * (gi.xx * d1[p] + gi.xy * d2[p]);
    flux2[p] = sg * (gi.xy * d1[p] + gi.yy * d2[p]);
  }
  sp.forward(flux1, spectrum);
  sp.derivative(spectrum, 1, 0, d1);
  sp.forward(flux2, spectrum);
  sp.derivative(spectrum, 0, 1, d2);
  for (size_t p = 0; p < n; ++p) {
    out[p] = (d1[p] + d2[p]) / pts[p].sqrt_det_g;
  }
  return out;
}

double surface_integral(const PeriodicGrid& grid, const std::vector<double>& w,
                        const std::vector<PointGeometry>& pts) {
  double sum = 0.0;
  for (size_t p = 0; p < w.size(); ++p) sum += w[p] * pts[p].sqrt_det_g;
  return sum * grid.cell_area();
}

}  // namespace gmcf
