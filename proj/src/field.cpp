#include "gmcf/field.hpp"

#include <cmath>

#include "gmcf/geometry.hpp"
#include "gmcf/spectral.hpp"

namespace gmcf {

MapField MapField::zero(const PeriodicGrid& grid, int codim) {
  require_valid(grid);
  if (codim != 1 && codim != 2) throw std::invalid_argument("codim must be 1 or 2");
  MapField f;
  f.grid = grid;
  f.codim = codim;
  for (int a = 0; a < codim; ++a) f.u[a].assign(static_cast<size_t>(grid.size()), 0.0);
  return f;
}

void MapField::scale(double s) {
  for (int a = 0; a < codim; ++a) {
    for (int i = 0; i < 2; ++i) affine[a][i] *= s;
    offset[a] *= s;
    for (double& val : u[a]) val *= s;
  }
}

bool MapField::finite() const {
  for (int a = 0; a < codim; ++a) {
    for (double val : u[a]) {
      if (!std::isfinite(val)) return false;
    }
  }
  return true;
}

JacobianField jacobian(const MapField& field) {
  JacobianField out;
  jacobian_into(field, out);
  return out;
}

void jacobian_into(const MapField& field, JacobianField& out) {
  const PeriodicGrid& grid = field.grid;
  const int n = grid.size();
  const int m = field.codim;
  if (!field.finite()) throw InvalidFieldError("non-finite perturbation values");

  out.codim = m;
  out.df.assign(static_cast<size_t>(n), Mat2{});
  out.d2f.assign(static_cast<size_t>(n), std::array<Sym2, 2>{Sym2{0, 0, 0}, Sym2{0, 0, 0}});

  Spectral& sp = spectral_for(grid);
  thread_local std::vector<std::complex<double>> spectrum;
  thread_local std::vector<double> d10, d01, d20, d11, d02;
  d10.resize(static_cast<size_t>(n));
  d01.resize(static_cast<size_t>(n));
  d20.resize(static_cast<size_t>(n));
  d11.resize(static_cast<size_t>(n));
  d02.resize(static_cast<size_t>(n));

  for (int a = 0; a < m; ++a) {
    sp.forward(field.u[a], spectrum);
    sp.derivative(spectrum, 1, 0, d10);
    sp.derivative(spectrum, 0, 1, d01);
    sp.derivative(spectrum, 2, 0, d20);
    sp.derivative(spectrum, 1, 1, d11);
    sp.derivative(spectrum, 0, 2, d02);
    const double a0 = field.affine[a][0];
    const double a1 = field.affine[a][1];
    for (int p = 0; p < n; ++p) {
      out.df[p].a[a][0] = a0 + d10[p];
      out.df[p].a[a][1] = a1 + d01[p];
      out.d2f[p][a] = Sym2{d20[p], d11[p], d02[p]};
    }
  }
}

double normalize_to_area_decreasing(MapField& field, double margin) {
  if (!(margin > 0.0 && margin < 1.0)) {
    throw std::invalid_argument("normalize margin must lie in (0, 1)");
  }
  const JacobianField jac = jacobian(field);
  double sup_product = 0.0;
  for (const Mat2& J : jac.df) {
    const auto lambda = singular_values(J, field.codim);
    sup_product = std::max(sup_product, lambda[0] * lambda[1]);
  }
  const double c = std::max(1.0, std::sqrt(sup_product / (1.0 - margin)));
  field.scale(1.0 / c);
  return c;
}

}  // namespace gmcf
