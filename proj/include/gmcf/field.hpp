#pragma once

#include <array>
#include <stdexcept>
#include <vector>

#include "gmcf/grid.hpp"
#include "gmcf/linalg.hpp"

namespace gmcf {

// Map f : T^2 -> target of dimension `codim` (1 or 2), split as
//   f(x) = affine * x + offset + u(x)
// with u exactly periodic. The affine part carries the winding data and is
// never touched by the flow; only u evolves.
struct MapField {
  PeriodicGrid grid;
  int codim = 2;
  std::array<std::array<double, 2>, 2> affine = {{{0.0, 0.0}, {0.0, 0.0}}};
  std::array<double, 2> offset = {0.0, 0.0};
  std::array<std::vector<double>, 2> u;  // components, each of size grid.size()

  static MapField zero(const PeriodicGrid& grid, int codim);

  // Scales the whole map (affine, offset, perturbation) by `s`.
  void scale(double s);

  bool finite() const;
};

struct InvalidFieldError : std::runtime_error {
  explicit InvalidFieldError(const std::string& what) : std::runtime_error(what) {}
};

// First and second derivatives of f at every grid point. Df includes the
// affine part; D^2 f = D^2 u. Second derivatives are stored as symmetric
// forms per target component.
struct JacobianField {
  int codim = 2;
  std::vector<Mat2> df;                   // row alpha, column i
  std::vector<std::array<Sym2, 2>> d2f;   // per target component
};

// Spectral differentiation of the periodic part plus the constant affine
// part. Throws InvalidFieldError on non-finite input.
JacobianField jacobian(const MapField& field);

// Workspace-reusing variant for the time stepper.
void jacobian_into(const MapField& field, JacobianField& out);

// Rescales the map by 1/c, c = max(1, sqrt(sup lambda1*lambda2 / (1-margin))),
// so the result satisfies sup lambda1*lambda2 <= 1 - margin. Returns c.
double normalize_to_area_decreasing(MapField& field, double margin);

}  // namespace gmcf
