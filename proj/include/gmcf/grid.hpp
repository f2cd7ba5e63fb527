#pragma once

#include <algorithm>
#include <string>
#include <vector>

namespace gmcf {

// Uniform rectangular grid on a flat torus of side lengths L1 x L2.
// Grid point (i, j) sits at (i*L1/n1, j*L2/n2); storage is row-major with i
// fastest. n1, n2 must be even and >= 8 for the spectral differentiation.
struct PeriodicGrid {
  int n1 = 0;
  int n2 = 0;
  double L1 = 0.0;
  double L2 = 0.0;

  int size() const { return n1 * n2; }
  int idx(int i, int j) const { return j * n1 + i; }
  double x1(int i) const { return L1 * static_cast<double>(i) / n1; }
  double x2(int j) const { return L2 * static_cast<double>(j) / n2; }
  double h1() const { return L1 / n1; }
  double h2() const { return L2 / n2; }
  double h_min() const { return std::min(h1(), h2()); }
  double cell_area() const { return h1() * h2(); }
  bool square() const { return L1 == L2; }

  bool operator==(const PeriodicGrid& o) const {
    return n1 == o.n1 && n2 == o.n2 && L1 == o.L1 && L2 == o.L2;
  }
};

// Returns every violated grid invariant (empty means valid).
std::vector<std::string> grid_errors(const PeriodicGrid& g);

// Throws std::invalid_argument listing all violations.
void require_valid(const PeriodicGrid& g);

}  // namespace gmcf
