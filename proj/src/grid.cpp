#include "gmcf/grid.hpp"

#include <stdexcept>

namespace gmcf {

std::vector<std::string> grid_errors(const PeriodicGrid& g) {
  std::vector<std::string> errors;
  if (g.n1 < 8 || g.n1 % 2 != 0) {
    errors.push_back("grid.n1 must be even and >= 8 (got " + std::to_string(g.n1) + ")");
  }
  if (g.n2 < 8 || g.n2 % 2 != 0) {
    errors.push_back("grid.n2 must be even and >= 8 (got " + std::to_string(g.n2) + ")");
  }
  if (!(g.L1 > 0.0)) {
    errors.push_back("grid.L1 must be positive");
  }
  if (!(g.L2 > 0.0)) {
    errors.push_back("grid.L2 must be positive");
  }
  return errors;
}

void require_valid(const PeriodicGrid& g) {
  const auto errors = grid_errors(g);
  if (errors.empty()) return;
  std::string what = "invalid grid:";
  for (const auto& e : errors) what += " " + e + ";";
  throw std::invalid_argument(what);
}

}  // namespace gmcf
