#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gmcf/grid.hpp"
#include "gmcf/linalg.hpp"
#include "gmcf/monitor.hpp"

namespace gmcf {

enum class MapKind { AffineFourier, Potential, Snapshot };

// One explicit Fourier mode of the perturbation:
//   u^alpha += amp[alpha] * cos(2 pi (k1 x1/L1 + k2 x2/L2) + phase).
struct FourierMode {
  int k1 = 0;
  int k2 = 0;
  std::array<double, 2> amp = {0.0, 0.0};
  double phase = 0.0;
};

// One mode of the Lagrangian potential phi (same convention, scalar amp).
struct PhiMode {
  int k1 = 0;
  int k2 = 0;
  double amp = 0.0;
  double phase = 0.0;
};

struct RunConfig {
  PeriodicGrid grid{0, 0, 0.0, 0.0};

  MapKind kind = MapKind::AffineFourier;
  int codim = 2;
  std::array<std::array<double, 2>, 2> affine = {{{0.0, 0.0}, {0.0, 0.0}}};
  std::array<double, 2> offset = {0.0, 0.0};
  std::vector<FourierMode> modes;
  int random_modes = 0;        // max |k| of seeded random modes (0 = none)
  double random_amp = 0.0;     // total amplitude budget of the random modes
  double normalize_margin = -1.0;  // >= 0 enables the area-decreasing rescale

  Sym2 Q;                       // potential quadratic part
  std::vector<PhiMode> phi_modes;
  int phi_random_modes = 0;
  double phi_random_amp = 0.0;

  std::string snapshot_path;

  double t_end = 1.0;
  double cfl = 0.45;
  double snapshot_every = 0.0;  // 0 = t_end / 20
  long max_steps = -1;          // -1 = unlimited

  std::vector<std::string> checks;  // empty = defaults for the run kind
  MonitorConfig mon;

  std::string out_dir = "out";
  bool write_csv = true;
  bool write_json = true;
  bool write_snapshots = false;

  std::uint64_t seed = 0;
};

struct ConfigParse {
  std::optional<RunConfig> config;
  std::vector<std::string> errors;  // every problem found, not just the first

  bool ok() const { return errors.empty() && config.has_value(); }
};

// Parses the flat "section.key = value" format ('#' starts a comment,
// map.mode / map.phi_mode repeatable). Unknown keys are rejected.
ConfigParse parse_config(const std::string& text);

ConfigParse parse_config_file(const std::string& path);

}  // namespace gmcf
