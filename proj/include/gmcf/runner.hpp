#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "gmcf/config.hpp"
#include "gmcf/flow.hpp"
#include "gmcf/monitor.hpp"

namespace gmcf {

// Exit-code contract of the CLI.
inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitBlowUp = 3;

// Builds the initial field of a config (explicit + seeded random modes,
// potential gradient, or snapshot reload) and applies the optional
// area-decreasing rescale. For snapshot configs the stored time is restored.
FlowState build_initial_state(const RunConfig& cfg);

struct RunResult {
  MonitorReport report;
  int exit_code = kExitOk;
  std::string error;
  double alpha = 0.0;  // codim 2
  double v0 = 0.0;     // codim 1
};

// Full pipeline: initial field, alpha/v0, evolve with monitors, write
// timeseries.csv / verdicts.json (and snapshots when enabled) under
// cfg.out_dir. Deterministic for a fixed config + seed.
RunResult run_case(const RunConfig& cfg, std::ostream& log);

// Exact column schema, version-tagged in a leading comment line; absent
// quantities become empty fields; doubles round-trip at full precision.
void write_timeseries(const MonitorReport& report, const std::string& path);

void write_verdicts(const MonitorReport& report, double alpha, double v0, const std::string& path);

// Raw little-endian float64 perturbation (row-major, i fastest, components
// interleaved) at base.f64 plus a JSON sidecar at base.json.
void write_snapshot(const FlowState& state, const std::string& base_path);
FlowState load_snapshot(const std::string& base_path);

// Runs the physical setup of `cfg` at each resolution and reports the decay
// of the monitored residuals plus a dt-halving probe of the evolution
// residual. Writes sweep.csv under cfg.out_dir.
struct SweepRow {
  int n = 0;
  double relation_resid = 0.0;
  double grad_cross_resid = 0.0;
  double pythagoras_resid = 0.0;
  double gauss_bonnet_resid = 0.0;
  double lagrangian_resid = 0.0;
  double evolution_resid_dt = 0.0;
  double evolution_resid_half_dt = 0.0;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  int exit_code = kExitOk;
};

SweepResult resolution_sweep(const RunConfig& cfg, const std::vector<int>& resolutions,
                             std::ostream& log);

// Flow-free fuzzing of the pointwise identities over random (lambda, h)
// tuples with lambda distinct in (0, 2)^2.
struct FuzzResult {
  long samples = 0;
  double max_relation_rel = 0.0;
  double max_pythagoras = 0.0;
  double max_li_li_excess = 0.0;  // <= 0 means the inequality never failed
  bool pass(double relation_tol, double pythagoras_tol) const {
    return max_relation_rel <= relation_tol && max_pythagoras <= pythagoras_tol &&
           max_li_li_excess <= 0.0;
  }
};

FuzzResult fuzz_identities(long samples, std::uint64_t seed);

// One trial step of size dt from `state`, returning the evolution-equation
// residual with and without the tangential gauge correction.
struct EvolutionProbe {
  double corrected = 0.0;
  double uncorrected = 0.0;
};

EvolutionProbe evolution_probe(const FlowState& state, double dt,
                               FrameMode mode = FrameMode::Svd);

}  // namespace gmcf
