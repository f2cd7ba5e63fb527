#pragma once

#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

#include "gmcf/field.hpp"
#include "gmcf/geometry.hpp"

namespace gmcf {

struct FlowState {
  double t = 0.0;
  MapField field;
  long step_count = 0;
  double last_dt = 0.0;
};

struct StepperConfig {
  double cfl = 0.45;       // fraction of the explicit-parabolic stability limit
  double t_end = 1.0;
  long max_steps = std::numeric_limits<long>::max();
  double snapshot_every = 0.1;
};

struct BlowUpError : std::runtime_error {
  BlowUpError(double t_, int point_)
      : std::runtime_error("non-finite value during flow"), t(t_), point(point_) {}
  double t;
  int point;
};

// Graphical (nonparametric) mean curvature flow velocity:
//   df^alpha/dt = g^{ij} d^2_{ij} f^alpha.
// Differs from normal motion by a tangential reparametrization, so all
// monitored scalar quantities agree pointwise on the surface. Identically
// zero for affine fields. Throws BlowUpError on non-finite values.
std::array<std::vector<double>, 2> flow_rhs(const MapField& field);

// Conservative explicit-parabolic step bound cfl * h_min^2 / (4 * scale) with
// scale = sup over the grid of the largest diagonal entry of g^{-1}, clamped
// to at least one (g^{ij} <= I, so the flat case is the binding one).
double stable_dt(const MapField& field, double cfl);

// One classical RK4 step of the perturbation; the affine part is untouched.
void step(FlowState& state, double dt);

using FlowObserver = std::function<void(const FlowState&, const GeometrySnapshot&,
                                        const TensorSField&)>;

struct EvolveSummary {
  long steps = 0;
  double final_t = 0.0;
  int snapshots = 0;
  bool blew_up = false;
  double blow_up_t = 0.0;
  int blow_up_point = -1;
};

// Steps until t >= t_end or max_steps, emitting snapshots at snapshot_every
// intervals (t = 0 and the final time included). Steps are clamped so the
// emission times are hit exactly. A blow-up ends the run and is recorded in
// the summary; the state keeps the last valid field.
EvolveSummary evolve(FlowState& state, const StepperConfig& cfg,
                     const std::vector<FlowObserver>& observers,
                     FrameMode frame_mode = FrameMode::Svd);

// Base-coordinate components of the tangential part of the gauge velocity:
//   V^i = g^{ij} < (0, flow_rhs), d_j F >.
std::vector<Vec2> tangential_velocity(const MapField& field);

// First-order estimate of the derivative following the flow lines:
//   (w1 - w0)/dt - V^i d_i w0   (spectral d_i w0).
// Pass an empty V to get the plain gauge time difference.
std::vector<double> material_derivative(const PeriodicGrid& grid, const std::vector<double>& w0,
                                        const std::vector<double>& w1, double dt,
                                        const std::vector<Vec2>& V);

}  // namespace gmcf
