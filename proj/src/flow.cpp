#include "gmcf/flow.hpp"

#include <cmath>

#include "gmcf/spectral.hpp"

namespace gmcf {

namespace {

// Scratch for the stepper: Jacobian buffers and RK4 stage slopes, cached per
// thread so repeated steps do not reallocate.
struct FlowScratch {
  JacobianField jac;
  std::array<std::vector<double>, 2> k1, k2, k3, k4;
  MapField stage;
};

FlowScratch& scratch() {
  thread_local FlowScratch s;
  return s;
}

void rhs_into(const MapField& field, std::array<std::vector<double>, 2>& out, JacobianField& jac,
              double t_for_error) {
  const int n = field.grid.size();
  const int m = field.codim;
  jacobian_into(field, jac);
  for (int a = 0; a < m; ++a) out[a].resize(static_cast<size_t>(n));

  for (int p = 0; p < n; ++p) {
    Sym2 g, gi;
    double sg;
    induced_metric(jac.df[static_cast<size_t>(p)], m, g, gi, sg);
    for (int a = 0; a < m; ++a) {
      const Sym2& dd = jac.d2f[static_cast<size_t>(p)][a];
      const double val = gi.xx * dd.xx + 2.0 * gi.xy * dd.xy + gi.yy * dd.yy;
      if (!std::isfinite(val)) throw BlowUpError(t_for_error, p);
      out[a][static_cast<size_t>(p)] = val;
    }
  }
}

}  // namespace

std::array<std::vector<double>, 2> flow_rhs(const MapField& field) {
  std::array<std::vector<double>, 2> out;
  JacobianField jac;
  rhs_into(field, out, jac, 0.0);
  return out;
}

double stable_dt(const MapField& field, double cfl) {
  if (!(cfl > 0.0)) throw std::invalid_argument("cfl must be positive");
  const JacobianField jac = jacobian(field);
  double scale = 1.0;  // g^{ij} <= I: the flat case binds
  for (const Mat2& J : jac.df) {
    Sym2 g, gi;
    double sg;
    induced_metric(J, field.codim, g, gi, sg);
    scale = std::max(scale, std::max(gi.xx, gi.yy));
  }
  const double h = field.grid.h_min();
  return cfl * h * h / (4.0 * scale);
}

void step(FlowState& state, double dt) {
  FlowScratch& s = scratch();
  const int m = state.field.codim;
  const int n = state.field.grid.size();

  rhs_into(state.field, s.k1, s.jac, state.t);

  s.stage = state.field;
  for (int a = 0; a < m; ++a)
    for (int p = 0; p < n; ++p)
      s.stage.u[a][static_cast<size_t>(p)] =
          state.field.u[a][static_cast<size_t>(p)] + 0.5 * dt * s.k1[a][static_cast<size_t>(p)];
  rhs_into(s.stage, s.k2, s.jac, state.t);

  for (int a = 0; a < m; ++a)
    for (int p = 0; p < n; ++p)
      s.stage.u[a][static_cast<size_t>(p)] =
          state.field.u[a][static_cast<size_t>(p)] + 0.5 * dt * s.k2[a][static_cast<size_t>(p)];
  rhs_into(s.stage, s.k3, s.jac, state.t);

  for (int a = 0; a < m; ++a)
    for (int p = 0; p < n; ++p)
      s.stage.u[a][static_cast<size_t>(p)] =
          state.field.u[a][static_cast<size_t>(p)] + dt * s.k3[a][static_cast<size_t>(p)];
  rhs_into(s.stage, s.k4, s.jac, state.t);

  // Accumulate into the stage buffer first so a blow-up leaves the state as
  // the last valid field.
  const double w = dt / 6.0;
  for (int a = 0; a < m; ++a) {
    for (int p = 0; p < n; ++p) {
      const size_t q = static_cast<size_t>(p);
      const double unew = state.field.u[a][q] +
                          w * (s.k1[a][q] + 2.0 * (s.k2[a][q] + s.k3[a][q]) + s.k4[a][q]);
      if (!std::isfinite(unew)) throw BlowUpError(state.t, p);
      s.stage.u[a][q] = unew;
    }
  }
  for (int a = 0; a < m; ++a) state.field.u[a].swap(s.stage.u[a]);
  state.t += dt;
  state.last_dt = dt;
  ++state.step_count;
}

EvolveSummary evolve(FlowState& state, const StepperConfig& cfg,
                     const std::vector<FlowObserver>& observers, FrameMode frame_mode) {
  if (!(cfg.t_end > 0.0) || !(cfg.cfl > 0.0 && cfg.cfl <= 1.0)) {
    throw std::invalid_argument("invalid stepper config (need t_end > 0, cfl in (0,1])");
  }
  EvolveSummary summary;
  double last_emit_t = -1.0;

  auto emit = [&]() {
    const GeometrySnapshot snap = analyze(state.field, frame_mode);
    const TensorSField s = tensor_s(snap);
    for (const auto& obs : observers) obs(state, snap, s);
    ++summary.snapshots;
    last_emit_t = state.t;
  };

  emit();

  const double interval = (cfg.snapshot_every > 0.0) ? cfg.snapshot_every : cfg.t_end;
  double next_emit = state.t + interval;
  const double t_final = state.t + cfg.t_end;

  while (state.t < t_final - 1e-14 && summary.steps < cfg.max_steps) {
    double dt = stable_dt(state.field, cfg.cfl);
    dt = std::min(dt, t_final - state.t);
    dt = std::min(dt, next_emit - state.t);
    try {
      step(state, dt);
    } catch (const BlowUpError& err) {
      summary.blew_up = true;
      summary.blow_up_t = err.t;
      summary.blow_up_point = err.point;
      break;
    }
    ++summary.steps;
    if (state.t >= next_emit - 1e-12) {
      emit();
      next_emit += interval;
    }
  }

  // Emit the last state of truncated runs (max_steps, t_end off the emission
  // schedule, or blow-up: the state still holds the last valid field).
  if (state.t != last_emit_t) emit();

  summary.final_t = state.t;
  return summary;
}

std::vector<Vec2> tangential_velocity(const MapField& field) {
  const int n = field.grid.size();
  const int m = field.codim;
  const JacobianField jac = jacobian(field);

  std::vector<Vec2> V(static_cast<size_t>(n));
  for (int p = 0; p < n; ++p) {
    const size_t q = static_cast<size_t>(p);
    Sym2 g, gi;
    double sg;
    induced_metric(jac.df[q], m, g, gi, sg);
    std::array<double, 2> rhs = {0.0, 0.0};
    for (int a = 0; a < m; ++a) {
      const Sym2& dd = jac.d2f[q][a];
      rhs[a] = gi.xx * dd.xx + 2.0 * gi.xy * dd.xy + gi.yy * dd.yy;
    }
    // <(0, rhs), d_j F> = sum_a rhs^a d_j f^a
    std::array<double, 2> proj = {0.0, 0.0};
    for (int j = 0; j < 2; ++j) {
      for (int a = 0; a < m; ++a) proj[j] += rhs[a] * jac.df[q].a[a][j];
    }
    V[q].x = gi.xx * proj[0] + gi.xy * proj[1];
    V[q].y = gi.xy * proj[0] + gi.yy * proj[1];
  }
  return V;
}

std::vector<double> material_derivative(const PeriodicGrid& grid, const std::vector<double>& w0,
                                        const std::vector<double>& w1, double dt,
                                        const std::vector<Vec2>& V) {
  if (!(dt > 0.0)) throw std::invalid_argument("material_derivative needs dt > 0");
  if (w0.size() != w1.size() || static_cast<int>(w0.size()) != grid.size()) {
    throw std::invalid_argument("material_derivative: field sizes do not match the grid");
  }
  const size_t n = w0.size();
  std::vector<double> out(n);
  if (V.empty()) {
    for (size_t p = 0; p < n; ++p) out[p] = (w1[p] - w0[p]) / dt;
    return out;
  }
  Spectral& sp = spectral_for(grid);
  std::vector<std::complex<double>> spectrum;
  sp.forward(w0, spectrum);
  std::vector<double> d1(n), d2(n);
  sp.derivative(spectrum, 1, 0, d1);
  sp.derivative(spectrum, 0, 1, d2);
  for (size_t p = 0; p < n; ++p) {
    out[p] = (w1[p] - w0[p]) / dt - (V[p].x * d1[p] + V[p].y * d2[p]);
  }
  return out;
}

}  // namespace gmcf
