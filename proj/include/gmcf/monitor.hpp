#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "gmcf/flow.hpp"
#include "gmcf/geometry.hpp"

namespace gmcf {

struct NotAreaDecreasingError : std::runtime_error {
  NotAreaDecreasingError(const std::string& what, int point_, double value_)
      : std::runtime_error(what), point(point_), value(value_) {}
  int point;
  double value;
};

struct MonitorConfig {
  double alpha = 0.0;         // inf Tr(S) over the initial surface (codim 2)
  double v0 = 1.0;            // sup v over the initial surface (codim 1)
  double delta = 1.0;         // decay-lemma parameters, recorded; need 0 < delta <= epsilon
  double epsilon = 1.0;
  double rel_tol = 0.02;      // relative slack for bound checks
  double id_tol = 1e-8;       // identity residual tolerance
  double mono_rel_tol = 1e-4; // allowed relative per-row decrease of inf Tr(S)
  double v_mono_abs_tol = 1e-6;  // allowed absolute per-row increase of sup v
  double gauss_tol = 1e-6;    // integral-identity tolerance
  double evo_tol_rate = 10.0; // evolution-residual tolerance per unit dt
  double soft_slack = 1e-4;   // additive slack of the soft differential checks
};

struct MonitorRow {
  double t = 0.0;
  double dt = 0.0;
  double sup_H2 = 0.0;
  double sup_A2 = 0.0;
  std::optional<double> inf_tr_s;
  std::optional<double> sup_v;
  std::optional<double> tH2_over_bound;
  std::optional<double> tA2_over_bound;
  std::optional<double> relation_resid;
  double pythagoras_resid = 0.0;
  double gauss_bonnet_resid = 0.0;
  std::optional<double> lagrangian_resid;
  int degenerate_pts = 0;
};

struct CheckVerdict {
  std::string name;
  std::string statement;   // the inequality or identity being verified
  bool pass = true;
  double worst_value = 0.0;
  double threshold = 0.0;
  double worst_t = 0.0;
  std::string detail;
};

struct MonitorReport {
  std::vector<MonitorRow> rows;
  std::vector<CheckVerdict> verdicts;
  bool blew_up = false;
  double blow_up_t = 0.0;
  int blow_up_point = -1;

  bool all_pass() const;
  const CheckVerdict* find(const std::string& name) const;
};

// --- scalar helpers -----------------------------------------------------------

// inf of Tr(S) at t = 0; throws NotAreaDecreasingError (naming the worst
// point) when not positive. Codim 2 only.
double alpha0(const GeometrySnapshot& snapshot, const TensorSField& s, int* worst_point = nullptr);

// Mean curvature decay constants of the Lagrangian estimate, from alpha:
// C = 16 sqrt(2)/alpha, bound = 8 (1 + C^2/alpha) / alpha^2.
double lagrangian_decay_constant(double alpha);
double lagrangian_decay_bound(double alpha);

// --- pointwise identity kernels (flow-free, reused by the fuzzer) -------------

// Residual of
//   4 TrS (S11 - S22) sum_c (h_{3c1}^2 - h_{4c2}^2) + |grad TrS|^2
//     = 4 sum_c (T11 h_{4c2} + T22 h_{3c1})^2
// with |grad TrS|^2 from the frame formula grad_k S_ii = -2 T_ii h_{(2+i)ki}.
// Returns |lhs - rhs|; scale (for relative residuals) reports |lhs| + |rhs|.
double relation_residual_point(double lambda1, double lambda2, const double h[2][2][2],
                               double* scale = nullptr);

// max_i |S_ii^2 + T_ii^2 - 1|.
double pythagoras_residual_point(double lambda1, double lambda2);

// Left side of the quadratic curvature inequality
//   2 sum (sum_k h_{a ik} h_{g mk} - h_{a mk} h_{g ik})^2
//     + 2 sum (sum_a h_{a ij} h_{a mk})^2  <= 3 |A|^4.
double li_li_lhs_point(const double h[2][2][2], int m);

// --- snapshot-level residuals --------------------------------------------------

struct RelationStats {
  double sup_residual = 0.0;       // absolute
  double sup_rel_residual = 0.0;   // relative to max(1, scale)
  double grad_cross_residual = 0.0;  // frame formula vs spectral |grad TrS|^2
  int skipped_degenerate = 0;
};

RelationStats relation_residual(const GeometrySnapshot& snapshot, const TensorSField& s);

double pythagoras_residual(const TensorSField& s);

// Largest violation of the curvature inequality over the snapshot:
// max over points of lhs - 3 |A|^4 (1 + 1e-12); <= 0 passes.
double li_li_excess(const GeometrySnapshot& snapshot);

// | integral(|H|^2 - |A|^2) dmu | with the spectral quadrature.
double gauss_formula_residual(const GeometrySnapshot& snapshot, double* int_A2 = nullptr,
                              double* int_H2 = nullptr);

// sup over the grid of the residual of
//   (d/dt - Lap) TrS = 2 |A|^2 TrS + 2 (S11 - S22) sum_c (h_{3c1}^2 - h_{4c2}^2)
// with the material derivative estimated from two consecutive snapshots.
// Pass an empty V to omit the gauge correction (ablation).
double trs_evolution_residual(const GeometrySnapshot& at_t, const TensorSField& s_at_t,
                              const GeometrySnapshot& at_t_plus_dt, double dt,
                              const std::vector<Vec2>& V);

// --- report assembly -----------------------------------------------------------

// Accumulates rows and per-check state from snapshot observations, then
// assembles verdicts. Check names:
//   trs_min, h_decay, a_decay_lagrangian, codim1_v_monotone, codim1_ta2_bound,
//   codim1_product_bound, relation, relation_grad_cross, pythagoras, li_li,
//   gauss_formula, lagrangian_residual, h_symmetry, soft_diffineq, trs_evolution
class MonitorEngine {
 public:
  MonitorEngine(const MonitorConfig& cfg, int codim, std::set<std::string> enabled);

  static std::set<std::string> default_checks(int codim, bool lagrangian);
  static const std::vector<std::string>& known_checks();

  bool enabled(const std::string& name) const { return enabled_.count(name) > 0; }

  void observe(const FlowState& state, const GeometrySnapshot& snapshot, const TensorSField& s);

  // Evolution-equation probe results are produced by the runner (they need a
  // trial step) and folded into the trs_evolution verdict here.
  void record_evolution_probe(double t, double dt, double residual);

  void record_blow_up(double t, int point);

  MonitorReport finish();

  const MonitorConfig& config() const { return cfg_; }

 private:
  struct Extremum {
    double value = 0.0;
    double t = 0.0;
    int point = -1;
    bool set = false;
    void consider(double v, double at_t, int at_point = -1) {
      if (!set || v > value) {
        value = v;
        t = at_t;
        point = at_point;
        set = true;
      }
    }
  };

  MonitorConfig cfg_;
  int codim_;
  std::set<std::string> enabled_;
  MonitorReport report_;

  // per-check worst offenders
  Extremum worst_h_decay_;        // t |H|^2
  Extremum worst_a_decay_;        // t |A|^2 (Lagrangian)
  Extremum worst_a_over_trs2_;    // t |A|^2 / TrS^2 (recorded)
  Extremum worst_trs_drop_;       // relative per-row decrease of inf TrS
  Extremum worst_trs_low_;        // alpha(1-tol) - inf TrS
  Extremum worst_v_rise_;         // per-row increase of sup v
  Extremum worst_ta2_codim1_;     // t |A|^2 vs v0^2
  Extremum worst_product_;        // sup (t|A|^2+1)v^2 vs v0^2
  Extremum worst_relation_;
  Extremum worst_grad_cross_;
  Extremum worst_pythagoras_;
  Extremum worst_li_li_;
  Extremum worst_gauss_;
  Extremum worst_lagrangian_;
  Extremum worst_h_symmetry_;
  Extremum worst_h_sym_estimate_;
  Extremum worst_soft_a_;
  Extremum worst_soft_h_;
  Extremum worst_evolution_;
  double evolution_dt_ = 0.0;

  std::optional<MonitorRow> prev_row_;
  double grad_cross_tol_ = 0.0;
};

}  // namespace gmcf
