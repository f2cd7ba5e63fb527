#include "gmcf/monitor.hpp"

#include <algorithm>
#include <cmath>

#include "gmcf/lagrangian.hpp"

namespace gmcf {

bool MonitorReport::all_pass() const {
  for (const auto& v : verdicts) {
    if (!v.pass) return false;
  }
  return !blew_up;
}

const CheckVerdict* MonitorReport::find(const std::string& name) const {
  for (const auto& v : verdicts) {
    if (v.name == name) return &v;
  }
  return nullptr;
}

double alpha0(const GeometrySnapshot& snapshot, const TensorSField& s, int* worst_point) {
  if (snapshot.codim != 2) {
    throw std::invalid_argument("alpha0 needs a codimension-2 snapshot");
  }
  double alpha = 2.0;
  int worst = -1;
  for (size_t p = 0; p < s.size(); ++p) {
    if (s[p].tr_s < alpha) {
      alpha = s[p].tr_s;
      worst = static_cast<int>(p);
    }
  }
  if (worst_point) *worst_point = worst;
  if (!(alpha > 0.0)) {
    const int i = worst % snapshot.grid.n1;
    const int j = worst / snapshot.grid.n1;
    throw NotAreaDecreasingError("initial map is not area decreasing: Tr(S) = " +
                                     std::to_string(alpha) + " at grid point (" +
                                     std::to_string(i) + ", " + std::to_string(j) + ")",
                                 worst, alpha);
  }
  return alpha;
}

double lagrangian_decay_constant(double alpha) { return 16.0 * std::sqrt(2.0) / alpha; }

double lagrangian_decay_bound(double alpha) {
  const double c = lagrangian_decay_constant(alpha);
  return 8.0 * (1.0 + c * c / alpha) / (alpha * alpha);
}

double relation_residual_point(double lambda1, double lambda2, const double h[2][2][2],
                               double* scale) {
  const TensorSPoint s = tensor_s_point(lambda1, lambda2);
  double sum_h = 0.0;
  for (int c = 0; c < 2; ++c) {
    sum_h += h[0][c][0] * h[0][c][0] - h[1][c][1] * h[1][c][1];
  }
  double grad2 = 0.0;  // |grad TrS|^2 via grad_k S_ii = -2 T_ii h_{(2+i)ki}
  double rhs = 0.0;
  for (int k = 0; k < 2; ++k) {
    const double gk = s.t11 * h[0][k][0] + s.t22 * h[1][k][1];
    grad2 += 4.0 * gk * gk;
    const double rk = s.t11 * h[1][k][1] + s.t22 * h[0][k][0];
    rhs += 4.0 * rk * rk;
  }
  const double cross = 4.0 * s.tr_s * (s.s11 - s.s22) * sum_h;
  if (scale) *scale = std::abs(cross) + grad2 + rhs;
  return std::abs(cross + grad2 - rhs);
}

double pythagoras_residual_point(double lambda1, double lambda2) {
  const TensorSPoint s = tensor_s_point(lambda1, lambda2);
  return std::max(std::abs(s.s11 * s.s11 + s.t11 * s.t11 - 1.0),
                  std::abs(s.s22 * s.s22 + s.t22 * s.t22 - 1.0));
}

double li_li_lhs_point(const double h[2][2][2], int m) {
  double term1 = 0.0;
  for (int a = 0; a < m; ++a) {
    for (int g = 0; g < m; ++g) {
      for (int i = 0; i < 2; ++i) {
        for (int mm = 0; mm < 2; ++mm) {
          double comm = 0.0;
          for (int k = 0; k < 2; ++k) {
            comm += h[a][i][k] * h[g][mm][k] - h[a][mm][k] * h[g][i][k];
          }
          term1 += comm * comm;
        }
      }
    }
  }
  double term2 = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int mm = 0; mm < 2; ++mm)
        for (int k = 0; k < 2; ++k) {
          double dotp = 0.0;
          for (int a = 0; a < m; ++a) dotp += h[a][i][j] * h[a][mm][k];
          term2 += dotp * dotp;
        }
  return 2.0 * term1 + 2.0 * term2;
}

RelationStats relation_residual(const GeometrySnapshot& snapshot, const TensorSField& s) {
  if (snapshot.codim != 2) {
    throw std::invalid_argument("relation residual needs a codimension-2 snapshot");
  }
  RelationStats stats;
  const std::vector<double> grad2_spectral =
      surface_gradient_norm(snapshot.grid, snapshot.tr_s, snapshot.pts);
  for (size_t p = 0; p < snapshot.pts.size(); ++p) {
    const PointGeometry& pt = snapshot.pts[p];
    if (pt.frame.degenerate) {
      ++stats.skipped_degenerate;
      continue;
    }
    double scale = 0.0;
    const double resid =
        relation_residual_point(pt.frame.lambda[0], pt.frame.lambda[1], pt.h, &scale);
    stats.sup_residual = std::max(stats.sup_residual, resid);
    stats.sup_rel_residual = std::max(stats.sup_rel_residual, resid / std::max(1.0, scale));

    double grad2_frame = 0.0;
    for (int k = 0; k < 2; ++k) {
      const double gk = s[p].t11 * pt.h[0][k][0] + s[p].t22 * pt.h[1][k][1];
      grad2_frame += 4.0 * gk * gk;
    }
    stats.grad_cross_residual =
        std::max(stats.grad_cross_residual, std::abs(grad2_frame - grad2_spectral[p]));
  }
  return stats;
}

double pythagoras_residual(const TensorSField& s) {
  double sup = 0.0;
  for (const TensorSPoint& pt : s) {
    sup = std::max(sup, std::abs(pt.s11 * pt.s11 + pt.t11 * pt.t11 - 1.0));
    sup = std::max(sup, std::abs(pt.s22 * pt.s22 + pt.t22 * pt.t22 - 1.0));
  }
  return sup;
}

double li_li_excess(const GeometrySnapshot& snapshot) {
  double worst = -1.0;
  for (const PointGeometry& pt : snapshot.pts) {
    const double lhs = li_li_lhs_point(pt.h, snapshot.codim);
    const double bound = 3.0 * pt.A2 * pt.A2 * (1.0 + 1e-12);
    worst = std::max(worst, lhs - bound);
  }
  return worst;
}

double gauss_formula_residual(const GeometrySnapshot& snapshot, double* int_A2, double* int_H2) {
  double sum_a = 0.0;
  double sum_h = 0.0;
  for (const PointGeometry& pt : snapshot.pts) {
    sum_a += pt.A2 * pt.sqrt_det_g;
    sum_h += pt.H2 * pt.sqrt_det_g;
  }
  const double w = snapshot.grid.cell_area();
  if (int_A2) *int_A2 = sum_a * w;
  if (int_H2) *int_H2 = sum_h * w;
  return std::abs(sum_h - sum_a) * w;
}

double trs_evolution_residual(const GeometrySnapshot& at_t, const TensorSField& s_at_t,
                              const GeometrySnapshot& at_t_plus_dt, double dt,
                              const std::vector<Vec2>& V) {
  if (at_t.codim != 2) {
    throw std::invalid_argument("evolution residual needs codimension-2 snapshots");
  }
  const std::vector<double> matd =
      material_derivative(at_t.grid, at_t.tr_s, at_t_plus_dt.tr_s, dt, V);
  const std::vector<double> lap = laplace_beltrami(at_t.grid, at_t.tr_s, at_t.pts);
  double sup = 0.0;
  for (size_t p = 0; p < at_t.pts.size(); ++p) {
    const PointGeometry& pt = at_t.pts[p];
    double sum_h = 0.0;
    for (int c = 0; c < 2; ++c) {
      sum_h += pt.h[0][c][0] * pt.h[0][c][0] - pt.h[1][c][1] * pt.h[1][c][1];
    }
    const double rhs =
        2.0 * pt.A2 * s_at_t[p].tr_s + 2.0 * (s_at_t[p].s11 - s_at_t[p].s22) * sum_h;
    sup = std::max(sup, std::abs(matd[p] - lap[p] - rhs));
  }
  return sup;
}

// ---------------------------------------------------------------------------

namespace {
const std::vector<std::string> kKnownChecks = {
    "trs_min",          "h_decay",         "a_decay_lagrangian", "codim1_v_monotone",
    "codim1_ta2_bound", "codim1_product_bound", "relation",       "relation_grad_cross",
    "pythagoras",       "li_li",           "gauss_formula",      "lagrangian_residual",
    "h_symmetry",       "soft_diffineq",   "trs_evolution"};
}  // namespace

const std::vector<std::string>& MonitorEngine::known_checks() { return kKnownChecks; }

std::set<std::string> MonitorEngine::default_checks(int codim, bool lagrangian) {
  std::set<std::string> out = {"pythagoras", "li_li", "gauss_formula", "soft_diffineq"};
  if (codim == 2) {
    out.insert({"trs_min", "h_decay", "relation", "relation_grad_cross", "trs_evolution"});
    if (lagrangian) {
      out.insert({"a_decay_lagrangian", "lagrangian_residual", "h_symmetry"});
    }
  } else {
    out.insert({"codim1_v_monotone", "codim1_ta2_bound", "codim1_product_bound"});
  }
  return out;
}

MonitorEngine::MonitorEngine(const MonitorConfig& cfg, int codim, std::set<std::string> enabled)
    : cfg_(cfg), codim_(codim), enabled_(std::move(enabled)) {
  if (codim_ == 2 && (enabled_.count("trs_min") || enabled_.count("h_decay")) &&
      !(cfg_.alpha > 0.0 && cfg_.alpha <= 2.0)) {
    throw std::invalid_argument("monitor config needs alpha in (0, 2] for codim-2 bound checks");
  }
  if (!(cfg_.delta > 0.0 && cfg_.delta <= cfg_.epsilon)) {
    throw std::invalid_argument("monitor config needs 0 < delta <= 2 epsilon / n (n = 2)");
  }
}

void MonitorEngine::observe(const FlowState& state, const GeometrySnapshot& snap,
                            const TensorSField& s) {
  MonitorRow row;
  row.t = state.t;
  row.dt = state.last_dt;
  row.sup_H2 = snap.sup_H2;
  row.sup_A2 = snap.sup_A2;
  row.degenerate_pts = snap.degenerate_count;
  row.pythagoras_resid = pythagoras_residual(s);

  double int_A2 = 0.0;
  row.gauss_bonnet_resid = gauss_formula_residual(snap, &int_A2, nullptr);

  const bool lagrangian_run =
      enabled_.count("lagrangian_residual") || enabled_.count("a_decay_lagrangian") ||
      enabled_.count("h_symmetry");

  if (codim_ == 2) {
    row.inf_tr_s = snap.inf_tr_s;
    if (cfg_.alpha > 0.0) {
      row.tH2_over_bound = state.t * snap.sup_H2 / (2.0 / cfg_.alpha);
    }
    if (enabled_.count("relation") || enabled_.count("relation_grad_cross")) {
      const RelationStats rel = relation_residual(snap, s);
      row.relation_resid = rel.sup_rel_residual;
      worst_relation_.consider(rel.sup_rel_residual, state.t);
      worst_grad_cross_.consider(rel.grad_cross_residual, state.t);
    }
    if (lagrangian_run) {
      double sup_asym = 0.0;
      for (const PointGeometry& pt : snap.pts) {
        sup_asym = std::max(sup_asym, std::abs(pt.df.a[1][0] - pt.df.a[0][1]));
      }
      row.lagrangian_resid = sup_asym;
      worst_lagrangian_.consider(sup_asym, state.t);
      if (enabled_.count("a_decay_lagrangian")) {
        row.tA2_over_bound = state.t * snap.sup_A2 / lagrangian_decay_bound(cfg_.alpha);
        worst_a_decay_.consider(state.t * snap.sup_A2, state.t);
        double sup_ratio = 0.0;
        for (size_t p = 0; p < snap.pts.size(); ++p) {
          sup_ratio = std::max(sup_ratio, snap.pts[p].A2 / (s[p].tr_s * s[p].tr_s));
        }
        worst_a_over_trs2_.consider(state.t * sup_ratio, state.t);
      }
      if (enabled_.count("h_symmetry")) {
        const HSymmetryStats sym = check_h_symmetry(snap);
        worst_h_symmetry_.consider(sym.sup_sym_residual, state.t);
        worst_h_sym_estimate_.consider(sym.sup_estimate_excess, state.t);
      }
    }
    if (enabled_.count("trs_min")) {
      worst_trs_low_.consider(cfg_.alpha * (1.0 - cfg_.rel_tol) - snap.inf_tr_s, state.t);
      if (prev_row_ && prev_row_->inf_tr_s) {
        const double prev = *prev_row_->inf_tr_s;
        const double drop = (prev - snap.inf_tr_s) / std::max(std::abs(prev), 1e-300);
        worst_trs_drop_.consider(drop, state.t);
      }
    }
    if (enabled_.count("h_decay")) {
      worst_h_decay_.consider(state.t * snap.sup_H2, state.t);
    }
  } else {
    row.sup_v = snap.sup_v;
    row.tA2_over_bound = state.t * snap.sup_A2 / (cfg_.v0 * cfg_.v0);
    if (enabled_.count("codim1_v_monotone") && prev_row_ && prev_row_->sup_v) {
      worst_v_rise_.consider(snap.sup_v - *prev_row_->sup_v, state.t);
    }
    if (enabled_.count("codim1_ta2_bound")) {
      worst_ta2_codim1_.consider(state.t * snap.sup_A2, state.t);
    }
    if (enabled_.count("codim1_product_bound")) {
      double sup_prod = 0.0;
      for (const PointGeometry& pt : snap.pts) {
        sup_prod = std::max(sup_prod, (state.t * pt.A2 + 1.0) * pt.v * pt.v);
      }
      worst_product_.consider(sup_prod, state.t);
    }
  }

  if (enabled_.count("li_li")) {
    worst_li_li_.consider(li_li_excess(snap), state.t);
  }
  worst_pythagoras_.consider(row.pythagoras_resid, state.t);
  if (enabled_.count("gauss_formula")) {
    worst_gauss_.consider(row.gauss_bonnet_resid / std::max(int_A2, 1e-12), state.t);
  }
  if (grad_cross_tol_ == 0.0) {
    // Resolution-dependent envelope for the spectral-vs-frame gradient
    // cross-check; the grid functions are smooth but not band-limited, so the
    // disagreement shrinks rapidly with N (measured in the resolution sweep).
    const double n_min = std::min(snap.grid.n1, snap.grid.n2);
    grad_cross_tol_ = 1e-2 * std::pow(64.0 / n_min, 4.0);
  }
  if (enabled_.count("soft_diffineq") && prev_row_) {
    const double dt_row = state.t - prev_row_->t;
    if (dt_row > 0.0) {
      const double a_max = std::max(prev_row_->sup_A2, row.sup_A2);
      const double a_growth = (row.sup_A2 - prev_row_->sup_A2) / dt_row;
      worst_soft_a_.consider(
          a_growth - 3.0 * a_max * a_max * (1.0 + cfg_.rel_tol) - cfg_.soft_slack, state.t);
      const double h_max = std::max(prev_row_->sup_H2, row.sup_H2);
      const double h_growth = (row.sup_H2 - prev_row_->sup_H2) / dt_row;
      worst_soft_h_.consider(
          h_growth - 2.0 * a_max * h_max * (1.0 + cfg_.rel_tol) - cfg_.soft_slack, state.t);
    }
  }

  prev_row_ = row;
  report_.rows.push_back(std::move(row));
}

void MonitorEngine::record_evolution_probe(double t, double dt, double residual) {
  worst_evolution_.consider(residual, t);
  evolution_dt_ = std::max(evolution_dt_, dt);
}

void MonitorEngine::record_blow_up(double t, int point) {
  report_.blew_up = true;
  report_.blow_up_t = t;
  report_.blow_up_point = point;
}

MonitorReport MonitorEngine::finish() {
  auto add_gated = [&](const std::string& gate, const std::string& name,
                       const std::string& statement, const Extremum& ext, double threshold,
                       const std::string& detail = "") {
    if (!enabled_.count(gate)) return;
    CheckVerdict v;
    v.name = name;
    v.statement = statement;
    v.worst_value = ext.set ? ext.value : 0.0;
    v.threshold = threshold;
    v.worst_t = ext.set ? ext.t : 0.0;
    v.pass = v.worst_value <= threshold;
    v.detail = detail;
    report_.verdicts.push_back(std::move(v));
  };
  auto add = [&](const std::string& name, const std::string& statement, const Extremum& ext,
                 double threshold, const std::string& detail = "") {
    add_gated(name, name, statement, ext, threshold, detail);
  };

  if (codim_ == 2) {
    add("trs_min", "inf Tr(S) >= alpha (1 - rel_tol) and nondecreasing per row", worst_trs_low_,
        0.0, "alpha = " + std::to_string(cfg_.alpha));
    add_gated("trs_min", "trs_min_monotone",
              "per-row relative decrease of inf Tr(S) <= mono_rel_tol", worst_trs_drop_,
              cfg_.mono_rel_tol);
    add("h_decay", "t sup|H|^2 <= 2/alpha", worst_h_decay_,
        (cfg_.alpha > 0.0 ? (2.0 / cfg_.alpha) * (1.0 + cfg_.rel_tol) : 0.0));
    add("a_decay_lagrangian", "t sup|A|^2 <= 8 (1 + C^2/alpha)/alpha^2 with C = 16 sqrt(2)/alpha",
        worst_a_decay_, lagrangian_decay_bound(cfg_.alpha) * (1.0 + cfg_.rel_tol),
        "recorded: t sup(|A|^2/TrS^2) = " +
            std::to_string(worst_a_over_trs2_.set ? worst_a_over_trs2_.value : 0.0) +
            " vs barrier " + std::to_string(lagrangian_decay_bound(cfg_.alpha) / 4.0));
    add("relation", "4 TrS (S11-S22) sum_c(h_3c1^2 - h_4c2^2) + |grad TrS|^2 = "
        "4 sum_c(T11 h_4c2 + T22 h_3c1)^2 (relative)",
        worst_relation_, cfg_.id_tol);
    add("relation_grad_cross", "frame formula for |grad TrS|^2 matches the spectral gradient",
        worst_grad_cross_, grad_cross_tol_);
    add("lagrangian_residual", "sup |d1 f^2 - d2 f^1| stays at discretization level",
        worst_lagrangian_, cfg_.id_tol);
    add("h_symmetry", "h_3c2 = h_4c1 in J-adapted frames", worst_h_symmetry_, cfg_.id_tol,
        "pointwise |sum_c(h_3c1^2 - h_4c2^2)| - 2 sqrt(2)|A||H| worst excess = " +
            std::to_string(worst_h_sym_estimate_.set ? worst_h_sym_estimate_.value : 0.0));
    add("trs_evolution",
        "(d/dt - Lap) TrS = 2|A|^2 TrS + 2 (S11-S22) sum_c(h_3c1^2 - h_4c2^2)",
        worst_evolution_, cfg_.evo_tol_rate * std::max(evolution_dt_, 0.0) + 1e-9);
  } else {
    add("codim1_v_monotone", "sup v nonincreasing per row", worst_v_rise_, cfg_.v_mono_abs_tol,
        "v0 = " + std::to_string(cfg_.v0));
    add("codim1_ta2_bound", "t sup|A|^2 <= v0^2", worst_ta2_codim1_,
        cfg_.v0 * cfg_.v0 * (1.0 + cfg_.rel_tol));
    add("codim1_product_bound", "sup (t|A|^2 + 1) v^2 <= v0^2", worst_product_,
        cfg_.v0 * cfg_.v0 * (1.0 + cfg_.rel_tol));
  }
  add("pythagoras", "S_ii^2 + T_ii^2 = 1", worst_pythagoras_, 1e-13);
  add("li_li", "2 sum(commutators)^2 + 2 sum(inner products)^2 <= 3 |A|^4", worst_li_li_, 0.0);
  add("gauss_formula", "integral |A|^2 dmu = integral |H|^2 dmu (relative)", worst_gauss_,
      cfg_.gauss_tol);
  add_gated("soft_diffineq", "soft_diffineq_A", "d sup|A|^2/dt <= 3 (sup|A|^2)^2 + slack",
            worst_soft_a_, 0.0);
  add_gated("soft_diffineq", "soft_diffineq_H", "d sup|H|^2/dt <= 2 sup|A|^2 sup|H|^2 + slack",
            worst_soft_h_, 0.0);

  return std::move(report_);
}

}  // namespace gmcf
