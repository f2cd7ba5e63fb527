#include "gmcf/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

namespace gmcf {

namespace {

std::string trim(const std::string& s) {
  size_t b = 0;
  size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

struct Parser {
  std::vector<std::string>& errors;

  bool to_double(const std::string& key, const std::string& v, double& out) {
    try {
      size_t pos = 0;
      out = std::stod(v, &pos);
      if (pos != v.size()) throw std::invalid_argument("trailing characters");
      if (!std::isfinite(out)) throw std::invalid_argument("not finite");
      return true;
    } catch (const std::exception&) {
      errors.push_back(key + ": expected a number, got '" + v + "'");
      return false;
    }
  }

  bool to_int(const std::string& key, const std::string& v, long& out) {
    try {
      size_t pos = 0;
      out = std::stol(v, &pos);
      if (pos != v.size()) throw std::invalid_argument("trailing characters");
      return true;
    } catch (const std::exception&) {
      errors.push_back(key + ": expected an integer, got '" + v + "'");
      return false;
    }
  }

  bool to_uint64(const std::string& key, const std::string& v, std::uint64_t& out) {
    try {
      size_t pos = 0;
      out = std::stoull(v, &pos);
      if (pos != v.size()) throw std::invalid_argument("trailing characters");
      return true;
    } catch (const std::exception&) {
      errors.push_back(key + ": expected a nonnegative integer, got '" + v + "'");
      return false;
    }
  }

  bool doubles(const std::string& key, const std::string& v, size_t count,
               std::vector<double>& out) {
    const auto toks = split_ws(v);
    if (toks.size() != count) {
      errors.push_back(key + ": expected " + std::to_string(count) + " numbers, got " +
                       std::to_string(toks.size()));
      return false;
    }
    out.clear();
    for (const auto& t : toks) {
      double d = 0.0;
      if (!to_double(key, t, d)) return false;
      out.push_back(d);
    }
    return true;
  }
};

}  // namespace

ConfigParse parse_config(const std::string& text) {
  ConfigParse result;
  std::vector<std::string>& errors = result.errors;
  Parser p{errors};

  RunConfig cfg;
  cfg.grid = PeriodicGrid{0, 0, 2.0 * M_PI, 2.0 * M_PI};

  bool seen_kind = false, seen_codim = false, seen_affine = false, seen_q = false;
  bool seen_n1 = false, seen_n2 = false, seen_t_end = false;

  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const size_t hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const std::string line = trim(raw);
    if (line.empty()) continue;
    const size_t eq = line.find('=');
    if (eq == std::string::npos) {
      errors.push_back("line " + std::to_string(line_no) + ": expected 'key = value'");
      continue;
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) {
      errors.push_back("line " + std::to_string(line_no) + ": empty key or value");
      continue;
    }

    long iv = 0;
    double dv = 0.0;
    std::vector<double> ds;

    if (key == "grid.n1") {
      if (p.to_int(key, value, iv)) cfg.grid.n1 = static_cast<int>(iv);
      seen_n1 = true;
    } else if (key == "grid.n2") {
      if (p.to_int(key, value, iv)) cfg.grid.n2 = static_cast<int>(iv);
      seen_n2 = true;
    } else if (key == "grid.L1") {
      if (p.to_double(key, value, dv)) cfg.grid.L1 = dv;
    } else if (key == "grid.L2") {
      if (p.to_double(key, value, dv)) cfg.grid.L2 = dv;
    } else if (key == "map.kind") {
      seen_kind = true;
      if (value == "affine_fourier") {
        cfg.kind = MapKind::AffineFourier;
      } else if (value == "potential") {
        cfg.kind = MapKind::Potential;
      } else if (value == "snapshot") {
        cfg.kind = MapKind::Snapshot;
      } else {
        errors.push_back("map.kind: expected affine_fourier | potential | snapshot, got '" +
                         value + "'");
      }
    } else if (key == "map.codim") {
      seen_codim = true;
      if (p.to_int(key, value, iv)) {
        if (iv != 1 && iv != 2) {
          errors.push_back("map.codim must be 1 or 2");
        } else {
          cfg.codim = static_cast<int>(iv);
        }
      }
    } else if (key == "map.affine") {
      seen_affine = true;
      const auto toks = split_ws(value);
      if (toks.size() != 2 && toks.size() != 4) {
        errors.push_back("map.affine: expected 2 (codim 1) or 4 (codim 2) numbers");
      } else {
        bool ok = true;
        std::vector<double> vals;
        for (const auto& t : toks) {
          double d = 0.0;
          ok = ok && p.to_double(key, t, d);
          vals.push_back(d);
        }
        if (ok) {
          cfg.affine = {{{vals[0], vals[1]}, {0.0, 0.0}}};
          if (vals.size() == 4) cfg.affine[1] = {vals[2], vals[3]};
        }
      }
    } else if (key == "map.offset") {
      const auto toks = split_ws(value);
      if (toks.size() != 1 && toks.size() != 2) {
        errors.push_back("map.offset: expected 1 or 2 numbers");
      } else {
        for (size_t i = 0; i < toks.size(); ++i) {
          double d = 0.0;
          if (p.to_double(key, toks[i], d)) cfg.offset[i] = d;
        }
      }
    } else if (key == "map.mode") {
      const auto toks = split_ws(value);
      if (toks.size() != 4 && toks.size() != 5) {
        errors.push_back("map.mode: expected 'k1 k2 amp1 [amp2] phase'");
      } else {
        FourierMode mode;
        long k = 0;
        bool ok = p.to_int(key, toks[0], k);
        mode.k1 = static_cast<int>(k);
        ok = ok && p.to_int(key, toks[1], k);
        mode.k2 = static_cast<int>(k);
        ok = ok && p.to_double(key, toks[2], mode.amp[0]);
        if (toks.size() == 5) ok = ok && p.to_double(key, toks[3], mode.amp[1]);
        ok = ok && p.to_double(key, toks.back(), mode.phase);
        if (ok) cfg.modes.push_back(mode);
      }
    } else if (key == "map.random_modes") {
      if (p.to_int(key, value, iv)) cfg.random_modes = static_cast<int>(iv);
    } else if (key == "map.random_amp") {
      if (p.to_double(key, value, dv)) cfg.random_amp = dv;
    } else if (key == "map.normalize_margin") {
      if (p.to_double(key, value, dv)) cfg.normalize_margin = dv;
    } else if (key == "map.Q") {
      seen_q = true;
      if (p.doubles(key, value, 3, ds)) cfg.Q = Sym2{ds[0], ds[1], ds[2]};
    } else if (key == "map.phi_mode") {
      const auto toks = split_ws(value);
      if (toks.size() != 4) {
        errors.push_back("map.phi_mode: expected 'k1 k2 amp phase'");
      } else {
        PhiMode mode;
        long k = 0;
        bool ok = p.to_int(key, toks[0], k);
        mode.k1 = static_cast<int>(k);
        ok = ok && p.to_int(key, toks[1], k);
        mode.k2 = static_cast<int>(k);
        ok = ok && p.to_double(key, toks[2], mode.amp);
        ok = ok && p.to_double(key, toks[3], mode.phase);
        if (ok) cfg.phi_modes.push_back(mode);
      }
    } else if (key == "map.phi_random_modes") {
      if (p.to_int(key, value, iv)) cfg.phi_random_modes = static_cast<int>(iv);
    } else if (key == "map.phi_random_amp") {
      if (p.to_double(key, value, dv)) cfg.phi_random_amp = dv;
    } else if (key == "map.snapshot") {
      cfg.snapshot_path = value;
    } else if (key == "flow.t_end") {
      seen_t_end = true;
      if (p.to_double(key, value, dv)) cfg.t_end = dv;
    } else if (key == "flow.cfl") {
      if (p.to_double(key, value, dv)) cfg.cfl = dv;
    } else if (key == "flow.snapshot_every") {
      if (p.to_double(key, value, dv)) cfg.snapshot_every = dv;
    } else if (key == "flow.max_steps") {
      if (p.to_int(key, value, iv)) cfg.max_steps = iv;
    } else if (key == "checks.enable") {
      for (const auto& name : split_ws(value)) cfg.checks.push_back(name);
    } else if (key == "checks.rel_tol") {
      if (p.to_double(key, value, dv)) cfg.mon.rel_tol = dv;
    } else if (key == "checks.id_tol") {
      if (p.to_double(key, value, dv)) cfg.mon.id_tol = dv;
    } else if (key == "checks.mono_rel_tol") {
      if (p.to_double(key, value, dv)) cfg.mon.mono_rel_tol = dv;
    } else if (key == "checks.v_mono_abs_tol") {
      if (p.to_double(key, value, dv)) cfg.mon.v_mono_abs_tol = dv;
    } else if (key == "checks.gauss_tol") {
      if (p.to_double(key, value, dv)) cfg.mon.gauss_tol = dv;
    } else if (key == "checks.evo_tol_rate") {
      if (p.to_double(key, value, dv)) cfg.mon.evo_tol_rate = dv;
    } else if (key == "checks.soft_slack") {
      if (p.to_double(key, value, dv)) cfg.mon.soft_slack = dv;
    } else if (key == "checks.delta") {
      if (p.to_double(key, value, dv)) cfg.mon.delta = dv;
    } else if (key == "checks.epsilon") {
      if (p.to_double(key, value, dv)) cfg.mon.epsilon = dv;
    } else if (key == "output.dir") {
      cfg.out_dir = value;
    } else if (key == "output.formats") {
      cfg.write_csv = false;
      cfg.write_json = false;
      cfg.write_snapshots = false;
      for (const auto& f : split_ws(value)) {
        if (f == "csv") {
          cfg.write_csv = true;
        } else if (f == "json") {
          cfg.write_json = true;
        } else if (f == "snapshots") {
          cfg.write_snapshots = true;
        } else {
          errors.push_back("output.formats: unknown format '" + f + "'");
        }
      }
    } else if (key == "seed") {
      p.to_uint64(key, value, cfg.seed);
    } else {
      errors.push_back("unknown key '" + key + "' (line " + std::to_string(line_no) + ")");
    }
  }

  // --- cross-field validation (collect everything) ---
  if (!seen_n1 || !seen_n2) errors.push_back("grid.n1 and grid.n2 are required");
  for (const auto& e : grid_errors(cfg.grid)) errors.push_back(e);

  if (!seen_kind) errors.push_back("map.kind is required");
  if (!seen_t_end) errors.push_back("flow.t_end is required");
  if (seen_t_end && !(cfg.t_end > 0.0)) errors.push_back("flow.t_end must be positive");
  if (!(cfg.cfl > 0.0 && cfg.cfl <= 1.0)) errors.push_back("flow.cfl must lie in (0, 1]");
  if (cfg.snapshot_every < 0.0) errors.push_back("flow.snapshot_every must be nonnegative");
  if (cfg.normalize_margin >= 0.0 &&
      !(cfg.normalize_margin > 0.0 && cfg.normalize_margin < 1.0)) {
    errors.push_back("map.normalize_margin must lie in (0, 1)");
  }

  if (cfg.kind == MapKind::Potential) {
    if (seen_codim && cfg.codim != 2) {
      errors.push_back("map.kind = potential implies codim 2");
    }
    cfg.codim = 2;
    if (cfg.grid.L1 != cfg.grid.L2) {
      errors.push_back(
          "map.kind = potential requires a square torus (L1 == L2); the standard "
          "almost-complex structure is an isometry only there");
    }
    if (seen_affine) errors.push_back("map.affine is not valid for potential maps (use map.Q)");
  } else if (cfg.kind == MapKind::AffineFourier) {
    if (!seen_codim) errors.push_back("map.codim is required for affine_fourier maps");
    if (seen_q) errors.push_back("map.Q is only valid for potential maps");
    for (const auto& mode : cfg.modes) {
      if (cfg.codim == 1 && mode.amp[1] != 0.0) {
        errors.push_back("map.mode: codim-1 maps take a single amplitude");
      }
      (void)mode;
    }
  } else if (cfg.kind == MapKind::Snapshot) {
    if (cfg.snapshot_path.empty()) errors.push_back("map.snapshot path is required");
  }
  if (cfg.random_modes < 0) errors.push_back("map.random_modes must be nonnegative");
  if (cfg.phi_random_modes < 0) errors.push_back("map.phi_random_modes must be nonnegative");

  for (const auto& name : cfg.checks) {
    const auto& known = MonitorEngine::known_checks();
    if (std::find(known.begin(), known.end(), name) == known.end()) {
      errors.push_back("checks.enable: unknown check '" + name + "'");
    }
  }
  const bool lagrangian_checks =
      std::find(cfg.checks.begin(), cfg.checks.end(), "a_decay_lagrangian") != cfg.checks.end() ||
      std::find(cfg.checks.begin(), cfg.checks.end(), "h_symmetry") != cfg.checks.end();
  if (lagrangian_checks && cfg.codim != 2) {
    errors.push_back("Lagrangian checks need a codimension-2 run");
  }
  if (!(cfg.mon.delta > 0.0 && cfg.mon.delta <= cfg.mon.epsilon)) {
    errors.push_back("checks.delta must satisfy 0 < delta <= 2 epsilon / n with n = 2");
  }

  if (errors.empty()) {
    if (cfg.snapshot_every == 0.0) cfg.snapshot_every = cfg.t_end / 20.0;
    if (cfg.max_steps < 0) cfg.max_steps = std::numeric_limits<long>::max();
    result.config = std::move(cfg);
  }
  return result;
}

ConfigParse parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    ConfigParse result;
    result.errors.push_back("cannot open config file: " + path);
    return result;
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace gmcf
