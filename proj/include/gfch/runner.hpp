#pragma once

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "gfch/config.hpp"
#include "gfch/experiments.hpp"

namespace gfch {

namespace exit_code {
inline constexpr int kOk = 0;
inline constexpr int kValidationFailure = 1;
inline constexpr int kConfigError = 2;
inline constexpr int kBlowUp = 3;
}  // namespace exit_code

/// Command-line overrides.
struct RunOptions {
  std::string config_path;
  std::optional<std::string> out_dir;
  std::optional<std::uint64_t> seed;
  unsigned threads = 1;
  std::string mutate;  // validate only; empty for none
};

/// Files produced by one command, kept in memory until the run succeeds.
class OutputSet {
 public:
  void add(std::string name, std::string content) { files_.emplace_back(std::move(name), std::move(content)); }
  void warn(std::string w) { warnings_.push_back(std::move(w)); }
  const std::vector<std::string>& warnings() const { return warnings_; }
  const std::vector<std::pair<std::string, std::string>>& files() const { return files_; }

  /// Write every file plus manifest.json (deterministic) and timing.json.
  void flush(const std::filesystem::path& dir, const RunConfig& cfg, const std::string& mutate, double wall_s,
             unsigned threads, const nlohmann::json& summary = nlohmann::json::object()) const {
    std::filesystem::create_directories(dir);
    nlohmann::json manifest;
    manifest["command"] = std::string(command_name(cfg.command()));
    nlohmann::json config = cfg.values();
    config.erase("output.dir");  // where it went is not what ran
    manifest["config"] = config;
    manifest["config_hash"] = cfg.hash();
    manifest["mutate"] = mutate;
    manifest["warnings"] = warnings_;
    manifest["summary"] = summary;
    nlohmann::json list = nlohmann::json::array();
    std::uint64_t content = fnv1a64("");
    for (const auto& [name, body] : files_) {
      write(dir / name, body);
      const std::string h = hex64(fnv1a64(body));
      list.push_back({{"name", name}, {"fnv1a64", h}});
      content = fnv1a64(name + ":" + h + "\n", content);
    }
    manifest["files"] = list;
    manifest["content_hash"] = hex64(content);
    write(dir / "manifest.json", manifest.dump(2) + "\n");
    nlohmann::json timing{{"wall_s", wall_s}, {"threads", threads}};
    write(dir / "timing.json", timing.dump(2) + "\n");
  }

 private:
  static void write(const std::filesystem::path& p, const std::string& body) {
    std::ofstream os(p, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + p.string());
    os << body;
  }

  std::vector<std::pair<std::string, std::string>> files_;
  std::vector<std::string> warnings_;
};

namespace detail {

inline ModelParams params_from(const RunConfig& c, bool with_scales) {
  ModelParams m;
  const std::int64_t p = c.integer("p");
  if (p < 1 || p > 64) throw ConfigError("key 'p': must be an integer in [1, 64]");
  m.p = static_cast<int>(p);
  m.nu = c.real("nu");
  if (with_scales) {
    m.eps = c.real("eps");
    m.delta = c.real("delta");
  }
  try {
    m.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return m;
}

inline Grid grid_from(const RunConfig& c) {
  try {
    return Grid(c.integer("grid.n"), c.real("grid.length"));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

inline ProfileSpec profile_from(const RunConfig& c) {
  ProfileSpec s;
  const auto kind = parse_profile_kind(c.str("profile.kind"));
  if (!kind) throw ConfigError("key 'profile.kind': expected gaussian or sech2, got '" + c.str("profile.kind") + "'");
  s.kind = *kind;
  s.center = c.real("profile.center");
  s.width = c.real("profile.width");
  s.amplitude = c.real("profile.amplitude");
  if (!(s.width > 0.0)) throw ConfigError("key 'profile.width': must be positive");
  if (!std::isfinite(s.amplitude) || !std::isfinite(s.center)) throw ConfigError("profile: values must be finite");
  return s;
}

inline std::string csv_field_file(const RealField& x_source, std::initializer_list<const RealField*> cols,
                                  const char* header) {
  std::string out = std::string(header) + "\n";
  const Grid& g = x_source.grid();
  for (std::size_t j = 0; j < g.size(); ++j) {
    out += format_real(g.node(j));
    for (const RealField* c : cols) out += "," + format_real((*c)[j]);
    out += "\n";
  }
  return out;
}

// "auto" picks the integrating factor exactly when the model needs it.
inline Scheme scheme_from(const std::string& name, bool stiff) {
  if (name == "auto") return stiff ? Scheme::RK4IntegratingFactor : Scheme::RK4;
  if (const auto s = parse_scheme(name)) return *s;
  throw ConfigError("key 'stepper.scheme': unknown scheme '" + name + "'; use auto, RK4 or RK4-IntegratingFactor");
}

inline std::string snapshot_name(std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "snapshot_%04zu.csv", i);
  return buf;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// solve

inline int cmd_solve(const RunConfig& cfg, OutputSet& out, std::ostream& log) {
  const std::string name = cfg.str("model");
  const auto id = parse_model(name);
  if (!id) throw ConfigError("unknown model '" + name + "'; valid models: " + valid_model_names());
  const ModelParams m = detail::params_from(cfg, true);
  const Grid g = detail::grid_from(cfg);
  const ProfileSpec prof = detail::profile_from(cfg);
  const RealField u0 = prof.sample(g);

  StepperConfig sc;
  sc.t_end = cfg.real("stepper.t_end");
  sc.cfl_guard = cfg.real("stepper.cfl_guard");
  const std::int64_t every = cfg.integer("stepper.snapshot_every");
  if (every < 0 || every > 1'000'000'000) throw ConfigError("key 'stepper.snapshot_every': must be >= 0");
  sc.snapshot_every = static_cast<int>(every);
  sc.dt = cfg.str("stepper.dt") == "auto" ? 0.2 * g.spacing() : cfg.real("stepper.dt");
  const std::string scheme = cfg.str("stepper.scheme");

  std::string index = "index,step,time,file\n";
  std::string invariants;
  std::size_t snaps = 0;
  bool edge_noted = false;
  auto record = [&](std::int64_t step, double t, const std::string& body, const RealField& shape) {
    const std::string file = detail::snapshot_name(snaps);
    out.add(file, body);
    index += std::to_string(snaps) + "," + std::to_string(step) + "," + format_real(t) + "," + file + "\n";
    ++snaps;
    if (!edge_noted && support_reaches_edge(shape)) {
      edge_noted = true;
      out.warn("support within 10 nodes of the box edge at t = " + format_real(t));
    }
  };

  if (*id == ModelId::Boussinesq) {
    sc.scheme = detail::scheme_from(scheme, false);
    const std::string vel = cfg.str("initial.velocity");
    RealField ut(g);
    if (vel == "rightgoing") {
      ut = derivative(u0, 1);
      ut *= -1.0;
    } else if (vel != "zero") {
      throw ConfigError("key 'initial.velocity': expected rightgoing or zero, got '" + vel + "'");
    }
    const BoussinesqFlow flow(g, m);
    BoussinesqState s0(u0, ut);
    validate_stepper(flow, s0, sc);
    invariants = "time,momentum,mass\n";
    integrate(std::move(s0), flow, sc, [&](std::int64_t step, double t, const BoussinesqState& s) {
      record(step, t, detail::csv_field_file(s.u, {&s.u, &s.u_t}, "x,u,u_t"), s.u);
      invariants += format_real(t) + "," + format_real(integral(s.u_t)) + "," + format_real(integral(s.u)) + "\n";
    }, false);
  } else {
    FlowOptions fo;
    fo.kappa1 = cfg.real("flow.kappa1");
    fo.kappa2 = cfg.real("flow.kappa2");
    const ScalarFlow flow = make_flow(*id, m, g, fo);
    sc.scheme = detail::scheme_from(scheme, flow.requires_integrating_factor());
    validate_stepper(flow, u0, sc);
    const auto invs = scalar_invariants(*id, m.p);
    invariants = "time";
    for (const auto& i : invs) invariants += "," + i.name;
    invariants += "\n";
    integrate(u0, flow, sc, [&](std::int64_t step, double t, const RealField& v) {
      record(step, t, detail::csv_field_file(v, {&v}, "x,value"), v);
      invariants += format_real(t);
      for (const auto& i : invs) invariants += "," + format_real(i.eval(v, m.nu));
      invariants += "\n";
    }, false);
  }
  out.add("snapshots.csv", index);
  out.add("invariants.csv", invariants);
  log << "solve: " << name << ", " << snaps << " snapshots, t_end = " << format_real(sc.t_end) << "\n";
  return exit_code::kOk;
}

// ---------------------------------------------------------------------------
// validate

/// Coefficient corruptions accepted by --mutate.
inline HierarchyCoefficients mutated_coefficients(const std::string& name) {
  HierarchyCoefficients k;
  if (name.empty() || name == "none" || name == "kappa2") return k;
  struct Entry {
    const char* name;
    double HierarchyCoefficients::*field;
  };
  static constexpr Entry table[] = {
      {"u1s", &HierarchyCoefficients::u1s},
      {"u2s", &HierarchyCoefficients::u2s},
      {"u3ss_power", &HierarchyCoefficients::u3ss_power},
      {"u3ss_mixed", &HierarchyCoefficients::u3ss_mixed},
      {"u3s_u2", &HierarchyCoefficients::u3s_u2},
      {"u3s_u1", &HierarchyCoefficients::u3s_u1},
      {"u3s_power", &HierarchyCoefficients::u3s_power},
      {"u3s_mixed", &HierarchyCoefficients::u3s_mixed},
  };
  for (const auto& e : table) {
    if (name == e.name) {
      // The 3/8 coefficient is corrupted to 1/2; the others are scaled by 1.1.
      if (e.field == &HierarchyCoefficients::u3s_power) {
        k.u3s_power = 0.5;
      } else {
        k.*(e.field) *= 1.1;
      }
      return k;
    }
  }
  throw ConfigError("unknown mutation '" + name +
                    "'; valid: none, u1s, u2s, u3ss_power, u3ss_mixed, u3s_u2, u3s_u1, u3s_power, u3s_mixed, kappa2");
}

/// Random real band-limited field sum_k a_k cos(k x) + b_k sin(k x), |k| <= kmax.
inline RealField random_band_limited(const Grid& g, int kmax, double scale, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<double> a(static_cast<std::size_t>(kmax) + 1), b(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    a[k] = scale * dist(rng) / static_cast<double>(1 + k);
    b[k] = k == 0 ? 0.0 : scale * dist(rng) / static_cast<double>(1 + k);
  }
  const double w = 2.0 * std::numbers::pi / g.length();
  return RealField::from_function(g, [&](double x) {
    double v = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) v += a[k] * std::cos(w * k * x) + b[k] * std::sin(w * k * x);
    return v;
  });
}

inline int cmd_validate(const RunConfig& cfg, const std::string& mutate, OutputSet& out, std::ostream& log) {
  const HierarchyCoefficients coeffs = mutated_coefficients(mutate);
  const Grid g = detail::grid_from(cfg);
  const ProfileSpec prof = detail::profile_from(cfg);
  const double tol = cfg.real("validate.tolerance");
  const double chain_tol = cfg.real("validate.chain_tolerance");
  const double drift_tol = cfg.real("validate.drift_tolerance");
  const double horizon = cfg.real("validate.horizon");
  const std::int64_t fields = cfg.integer("validate.fields");
  if (fields < 1) throw ConfigError("key 'validate.fields': must be >= 1");
  std::vector<int> powers;
  for (double p : cfg.reals("validate.powers")) {
    if (p != std::floor(p) || p < 1) throw ConfigError("key 'validate.powers': entries must be integers >= 1");
    powers.push_back(static_cast<int>(p));
  }
  const std::vector<double> orders = cfg.reals("validate.orders");
  for (int p : powers) {
    for (double nu : orders) {
      try {
        ModelParams{p, nu, 1, 1}.validate();
      } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("validate.powers/orders: ") + e.what());
      }
    }
  }
  const ModelParams base = detail::params_from(cfg, false);
  const RealField u0 = prof.sample(g);

  std::string csv = "check,case,value,tolerance,status\n";
  int failures = 0;
  auto check = [&](const std::string& what, const std::string& which, double value, double limit) {
    const bool ok = value <= limit;  // NaN fails
    failures += ok ? 0 : 1;
    csv += what + "," + which + "," + format_real(value) + "," + format_real(limit) + "," + (ok ? "pass" : "FAIL") + "\n";
    log << (ok ? "  ok    " : "  FAIL  ") << what << " [" << which << "] " << format_real(value) << " (tol "
        << format_real(limit) << ")\n";
  };

  log << "hierarchy residuals (max norm, standard profile)\n";
  for (int p : powers) {
    for (double nu : orders) {
      const auto r = hierarchy_residuals(make_hierarchy(u0, ModelParams{p, nu, 1, 1}, 1.0, coeffs));
      const std::string c = "p=" + std::to_string(p) + " nu=" + format_real(nu);
      check("order_one", c, r.order_one, tol);
      check("order_eps", c, r.order_eps, tol);
      check("order_delta", c, r.order_delta, tol);
      check("order_mixed", c, r.order_mixed, tol);
      check("order_mixed_s", c, r.order_mixed_s, tol);
    }
  }

  log << "reduction chain (" << fields << " random band-limited fields)\n";
  std::mt19937_64 rng(cfg.unsigned64("seed"));
  const Grid cg(64, 8.0 * std::numbers::pi);
  const double kappa2 = mutate == "kappa2" ? 2.0 : 9.0 / 5.0;
  double d_gch = 0.0, d_mch = 0.0, d_ch = 0.0;
  for (std::int64_t i = 0; i < fields; ++i) {
    const RealField v = random_band_limited(cg, 6, 0.5, rng);
    for (int p : powers) d_gch = std::max(d_gch, scaled_diff(gfch_rhs(v, ModelParams{p, 1.0, 1, 1}), gch_rhs(v, p)));
    d_mch = std::max(d_mch, scaled_diff(gch_rhs(v, 2), mch_rhs(v)));
    d_ch = std::max(d_ch, scaled_diff(gch_rhs(v, 1), classical_ch_rhs(v, 6.0 / 5.0, kappa2)));
  }
  check("chain", "GfCH(nu=1)=GCH", d_gch, chain_tol);
  check("chain", "GCH(p=2)=MCH", d_mch, chain_tol);
  check("chain", "GCH(p=1)=ClassicalCH", d_ch, chain_tol);

  log << "conservation (horizon " << format_real(horizon) << ", dt = 0.1 dx)\n";
  const ModelParams cp{base.p, base.nu, 1.0, 1.0};
  const auto kdv = run_conservation_audit(ModelId::GfKdV, cp, u0, horizon);
  const auto bbm = run_conservation_audit(ModelId::GfBBM, cp, u0, horizon);
  check("drift", "GfKdV mass", kdv.get("mass").max_rel_drift, drift_tol);
  check("drift", "GfKdV l2", kdv.get("l2").max_rel_drift, drift_tol);
  check("drift", "GfBBM mass", bbm.get("mass").max_rel_drift, drift_tol);
  check("drift", "GfBBM energy", bbm.get("energy").max_rel_drift, drift_tol);

  out.add("validate.csv", csv);
  log << (failures == 0 ? "validate: all checks passed\n" : "validate: " + std::to_string(failures) + " check(s) failed\n");
  return failures == 0 ? exit_code::kOk : exit_code::kValidationFailure;
}

// ---------------------------------------------------------------------------
// converge

inline ConvergenceStudy study_from(const RunConfig& cfg) {
  ConvergenceStudy st;
  const std::string red = cfg.str("converge.reduced");
  const auto id = parse_model(red);
  if (!id || (*id != ModelId::GfCH && *id != ModelId::GfKdV)) {
    throw ConfigError("key 'converge.reduced': expected GfCH or GfKdV, got '" + red + "'");
  }
  const ModelParams m = detail::params_from(cfg, false);
  st.reduced = *id;
  st.p = m.p;
  st.nu = m.nu;
  st.epsilons = cfg.reals("converge.epsilons");
  st.deltas = cfg.reals("converge.deltas");
  st.eps_fixed = cfg.real("converge.eps_fixed");
  st.delta_fixed = cfg.real("converge.delta_fixed");
  st.horizon = cfg.real("converge.horizon");
  st.courant = cfg.real("converge.courant");
  st.n = cfg.integer("grid.n");
  st.length = cfg.real("grid.length");
  st.profile = detail::profile_from(cfg);
  try {
    st.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return st;
}

inline std::string gnuplot_data(const ConvergenceStudy& st, const ExperimentReport& rep) {
  std::string out;
  const std::string model(model_name(st.reduced));
  std::size_t row = 0;
  if (!st.epsilons.empty()) {
    out += "# " + model + ": eps sweep at delta = " + format_real(st.delta_fixed) + "\n# eps err_max err_l2\n";
    for (double e : st.epsilons) {
      out += format_real(e) + " " + format_real(rep.rows[row].err_max) + " " + format_real(rep.rows[row].err_l2) + "\n";
      ++row;
    }
    out += "\n\n";
  }
  if (!st.deltas.empty()) {
    out += "# " + model + ": delta sweep at eps = " + format_real(st.eps_fixed) + "\n# delta err_max err_l2\n";
    for (double d : st.deltas) {
      out += format_real(d) + " " + format_real(rep.rows[row].err_max) + " " + format_real(rep.rows[row].err_l2) + "\n";
      ++row;
    }
    out += "\n\n";
  }
  return out;
}

inline int cmd_converge(const RunConfig& cfg, unsigned threads, OutputSet& out, std::ostream& log,
                        nlohmann::json& summary) {
  const ConvergenceStudy st = study_from(cfg);
  std::vector<ConvergenceStudy> studies{st};
  if (cfg.boolean("converge.kdv_reference") && st.reduced == ModelId::GfCH) {
    studies.push_back(st);
    studies.back().reduced = ModelId::GfKdV;
  }
  std::vector<ConvergenceRow> rows;
  std::string slopes = "model,sweep,slope,ci95_halfwidth,monotone\n";
  std::string dat;
  for (const auto& s : studies) {
    const ExperimentReport rep = run_unidirectional_comparison(s, threads);
    rows.insert(rows.end(), rep.rows.begin(), rep.rows.end());
    const std::string model(model_name(s.reduced));
    for (const auto& [sweep, est] : {std::pair{"eps", rep.eps_slope}, std::pair{"delta", rep.delta_slope}}) {
      slopes += model + "," + sweep + "," + format_real(est.slope) + "," + format_real(est.width) + "," +
                (est.monotone ? "true" : "false") + "\n";
      summary[model][std::string("slope_") + sweep] = est.slope;
    }
    log << model << ": eps-slope " << format_real(rep.eps_slope.slope) << ", delta-slope "
        << format_real(rep.delta_slope.slope) << "\n";
    for (const auto& w : rep.warnings) out.warn(model + ": " + w);
    dat += gnuplot_data(s, rep);
  }
  std::ostringstream csv;
  write_csv(csv, rows);
  out.add("converge.csv", csv.str());
  out.add("slopes.csv", slopes);
  out.add("converge.dat", dat);
  return exit_code::kOk;
}

// ---------------------------------------------------------------------------

/// Load the config, apply overrides, run the command and write its outputs.
inline int run_command(Command cmd, const RunOptions& opt, std::ostream& log, std::ostream& err) {
  const auto t0 = std::chrono::steady_clock::now();
  try {
    RunConfig cfg = RunConfig::from_file(cmd, opt.config_path);
    if (opt.out_dir) cfg.set("output.dir", *opt.out_dir);
    if (opt.seed) cfg.set("seed", std::to_string(*opt.seed));
    cfg.unsigned64("seed");
    if (!opt.mutate.empty() && cmd != Command::Validate) throw ConfigError("--mutate applies to validate only");
    if (opt.threads < 1) throw ConfigError("--threads must be >= 1");

    OutputSet out;
    nlohmann::json summary = nlohmann::json::object();
    int rc = exit_code::kOk;
    switch (cmd) {
      case Command::Solve: rc = cmd_solve(cfg, out, log); break;
      case Command::Validate: rc = cmd_validate(cfg, opt.mutate, out, log); break;
      case Command::Converge: rc = cmd_converge(cfg, opt.threads, out, log, summary); break;
    }
    for (const auto& w : out.warnings()) err << "warning: " << w << "\n";
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.flush(cfg.str("output.dir"), cfg, opt.mutate, wall, opt.threads, summary);
    return rc;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return exit_code::kConfigError;
  } catch (const StepperConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return exit_code::kConfigError;
  } catch (const BlowUpError& e) {
    err << "blow-up: " << e.what() << "\n";
    return exit_code::kBlowUp;
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << "\n";
    return exit_code::kConfigError;
  }
}

}  // namespace gfch
