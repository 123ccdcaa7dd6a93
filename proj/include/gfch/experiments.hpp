#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <mutex>
#include <numbers>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "gfch/conservation.hpp"
#include "gfch/flow.hpp"
#include "gfch/frames.hpp"
#include "gfch/hierarchy.hpp"
#include "gfch/models.hpp"
#include "gfch/regression.hpp"
#include "gfch/stepper.hpp"

namespace gfch {

// ---------------------------------------------------------------------------
// Initial profiles

enum class ProfileKind { Gaussian, Sech2 };

inline std::optional<ProfileKind> parse_profile_kind(std::string_view s) {
  if (s == "gaussian") return ProfileKind::Gaussian;
  if (s == "sech2") return ProfileKind::Sech2;
  return std::nullopt;
}

inline std::string_view profile_kind_name(ProfileKind k) { return k == ProfileKind::Gaussian ? "gaussian" : "sech2"; }

/// Localized bump amplitude * f((Y - center) / width): exp(-z^2) or sech^2 z,
/// periodized over neighbouring images.
struct ProfileSpec {
  ProfileKind kind = ProfileKind::Gaussian;
  double center = 40.0;
  double width = 2.0;
  double amplitude = 1.0;

  RealField sample(const Grid& g) const {
    if (!(width > 0.0)) throw std::invalid_argument("profile: width must be positive");
    if (kind == ProfileKind::Gaussian) return gaussian_profile(g, center, width, amplitude);
    const double l = g.length();
    const int images = 1 + static_cast<int>(std::ceil(20.0 * width / l));
    return RealField::from_function(g, [&](double y) {
      double v = 0.0;
      for (int m = -images; m <= images; ++m) {
        const double c = std::cosh((y - center + m * l) / width);
        v += 1.0 / (c * c);
      }
      return amplitude * v;
    });
  }
};

/// True when |f| exceeds threshold * max|f| within `margin` nodes of the box edge.
inline bool support_reaches_edge(const RealField& f, std::size_t margin = 10, double threshold = 1e-10) {
  const double cut = threshold * max_norm(f);
  const std::size_t n = f.size();
  for (std::size_t j = 0; j < std::min(margin, n); ++j) {
    if (std::abs(f[j]) > cut || std::abs(f[n - 1 - j]) > cut) return true;
  }
  return false;
}

// ---------------------------------------------------------------------------
// Unidirectional comparison against the Boussinesq parent

/// One sweep: Boussinesq parent against a reduced model. Grid length is the
/// slow-frame period; the physical box is length / delta.
struct ConvergenceStudy {
  ModelId parent = ModelId::Boussinesq;
  ModelId reduced = ModelId::GfCH;
  std::vector<double> epsilons;  // swept with delta = delta_fixed
  std::vector<double> deltas;    // swept with eps = eps_fixed
  double eps_fixed = 1e-4;
  double delta_fixed = 0.05;
  int p = 1;
  double nu = 1.0;
  ProfileSpec profile;
  double horizon = 1.0;  // S_end
  std::int64_t n = 512;
  double length = 80.0;
  double courant = 0.05;  // dt = courant * (local grid spacing) in every frame
  Scheme scheme = Scheme::RK4IntegratingFactor;

  void validate() const {
    if (parent != ModelId::Boussinesq) throw std::invalid_argument("study: parent model must be Boussinesq");
    if (reduced != ModelId::GfCH && reduced != ModelId::GfKdV) {
      throw std::invalid_argument("study: reduced model must be GfCH or GfKdV");
    }
    auto check_list = [](const std::vector<double>& v, const char* key) {
      if (v.empty()) return;
      if (v.size() < 3) throw std::invalid_argument(std::string("study: ") + key + " needs at least 3 values");
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (!(v[i] > 0.0 && v[i] <= 1.0)) throw std::invalid_argument(std::string("study: ") + key + " must lie in (0, 1]");
        if (i > 0 && !(v[i] < v[i - 1])) {
          throw std::invalid_argument(std::string("study: ") + key + " must be strictly decreasing");
        }
      }
    };
    check_list(epsilons, "epsilons");
    check_list(deltas, "deltas");
    if (epsilons.empty() && deltas.empty()) throw std::invalid_argument("study: epsilons and deltas are both empty");
    ModelParams{p, nu, eps_fixed, delta_fixed}.validate();
    if (!(horizon > 0.0)) throw std::invalid_argument("study: horizon must be positive");
    if (!(courant > 0.0)) throw std::invalid_argument("study: courant must be positive");
    Grid(n, length);
  }
};

struct ConvergenceRow {
  std::string model;
  int p = 1;
  double nu = 1.0;
  double eps = 0.0;
  double delta = 0.0;
  std::int64_t n = 0;
  double dt = 0.0;  // parent step
  double s_end = 0.0;
  double err_max = 0.0;
  double err_l2 = 0.0;
  double slope_eps = std::nan("");
  double slope_delta = std::nan("");
  double drift_mass = std::nan("");    // reduced-model run; nan when not conserved
  double drift_energy = std::nan("");
  double wall_s = 0.0;  // left at zero so tables stay byte-reproducible
  bool edge_warning = false;
};

struct SlopeEstimate {
  double slope = std::nan("");
  double width = std::nan("");  // ~95% confidence half-width
  bool monotone = true;
};

struct ExperimentReport {
  std::vector<ConvergenceRow> rows;
  SlopeEstimate eps_slope;
  SlopeEstimate delta_slope;
  std::vector<std::string> warnings;
};

namespace detail {

inline std::int64_t steps_for(double t_end, double dt_target) {
  return std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(t_end / dt_target - 1e-9)));
}

inline StepperConfig fixed_steps(Scheme scheme, double t_end, double dt_target) {
  StepperConfig cfg;
  cfg.scheme = scheme;
  cfg.t_end = t_end;
  cfg.dt = t_end / static_cast<double>(steps_for(t_end, dt_target));
  return cfg;
}

inline double rel_max(const RealField& a, const RealField& ref) { return max_abs_diff(a, ref) / max_norm(ref); }
inline double rel_l2(const RealField& a, const RealField& ref) {
  RealField d = a;
  d -= ref;
  return l2_norm(d) / l2_norm(ref);
}

inline double rel_change(double before, double after) {
  return before != 0.0 ? std::abs(after - before) / std::abs(before) : std::abs(after);
}

// Slope over the three smallest parameter values (the tail of a decreasing list).
inline SlopeEstimate tail_slope(const std::vector<double>& h, const std::vector<double>& err) {
  SlopeEstimate out;
  if (h.size() < 3) return out;
  for (std::size_t i = 1; i < err.size(); ++i) out.monotone = out.monotone && err[i] < err[i - 1];
  const std::size_t k = h.size() - 3;
  const std::vector<double> hh(h.begin() + static_cast<std::ptrdiff_t>(k), h.end());
  const std::vector<double> ee(err.begin() + static_cast<std::ptrdiff_t>(k), err.end());
  const auto fit = fit_loglog(hh, ee);
  out.slope = fit.slope;
  out.width = 12.706 * fit.slope_stderr;  // t quantile, one degree of freedom
  return out;
}

}  // namespace detail

namespace detail {

// Same node values on a grid of equal size (a pure change of spatial unit).
inline RealField rehost(const RealField& f, const Grid& g) {
  const auto v = f.values();
  return RealField(g, std::vector<double>(v.begin(), v.end()));
}

}  // namespace detail

/// Right-going Boussinesq data u = eps U0(delta x), u_t = -u_x + eps delta U_S
/// with U_S from the slow-frame unidirectional model.
inline BoussinesqState unidirectional_data(const RealField& u0_slow, const ModelParams& m) {
  const Grid gx = u0_slow.grid().scaled(1.0 / m.delta);
  RealField u = detail::rehost(u0_slow, gx);
  u *= m.eps;
  RealField ut = derivative(u, 1);
  ut *= -1.0;
  const RealField us = slow_frame_rhs(u0_slow, m);
  ut.axpy(m.eps * m.delta, detail::rehost(us, gx));
  return BoussinesqState(std::move(u), std::move(ut));
}

/// One (eps, delta) cell of the comparison.
inline ConvergenceRow compare_cell(const ConvergenceStudy& st, double eps, double delta) {
  const ModelParams m{st.p, st.nu, eps, delta};
  m.validate();
  const Grid gy(st.n, st.length);
  const RealField u0 = st.profile.sample(gy);
  const BoussinesqState init = unidirectional_data(u0, m);
  const Grid& gx = init.grid();
  const double t_end = st.horizon / delta;

  const BoussinesqFlow parent(gx, m);
  const auto pcfg = detail::fixed_steps(st.scheme, t_end, st.courant * gx.spacing());
  const BoussinesqState fin = integrate(init, parent, pcfg);

  ConvergenceRow row;
  row.model = std::string(model_name(st.reduced));
  row.p = st.p;
  row.nu = st.nu;
  row.eps = eps;
  row.delta = delta;
  row.n = st.n;
  row.dt = pcfg.dt;
  row.s_end = st.horizon;

  const RealField slow_ref = boussinesq_to_slow(fin.u, t_end, eps, delta, gy);
  row.edge_warning = support_reaches_edge(slow_ref);

  if (st.reduced == ModelId::GfCH) {
    const Grid gz = ch_frame_grid(gx, st.nu);
    const RealField v0 = physical_to_ch_frame(init.u, 0.0, st.nu, gz);
    const RealField ref = physical_to_ch_frame(fin.u, t_end, st.nu, gz);
    const ScalarFlow flow = make_flow(ModelId::GfCH, m, gz);
    const RealField v = integrate(v0, flow, detail::fixed_steps(st.scheme, ch_frame_time(t_end, st.nu), st.courant * gz.spacing()));
    row.err_max = detail::rel_max(v, ref);
    row.err_l2 = detail::rel_l2(v, ref);
    if (st.p == 1) row.drift_mass = detail::rel_change(mass(v0), mass(v));
  } else {
    const ScalarFlow flow = make_flow(ModelId::GfKdV, m, gy);
    const auto cfg = detail::fixed_steps(Scheme::RK4IntegratingFactor, st.horizon, st.courant * gy.spacing());
    const RealField u = integrate(u0, flow, cfg);
    row.err_max = detail::rel_max(u, slow_ref);
    row.err_l2 = detail::rel_l2(u, slow_ref);
    row.drift_mass = detail::rel_change(mass(u0), mass(u));
    row.drift_energy = detail::rel_change(l2_squared(u0), l2_squared(u));
  }
  return row;
}

/// Run `count` independent jobs on up to `threads` workers; job i writes only
/// its own slot, so the result does not depend on scheduling.
template <class Job>
void parallel_for(std::size_t count, unsigned threads, Job&& job) {
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(count)));
  if (threads == 1) {
    for (std::size_t i = 0; i < count; ++i) job(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first;
  std::mutex mu;
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          job(i);
        } catch (...) {
          std::lock_guard lock(mu);
          if (!first) first = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (first) std::rethrow_exception(first);
}

inline ExperimentReport run_unidirectional_comparison(const ConvergenceStudy& st, unsigned threads = 1) {
  st.validate();
  struct Cell {
    double eps, delta;
  };
  std::vector<Cell> cells;
  for (double e : st.epsilons) cells.push_back({e, st.delta_fixed});
  for (double d : st.deltas) cells.push_back({st.eps_fixed, d});

  ExperimentReport rep;
  rep.rows.resize(cells.size());
  parallel_for(cells.size(), threads, [&](std::size_t i) { rep.rows[i] = compare_cell(st, cells[i].eps, cells[i].delta); });

  const std::size_t ne = st.epsilons.size();
  auto sweep = [&](std::size_t from, std::size_t count, const std::vector<double>& h, bool eps_sweep) {
    if (count == 0) return SlopeEstimate{};
    std::vector<double> err;
    for (std::size_t i = 0; i < count; ++i) err.push_back(rep.rows[from + i].err_max);
    const SlopeEstimate s = detail::tail_slope(h, err);
    for (std::size_t i = 0; i < count; ++i) (eps_sweep ? rep.rows[from + i].slope_eps : rep.rows[from + i].slope_delta) = s.slope;
    if (!s.monotone) rep.warnings.push_back(std::string(eps_sweep ? "eps" : "delta") + " error table is not monotone");
    return s;
  };
  rep.eps_slope = sweep(0, ne, st.epsilons, true);
  rep.delta_slope = sweep(ne, st.deltas.size(), st.deltas, false);
  for (const auto& r : rep.rows) {
    if (r.edge_warning) {
      char buf[160];
      std::snprintf(buf, sizeof buf, "support within 10 nodes of the box edge at eps = %.17g, delta = %.17g", r.eps, r.delta);
      rep.warnings.emplace_back(buf);
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Conservation audit

struct DriftSeries {
  std::string name;
  std::vector<double> times;
  std::vector<double> values;
  double max_rel_drift = 0.0;
};

struct ConservationReport {
  ModelId model = ModelId::GfKdV;
  double dt = 0.0;
  std::vector<DriftSeries> series;

  double max_drift() const {
    double m = 0.0;
    for (const auto& s : series) m = std::max(m, s.max_rel_drift);
    return m;
  }
  const DriftSeries& get(const std::string& name) const {
    for (const auto& s : series) {
      if (s.name == name) return s;
    }
    throw std::out_of_range("conservation report has no series '" + name + "'");
  }
};

namespace detail {

inline void finish_drift(DriftSeries& s) {
  const double ref = std::abs(s.values.front());
  double m = 0.0;
  for (double v : s.values) m = std::max(m, std::abs(v - s.values.front()));
  s.max_rel_drift = ref > 0.0 ? m / ref : m;
}

}  // namespace detail

/// Integrate a scalar model from `initial` over `horizon`, sampling every
/// invariant of the model. `dt_factor` sets dt = dt_factor * spacing.
inline ConservationReport run_conservation_audit(ModelId id, const ModelParams& params, const RealField& initial,
                                                 double horizon, double dt_factor = 0.1, int samples = 20,
                                                 Scheme scheme = Scheme::RK4IntegratingFactor) {
  if (id == ModelId::Boussinesq) throw std::invalid_argument("conservation audit: use the Boussinesq overload");
  const ScalarFlow flow = make_flow(id, params, initial.grid());
  auto cfg = detail::fixed_steps(scheme, horizon, dt_factor * initial.grid().spacing());
  cfg.snapshot_every = std::max<int>(1, static_cast<int>(step_count(cfg) / std::max(1, samples)));
  ConservationReport rep;
  rep.model = id;
  rep.dt = cfg.dt;
  for (const auto& inv : scalar_invariants(id, params.p)) rep.series.push_back({inv.name, {}, {}, 0.0});
  const auto invs = scalar_invariants(id, params.p);
  integrate(initial, flow, cfg, [&](std::int64_t, double t, const RealField& v) {
    for (std::size_t i = 0; i < invs.size(); ++i) {
      rep.series[i].times.push_back(t);
      rep.series[i].values.push_back(invs[i].eval(v, params.nu));
    }
  });
  for (auto& s : rep.series) detail::finish_drift(s);
  return rep;
}

/// Boussinesq zero mode: int u_t is constant and int u grows linearly with
/// slope int u_t(0). The "mass_linear" drift is measured against that line,
/// relative to max(|int u|, horizon |int u_t|).
inline ConservationReport run_conservation_audit(const ModelParams& params, const BoussinesqState& initial,
                                                 double horizon, double dt_factor = 0.1, int samples = 20,
                                                 Scheme scheme = Scheme::RK4) {
  const BoussinesqFlow flow(initial.grid(), params);
  auto cfg = detail::fixed_steps(scheme, horizon, dt_factor * initial.grid().spacing());
  cfg.snapshot_every = std::max<int>(1, static_cast<int>(step_count(cfg) / std::max(1, samples)));
  ConservationReport rep;
  rep.model = ModelId::Boussinesq;
  rep.dt = cfg.dt;
  DriftSeries mom{"momentum", {}, {}, 0.0};
  DriftSeries lin{"mass_linear", {}, {}, 0.0};
  const double m0 = integral(initial.u);
  const double p0 = integral(initial.u_t);
  integrate(initial, flow, cfg, [&](std::int64_t, double t, const BoussinesqState& s) {
    mom.times.push_back(t);
    mom.values.push_back(integral(s.u_t));
    lin.times.push_back(t);
    lin.values.push_back(integral(s.u));
  });
  detail::finish_drift(mom);
  double dev = 0.0, scale = std::abs(m0);
  for (std::size_t i = 0; i < lin.values.size(); ++i) {
    dev = std::max(dev, std::abs(lin.values[i] - (m0 + p0 * lin.times[i])));
    scale = std::max(scale, std::abs(lin.values[i]));
  }
  lin.max_rel_drift = scale > 0.0 ? dev / scale : dev;
  rep.series = {mom, lin};
  return rep;
}

// ---------------------------------------------------------------------------
// Dispersion audit

struct DispersionRow {
  double k = 0.0;
  double nu = 1.0;
  double omega_measured = 0.0;
  double omega_exact = 0.0;
  double rel_err = 0.0;
};

/// Standing wave u = A cos(k x), u_t = 0 evolves as A cos(k x) cos(omega t).
/// omega is read off the first `crossings` zeros of the cos(kx) coefficient,
/// each located by Newton steps in t from the last state before the sign
/// change, and fitted as t_m = (2m + 1) pi / (2 omega).
inline double measure_frequency(double k, double nu, int crossings = 3, double amplitude = 1e-10, double dt = 0.01) {
  if (!(k > 0.0)) throw std::invalid_argument("dispersion audit: k must be positive");
  const int mode = static_cast<int>(std::ceil(k));
  const std::int64_t n = std::max<std::int64_t>(16, 4 * (mode + 1));
  const Grid g(n, 2.0 * std::numbers::pi * mode / k);
  const ModelParams m{1, nu, 1.0, 1.0};
  const BoussinesqFlow flow(g, m);
  const std::size_t slot = g.slot(mode);
  auto coef = [&](const RealField& f) { return 2.0 * to_spectrum(f)[slot].real(); };

  BoussinesqState s(RealField::from_function(g, [&](double x) { return amplitude * std::cos(k * x); }), RealField(g));
  double t = 0.0;
  std::vector<double> zeros;
  while (static_cast<int>(zeros.size()) < crossings) {
    const BoussinesqState next = step(s, flow, Scheme::RK4, dt, t);
    if (std::signbit(coef(next.u)) != std::signbit(coef(s.u))) {
      // Newton on c(t + h) = 0 with c' = coefficient of u_t.
      double h = -coef(s.u) / coef(s.u_t);
      for (int it = 0; it < 8; ++it) {
        const BoussinesqState trial = step(s, flow, Scheme::RK4, h, t);
        const double dh = -coef(trial.u) / coef(trial.u_t);
        h += dh;
        if (std::abs(dh) < 1e-15 * (t + h)) break;
      }
      zeros.push_back(t + h);
    }
    s = next;
    t += dt;
  }
  std::vector<double> idx(zeros.size());
  for (std::size_t i = 0; i < zeros.size(); ++i) idx[i] = (2.0 * static_cast<double>(i) + 1.0) * std::numbers::pi / 2.0;
  // t_m = x_m / omega; least squares through the origin.
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < zeros.size(); ++i) {
    sxy += idx[i] * zeros[i];
    sxx += idx[i] * idx[i];
  }
  return sxx / sxy;
}

inline std::vector<DispersionRow> run_dispersion_audit(double nu, const std::vector<double>& ks) {
  std::vector<DispersionRow> out;
  for (double k : ks) {
    DispersionRow r;
    r.k = k;
    r.nu = nu;
    r.omega_measured = measure_frequency(k, nu);
    r.omega_exact = boussinesq_frequency(k, nu);
    r.rel_err = std::abs(r.omega_measured - r.omega_exact) / r.omega_exact;
    out.push_back(r);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Solitary wave of the KdV-type model at nu = 1

/// U = A sech^(2/p)(K (Y - c S)) solves U_S = -alpha (U^(p+1))_Y - beta U_YYY
/// with alpha = eps^p / 2, beta = delta^2 / 2 when
///   alpha A^p = 2 beta K^2 (p + 2) / p^2,  c = 4 beta K^2 / p^2.
struct SolitaryWave {
  double amplitude = 1.0;
  double k = 0.0;
  double speed = 0.0;
  int p = 1;

  static SolitaryWave from_amplitude(const ModelParams& m, double amplitude) {
    const double alpha = 0.5 * m.eps_p();
    const double beta = 0.5 * m.delta * m.delta;
    const int p = m.p;
    SolitaryWave w;
    w.amplitude = amplitude;
    w.p = p;
    w.k = std::sqrt(alpha * std::pow(amplitude, p) * p * p / (2.0 * beta * (p + 2)));
    w.speed = 4.0 * beta * w.k * w.k / (p * p);
    return w;
  }

  RealField sample(const Grid& g, double center) const {
    const double l = g.length();
    return RealField::from_function(g, [&](double y) {
      double v = 0.0;
      for (int m = -3; m <= 3; ++m) v += std::pow(1.0 / std::cosh(k * (y - center + m * l)), 2.0 / p);
      return amplitude * v;
    });
  }
};

struct SolitaryResult {
  SolitaryWave wave;
  double transit_time = 0.0;
  double shape_error = 0.0;  // max|U - U_exact| / A after one transit
  double dt = 0.0;
};

inline SolitaryResult run_solitary_wave(const ModelParams& m, double amplitude, std::int64_t n, double length,
                                        double dt_target) {
  if (m.nu != 1.0) throw std::invalid_argument("solitary wave: closed form needs nu = 1");
  const Grid g(n, length);
  SolitaryResult r;
  r.wave = SolitaryWave::from_amplitude(m, amplitude);
  r.transit_time = length / r.wave.speed;
  const RealField u0 = r.wave.sample(g, 0.5 * length);
  const ScalarFlow flow = make_flow(ModelId::GfKdV, m, g);
  const auto cfg = detail::fixed_steps(Scheme::RK4IntegratingFactor, r.transit_time, dt_target);
  r.dt = cfg.dt;
  const RealField u = integrate(u0, flow, cfg);
  r.shape_error = max_abs_diff(u, u0) / amplitude;
  return r;
}

// ---------------------------------------------------------------------------
// CSV

inline std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline constexpr const char* kCsvHeader =
    "model,p,nu,eps,delta,n,dt,S_end,err_max,err_l2,slope_eps,slope_delta,drift_mass,drift_energy,wall_s";

inline void write_csv_row(std::ostream& os, const ConvergenceRow& r) {
  os << r.model << ',' << r.p << ',' << format_real(r.nu) << ',' << format_real(r.eps) << ','
     << format_real(r.delta) << ',' << r.n << ',' << format_real(r.dt) << ',' << format_real(r.s_end) << ','
     << format_real(r.err_max) << ',' << format_real(r.err_l2) << ',' << format_real(r.slope_eps) << ','
     << format_real(r.slope_delta) << ',' << format_real(r.drift_mass) << ',' << format_real(r.drift_energy) << ','
     << format_real(r.wall_s) << '\n';
}

inline void write_csv(std::ostream& os, const std::vector<ConvergenceRow>& rows) {
  os << kCsvHeader << '\n';
  for (const auto& r : rows) write_csv_row(os, r);
}

}  // namespace gfch
