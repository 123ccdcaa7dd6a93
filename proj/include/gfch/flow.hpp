#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "gfch/models.hpp"

namespace gfch {

/// Extra model constants that are not part of ModelParams.
struct FlowOptions {
  double kappa1 = kDefaultBbmKappa1;  // GfBBM and ClassicalCH
  double kappa2 = 9.0 / 5.0;          // ClassicalCH
  std::optional<FrameConstants<double>> frame;  // MovingFrameGeneric; canonical values when unset
};

/// A scalar model v_t = L v + N(v) bound to a grid, in the form the time
/// steppers consume.
class ScalarFlow {
 public:
  using state_type = RealField;
  /// Estimated largest frequency contributed by N at amplitude max|v|.
  using RateFn = std::function<double(const Grid&, double)>;

  ScalarFlow(ModelId id, const Grid& grid, ScalarModelParts parts, RateFn rate, bool stiff)
      : id_(id), grid_(grid), parts_(std::move(parts)), rate_(std::move(rate)), stiff_(stiff),
        lambda_(grid.size()) {
    for (std::size_t j = 0; j < grid.size(); ++j) {
      Complex lam = parts_.symbol(grid.wavenumber(j));
      if (grid.is_nyquist(j)) lam = Complex(lam.real(), 0.0);
      lambda_[j] = lam;
    }
  }

  ModelId model() const { return id_; }
  const Grid& grid() const { return grid_; }
  bool requires_integrating_factor() const { return stiff_; }

  RealField rhs(const RealField& v) const {
    require_finite(v, "flow rhs");
    const Spectrum s = to_spectrum(v);
    Spectrum out = parts_.nonlinear(s);
    for (std::size_t j = 0; j < s.size(); ++j) out[j] += lambda_[j] * s[j];
    return to_physical(out);
  }

  RealField nonlinear(const RealField& v) const {
    require_finite(v, "flow nonlinear");
    return to_physical(parts_.nonlinear(to_spectrum(v)));
  }

  /// exp(h L) v
  RealField propagate(const RealField& v, double h) const {
    Spectrum s = to_spectrum(v);
    for (std::size_t j = 0; j < s.size(); ++j) s[j] *= std::exp(h * lambda_[j]);
    return to_physical(s);
  }

  double linear_rate() const {
    double m = 0.0;
    for (const auto& lam : lambda_) m = std::max(m, std::abs(lam));
    return m;
  }

  double nonlinear_rate(const RealField& v) const { return rate_ ? rate_(grid_, max_norm(v)) : 0.0; }

 private:
  ModelId id_;
  Grid grid_;
  ScalarModelParts parts_;
  RateFn rate_;
  bool stiff_;
  std::vector<Complex> lambda_;
};

/// The Boussinesq system as a first-order flow on (u, u_t).
class BoussinesqFlow {
 public:
  using state_type = BoussinesqState;

  BoussinesqFlow(const Grid& grid, const ModelParams& params) : grid_(grid), params_(params), omega_(grid.size()) {
    for (std::size_t j = 0; j < grid.size(); ++j) {
      omega_[j] = std::sqrt(boussinesq_omega2(grid.wavenumber(j), params.nu));
    }
  }

  ModelId model() const { return ModelId::Boussinesq; }
  const Grid& grid() const { return grid_; }
  const ModelParams& params() const { return params_; }
  bool requires_integrating_factor() const { return false; }

  BoussinesqState rhs(const BoussinesqState& s) const { return boussinesq_rhs(s, params_); }

  BoussinesqState nonlinear(const BoussinesqState& s) const {
    if (!s.all_finite()) throw std::domain_error("boussinesq: non-finite state");
    return BoussinesqState(RealField(grid_), to_physical(boussinesq_forcing(to_spectrum(s.u), params_)));
  }

  /// Exact linear oscillation of every mode over time h.
  BoussinesqState propagate(const BoussinesqState& s, double h) const {
    const Spectrum u = to_spectrum(s.u);
    const Spectrum w = to_spectrum(s.u_t);
    Spectrum u_out(grid_), w_out(grid_);
    for (std::size_t j = 0; j < u.size(); ++j) {
      const double om = omega_[j];
      if (om == 0.0) {
        u_out[j] = u[j] + h * w[j];
        w_out[j] = w[j];
      } else {
        const double c = std::cos(om * h);
        const double sn = std::sin(om * h);
        u_out[j] = c * u[j] + (sn / om) * w[j];
        w_out[j] = -om * sn * u[j] + c * w[j];
      }
    }
    return BoussinesqState(to_physical(u_out), to_physical(w_out));
  }

  double linear_rate() const { return *std::max_element(omega_.begin(), omega_.end()); }

  double nonlinear_rate(const BoussinesqState& s) const {
    const double amp = max_norm(s.u);
    return linear_rate() * std::sqrt((params_.p + 1) * std::pow(amp, params_.p));
  }

 private:
  Grid grid_;
  ModelParams params_;
  std::vector<double> omega_;
};

namespace detail {

inline double amp_power(double amp, int p) { return std::pow(amp, p); }

// max over resolved xi of |xi| / (1 + c |xi|^(2nu)): the effective advection
// rate of a derivative term that is smoothed by the Helmholtz-type factor.
inline double smoothed_rate(const Grid& g, double nu, double c) {
  double m = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double xi = std::abs(g.wavenumber(j));
    m = std::max(m, xi / (1.0 + c * fractional_symbol(xi, nu)));
  }
  return m;
}

// max over resolved xi of w |xi|^(2nu+1) / (1 + c |xi|^(2nu)).
inline double weighted_rate(const Grid& g, double nu, double w, double c) {
  double m = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double xi = std::abs(g.wavenumber(j));
    const double s = fractional_symbol(xi, nu);
    m = std::max(m, w * xi * s / (1.0 + c * s));
  }
  return m;
}

}  // namespace detail

/// Bind model `id` to a grid.
inline ScalarFlow make_flow(ModelId id, const ModelParams& params, const Grid& grid, const FlowOptions& opts = {}) {
  params.validate();
  const int p = params.p;
  const double nu = params.nu;
  const double ep = params.eps_p();
  const double d2 = params.delta_2nu();
  using detail::amp_power;
  switch (id) {
    case ModelId::GfCH:
    case ModelId::GCH: {
      const double nu_eff = id == ModelId::GCH ? 1.0 : nu;
      auto parts = id == ModelId::GCH ? gch_parts(p) : gfch_parts(params);
      return ScalarFlow(id, grid, std::move(parts),
                        [p, nu_eff](const Grid& g, double a) {
                          return (p + 1) * amp_power(a, p) *
                                 (0.9 * g.max_wavenumber() + 1.5 * detail::smoothed_rate(g, nu_eff, 1.0));
                        },
                        false);
    }
    case ModelId::MCH:
      return ScalarFlow(id, grid, mch_parts(),
                        [](const Grid& g, double a) {
                          return 3.0 * a * a * (0.9 * g.max_wavenumber() + 1.5 * detail::smoothed_rate(g, 1.0, 1.0));
                        },
                        false);
    case ModelId::ClassicalCH: {
      const double k2 = std::abs(opts.kappa2);
      return ScalarFlow(id, grid, classical_ch_parts(opts.kappa1, opts.kappa2),
                        [k2](const Grid& g, double a) {
                          return a * (k2 * g.max_wavenumber() + 3.0 * detail::smoothed_rate(g, 1.0, 1.0));
                        },
                        false);
    }
    case ModelId::GfBBM:
      return ScalarFlow(id, grid, gfbbm_parts(params, opts.kappa1),
                        [p, nu](const Grid& g, double a) {
                          return 1.5 * (p + 1) * amp_power(a, p) * detail::smoothed_rate(g, nu, 1.0);
                        },
                        false);
    case ModelId::GfKdV:
      return ScalarFlow(id, grid, gfkdv_parts(params),
                        [p, ep](const Grid& g, double a) {
                          return 0.5 * ep * (p + 1) * amp_power(a, p) * g.max_wavenumber();
                        },
                        true);
    case ModelId::SlowFrameUnidirectional:
      return ScalarFlow(id, grid, slow_frame_parts(params),
                        [p, nu, ep, d2](const Grid& g, double a) {
                          const double km = g.max_wavenumber();
                          return ep * (p + 1) * amp_power(a, p) * km *
                                 (0.5 + 0.5 * d2 * fractional_symbol(km, nu));
                        },
                        true);
    case ModelId::MovingFrameGeneric: {
      const auto fc = opts.frame.value_or(frame_parameters<double>(nu));
      const auto mc = moving_frame_coefficients(fc, p, nu);
      return ScalarFlow(id, grid, moving_frame_parts(params, fc),
                        [p, nu, ep, d2, mc](const Grid& g, double a) {
                          const double c = d2 * mc.dispersive;
                          return ep * amp_power(a, p) *
                                 ((p + 1) * mc.nonlinear * detail::smoothed_rate(g, nu, c) +
                                  detail::weighted_rate(g, nu, d2 * mc.bracket * (std::abs(mc.mix) + 1.0), c));
                        },
                        false);
    }
    case ModelId::GfCHOriginal:
      return ScalarFlow(id, grid, gfch_original_parts(params),
                        [p, nu](const Grid& g, double a) {
                          return (p + 1) * amp_power(a, p) *
                                 (0.3 * g.max_wavenumber() + 0.5 * detail::smoothed_rate(g, nu, 1.25));
                        },
                        false);
    case ModelId::GfBBMOriginal:
      return ScalarFlow(id, grid, gfbbm_original_parts(params),
                        [p, nu](const Grid& g, double a) {
                          return 0.5 * (p + 1) * amp_power(a, p) * detail::smoothed_rate(g, nu, 1.25);
                        },
                        false);
    case ModelId::GfKdVOriginal:
      return ScalarFlow(id, grid, gfkdv_original_parts(params),
                        [p](const Grid& g, double a) { return 0.5 * (p + 1) * amp_power(a, p) * g.max_wavenumber(); },
                        true);
    case ModelId::Boussinesq:
      throw std::invalid_argument("make_flow: Boussinesq is a second-order system; use BoussinesqFlow");
  }
  throw std::logic_error("make_flow: unhandled model");
}

}  // namespace gfch
