#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "gfch/field.hpp"
#include "gfch/flow.hpp"

namespace gfch {

enum class Scheme { RK4, RK4IntegratingFactor };

inline std::string_view scheme_name(Scheme s) {
  return s == Scheme::RK4 ? "RK4" : "RK4-IntegratingFactor";
}

inline std::optional<Scheme> parse_scheme(std::string_view name) {
  if (name == "RK4") return Scheme::RK4;
  if (name == "RK4-IntegratingFactor") return Scheme::RK4IntegratingFactor;
  return std::nullopt;
}

struct StepperConfig {
  Scheme scheme = Scheme::RK4;
  double dt = 0.0;
  double t_end = 0.0;
  double cfl_guard = 0.5;
  int snapshot_every = 0;  // 0: only the initial and final states
};

/// Half-length of the RK4 stability interval on the imaginary axis.
inline constexpr double kRk4ImaginaryLimit = 2.0 * std::numbers::sqrt2;

class StepperConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a state stops being finite. `mode` is the lowest |k| Fourier
/// mode of the offending field that is non-finite.
class BlowUpError : public std::runtime_error {
 public:
  BlowUpError(double time, std::int64_t mode)
      : std::runtime_error("non-finite state at t = " + std::to_string(time) + ", first offending mode k = " +
                           std::to_string(mode)),
        time_(time), mode_(mode) {}
  double time() const { return time_; }
  std::int64_t mode() const { return mode_; }

 private:
  double time_;
  std::int64_t mode_;
};

namespace detail {

inline std::int64_t first_nonfinite_mode(const RealField& f) {
  const Spectrum s = to_spectrum(f);
  const Grid& g = f.grid();
  const auto half = static_cast<std::int64_t>(g.size() / 2);
  for (std::int64_t k = 0; k <= half; ++k) {
    for (std::int64_t sk : {k, -k}) {
      if (sk < -half || sk >= half) continue;
      const Complex c = s.coeff(sk);
      if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return sk;
    }
  }
  return 0;
}

inline std::int64_t first_nonfinite_mode(const BoussinesqState& s) {
  return s.u.all_finite() ? first_nonfinite_mode(s.u_t) : first_nonfinite_mode(s.u);
}

template <class State>
State lincomb(const State& a, double s, const State& b) {
  State out = a;
  out.axpy(s, b);
  return out;
}

}  // namespace detail

/// Linear stability bound on dt for the configured scheme at the current state.
template <class Flow>
double stable_dt(const Flow& flow, const typename Flow::state_type& state, Scheme scheme) {
  double rate = flow.nonlinear_rate(state);
  if (scheme == Scheme::RK4) rate += flow.linear_rate();
  if (rate <= 0.0) return std::numeric_limits<double>::infinity();
  return kRk4ImaginaryLimit / rate;
}

template <class Flow>
void validate_stepper(const Flow& flow, const typename Flow::state_type& state, const StepperConfig& cfg) {
  if (!(cfg.dt > 0.0) || !std::isfinite(cfg.dt)) throw StepperConfigError("stepper: dt must be positive");
  if (!(cfg.t_end > 0.0) || !std::isfinite(cfg.t_end)) throw StepperConfigError("stepper: t_end must be positive");
  if (!(cfg.cfl_guard > 0.0)) throw StepperConfigError("stepper: cfl_guard must be positive");
  if (cfg.snapshot_every < 0) throw StepperConfigError("stepper: snapshot_every must be >= 0");
  if (cfg.scheme == Scheme::RK4 && flow.requires_integrating_factor()) {
    throw StepperConfigError(std::string("stepper: model ") + std::string(model_name(flow.model())) +
                             " has a dispersive symbol growing faster than |xi|; "
                             "the RK4-IntegratingFactor scheme is mandatory");
  }
  const double bound = cfg.cfl_guard * stable_dt(flow, state, cfg.scheme);
  if (cfg.dt > bound) {
    throw StepperConfigError("stepper: dt = " + std::to_string(cfg.dt) + " exceeds cfl_guard * stability bound = " +
                             std::to_string(bound));
  }
}

/// Classical four-stage Runge-Kutta step.
template <class Flow>
typename Flow::state_type rk4_step(const typename Flow::state_type& y, const Flow& flow, double h) {
  using detail::lincomb;
  const auto k1 = flow.rhs(y);
  const auto k2 = flow.rhs(lincomb(y, 0.5 * h, k1));
  const auto k3 = flow.rhs(lincomb(y, 0.5 * h, k2));
  const auto k4 = flow.rhs(lincomb(y, h, k3));
  auto out = y;
  out.axpy(h / 6.0, k1).axpy(h / 3.0, k2).axpy(h / 3.0, k3).axpy(h / 6.0, k4);
  return out;
}

/// Integrating-factor RK4 (Lawson): the linear part is propagated exactly in
/// spectral space, the nonlinear part by classical RK4.
template <class Flow>
typename Flow::state_type if_rk4_step(const typename Flow::state_type& y, const Flow& flow, double h) {
  using detail::lincomb;
  const auto k1 = flow.nonlinear(y);
  const auto ey_half = flow.propagate(y, 0.5 * h);
  const auto k2 = flow.nonlinear(flow.propagate(lincomb(y, 0.5 * h, k1), 0.5 * h));
  const auto k3 = flow.nonlinear(lincomb(ey_half, 0.5 * h, k2));
  const auto k4 = flow.nonlinear(lincomb(flow.propagate(y, h), h, flow.propagate(k3, 0.5 * h)));
  auto out = flow.propagate(lincomb(y, h / 6.0, k1), h);
  out.axpy(h / 3.0, flow.propagate(k2 + k3, 0.5 * h)).axpy(h / 6.0, k4);
  return out;
}

namespace detail {

template <class State>
bool finite_state(const State& s) {
  return s.all_finite();
}

}  // namespace detail

/// One step of size h with the configured scheme. Non-finite results raise
/// BlowUpError tagged with `time`.
template <class Flow>
typename Flow::state_type step(const typename Flow::state_type& y, const Flow& flow, Scheme scheme, double h,
                               double time = 0.0) {
  try {
    auto next = scheme == Scheme::RK4 ? rk4_step(y, flow, h) : if_rk4_step(y, flow, h);
    if (!detail::finite_state(next)) throw BlowUpError(time + h, detail::first_nonfinite_mode(next));
    return next;
  } catch (const std::domain_error&) {
    throw BlowUpError(time, detail::first_nonfinite_mode(y));
  } catch (const std::logic_error& e) {
    // A realness failure means the state already carries garbage.
    if (!detail::finite_state(y)) throw BlowUpError(time, detail::first_nonfinite_mode(y));
    throw;
  }
}

/// One step of size cfg.dt.
template <class Flow>
typename Flow::state_type step(const typename Flow::state_type& y, const Flow& flow, const StepperConfig& cfg) {
  return step(y, flow, cfg.scheme, cfg.dt);
}

/// Number of fixed steps used to reach t_end; dt is shortened uniformly so
/// that the steps land exactly on t_end.
inline std::int64_t step_count(const StepperConfig& cfg) {
  return static_cast<std::int64_t>(std::ceil(cfg.t_end / cfg.dt - 1e-9));
}

/// Advance from t = 0 to cfg.t_end. The observer is called as
/// observer(step_index, time, state) at step 0, every snapshot_every steps and
/// at the final step.
template <class Flow, class Observer>
typename Flow::state_type integrate(typename Flow::state_type y, const Flow& flow, const StepperConfig& cfg,
                                    Observer&& observer, bool validate = true) {
  if (validate) validate_stepper(flow, y, cfg);
  const std::int64_t steps = step_count(cfg);
  const double h = cfg.t_end / static_cast<double>(steps);
  observer(std::int64_t{0}, 0.0, y);
  for (std::int64_t i = 1; i <= steps; ++i) {
    y = step(y, flow, cfg.scheme, h, static_cast<double>(i - 1) * h);
    const bool snap = (cfg.snapshot_every > 0 && i % cfg.snapshot_every == 0) || i == steps;
    if (snap) observer(i, static_cast<double>(i) * h, y);
  }
  return y;
}

template <class Flow>
typename Flow::state_type integrate(typename Flow::state_type y, const Flow& flow, const StepperConfig& cfg) {
  return integrate(std::move(y), flow, cfg, [](std::int64_t, double, const auto&) {});
}

}  // namespace gfch
