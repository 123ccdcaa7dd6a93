#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

#include "gfch/params.hpp"
#include "gfch/spectral.hpp"

namespace gfch {

/// The four elementary coordinate changes:
///   Scaling  (x, t) -> (Y, S) = (delta (x - t), delta t),      u = eps U
///   Moving      (Y, S) -> (X, T) = (a Y + b S, c S),              U = V
///   Scaleout    (X, T) -> (zeta, tau) = (X / delta, T / delta),   v = eps V
///   Composite (x, t) -> (zeta, tau) = (a (x - 3t/5), a t / 3),  u = v
enum class FrameMapKind { Scaling, Moving, Scaleout, Composite };

inline std::string_view frame_map_name(FrameMapKind k) {
  switch (k) {
    case FrameMapKind::Scaling: return "scaling";
    case FrameMapKind::Moving: return "moving";
    case FrameMapKind::Scaleout: return "scaleout";
    case FrameMapKind::Composite: return "composite";
  }
  return "?";
}

template <class Real = double>
struct Point {
  Real space;
  Real time;
};

template <class Real = double>
class FrameMap {
 public:
  FrameMap(FrameMapKind kind, Real eps, Real delta, Real nu, FrameConstants<Real> fc)
      : kind_(kind), eps_(eps), delta_(delta), nu_(nu), fc_(fc) {
    if (!(delta > Real(0)) || !(eps > Real(0)) || !(nu > Real(0))) {
      throw std::invalid_argument("frame map: eps, delta and nu must be positive");
    }
    if (!(fc.a > Real(0)) || !(fc.b > Real(0)) || !(fc.c > Real(0))) {
      throw std::invalid_argument("frame map: frame constants must be positive");
    }
  }

  /// Canonical constants for the given nu.
  FrameMap(FrameMapKind kind, Real eps, Real delta, Real nu)
      : FrameMap(kind, eps, delta, nu, frame_parameters<Real>(nu)) {}

  FrameMapKind kind() const { return kind_; }

  Point<Real> forward(const Point<Real>& p) const {
    switch (kind_) {
      case FrameMapKind::Scaling: return {delta_ * (p.space - p.time), delta_ * p.time};
      case FrameMapKind::Moving: return {fc_.a * p.space + fc_.b * p.time, fc_.c * p.time};
      case FrameMapKind::Scaleout: return {p.space / delta_, p.time / delta_};
      case FrameMapKind::Composite:
        return {fc_.a * (p.space - Real(3) * p.time / Real(5)), fc_.a * p.time / Real(3)};
    }
    throw std::logic_error("frame map: unknown kind");
  }

  Point<Real> inverse(const Point<Real>& q) const {
    switch (kind_) {
      case FrameMapKind::Scaling: {
        const Real t = q.time / delta_;
        return {q.space / delta_ + t, t};
      }
      case FrameMapKind::Moving: {
        const Real s = q.time / fc_.c;
        return {(q.space - fc_.b * s) / fc_.a, s};
      }
      case FrameMapKind::Scaleout: return {q.space * delta_, q.time * delta_};
      case FrameMapKind::Composite: {
        const Real t = Real(3) * q.time / fc_.a;
        return {q.space / fc_.a + Real(3) * t / Real(5), t};
      }
    }
    throw std::logic_error("frame map: unknown kind");
  }

  /// Amplitude factor m with (source field) = m * (target field).
  Real amplitude() const {
    switch (kind_) {
      case FrameMapKind::Scaling: return eps_;
      case FrameMapKind::Moving: return Real(1);
      case FrameMapKind::Scaleout: return Real(1) / eps_;
      case FrameMapKind::Composite: return Real(1);
    }
    throw std::logic_error("frame map: unknown kind");
  }

 private:
  FrameMapKind kind_;
  Real eps_;
  Real delta_;
  Real nu_;
  FrameConstants<Real> fc_;
};

// ---------------------------------------------------------------------------
// Snapshot maps. Derived-frame grids inherit the node count and carry the
// physical period pushed through the spatial map.

inline Grid slow_grid(const Grid& physical, double delta) { return physical.scaled(delta); }

inline Grid ch_frame_grid(const Grid& physical, double nu) { return physical.scaled(frame_parameters(nu).a); }

namespace detail {

inline void require_period(const Grid& got, double expected, const char* where) {
  if (std::abs(got.length() - expected) > 1e-12 * expected) {
    throw std::invalid_argument(std::string(where) + ": target period " + std::to_string(got.length()) +
                                " does not match the mapped period " + std::to_string(expected));
  }
}

}  // namespace detail

/// U(Y) = u(Y/delta + t) / eps on the slow grid, i.e. the snapshot at S = delta t.
inline RealField boussinesq_to_slow(const RealField& u, double t, double eps, double delta, const Grid& slow) {
  detail::require_period(slow, delta * u.grid().length(), "boussinesq_to_slow");
  RealField out = resample(u, slow, t);
  out *= 1.0 / eps;
  return out;
}

inline RealField boussinesq_to_slow(const RealField& u, double t, double eps, double delta) {
  return boussinesq_to_slow(u, t, eps, delta, slow_grid(u.grid(), delta));
}

/// u(x) = eps U(delta (x - t)).
inline RealField slow_to_boussinesq(const RealField& U, double t, double eps, double delta, const Grid& physical) {
  detail::require_period(U.grid(), delta * physical.length(), "slow_to_boussinesq");
  RealField out = resample(U, physical, -delta * t);
  out *= eps;
  return out;
}

/// v(zeta) = w(zeta / a + 3t/5), the snapshot at tau = a t / 3.
inline RealField physical_to_ch_frame(const RealField& w, double t, double nu, const Grid& ch) {
  detail::require_period(ch, frame_parameters(nu).a * w.grid().length(), "physical_to_ch_frame");
  return resample(w, ch, 0.6 * t);
}

inline RealField physical_to_ch_frame(const RealField& w, double t, double nu) {
  return physical_to_ch_frame(w, t, nu, ch_frame_grid(w.grid(), nu));
}

/// w(x) = v(a (x - 3t/5)) with t = 3 tau / a.
inline RealField ch_frame_to_physical(const RealField& v, double tau, double nu, const Grid& physical) {
  const double a = frame_parameters(nu).a;
  detail::require_period(v.grid(), a * physical.length(), "ch_frame_to_physical");
  const double t = 3.0 * tau / a;
  return resample(v, physical, -0.6 * a * t);
}

/// Physical time t and frame time tau = a t / 3.
inline double ch_frame_time(double t, double nu) { return frame_parameters(nu).a * t / 3.0; }
inline double physical_time_from_ch(double tau, double nu) { return 3.0 * tau / frame_parameters(nu).a; }

}  // namespace gfch
