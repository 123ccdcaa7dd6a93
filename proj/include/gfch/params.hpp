#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include "gfch/log.hpp"

namespace gfch {

/// Power p, dispersion exponent nu, amplitude eps and long-wave parameter delta.
struct ModelParams {
  int p = 1;
  double nu = 1.0;
  double eps = 1.0;
  double delta = 1.0;

  void validate() const {
    if (p < 1) throw std::invalid_argument("params: p must be an integer >= 1, got " + std::to_string(p));
    if (!(nu > 0.0) || !std::isfinite(nu)) throw std::invalid_argument("params: nu must be positive");
    if (!(eps > 0.0 && eps <= 1.0)) throw std::invalid_argument("params: eps must lie in (0, 1]");
    if (!(delta > 0.0 && delta <= 1.0)) throw std::invalid_argument("params: delta must lie in (0, 1]");
    if (nu < 1.0) {
      log::warn("nu = " + std::to_string(nu) + " < 1 accepted for exploratory use only");
    }
  }

  double eps_p() const { return std::pow(eps, p); }
  double delta_2nu() const { return std::pow(delta, 2.0 * nu); }
};

/// Moving-frame constants X = aY + bS, T = cS.
template <class Real = double>
struct FrameConstants {
  Real a;
  Real b;
  Real c;
};

/// The canonical choice a = (2/sqrt 5)^(1/nu), b = 2a/5, c = a/3 that turns
/// the moving-frame model into CH normal form.
template <class Real = double>
FrameConstants<Real> frame_parameters(const Real& nu) {
  using std::pow;
  using std::sqrt;
  if (!(nu > Real(0))) throw std::invalid_argument("frame_parameters: nu must be positive");
  const Real a = pow(Real(2) / sqrt(Real(5)), Real(1) / nu);
  return {a, Real(2) * a / Real(5), a / Real(3)};
}

/// Coefficients of the moving-frame equation after dividing through by c:
///   V_T + advection V_X + nonlinear (V^(p+1))_X + dispersive (-D^2)^nu V_T
///   - bracket [ mix (-D^2)^nu (V^p V_X) - V^p (-D^2)^nu V_X ] = 0
/// (eps, delta powers excluded).
template <class Real = double>
struct MovingFrameCoefficients {
  Real advection;   // b / c
  Real nonlinear;   // a / (2c)
  Real dispersive;  // a^(2nu+1) / (2b)
  Real bracket;     // (p+1) a^(2nu+1) / (8c)
  Real mix;         // 3 - 2a/b
};

template <class Real = double>
MovingFrameCoefficients<Real> moving_frame_coefficients(const FrameConstants<Real>& fc, int p, const Real& nu) {
  using std::pow;
  const Real a_pow = pow(fc.a, Real(2) * nu + Real(1));
  return {fc.b / fc.c, fc.a / (Real(2) * fc.c), a_pow / (Real(2) * fc.b),
          Real(p + 1) * a_pow / (Real(8) * fc.c), Real(3) - Real(2) * fc.a / fc.b};
}

}  // namespace gfch
