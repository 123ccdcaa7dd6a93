#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "gfch/models.hpp"
#include "gfch/spectral.hpp"

namespace gfch {

/// Numerical coefficients of the closed-form hierarchy solutions. The
/// defaults are the correct ones; the fields exist so that a corrupted value
/// can be injected and the residual check shown to catch it.
struct HierarchyCoefficients {
  double u1s = -0.5;          // U1S = u1s (U0^(p+1))_Y
  double u2s = 0.5;           // U2S = u2s L U0_Y
  double u3ss_power = -0.25;  // U3SS = u3ss_power L (U0^(p+1))_YY
  double u3ss_mixed = -0.25;  //      + u3ss_mixed (p+1) [U0^p L U0_Y]_Y
  double u3s_u2 = -0.5;       // U3S = u3s_u2 (p+1) (U0^p U2)_Y
  double u3s_u1 = 0.5;        //     + u3s_u1 L U1_Y
  double u3s_power = 0.375;   //     + u3s_power L (U0^(p+1))_Y
  double u3s_mixed = -0.125;  //     + u3s_mixed (p+1) U0^p L U0_Y
};

namespace detail {

inline Spectrum hy_power_y(const Spectrum& u0, int p) { return derivative(dealiased_power(u0, p + 1), 1); }

// U0^p L U0_Y
inline Spectrum hy_mixed(const Spectrum& u0, int p, double nu) {
  return dealiased_power_times(u0, p, fractional_laplacian(derivative(u0, 1), nu));
}

inline void require_profile(const RealField& u0, const char* where) { require_finite(u0, where); }

}  // namespace detail

/// U1S = -(1/2) (U0^(p+1))_Y
inline RealField u1s_of(const RealField& u0, int p, const HierarchyCoefficients& k = {}) {
  detail::require_profile(u0, "u1s_of");
  Spectrum s = detail::hy_power_y(to_spectrum(u0), p);
  s *= k.u1s;
  return to_physical(s);
}

/// U2S = (1/2) (-D^2)^nu U0_Y
inline RealField u2s_of(const RealField& u0, double nu, const HierarchyCoefficients& k = {}) {
  detail::require_profile(u0, "u2s_of");
  Spectrum s = fractional_laplacian(derivative(to_spectrum(u0), 1), nu);
  s *= k.u2s;
  return to_physical(s);
}

/// U3SS = -(1/4) L (U0^(p+1))_YY - (1/4)(p+1) [U0^p L U0_Y]_Y
inline RealField u3ss_of(const RealField& u0, int p, double nu, const HierarchyCoefficients& k = {}) {
  detail::require_profile(u0, "u3ss_of");
  const Spectrum s0 = to_spectrum(u0);
  Spectrum out = fractional_laplacian(derivative(detail::hy_power_y(s0, p), 1), nu);
  out *= k.u3ss_power;
  out.axpy(k.u3ss_mixed * (p + 1), derivative(detail::hy_mixed(s0, p, nu), 1));
  return to_physical(out);
}

/// U3S = -(p+1)/2 (U0^p U2)_Y + (1/2) L U1_Y + (3/8) L (U0^(p+1))_Y - (p+1)/8 U0^p L U0_Y
inline RealField u3s_of(const RealField& u0, const RealField& u1, const RealField& u2, int p, double nu,
                        const HierarchyCoefficients& k = {}) {
  detail::require_profile(u0, "u3s_of");
  u0.check_same_grid(u1);
  u0.check_same_grid(u2);
  const Spectrum s0 = to_spectrum(u0);
  Spectrum out = derivative(dealiased_power_times(s0, p, to_spectrum(u2)), 1);
  out *= k.u3s_u2 * (p + 1);
  out.axpy(k.u3s_u1, fractional_laplacian(derivative(to_spectrum(u1), 1), nu));
  out.axpy(k.u3s_power, fractional_laplacian(detail::hy_power_y(s0, p), nu));
  out.axpy(k.u3s_mixed * (p + 1), detail::hy_mixed(s0, p, nu));
  return to_physical(out);
}

/// Hierarchy fields at one slow time S. U1 = S U1S and U2 = S U2S (the
/// Y-only integration functions are taken to be zero); U3S is evaluated
/// with those U1, U2.
struct HierarchyBundle {
  RealField u0;
  RealField u1s;
  RealField u2s;
  RealField u3ss;
  RealField u3s;
  double s = 1.0;
  ModelParams params;
  HierarchyCoefficients coeffs;

  RealField u1() const { return s * u1s; }
  RealField u2() const { return s * u2s; }
};

inline HierarchyBundle make_hierarchy(const RealField& u0, const ModelParams& params, double s = 1.0,
                                      const HierarchyCoefficients& k = {}) {
  params.validate();
  const int p = params.p;
  const double nu = params.nu;
  RealField u1s = u1s_of(u0, p, k);
  RealField u2s = u2s_of(u0, nu, k);
  RealField u3ss = u3ss_of(u0, p, nu, k);
  RealField u3s = u3s_of(u0, s * u1s, s * u2s, p, nu, k);
  return {u0, std::move(u1s), std::move(u2s), std::move(u3ss), std::move(u3s), s, params, k};
}

/// U = U0 + eps^p U1 + delta^(2nu) U2 at the bundle's S.
inline RealField assembled_u(const HierarchyBundle& b, double eps_p, double delta_2nu) {
  RealField u = b.u0;
  u.axpy(eps_p * b.s, b.u1s).axpy(delta_2nu * b.s, b.u2s);
  return u;
}

/// U_S = eps^p U1S + delta^(2nu) U2S + eps^p delta^(2nu) U3S, truncated.
inline RealField assembled_us(const HierarchyBundle& b, double eps_p, double delta_2nu) {
  RealField us(b.u0.grid());
  us.axpy(eps_p, b.u1s).axpy(delta_2nu, b.u2s).axpy(eps_p * delta_2nu, b.u3s);
  return us;
}

inline RealField assembled_us(const RealField& u0, const ModelParams& params, double s = 1.0) {
  const HierarchyBundle b = make_hierarchy(u0, params, s);
  return assembled_us(b, params.eps_p(), params.delta_2nu());
}

/// Max-norm residuals of the order-by-order equations with the closed forms
/// substituted and S-derivatives taken analytically (U1SS = U2SS = U3SSS = 0).
struct HierarchyResiduals {
  double order_one = 0.0;      // (D_S - 2 D_Y) U0S
  double order_eps = 0.0;      // (D_S - 2 D_Y) U1S - (U0^(p+1))_YY
  double order_delta = 0.0;    // (D_S - 2 D_Y) U2S + L U0_YY
  double order_mixed = 0.0;    // (D_S - 2 D_Y) U3S + L (U1_YY - 2 U1_SY) - (p+1)(U0^p U2)_YY
  double order_mixed_s = 0.0;  // D_S of the previous line

  double max() const { return std::max({order_one, order_eps, order_delta, order_mixed, order_mixed_s}); }
};

inline HierarchyResiduals hierarchy_residuals(const HierarchyBundle& b) {
  const int p = b.params.p;
  const double nu = b.params.nu;
  const double s = b.s;
  const Spectrum u0 = to_spectrum(b.u0);
  const Spectrum u1s = to_spectrum(b.u1s);
  const Spectrum u2s = to_spectrum(b.u2s);
  const Spectrum u3s = to_spectrum(b.u3s);
  const Spectrum u3ss = to_spectrum(b.u3ss);
  auto dy = [](const Spectrum& f, int k) { return derivative(f, k); };
  auto lap = [nu](const Spectrum& f) { return fractional_laplacian(f, nu); };
  auto norm = [](const Spectrum& f) { return max_norm(to_physical(f)); };

  HierarchyResiduals r;
  // U0S = 0 identically: both terms vanish.
  r.order_one = 0.0;

  Spectrum b_res = dy(u1s, 1);
  b_res *= -2.0;
  b_res.axpy(-1.0, dy(dealiased_power(u0, p + 1), 2));
  r.order_eps = norm(b_res);

  Spectrum d_res = dy(u2s, 1);
  d_res *= -2.0;
  d_res += lap(dy(u0, 2));
  r.order_delta = norm(d_res);

  // D_S U3S = U3SS; U1 = S U1S, U1_S = U1S, U2 = S U2S.
  const Spectrum u0p_u2s_yy = dy(dealiased_power_times(u0, p, u2s), 2);
  Spectrum f_res = u3ss;
  f_res.axpy(-2.0, dy(u3s, 1));
  f_res.axpy(s, lap(dy(u1s, 2)));
  f_res.axpy(-2.0, lap(dy(u1s, 1)));
  f_res.axpy(-(p + 1) * s, u0p_u2s_yy);
  r.order_mixed = norm(f_res);

  Spectrum fs_res = dy(u3ss, 1);
  fs_res *= -2.0;
  fs_res += lap(dy(u1s, 2));
  fs_res.axpy(-(p + 1), u0p_u2s_yy);
  r.order_mixed_s = norm(fs_res);
  return r;
}

/// Periodized Gaussian exp(-(Y - Y0)^2 / sigma^2) summed over neighbouring images.
inline RealField gaussian_profile(const Grid& g, double center, double sigma, double amplitude = 1.0) {
  if (!(sigma > 0.0)) throw std::invalid_argument("gaussian_profile: sigma must be positive");
  const double l = g.length();
  const int images = 1 + static_cast<int>(std::ceil(8.0 * sigma / l));
  return RealField::from_function(g, [&](double y) {
    double v = 0.0;
    for (int m = -images; m <= images; ++m) {
      const double z = (y - center + m * l) / sigma;
      v += std::exp(-z * z);
    }
    return amplitude * v;
  });
}

}  // namespace gfch
