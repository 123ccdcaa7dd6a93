#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "gfch/field.hpp"
#include "gfch/params.hpp"
#include "gfch/spectral.hpp"

namespace gfch {

// ---------------------------------------------------------------------------
// Model identifiers

/// Coordinate frame a model is posed in.
enum class Frame {
  Physical,  // (x, t)
  Slow,      // (Y, S), Y = delta (x - t), S = delta t
  Moving,    // (X, T), X = a Y + b S, T = c S
  ChFrame,   // (zeta, tau)
};

enum class ModelId {
  Boussinesq,
  SlowFrameUnidirectional,
  MovingFrameGeneric,
  GfCH,
  GfCHOriginal,
  GCH,
  MCH,
  ClassicalCH,
  GfBBM,
  GfBBMOriginal,
  GfKdV,
  GfKdVOriginal,
};

struct ModelInfo {
  ModelId id;
  std::string_view name;
  Frame frame;
};

inline constexpr std::array<ModelInfo, 12> kModels{{
    {ModelId::Boussinesq, "Boussinesq", Frame::Physical},
    {ModelId::SlowFrameUnidirectional, "SlowFrameUnidirectional", Frame::Slow},
    {ModelId::MovingFrameGeneric, "MovingFrameGeneric", Frame::Moving},
    {ModelId::GfCH, "GfCH", Frame::ChFrame},
    {ModelId::GfCHOriginal, "GfCH-original", Frame::Physical},
    {ModelId::GCH, "GCH", Frame::ChFrame},
    {ModelId::MCH, "MCH", Frame::ChFrame},
    {ModelId::ClassicalCH, "ClassicalCH", Frame::ChFrame},
    {ModelId::GfBBM, "GfBBM", Frame::ChFrame},
    {ModelId::GfBBMOriginal, "GfBBM-original", Frame::Physical},
    {ModelId::GfKdV, "GfKdV", Frame::Slow},
    {ModelId::GfKdVOriginal, "GfKdV-original", Frame::Physical},
}};

inline const ModelInfo& model_info(ModelId id) {
  for (const auto& m : kModels) {
    if (m.id == id) return m;
  }
  throw std::logic_error("unknown ModelId");
}

inline std::string_view model_name(ModelId id) { return model_info(id).name; }
inline Frame model_frame(ModelId id) { return model_info(id).frame; }

inline std::string valid_model_names() {
  std::string out;
  for (const auto& m : kModels) {
    if (!out.empty()) out += ", ";
    out += m.name;
  }
  return out;
}

inline std::optional<ModelId> parse_model(std::string_view name) {
  for (const auto& m : kModels) {
    if (m.name == name) return m.id;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Evolution form of the unidirectional models
//
// Every scalar model is written as  v_t = L v + N(v)  with L a Fourier
// multiplier (the exact linear part) and N the remaining nonlinear terms.
// Mixed terms (1 + c|xi|^(2nu)) v_t are inverted mode by mode; that factor is
// bounded below by one.

/// Linear symbol lambda(xi) and nonlinear part of one scalar model.
struct ScalarModelParts {
  std::function<Complex(double)> symbol;
  std::function<Spectrum(const Spectrum&)> nonlinear;
};

namespace detail {

inline Complex ixi(double xi) { return {0.0, xi}; }

/// Linear part lambda(xi) applied to a spectrum. Odd symbols have no real
/// action at the Nyquist slot, so only the real part of lambda is used there.
template <class Symbol>
Spectrum apply_linear(const Spectrum& s, Symbol&& symbol) {
  Spectrum out(s.grid());
  const Grid& g = s.grid();
  for (std::size_t j = 0; j < s.size(); ++j) {
    Complex lam = symbol(g.wavenumber(j));
    if (g.is_nyquist(j)) lam = Complex(lam.real(), 0.0);
    out[j] = lam * s[j];
  }
  return out;
}

/// Term-wise spectral builder: sum_i c_i(xi) * s_i, then divide by d(xi).
class SpectralSum {
 public:
  explicit SpectralSum(const Grid& g) : acc_(g) {}

  template <class Coef>
  SpectralSum& add(const Spectrum& s, Coef&& coef) {
    const Grid& g = acc_.grid();
    for (std::size_t j = 0; j < s.size(); ++j) acc_[j] += Complex(coef(g.wavenumber(j))) * s[j];
    return *this;
  }

  template <class Den>
  Spectrum divide(Den&& den) {
    const Grid& g = acc_.grid();
    for (std::size_t j = 0; j < acc_.size(); ++j) acc_[j] /= den(g.wavenumber(j));
    acc_[g.nyquist_slot()] = Complex(acc_[g.nyquist_slot()].real(), 0.0);
    return std::move(acc_);
  }

  Spectrum result() { return std::move(acc_); }

 private:
  Spectrum acc_;
};

inline Spectrum assemble(const Spectrum& v, const ScalarModelParts& parts) {
  Spectrum out = apply_linear(v, parts.symbol);
  out += parts.nonlinear(v);
  return out;
}

inline RealField evaluate(const RealField& v, const ScalarModelParts& parts, const char* where) {
  require_finite(v, where);
  return to_physical(assemble(to_spectrum(v), parts));
}

}  // namespace detail

// --- generalized fractional CH, (zeta, tau) frame --------------------------

inline ScalarModelParts gfch_parts(const ModelParams& params) {
  const int p = params.p;
  const double nu = params.nu;
  auto den = [nu](double xi) { return 1.0 + fractional_symbol(xi, nu); };
  ScalarModelParts parts;
  parts.symbol = [den](double xi) { return -1.2 * detail::ixi(xi) / den(xi); };
  parts.nonlinear = [p, nu, den](const Spectrum& v) {
    const Spectrum vz = derivative(v, 1);
    const Spectrum power = dealiased_power(v, p + 1);
    const Spectrum vp_vz = dealiased_power_times(v, p, vz);
    const Spectrum vp_lvz = dealiased_power_times(v, p, fractional_laplacian(vz, nu));
    const double k = 3.0 * (p + 1) / 10.0;
    return detail::SpectralSum(v.grid())
        .add(power, [](double xi) { return -1.5 * detail::ixi(xi); })
        .add(vp_vz, [k, nu](double xi) { return -2.0 * k * fractional_symbol(xi, nu); })
        .add(vp_lvz, [k](double) { return -k; })
        .divide(den);
  };
  return parts;
}

/// v_tau for v_tau + 6/5 v_z + 3/2 (v^(p+1))_z + (-D^2)^nu v_tau
///   = -3(p+1)/10 [2 (-D^2)^nu (v^p v_z) + v^p (-D^2)^nu v_z].
inline RealField gfch_rhs(const RealField& v, const ModelParams& params) {
  return detail::evaluate(v, gfch_parts(params), "gfch_rhs");
}

// --- classical CH ------------------------------------------------------------

inline ScalarModelParts classical_ch_parts(double kappa1, double kappa2) {
  auto den = [](double xi) { return 1.0 + xi * xi; };
  ScalarModelParts parts;
  parts.symbol = [kappa1, den](double xi) { return -kappa1 * detail::ixi(xi) / den(xi); };
  parts.nonlinear = [kappa2, den](const Spectrum& v) {
    const Spectrum v1 = derivative(v, 1);
    const Spectrum v2 = derivative(v, 2);
    const Spectrum v3 = derivative(v, 3);
    const Spectrum* a[] = {&v, &v1};
    const Spectrum* b[] = {&v1, &v2};
    const Spectrum* c[] = {&v, &v3};
    const int ones[] = {1, 1};
    const Spectrum vv1 = dealiased_monomial(a, ones);
    const Spectrum v1v2 = dealiased_monomial(b, ones);
    const Spectrum vv3 = dealiased_monomial(c, ones);
    return detail::SpectralSum(v.grid())
        .add(vv1, [](double) { return -3.0; })
        .add(v1v2, [kappa2](double) { return 2.0 * kappa2; })
        .add(vv3, [kappa2](double) { return kappa2; })
        .divide(den);
  };
  return parts;
}

/// v_tau for v_tau + k1 v_z + 3 v v_z - v_zz tau = k2 (2 v_z v_zz + v v_zzz).
inline RealField classical_ch_rhs(const RealField& v, double kappa1, double kappa2) {
  return detail::evaluate(v, classical_ch_parts(kappa1, kappa2), "classical_ch_rhs");
}

// --- generalized CH (nu = 1), written with ordinary derivatives ---------------

inline ScalarModelParts gch_parts(int p) {
  if (p < 1) throw std::invalid_argument("gch: p must be >= 1");
  auto den = [](double xi) { return 1.0 + xi * xi; };
  ScalarModelParts parts;
  parts.symbol = [den](double xi) { return -1.2 * detail::ixi(xi) / den(xi); };
  parts.nonlinear = [p, den](const Spectrum& v) {
    const Spectrum vz = derivative(v, 1);
    const Spectrum vzzz = derivative(v, 3);
    const Spectrum power = dealiased_power(v, p + 1);
    const Spectrum vp_vz = dealiased_power_times(v, p, vz);
    const Spectrum vp_vzzz = dealiased_power_times(v, p, vzzz);
    const double k = 3.0 * (p + 1) / 10.0;
    return detail::SpectralSum(v.grid())
        .add(power, [](double xi) { return -1.5 * detail::ixi(xi); })
        .add(vp_vz, [k](double xi) { return 2.0 * k * derivative_symbol(xi, 2); })
        .add(vp_vzzz, [k](double) { return k; })
        .divide(den);
  };
  return parts;
}

inline RealField gch_rhs(const RealField& v, int p) { return detail::evaluate(v, gch_parts(p), "gch_rhs"); }

// --- modified CH (p = 2) -------------------------------------------------------

inline ScalarModelParts mch_parts() {
  auto den = [](double xi) { return 1.0 + xi * xi; };
  ScalarModelParts parts;
  parts.symbol = [den](double xi) { return -1.2 * detail::ixi(xi) / den(xi); };
  parts.nonlinear = [den](const Spectrum& v) {
    const Spectrum vz = derivative(v, 1);
    const Spectrum vzzz = derivative(v, 3);
    const Spectrum v2_vz = dealiased_power_times(v, 2, vz);
    const Spectrum v2_vzzz = dealiased_power_times(v, 2, vzzz);
    return detail::SpectralSum(v.grid())
        .add(v2_vz, [](double xi) { return -4.5 + 1.8 * derivative_symbol(xi, 2); })
        .add(v2_vzzz, [](double) { return 0.9; })
        .divide(den);
  };
  return parts;
}

/// v_tau for v_tau + 6/5 v_z + 9/2 v^2 v_z - v_zz tau = 9/10 [2 (v^2 v_z)_zz + v^2 v_zzz].
inline RealField mch_rhs(const RealField& v) { return detail::evaluate(v, mch_parts(), "mch_rhs"); }

// --- generalized fractional BBM ------------------------------------------------

inline constexpr double kDefaultBbmKappa1 = 6.0 / 5.0;

inline ScalarModelParts gfbbm_parts(const ModelParams& params, double kappa1) {
  const int p = params.p;
  const double nu = params.nu;
  auto den = [nu](double xi) { return 1.0 + fractional_symbol(xi, nu); };
  ScalarModelParts parts;
  parts.symbol = [kappa1, den](double xi) { return -kappa1 * detail::ixi(xi) / den(xi); };
  parts.nonlinear = [p, den](const Spectrum& v) {
    return detail::SpectralSum(v.grid())
        .add(dealiased_power(v, p + 1), [](double xi) { return -1.5 * detail::ixi(xi); })
        .divide(den);
  };
  return parts;
}

inline RealField gfbbm_rhs(const RealField& v, const ModelParams& params, double kappa1 = kDefaultBbmKappa1) {
  return detail::evaluate(v, gfbbm_parts(params, kappa1), "gfbbm_rhs");
}

// --- slow frame (Y, S): generalized fractional KdV and the full unidirectional model

inline ScalarModelParts gfkdv_parts(const ModelParams& params) {
  const int p = params.p;
  const double nu = params.nu;
  const double disp = 0.5 * params.delta_2nu();
  const double nl = 0.5 * params.eps_p();
  ScalarModelParts parts;
  parts.symbol = [disp, nu](double xi) { return disp * fractional_symbol(xi, nu) * detail::ixi(xi); };
  parts.nonlinear = [p, nl](const Spectrum& u) {
    return detail::SpectralSum(u.grid())
        .add(dealiased_power(u, p + 1), [nl](double xi) { return -nl * detail::ixi(xi); })
        .result();
  };
  return parts;
}

/// U_S = -(eps^p/2) (U^(p+1))_Y + (delta^(2nu)/2) (-D^2)^nu U_Y.
inline RealField gfkdv_rhs(const RealField& u, const ModelParams& params) {
  return detail::evaluate(u, gfkdv_parts(params), "gfkdv_rhs");
}

inline ScalarModelParts slow_frame_parts(const ModelParams& params) {
  const int p = params.p;
  const double nu = params.nu;
  const double mixed = params.eps_p() * params.delta_2nu() * (p + 1) / 8.0;
  ScalarModelParts parts = gfkdv_parts(params);
  auto kdv_nonlinear = parts.nonlinear;
  parts.nonlinear = [kdv_nonlinear, p, nu, mixed](const Spectrum& u) {
    const Spectrum uy = derivative(u, 1);
    const Spectrum up_uy = dealiased_power_times(u, p, uy);
    const Spectrum up_luy = dealiased_power_times(u, p, fractional_laplacian(uy, nu));
    Spectrum out = kdv_nonlinear(u);
    out += detail::SpectralSum(u.grid())
               .add(up_uy, [mixed, nu](double xi) { return 3.0 * mixed * fractional_symbol(xi, nu); })
               .add(up_luy, [mixed](double) { return -mixed; })
               .result();
    return out;
  };
  return parts;
}

/// U_S from the two-parameter unidirectional model in the slow frame,
/// keeping the eps^p delta^(2nu) bracket.
inline RealField slow_frame_rhs(const RealField& u, const ModelParams& params) {
  return detail::evaluate(u, slow_frame_parts(params), "slow_frame_rhs");
}

// --- moving frame (X, T) with free (a, b, c) ----------------------------------

inline ScalarModelParts moving_frame_parts(const ModelParams& params, const FrameConstants<double>& fc) {
  const int p = params.p;
  const double nu = params.nu;
  const auto mc = moving_frame_coefficients(fc, p, nu);
  const double ep = params.eps_p();
  const double d2 = params.delta_2nu();
  auto den = [nu, d2, mc](double xi) { return 1.0 + d2 * mc.dispersive * fractional_symbol(xi, nu); };
  ScalarModelParts parts;
  parts.symbol = [mc, den](double xi) { return -mc.advection * detail::ixi(xi) / den(xi); };
  parts.nonlinear = [p, nu, ep, d2, mc, den](const Spectrum& v) {
    const Spectrum vx = derivative(v, 1);
    const Spectrum power = dealiased_power(v, p + 1);
    const Spectrum vp_vx = dealiased_power_times(v, p, vx);
    const Spectrum vp_lvx = dealiased_power_times(v, p, fractional_laplacian(vx, nu));
    const double br = ep * d2 * mc.bracket;
    return detail::SpectralSum(v.grid())
        .add(power, [ep, mc](double xi) { return -ep * mc.nonlinear * detail::ixi(xi); })
        .add(vp_vx, [br, mc, nu](double xi) { return br * mc.mix * fractional_symbol(xi, nu); })
        .add(vp_lvx, [br](double) { return -br; })
        .divide(den);
  };
  return parts;
}

/// V_T from the moving-frame model after the BBM-type exchange of
/// (-D^2)^nu V_X for (-D^2)^nu V_T, for arbitrary positive (a, b, c).
inline RealField moving_frame_rhs(const RealField& v, const ModelParams& params, const FrameConstants<double>& fc) {
  return detail::evaluate(v, moving_frame_parts(params, fc), "moving_frame_rhs");
}

// --- original-frame forms (x, t) ------------------------------------------------

inline ScalarModelParts gfch_original_parts(const ModelParams& params) {
  const int p = params.p;
  const double nu = params.nu;
  auto den = [nu](double xi) { return 1.0 + 1.25 * fractional_symbol(xi, nu); };
  ScalarModelParts parts;
  parts.symbol = [nu, den](double xi) {
    return -detail::ixi(xi) * (1.0 + 0.75 * fractional_symbol(xi, nu)) / den(xi);
  };
  parts.nonlinear = [p, nu, den](const Spectrum& w) {
    const Spectrum wx = derivative(w, 1);
    const Spectrum power = dealiased_power(w, p + 1);
    const Spectrum wp_wx = dealiased_power_times(w, p, wx);
    const Spectrum wp_lwx = dealiased_power_times(w, p, fractional_laplacian(wx, nu));
    const double k = (p + 1) / 8.0;
    return detail::SpectralSum(w.grid())
        .add(power, [](double xi) { return -0.5 * detail::ixi(xi); })
        .add(wp_wx, [k, nu](double xi) { return -2.0 * k * fractional_symbol(xi, nu); })
        .add(wp_lwx, [k](double) { return -k; })
        .divide(den);
  };
  return parts;
}

inline RealField gfch_original_rhs(const RealField& w, const ModelParams& params) {
  return detail::evaluate(w, gfch_original_parts(params), "gfch_original_rhs");
}

inline ScalarModelParts gfbbm_original_parts(const ModelParams& params) {
  const int p = params.p;
  const double nu = params.nu;
  auto den = [nu](double xi) { return 1.0 + 1.25 * fractional_symbol(xi, nu); };
  ScalarModelParts parts;
  parts.symbol = [nu, den](double xi) {
    return -detail::ixi(xi) * (1.0 + 0.75 * fractional_symbol(xi, nu)) / den(xi);
  };
  parts.nonlinear = [p, den](const Spectrum& w) {
    return detail::SpectralSum(w.grid())
        .add(dealiased_power(w, p + 1), [](double xi) { return -0.5 * detail::ixi(xi); })
        .divide(den);
  };
  return parts;
}

inline RealField gfbbm_original_rhs(const RealField& w, const ModelParams& params) {
  return detail::evaluate(w, gfbbm_original_parts(params), "gfbbm_original_rhs");
}

inline ScalarModelParts gfkdv_original_parts(const ModelParams& params) {
  const int p = params.p;
  const double nu = params.nu;
  ScalarModelParts parts;
  parts.symbol = [nu](double xi) { return -detail::ixi(xi) * (1.0 - 0.5 * fractional_symbol(xi, nu)); };
  parts.nonlinear = [p](const Spectrum& w) {
    return detail::SpectralSum(w.grid())
        .add(dealiased_power(w, p + 1), [](double xi) { return -0.5 * detail::ixi(xi); })
        .result();
  };
  return parts;
}

inline RealField gfkdv_original_rhs(const RealField& w, const ModelParams& params) {
  return detail::evaluate(w, gfkdv_original_parts(params), "gfkdv_original_rhs");
}

// ---------------------------------------------------------------------------
// Fractional improved Boussinesq equation, u_tt - u_xx + (-D^2)^nu u_tt = (u^(p+1))_xx

struct BoussinesqState {
  RealField u;
  RealField u_t;

  BoussinesqState(RealField u0, RealField ut0) : u(std::move(u0)), u_t(std::move(ut0)) {
    u.check_same_grid(u_t);
  }

  const Grid& grid() const { return u.grid(); }
  bool all_finite() const { return u.all_finite() && u_t.all_finite(); }

  BoussinesqState& operator+=(const BoussinesqState& o) {
    u += o.u;
    u_t += o.u_t;
    return *this;
  }
  BoussinesqState& operator*=(double s) {
    u *= s;
    u_t *= s;
    return *this;
  }
  BoussinesqState& axpy(double s, const BoussinesqState& o) {
    u.axpy(s, o.u);
    u_t.axpy(s, o.u_t);
    return *this;
  }
  friend BoussinesqState operator+(BoussinesqState a, const BoussinesqState& b) { return a += b; }
  friend BoussinesqState operator*(double s, BoussinesqState a) { return a *= s; }
};

/// Squared linear frequency xi^2 / (1 + |xi|^(2nu)).
inline double boussinesq_omega2(double xi, double nu) { return xi * xi / (1.0 + fractional_symbol(xi, nu)); }

/// Spectrum of u_tt without the linear restoring term: -xi^2 F(u^(p+1)) / (1 + |xi|^(2nu)).
inline Spectrum boussinesq_forcing(const Spectrum& u, const ModelParams& params) {
  const double nu = params.nu;
  return detail::SpectralSum(u.grid())
      .add(dealiased_power(u, params.p + 1), [nu](double xi) { return -boussinesq_omega2(xi, nu); })
      .result();
}

/// (u_t, u_tt), with u_tt = F^-1[ -xi^2 (u^ + (u^(p+1))^) / (1 + |xi|^(2nu)) ].
inline BoussinesqState boussinesq_rhs(const BoussinesqState& s, const ModelParams& params) {
  if (!s.all_finite()) throw std::domain_error("boussinesq_rhs: non-finite state");
  const double nu = params.nu;
  const Spectrum u = to_spectrum(s.u);
  Spectrum utt = apply_symbol(u, [nu](double xi) { return -boussinesq_omega2(xi, nu); }, Nyquist::Keep);
  utt += boussinesq_forcing(u, params);
  return BoussinesqState(s.u_t, to_physical(utt));
}

/// Linear dispersion relation omega(k) = k / sqrt(1 + |k|^(2nu)).
inline double boussinesq_frequency(double k, double nu) { return k / std::sqrt(1.0 + fractional_symbol(k, nu)); }

}  // namespace gfch
