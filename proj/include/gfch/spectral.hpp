#pragma once

#include <atomic>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "gfch/field.hpp"
#include "gfch/log.hpp"

namespace gfch {

/// What to do with the unpaired mode k = -n/2 when applying a multiplier.
/// Odd multipliers (i xi, (i xi)^3) have no real-valued action there.
enum class Nyquist { Keep, Zero };

template <class Symbol>
Spectrum apply_symbol(Spectrum s, Symbol&& symbol, Nyquist policy) {
  const Grid& g = s.grid();
  for (std::size_t j = 0; j < s.size(); ++j) {
    if (g.is_nyquist(j) && policy == Nyquist::Zero) {
      s[j] = Complex{};
    } else {
      s[j] *= Complex(symbol(g.wavenumber(j)));
    }
  }
  return s;
}

template <class Symbol>
RealField apply_symbol(const RealField& f, Symbol&& symbol, Nyquist policy) {
  return to_physical(apply_symbol(to_spectrum(f), std::forward<Symbol>(symbol), policy));
}

/// |xi|^(2 nu); zero at xi = 0 for every nu > 0.
inline double fractional_symbol(double xi, double nu) { return std::pow(std::abs(xi), 2.0 * nu); }

namespace detail {

inline void check_order(double nu) {
  if (!(nu > 0.0) || !std::isfinite(nu)) {
    throw std::invalid_argument("fractional order nu must be positive and finite, got " + std::to_string(nu));
  }
}

inline void warn_if_below_one(double nu) {
  static std::atomic<bool> warned{false};
  if (nu < 1.0 && !warned.exchange(true)) {
    log::warn("nu = " + std::to_string(nu) +
              " < 1: outside the range where the Cauchy problem is known to be well posed");
  }
}

}  // namespace detail

/// (-D^2)^nu realized as the Fourier multiplier |xi|^(2 nu).
inline Spectrum fractional_laplacian(const Spectrum& s, double nu) {
  detail::check_order(nu);
  return apply_symbol(s, [nu](double xi) { return fractional_symbol(xi, nu); }, Nyquist::Keep);
}

inline RealField fractional_laplacian(const RealField& f, double nu) {
  detail::check_order(nu);
  detail::warn_if_below_one(nu);
  require_finite(f, "fractional_laplacian");
  return to_physical(fractional_laplacian(to_spectrum(f), nu));
}

/// Multiplier (i xi)^order for order 1..3.
inline Complex derivative_symbol(double xi, int order) {
  switch (order) {
    case 1: return {0.0, xi};
    case 2: return {-xi * xi, 0.0};
    case 3: return {0.0, -xi * xi * xi};
    default: throw std::invalid_argument("derivative: unsupported order " + std::to_string(order));
  }
}

inline Spectrum derivative(const Spectrum& s, int order) {
  if (order < 1 || order > 3) {
    throw std::invalid_argument("derivative: unsupported order " + std::to_string(order));
  }
  return apply_symbol(s, [order](double xi) { return derivative_symbol(xi, order); },
                      order % 2 == 1 ? Nyquist::Zero : Nyquist::Keep);
}

inline RealField derivative(const RealField& f, int order) {
  if (order < 1 || order > 3) {
    throw std::invalid_argument("derivative: unsupported order " + std::to_string(order));
  }
  require_finite(f, "derivative");
  return to_physical(derivative(to_spectrum(f), order));
}

// ---------------------------------------------------------------------------
// Dealiased products

inline double ipow(double x, int q) {
  double r = 1.0;
  for (int i = 0; i < q; ++i) r *= x;
  return r;
}

/// Smallest even M >= ratio * n, where the ratio defaults to
/// max(3/2, (factors + 1)/2). That ratio makes the truncated product of
/// `factors` band-limited fields exact.
inline std::size_t padded_size(std::size_t n, std::size_t factors, double ratio = 0.0) {
  const double minimal = std::max(1.5, 0.5 * static_cast<double>(factors + 1));
  if (ratio == 0.0) ratio = minimal;
  if (ratio < minimal) {
    throw std::invalid_argument("padding ratio " + std::to_string(ratio) + " below the alias-free minimum " +
                                std::to_string(minimal));
  }
  auto m = static_cast<std::size_t>(std::ceil(ratio * static_cast<double>(n) - 1e-9));
  if (m % 2 != 0) ++m;
  return m;
}

namespace detail {

// Zero-pad a spectrum to m slots. The Nyquist coefficient is split evenly
// between +n/2 and -n/2 so the padded interpolant equals the real one.
inline std::vector<Complex> pad(const Spectrum& s, std::size_t m) {
  const std::size_t n = s.size();
  std::vector<Complex> out(m, Complex{});
  for (std::size_t j = 0; j < n / 2; ++j) out[j] = s[j];
  for (std::size_t j = n / 2 + 1; j < n; ++j) out[m - (n - j)] = s[j];
  const Complex nyq = s[n / 2];
  out[n / 2] += 0.5 * nyq;
  out[m - n / 2] += 0.5 * nyq;
  return out;
}

// Keep modes |k| < n/2 of an m-slot spectrum; the target Nyquist slot stays zero.
inline Spectrum truncate(const std::vector<Complex>& big, const Grid& grid) {
  const std::size_t n = grid.size();
  const std::size_t m = big.size();
  Spectrum s(grid);
  for (std::size_t j = 0; j < n / 2; ++j) s[j] = big[j];
  for (std::size_t j = n / 2 + 1; j < n; ++j) s[j] = big[m - (n - j)];
  return s;
}

inline std::vector<double> fine_samples(const Spectrum& s, std::size_t m) {
  std::vector<Complex> padded = pad(s, m);
  std::vector<Complex> z(m);
  fft::backward(padded, z);
  std::vector<double> out(m);
  for (std::size_t j = 0; j < m; ++j) out[j] = z[j].real();
  return out;
}

inline Spectrum project_fine(const std::vector<double>& values, const Grid& grid) {
  const std::size_t m = values.size();
  std::vector<Complex> in(m), out(m);
  for (std::size_t j = 0; j < m; ++j) in[j] = Complex(values[j], 0.0);
  fft::forward(in, out);
  const double inv_m = 1.0 / static_cast<double>(m);
  for (auto& c : out) c *= inv_m;
  Spectrum s = truncate(out, grid);
  make_hermitian(s);
  return s;
}

}  // namespace detail

/// Spectrum of the band-limited projection of prod_i factors[i]^powers[i],
/// computed alias-free on a zero-padded grid.
inline Spectrum dealiased_monomial(std::span<const Spectrum* const> factors, std::span<const int> powers,
                                   double padding_ratio = 0.0) {
  if (factors.empty() || factors.size() != powers.size()) {
    throw std::invalid_argument("dealiased_monomial: factor/power mismatch");
  }
  const Grid& grid = factors.front()->grid();
  std::size_t degree = 0;
  for (int p : powers) {
    if (p < 0) throw std::invalid_argument("dealiased_monomial: negative power");
    degree += static_cast<std::size_t>(p);
  }
  const std::size_t m = padded_size(grid.size(), std::max<std::size_t>(degree, 1), padding_ratio);
  std::vector<double> prod(m, 1.0);
  for (std::size_t i = 0; i < factors.size(); ++i) {
    if (!(factors[i]->grid() == grid)) throw std::invalid_argument("dealiased_monomial: grid mismatch");
    if (powers[i] == 0) continue;
    const std::vector<double> fine = detail::fine_samples(*factors[i], m);
    for (std::size_t j = 0; j < m; ++j) prod[j] *= ipow(fine[j], powers[i]);
  }
  return detail::project_fine(prod, grid);
}

/// Spectrum of f^q (q >= 1), dealiased.
inline Spectrum dealiased_power(const Spectrum& f, int q) {
  const Spectrum* fs[] = {&f};
  const int ps[] = {q};
  return dealiased_monomial(fs, ps);
}

/// Spectrum of f^q * g, dealiased.
inline Spectrum dealiased_power_times(const Spectrum& f, int q, const Spectrum& g) {
  const Spectrum* fs[] = {&f, &g};
  const int ps[] = {q, 1};
  return dealiased_monomial(fs, ps);
}

/// u^(p+1), the factor inside the (u^(p+1))_xx term, dealiased with the
/// default padding ratio max(3/2, (p+2)/2).
inline RealField power_nonlinearity(const RealField& f, int p, double padding_ratio = 0.0) {
  if (p < 1) throw std::invalid_argument("power_nonlinearity: p must be >= 1, got " + std::to_string(p));
  require_finite(f, "power_nonlinearity");
  const Spectrum s = to_spectrum(f);
  const Spectrum* fs[] = {&s};
  const int ps[] = {p + 1};
  return to_physical(dealiased_monomial(fs, ps, padding_ratio));
}

// ---------------------------------------------------------------------------
// Trigonometric interpolation

/// Value of the real trigonometric interpolant of `s` at an arbitrary x.
inline double interpolate_at(const Spectrum& s, double x) {
  const Grid& g = s.grid();
  const std::size_t n = s.size();
  double value = s[0].real();
  for (std::size_t j = 1; j < n / 2; ++j) {
    const double xi = g.wavenumber(j);
    value += 2.0 * (s[j] * std::polar(1.0, xi * x)).real();
  }
  value += s[n / 2].real() * std::cos(g.max_wavenumber() * x);
  return value;
}

/// Samples g(y_j) = f(y_j * L_src / L_dst + shift), with `shift` in source
/// units. Exact for band-limited data when the target has at least as many
/// nodes; fewer nodes truncate the spectrum.
inline RealField resample(const RealField& f, const Grid& target, double shift) {
  const Spectrum s = to_spectrum(f);
  const Grid& g = f.grid();
  const std::size_t n = g.size();
  const std::size_t m = target.size();
  Spectrum out(target);
  const std::size_t keep = std::min(n, m) / 2;  // modes |k| < keep are copied
  for (std::size_t j = 0; j < keep; ++j) {
    out[j] = s[j] * std::polar(1.0, g.wavenumber(j) * shift);
    if (j > 0) out[m - j] = s[n - j] * std::polar(1.0, g.wavenumber(n - j) * shift);
  }
  const Complex nyq = s[n / 2];
  const double xi_n = g.max_wavenumber();
  if (m > n) {
    out[n / 2] = 0.5 * nyq * std::polar(1.0, xi_n * shift);
    out[m - n / 2] = 0.5 * nyq * std::polar(1.0, -xi_n * shift);
  } else if (m == n) {
    // sin(xi_N x_j) vanishes on the nodes, so only the cosine part survives.
    out[n / 2] = nyq * std::cos(xi_n * shift);
  }
  return to_physical(out);
}

/// f(x + shift) on the same grid.
inline RealField translate(const RealField& f, double shift) { return resample(f, f.grid(), shift); }

}  // namespace gfch
