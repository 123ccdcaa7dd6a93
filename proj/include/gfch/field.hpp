#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "gfch/fft.hpp"
#include "gfch/grid.hpp"

namespace gfch {

using Complex = std::complex<double>;

/// Real samples of a periodic field on a Grid.
class RealField {
 public:
  explicit RealField(Grid grid) : grid_(grid), values_(grid.size(), 0.0) {}

  RealField(Grid grid, std::vector<double> values) : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.size()) {
      throw std::invalid_argument("field: value count " + std::to_string(values_.size()) +
                                  " does not match grid size " + std::to_string(grid_.size()));
    }
  }

  template <class F>
  static RealField from_function(const Grid& grid, F&& f) {
    RealField out(grid);
    for (std::size_t j = 0; j < grid.size(); ++j) out.values_[j] = f(grid.node(j));
    return out;
  }

  static RealField constant(const Grid& grid, double c) {
    return RealField(grid, std::vector<double>(grid.size(), c));
  }

  const Grid& grid() const { return grid_; }
  std::size_t size() const { return values_.size(); }

  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }
  const std::vector<double>& data() const { return values_; }

  double operator[](std::size_t j) const { return values_[j]; }
  double& operator[](std::size_t j) { return values_[j]; }

  bool all_finite() const {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
  }

  RealField& operator+=(const RealField& o) {
    check_same_grid(o);
    for (std::size_t j = 0; j < values_.size(); ++j) values_[j] += o.values_[j];
    return *this;
  }
  RealField& operator-=(const RealField& o) {
    check_same_grid(o);
    for (std::size_t j = 0; j < values_.size(); ++j) values_[j] -= o.values_[j];
    return *this;
  }
  RealField& operator*=(double s) {
    for (double& v : values_) v *= s;
    return *this;
  }

  /// this += s * o
  RealField& axpy(double s, const RealField& o) {
    check_same_grid(o);
    for (std::size_t j = 0; j < values_.size(); ++j) values_[j] += s * o.values_[j];
    return *this;
  }

  friend RealField operator+(RealField a, const RealField& b) { return a += b; }
  friend RealField operator-(RealField a, const RealField& b) { return a -= b; }
  friend RealField operator*(double s, RealField a) { return a *= s; }
  friend RealField operator*(RealField a, double s) { return a *= s; }
  friend RealField operator-(RealField a) { return a *= -1.0; }

  void check_same_grid(const RealField& o) const {
    if (!(grid_ == o.grid_)) throw std::invalid_argument("field: grid mismatch");
  }

 private:
  Grid grid_;
  std::vector<double> values_;
};

/// Fourier coefficients of a field, normalized so that
/// f(x_j) = sum_k c_k exp(i xi_k x_j). Stored in FFT slot order.
class Spectrum {
 public:
  explicit Spectrum(Grid grid) : grid_(grid), coeffs_(grid.size(), Complex{}) {}
  Spectrum(Grid grid, std::vector<Complex> coeffs) : grid_(grid), coeffs_(std::move(coeffs)) {
    if (coeffs_.size() != grid_.size()) throw std::invalid_argument("spectrum: size mismatch");
  }

  const Grid& grid() const { return grid_; }
  std::size_t size() const { return coeffs_.size(); }

  /// Coefficient of integer mode k in [-n/2, n/2).
  Complex coeff(std::int64_t k) const { return coeffs_[grid_.slot(k)]; }

  Complex operator[](std::size_t slot) const { return coeffs_[slot]; }
  Complex& operator[](std::size_t slot) { return coeffs_[slot]; }

  std::span<const Complex> coeffs() const { return coeffs_; }
  std::span<Complex> coeffs() { return coeffs_; }

  Spectrum& operator+=(const Spectrum& o) {
    if (!(grid_ == o.grid_)) throw std::invalid_argument("spectrum: grid mismatch");
    for (std::size_t j = 0; j < coeffs_.size(); ++j) coeffs_[j] += o.coeffs_[j];
    return *this;
  }
  Spectrum& operator*=(Complex s) {
    for (auto& c : coeffs_) c *= s;
    return *this;
  }
  Spectrum& axpy(Complex s, const Spectrum& o) {
    if (!(grid_ == o.grid_)) throw std::invalid_argument("spectrum: grid mismatch");
    for (std::size_t j = 0; j < coeffs_.size(); ++j) coeffs_[j] += s * o.coeffs_[j];
    return *this;
  }

  /// Largest |c(-k) - conj(c(k))| over the paired modes.
  double hermitian_defect() const {
    double worst = 0.0;
    const std::size_t n = coeffs_.size();
    for (std::size_t j = 1; j < n / 2; ++j) {
      worst = std::max(worst, std::abs(coeffs_[n - j] - std::conj(coeffs_[j])));
    }
    worst = std::max(worst, std::abs(coeffs_[0].imag()));
    return worst;
  }

 private:
  Grid grid_;
  std::vector<Complex> coeffs_;
};

/// Relative tolerance on the imaginary residue when returning to physical space.
inline constexpr double kRealnessTolerance = 1e-13;

/// Project onto exactly Hermitian coefficients. Spectra of real data carry a
/// roundoff-level defect that large multipliers would otherwise lift into an
/// imaginary part.
inline void make_hermitian(Spectrum& s) {
  auto c = s.coeffs();
  const std::size_t n = c.size();
  c[0] = Complex(c[0].real(), 0.0);
  c[n / 2] = Complex(c[n / 2].real(), 0.0);
  for (std::size_t j = 1; j < n / 2; ++j) {
    const Complex avg = 0.5 * (c[j] + std::conj(c[n - j]));
    c[j] = avg;
    c[n - j] = std::conj(avg);
  }
}

inline Spectrum to_spectrum(const RealField& f) {
  const std::size_t n = f.size();
  std::vector<Complex> in(n);
  for (std::size_t j = 0; j < n; ++j) in[j] = Complex(f[j], 0.0);
  Spectrum out(f.grid());
  fft::forward(in, out.coeffs());
  const double inv_n = 1.0 / static_cast<double>(n);
  for (auto& c : out.coeffs()) c *= inv_n;
  make_hermitian(out);
  return out;
}

/// Complex samples sum_k c_k exp(i xi_k x_j).
inline std::vector<Complex> synthesize(const Spectrum& s) {
  std::vector<Complex> out(s.size());
  fft::backward(s.coeffs(), out);
  return out;
}

/// Back to physical space. The imaginary residue must be roundoff-level
/// relative to the coefficient mass; anything larger is a logic error upstream.
inline RealField to_physical(const Spectrum& s) {
  std::vector<Complex> z = synthesize(s);
  double scale = 0.0;
  for (const auto& c : s.coeffs()) scale += std::abs(c);
  double residue = 0.0;
  std::vector<double> re(z.size());
  for (std::size_t j = 0; j < z.size(); ++j) {
    re[j] = z[j].real();
    residue = std::max(residue, std::abs(z[j].imag()));
  }
  if (residue > kRealnessTolerance * scale && std::isfinite(scale)) {
    throw std::logic_error("to_physical: imaginary residue " + std::to_string(residue) +
                           " exceeds tolerance for a real field");
  }
  return RealField(s.grid(), std::move(re));
}

inline double max_norm(const RealField& f) {
  double m = 0.0;
  for (double v : f.values()) m = std::max(m, std::abs(v));
  return m;
}

/// Trapezoid rule on the periodic grid (spectrally accurate).
inline double integral(const RealField& f) {
  double s = 0.0;
  for (double v : f.values()) s += v;
  return s * f.grid().spacing();
}

inline double inner(const RealField& f, const RealField& g) {
  f.check_same_grid(g);
  double s = 0.0;
  for (std::size_t j = 0; j < f.size(); ++j) s += f[j] * g[j];
  return s * f.grid().spacing();
}

inline double l2_norm(const RealField& f) { return std::sqrt(inner(f, f)); }

inline double max_abs_diff(const RealField& a, const RealField& b) {
  a.check_same_grid(b);
  double m = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) m = std::max(m, std::abs(a[j] - b[j]));
  return m;
}

/// max|a - b| / max(1, max|b|)
inline double scaled_diff(const RealField& a, const RealField& b) {
  return max_abs_diff(a, b) / std::max(1.0, max_norm(b));
}

inline void require_finite(const RealField& f, const char* where) {
  if (!f.all_finite()) throw std::domain_error(std::string(where) + ": non-finite input values");
}

}  // namespace gfch
