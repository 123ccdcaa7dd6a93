#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace gfch {

/// Uniform periodic grid on [0, L) with n nodes.
///
/// Spectral storage follows the usual FFT ordering: slot j < n/2 holds mode
/// k = j, slot j >= n/2 holds k = j - n. The single unpaired mode k = -n/2
/// (the Nyquist mode) lives in slot n/2.
class Grid {
 public:
  Grid(std::int64_t n, double length) : n_(0), length_(length) {
    if (n < 8) {
      throw std::invalid_argument("grid: n must be >= 8, got " + std::to_string(n));
    }
    if (n % 2 != 0) {
      throw std::invalid_argument("grid: n must be even, got " + std::to_string(n));
    }
    if (!(length > 0.0) || !std::isfinite(length)) {
      throw std::invalid_argument("grid: length must be positive and finite");
    }
    n_ = static_cast<std::size_t>(n);
  }

  std::size_t size() const { return n_; }
  double length() const { return length_; }
  double spacing() const { return length_ / static_cast<double>(n_); }

  double node(std::size_t j) const { return static_cast<double>(j) * length_ / static_cast<double>(n_); }

  /// Integer mode index stored in FFT slot `slot`.
  std::int64_t mode(std::size_t slot) const {
    const auto j = static_cast<std::int64_t>(slot);
    const auto n = static_cast<std::int64_t>(n_);
    return j < n / 2 ? j : j - n;
  }

  /// FFT slot holding integer mode k, k in [-n/2, n/2).
  std::size_t slot(std::int64_t k) const {
    const auto n = static_cast<std::int64_t>(n_);
    if (k < -n / 2 || k >= n / 2) {
      throw std::out_of_range("grid: mode index outside [-n/2, n/2)");
    }
    return static_cast<std::size_t>(k < 0 ? k + n : k);
  }

  std::size_t nyquist_slot() const { return n_ / 2; }
  bool is_nyquist(std::size_t slot) const { return slot == n_ / 2; }

  double wavenumber(std::size_t slot) const {
    return 2.0 * std::numbers::pi * static_cast<double>(mode(slot)) / length_;
  }

  /// Largest resolved |xi| (the Nyquist wavenumber).
  double max_wavenumber() const { return std::numbers::pi * static_cast<double>(n_) / length_; }

  std::vector<double> nodes() const {
    std::vector<double> x(n_);
    for (std::size_t j = 0; j < n_; ++j) x[j] = node(j);
    return x;
  }

  /// Wavenumbers in ascending order, xi_{-n/2} ... xi_{n/2-1}.
  std::vector<double> wavenumber_ladder() const {
    std::vector<double> xi(n_);
    const auto half = static_cast<std::int64_t>(n_ / 2);
    for (std::size_t i = 0; i < n_; ++i) {
      xi[i] = 2.0 * std::numbers::pi * static_cast<double>(static_cast<std::int64_t>(i) - half) / length_;
    }
    return xi;
  }

  /// Same node count, period scaled by `factor` (used for derived frames).
  Grid scaled(double factor) const { return Grid(static_cast<std::int64_t>(n_), length_ * factor); }

  friend bool operator==(const Grid& a, const Grid& b) {
    return a.n_ == b.n_ && a.length_ == b.length_;
  }

 private:
  std::size_t n_;
  double length_;
};

inline Grid make_grid(std::int64_t n, double length) { return Grid(n, length); }

/// True when the periods agree to a relative tolerance.
inline bool same_period(double a, double b, double rel_tol = 1e-12) {
  return std::abs(a - b) <= rel_tol * std::max(std::abs(a), std::abs(b));
}

}  // namespace gfch
