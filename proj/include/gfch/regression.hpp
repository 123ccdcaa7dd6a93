#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

namespace gfch {

/// Least-squares line y = intercept + slope x.
struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;  // zero when only two points are given
  std::size_t points = 0;
};

inline LinearFit fit_line(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  if (n != y.size() || n < 2) throw std::invalid_argument("fit_line: need at least two matching points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("fit_line: abscissae are all equal");
  LinearFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.points = n;
  if (n > 2) {
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = y[i] - f.intercept - f.slope * x[i];
      ss += r * r;
    }
    f.slope_stderr = std::sqrt(ss / static_cast<double>(n - 2) / sxx);
  }
  return f;
}

/// Fit log(err) = log(C) + order log(h). Non-positive inputs are rejected.
inline LinearFit fit_loglog(std::span<const double> h, std::span<const double> err) {
  if (h.size() != err.size()) throw std::invalid_argument("fit_loglog: size mismatch");
  std::vector<double> lx(h.size()), ly(h.size());
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (!(h[i] > 0.0) || !(err[i] > 0.0)) throw std::invalid_argument("fit_loglog: values must be positive");
    lx[i] = std::log(h[i]);
    ly[i] = std::log(err[i]);
  }
  return fit_line(lx, ly);
}

}  // namespace gfch
