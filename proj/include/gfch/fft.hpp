#pragma once

#include <fftw3.h>

#include <complex>
#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <stdexcept>
#include <utility>

namespace gfch::fft {

using Complex = std::complex<double>;

namespace detail {

struct PlanDeleter {
  void operator()(fftw_plan_s* p) const {
    if (p != nullptr) fftw_destroy_plan(p);
  }
};
using PlanHandle = std::unique_ptr<fftw_plan_s, PlanDeleter>;

// FFTW planning is not thread safe; execution of an existing plan on new
// arrays is. Plans are created once per (size, sign) under a lock and shared.
class PlanCache {
 public:
  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  fftw_plan get(std::size_t n, int sign) {
    std::lock_guard<std::mutex> lock(mutex_);
    auto key = std::make_pair(n, sign);
    auto it = plans_.find(key);
    if (it != plans_.end()) return it->second.get();
    auto* in = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n));
    auto* out = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n));
    fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(n), in, out, sign,
                                      FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(in);
    fftw_free(out);
    if (plan == nullptr) throw std::runtime_error("fft: plan creation failed");
    plans_.emplace(key, PlanHandle(plan));
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<std::pair<std::size_t, int>, PlanHandle> plans_;
};

inline void execute(std::span<const Complex> in, std::span<Complex> out, int sign) {
  if (in.size() != out.size()) throw std::invalid_argument("fft: size mismatch");
  if (in.data() == out.data()) throw std::invalid_argument("fft: in-place transform not supported");
  fftw_plan plan = PlanCache::instance().get(in.size(), sign);
  // Out-of-place complex transforms leave the input untouched.
  fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(const_cast<Complex*>(in.data())),
                   reinterpret_cast<fftw_complex*>(out.data()));
}

}  // namespace detail

/// out_k = sum_j in_j exp(-2 pi i j k / n), unnormalized.
inline void forward(std::span<const Complex> in, std::span<Complex> out) {
  detail::execute(in, out, FFTW_FORWARD);
}

/// out_j = sum_k in_k exp(+2 pi i j k / n), unnormalized.
inline void backward(std::span<const Complex> in, std::span<Complex> out) {
  detail::execute(in, out, FFTW_BACKWARD);
}

}  // namespace gfch::fft
