#pragma once

// Thin RAII wrapper over FFTW for the in-place complex transforms used by the
// spectral operators. Plans are created with FFTW_ESTIMATE | FFTW_UNALIGNED so
// they can be executed on any std::vector<std::complex<double>> buffer.

#include <fftw3.h>

#include <complex>
#include <cstddef>
#include <mutex>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace gausson {

namespace detail {

// fftw_plan_* and fftw_destroy_plan are not thread-safe; fftw_execute_dft is.
inline std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

inline fftw_complex* as_fftw(std::complex<double>* p) {
  return reinterpret_cast<fftw_complex*>(p);
}

}  // namespace detail

/// Unnormalized forward/backward DFT of fixed shape (1D or 2D, row-major).
class FftPlan {
 public:
  FftPlan() = default;

  explicit FftPlan(std::span<const int> shape) : size_(1) {
    if (shape.empty() || shape.size() > 2) throw std::invalid_argument("FftPlan: rank must be 1 or 2");
    for (int n : shape) size_ *= static_cast<std::size_t>(n);
    std::vector<std::complex<double>> scratch(size_);
    const int rank = static_cast<int>(shape.size());
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    std::lock_guard lock(detail::fftw_planner_mutex());
    forward_ = fftw_plan_dft(rank, shape.data(), detail::as_fftw(scratch.data()),
                             detail::as_fftw(scratch.data()), FFTW_FORWARD, flags);
    backward_ = fftw_plan_dft(rank, shape.data(), detail::as_fftw(scratch.data()),
                              detail::as_fftw(scratch.data()), FFTW_BACKWARD, flags);
    if (!forward_ || !backward_) throw std::runtime_error("FftPlan: FFTW planning failed");
  }

  FftPlan(const FftPlan&) = delete;
  FftPlan& operator=(const FftPlan&) = delete;

  FftPlan(FftPlan&& other) noexcept
      : size_(other.size_),
        forward_(std::exchange(other.forward_, nullptr)),
        backward_(std::exchange(other.backward_, nullptr)) {}

  FftPlan& operator=(FftPlan&& other) noexcept {
    if (this != &other) {
      release();
      size_ = other.size_;
      forward_ = std::exchange(other.forward_, nullptr);
      backward_ = std::exchange(other.backward_, nullptr);
    }
    return *this;
  }

  ~FftPlan() { release(); }

  std::size_t size() const noexcept { return size_; }

  void forward(std::span<std::complex<double>> data) const { execute(forward_, data); }

  /// Inverse transform including the 1/size normalization.
  void backward(std::span<std::complex<double>> data) const {
    execute(backward_, data);
    const double scale = 1.0 / static_cast<double>(size_);
    for (auto& v : data) v *= scale;
  }

 private:
  void execute(fftw_plan plan, std::span<std::complex<double>> data) const {
    if (data.size() != size_) throw std::invalid_argument("FftPlan: buffer size mismatch");
    fftw_execute_dft(plan, detail::as_fftw(data.data()), detail::as_fftw(data.data()));
  }

  void release() noexcept {
    if (!forward_ && !backward_) return;
    std::lock_guard lock(detail::fftw_planner_mutex());
    if (forward_) fftw_destroy_plan(forward_);
    if (backward_) fftw_destroy_plan(backward_);
    forward_ = backward_ = nullptr;
  }

  std::size_t size_ = 0;
  fftw_plan forward_ = nullptr;
  fftw_plan backward_ = nullptr;
};

}  // namespace gausson
