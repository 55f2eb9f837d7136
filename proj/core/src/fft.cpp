#include "fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cstring>
#include <mutex>
#include <stdexcept>

namespace lowsig::detail {

namespace {

// The FFTW planner is not re-entrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct Buffer {
  explicit Buffer(std::size_t bytes) : ptr(fftw_malloc(bytes)) {
    if (!ptr) throw std::bad_alloc();
  }
  ~Buffer() { fftw_free(ptr); }
  Buffer(const Buffer&) = delete;
  Buffer& operator=(const Buffer&) = delete;
  void* ptr;
};

}  // namespace

RealFft::RealFft(std::size_t length) : length_(length) {
  if (length < 2) throw std::invalid_argument("fft length must be >= 2");
  Buffer real(sizeof(double) * length);
  Buffer cplx(sizeof(fftw_complex) * spectrum_size());
  std::lock_guard lock(planner_mutex());
  const int n = static_cast<int>(length);
  forward_plan_ = fftw_plan_dft_r2c_1d(n, static_cast<double*>(real.ptr), static_cast<fftw_complex*>(cplx.ptr),
                                       FFTW_ESTIMATE);
  inverse_plan_ = fftw_plan_dft_c2r_1d(n, static_cast<fftw_complex*>(cplx.ptr), static_cast<double*>(real.ptr),
                                       FFTW_ESTIMATE);
}

RealFft::~RealFft() {
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
  fftw_destroy_plan(static_cast<fftw_plan>(inverse_plan_));
}

void RealFft::filter(std::span<const double> signal, std::span<const double> response, std::span<double> out) const {
  Buffer real(sizeof(double) * length_);
  Buffer cplx(sizeof(fftw_complex) * spectrum_size());
  auto* r = static_cast<double*>(real.ptr);
  auto* c = static_cast<fftw_complex*>(cplx.ptr);
  const std::size_t n = std::min(signal.size(), length_);
  std::copy_n(signal.begin(), n, r);
  std::fill(r + n, r + length_, 0.0);
  fftw_execute_dft_r2c(static_cast<fftw_plan>(forward_plan_), r, c);
  for (std::size_t k = 0; k < spectrum_size(); ++k) {
    c[k][0] *= response[k];
    c[k][1] *= response[k];
  }
  fftw_execute_dft_c2r(static_cast<fftw_plan>(inverse_plan_), c, r);
  std::copy_n(r, std::min(out.size(), length_), out.begin());
}

std::vector<std::complex<double>> RealFft::forward(std::span<const double> signal) const {
  Buffer real(sizeof(double) * length_);
  Buffer cplx(sizeof(fftw_complex) * spectrum_size());
  auto* r = static_cast<double*>(real.ptr);
  auto* c = static_cast<fftw_complex*>(cplx.ptr);
  const std::size_t n = std::min(signal.size(), length_);
  std::copy_n(signal.begin(), n, r);
  std::fill(r + n, r + length_, 0.0);
  fftw_execute_dft_r2c(static_cast<fftw_plan>(forward_plan_), r, c);
  std::vector<std::complex<double>> out(spectrum_size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = {c[k][0], c[k][1]};
  return out;
}

std::vector<std::complex<double>> dft2(std::span<const double> image, std::size_t n) {
  if (image.size() != n * n) throw std::invalid_argument("dft2: image is not n x n");
  Buffer buf(sizeof(fftw_complex) * n * n);
  auto* data = static_cast<fftw_complex*>(buf.ptr);
  for (std::size_t i = 0; i < n * n; ++i) {
    data[i][0] = image[i];
    data[i][1] = 0.0;
  }
  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = fftw_plan_dft_2d(static_cast<int>(n), static_cast<int>(n), data, data, FFTW_FORWARD, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
  std::vector<std::complex<double>> out(n * n);
  for (std::size_t i = 0; i < n * n; ++i) out[i] = {data[i][0], data[i][1]};
  return out;
}

}  // namespace lowsig::detail
