#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace lowsig::detail {

/// Real-to-complex / complex-to-real transform pair of a fixed length backed
/// by FFTW. Plans are created once; execute() calls are thread safe.
class RealFft {
 public:
  explicit RealFft(std::size_t length);
  ~RealFft();
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  std::size_t length() const { return length_; }
  std::size_t spectrum_size() const { return length_ / 2 + 1; }

  /// Circular convolution of `signal` (zero padded to length) with a filter
  /// given by its real spectrum (spectrum_size() values). Writes the first
  /// out.size() samples, unnormalised transforms included.
  void filter(std::span<const double> signal, std::span<const double> response, std::span<double> out) const;

  /// Forward transform of a length() real sequence.
  std::vector<std::complex<double>> forward(std::span<const double> signal) const;

 private:
  std::size_t length_;
  void* forward_plan_;
  void* inverse_plan_;
};

/// Full n x n DFT of a real row-major image.
std::vector<std::complex<double>> dft2(std::span<const double> image, std::size_t n);

}  // namespace lowsig::detail
