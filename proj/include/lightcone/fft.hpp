#pragma once

#include <complex>
#include <span>
#include <vector>

namespace lightcone {

// Multidimensional complex-to-complex FFT over row-major data.
// Forward is unnormalized (plain DFT sum); inverse divides by the point
// count, so inverse(forward(x)) == x. Plans are created once per grid
// under a global lock and executed on caller buffers, which keeps
// execution safe from concurrent threads.
class Fft {
 public:
  explicit Fft(std::span<const int> dims);
  ~Fft();
  Fft(const Fft&) = delete;
  Fft& operator=(const Fft&) = delete;

  void forward(std::span<const std::complex<double>> in, std::span<std::complex<double>> out) const;
  void inverse(std::span<const std::complex<double>> in, std::span<std::complex<double>> out) const;

  std::size_t size() const { return total_; }

 private:
  void* impl_ = nullptr;
  std::size_t total_ = 0;
};

}  // namespace lightcone
