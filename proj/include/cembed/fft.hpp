#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace cembed {

// Forward: X_k = Σ_j x_j e^{−2iπjk/N}. Backward: e^{+2iπjk/N}. No normalization.
enum class FftDirection { Forward, Backward };

// Out-of-place complex DFT of fixed length. execute() is const and may be
// called concurrently from several threads with distinct buffers.
class FftPlan {
 public:
  FftPlan(std::size_t n, FftDirection dir);
  ~FftPlan();
  FftPlan(FftPlan&&) noexcept;
  FftPlan& operator=(FftPlan&&) noexcept;
  FftPlan(const FftPlan&) = delete;
  FftPlan& operator=(const FftPlan&) = delete;

  std::size_t size() const { return n_; }
  FftDirection direction() const { return dir_; }
  void execute(const std::complex<double>* in, std::complex<double>* out) const;

 private:
  std::size_t n_ = 0;
  FftDirection dir_ = FftDirection::Forward;
  void* plan_ = nullptr;
};

std::vector<std::complex<double>> dft(std::span<const std::complex<double>> x, FftDirection dir);

}  // namespace cembed
