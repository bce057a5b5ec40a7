#include "cembed/fft.hpp"

#include <fftw3.h>

#include <mutex>
#include <utility>

#include "cembed/errors.hpp"

namespace cembed {

namespace {
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

FftPlan::FftPlan(std::size_t n, FftDirection dir) : n_(n), dir_(dir) {
  if (n == 0) throw SizeError("FftPlan: length must be positive");
  std::lock_guard<std::mutex> lock(planner_mutex());
  fftw_complex* in = fftw_alloc_complex(n);
  fftw_complex* out = fftw_alloc_complex(n);
  int sign = dir == FftDirection::Forward ? FFTW_FORWARD : FFTW_BACKWARD;
  fftw_plan p = fftw_plan_dft_1d(static_cast<int>(n), in, out, sign,
                                 FFTW_ESTIMATE | FFTW_UNALIGNED);
  fftw_free(in);
  fftw_free(out);
  if (!p) throw IntegrityError("FftPlan: planner failed for length " + std::to_string(n));
  plan_ = p;
}

FftPlan::~FftPlan() {
  if (plan_) {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(static_cast<fftw_plan>(plan_));
  }
}

FftPlan::FftPlan(FftPlan&& o) noexcept
    : n_(o.n_), dir_(o.dir_), plan_(std::exchange(o.plan_, nullptr)) {}

FftPlan& FftPlan::operator=(FftPlan&& o) noexcept {
  if (this != &o) {
    if (plan_) {
      std::lock_guard<std::mutex> lock(planner_mutex());
      fftw_destroy_plan(static_cast<fftw_plan>(plan_));
    }
    n_ = o.n_;
    dir_ = o.dir_;
    plan_ = std::exchange(o.plan_, nullptr);
  }
  return *this;
}

void FftPlan::execute(const std::complex<double>* in, std::complex<double>* out) const {
  if (in == out) throw DomainError("FftPlan::execute: in-place use is not supported");
  // FFTW does not write to the input of an out-of-place complex plan.
  fftw_execute_dft(static_cast<fftw_plan>(plan_),
                   reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(in)),
                   reinterpret_cast<fftw_complex*>(out));
}

std::vector<std::complex<double>> dft(std::span<const std::complex<double>> x,
                                      FftDirection dir) {
  FftPlan plan(x.size(), dir);
  std::vector<std::complex<double>> out(x.size());
  plan.execute(x.data(), out.data());
  return out;
}

}  // namespace cembed
