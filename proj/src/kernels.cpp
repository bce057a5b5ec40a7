#include "cembed/kernels.hpp"

#include <cmath>
#include <numbers>

#include "cembed/errors.hpp"

namespace cembed {

namespace {

constexpr double kPi = std::numbers::pi;

// Direct trigonometric sums, used next to the integers.
double kernel_series(KernelKind kind, int p, double w) {
  double s = 0.0;
  switch (kind) {
    case KernelKind::Dirichlet:
      s = 1.0;
      for (int j = 1; j <= p; ++j) s += 2.0 * std::cos(2.0 * kPi * j * w);
      return s;
    case KernelKind::Fejer:
      s = p + 1.0;
      for (int j = 1; j <= p; ++j) s += 2.0 * (p + 1.0 - j) * std::cos(2.0 * kPi * j * w);
      return s;
    case KernelKind::ConjDirichlet:
      for (int j = 1; j <= p; ++j) s += 2.0 * std::sin(2.0 * kPi * j * w);
      return s;
    case KernelKind::ConjFejer:
      for (int j = 1; j <= p; ++j) s += 2.0 * (p + 1.0 - j) * std::sin(2.0 * kPi * j * w);
      return s;
  }
  return s;
}

double integer_value(KernelKind kind, double p) {
  switch (kind) {
    case KernelKind::Dirichlet:
      return 2.0 * p + 1.0;
    case KernelKind::Fejer:
      return (p + 1.0) * (p + 1.0);
    default:
      return 0.0;
  }
}

// sin(π a / N) and cos(π a / N) with a reduced exactly mod 2N.
double sinpi_ratio(long long a, long long N) {
  long long r = a % (2 * N);
  if (r < 0) r += 2 * N;
  if (r > N) r -= 2 * N;
  return std::sin(kPi * static_cast<double>(r) / static_cast<double>(N));
}

double cospi_ratio(long long a, long long N) {
  long long r = a % (2 * N);
  if (r < 0) r += 2 * N;
  if (r > N) r -= 2 * N;
  return std::cos(kPi * static_cast<double>(r) / static_cast<double>(N));
}

}  // namespace

double kernel_eval(KernelKind kind, int p, double omega) {
  if (p < 0) throw DomainError("kernel_eval: p must be >= 0");
  double dist = std::abs(omega - std::round(omega));
  if (dist < 1e-12) return integer_value(kind, p);
  double w = omega - 2.0 * std::floor(omega / 2.0);
  double s = std::sin(kPi * w);
  if (std::abs(s) < 1e-8) return kernel_series(kind, p, w);
  switch (kind) {
    case KernelKind::Dirichlet:
      return std::sin(kPi * w * (2.0 * p + 1.0)) / s;
    case KernelKind::Fejer: {
      double q = std::sin(kPi * w * (p + 1.0)) / s;
      return q * q;
    }
    case KernelKind::ConjDirichlet:
      return (std::cos(kPi * w) - std::cos(kPi * w * (2.0 * p + 1.0))) / s;
    case KernelKind::ConjFejer:
      return ((p + 1.0) * std::sin(2.0 * kPi * w) - std::sin(2.0 * kPi * w * (p + 1.0))) /
             (2.0 * s * s);
  }
  return 0.0;
}

double kernel_eval_grid(KernelKind kind, long long p, long long k, long long N) {
  if (p < 0) throw DomainError("kernel_eval_grid: p must be >= 0");
  if (N < 1) throw DomainError("kernel_eval_grid: N must be >= 1");
  if (k % N == 0) return integer_value(kind, static_cast<double>(p));
  double s = sinpi_ratio(k, N);
  switch (kind) {
    case KernelKind::Dirichlet:
      return sinpi_ratio(k * (2 * p + 1), N) / s;
    case KernelKind::Fejer: {
      double q = sinpi_ratio(k * (p + 1), N) / s;
      return q * q;
    }
    case KernelKind::ConjDirichlet:
      return (cospi_ratio(k, N) - cospi_ratio(k * (2 * p + 1), N)) / s;
    case KernelKind::ConjFejer:
      return (static_cast<double>(p + 1) * sinpi_ratio(2 * k, N) -
              sinpi_ratio(2 * k * (p + 1), N)) /
             (2.0 * s * s);
  }
  return 0.0;
}

std::vector<double> fdiff(std::span<const double> f) {
  if (f.size() < 2) throw DomainError("fdiff: need at least 2 values");
  std::vector<double> d(f.size() - 1);
  for (std::size_t k = 0; k + 1 < f.size(); ++k) d[k] = f[k] - f[k + 1];
  return d;
}

std::vector<double> fdiff2(std::span<const double> f) {
  if (f.size() < 3) throw DomainError("fdiff2: need at least 3 values");
  auto d = fdiff(f);
  return fdiff(d);
}

}  // namespace cembed
