#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "cembed/covmodels.hpp"
#include "cembed/errors.hpp"
#include "cembed/kernels.hpp"
#include "cembed/oracle.hpp"
#include "support.hpp"

using namespace cembed;
constexpr double kPi = std::numbers::pi;

namespace {

// r(τ) = σ² Γ(1−2d) sin(πd) Γ(τ+d) / (π Γ(τ+1−d)), d ≠ 0, via long double log-Gamma.
double farima_lgamma(double d, double s2, long tau) {
  long double ld = d;
  long double lr = lgammal(1.0L - 2.0L * ld) + lgammal(tau + ld) - lgammal(tau + 1.0L - ld);
  long double sign = (d > 0) ? 1.0L : -1.0L;  // sin(πd) Γ(τ+d) sign; Γ(τ+d) > 0 for τ ≥ 1
  if (tau == 0) {
    // Γ(d) sin(πd)/π = 1/Γ(1−d)
    return static_cast<double>(s2 * std::exp(lgammal(1.0L - 2.0L * ld) - 2.0L * lgammal(1.0L - ld)));
  }
  return static_cast<double>(s2 * sign * std::abs(std::sin(kPi * d)) / kPi * std::exp(lr));
}

std::vector<CovarianceModel> zoo() {
  auto z = tsupport::zoo();
  z.push_back(Tabulated{{cd{3.0, 0.0}, cd{1.0, 0.5}, cd{0.2, -0.3}}});
  return z;
}

}  // namespace

TEST(AcvfReal, FgnHalfIsWhite) {
  EXPECT_NEAR(acvf_real(FGN{0.5, 1.0}, 3), 0.0, 1e-15);
  EXPECT_NEAR(acvf_real(FGN{0.5, 1.0}, 0), 1.0, 1e-15);
}

TEST(AcvfReal, FarimaZeroIsWhite) {
  EXPECT_DOUBLE_EQ(acvf_real(FARIMA{0.0, 1.0}, 0), 1.0);
  EXPECT_DOUBLE_EQ(acvf_real(FARIMA{0.0, 1.0}, 2), 0.0);
}

TEST(AcvfReal, FarimaMatchesLogGamma) {
  // lag 1 at d = 0.2: two independent evaluations of the closed form
  double ref = farima_lgamma(0.2, 1.0, 1);
  EXPECT_NEAR(acvf_real(FARIMA{0.2, 1.0}, 1), ref, 1e-12 * std::abs(ref));
  for (double d : {-0.4, -0.2, 0.2, 0.4}) {
    auto seq = acvf_real_seq(FARIMA{d, 1.0}, 10000);
    for (long tau : {0L, 1L, 2L, 7L, 50L, 999L, 5000L, 10000L}) {
      double r = farima_lgamma(d, 1.0, tau);
      EXPECT_NEAR(seq[tau], r, 1e-12 * std::abs(r)) << "d=" << d << " tau=" << tau;
      EXPECT_NEAR(acvf_real(FARIMA{d, 1.0}, tau), r, 1e-12 * std::abs(r));
    }
  }
}

TEST(AcvfReal, FgnSignsAndConvexity) {
  auto lo = acvf_real_seq(FGN{0.3, 1.0}, 200);
  for (std::size_t t = 1; t < lo.size(); ++t) EXPECT_LT(lo[t], 0.0);
  auto hi = acvf_real_seq(FGN{0.8, 1.0}, 200);
  for (double r : hi) EXPECT_GT(r, 0.0);
  for (double d : fdiff(hi)) EXPECT_GE(d, 0.0);
  for (double d : fdiff2(hi)) EXPECT_GE(d, 0.0);
}

TEST(AcvfReal, FgnLargeLagSeriesContinuity) {
  for (double H : {0.1, 0.3, 0.7, 0.95}) {
    for (std::uint64_t tau : {6ULL, 7ULL, 8ULL, 9ULL, 12ULL}) {
      long double t = tau, e = 2.0L * H;
      long double direct = powl(t - 1, e) - 2 * powl(t, e) + powl(t + 1, e);
      double v = fgn_second_difference(H, tau);
      EXPECT_NEAR(v, static_cast<double>(direct), 1e-12 * std::abs(static_cast<double>(direct)) + 1e-15);
    }
  }
}

TEST(Gamma, WhiteNoise) {
  EXPECT_EQ(gamma(WhiteNoise{2.0}, 0), cd(2.0, 0.0));
  EXPECT_EQ(gamma(WhiteNoise{2.0}, 5), cd(0.0, 0.0));
}

TEST(Gamma, ModulatedExponential) {
  cd g = gamma(Modulated{0.125, Exponential{1.0, 1.0}}, 2);
  EXPECT_NEAR(g.real(), 0.0, 1e-16);
  EXPECT_NEAR(g.imag(), std::exp(-2.0), 1e-16);
  EXPECT_NEAR(std::abs(g), acvf_real(Exponential{1.0, 1.0}, 2), 1e-16);
}

TEST(Gamma, CircularFgnAtZeroIsReal) {
  for (double H : {0.2, 0.8}) {
    CircularFGN f{H, 1.7, 0.3};
    cd g0 = gamma(f, 0);
    EXPECT_EQ(g0.imag(), 0.0);
    EXPECT_DOUBLE_EQ(g0.real(), 1.7 * 2.0);
  }
}

TEST(Gamma, ComplexAR1) {
  cd a = std::polar(0.6, kPi / 4);
  ComplexAR1 m{a, 2.0, true};
  EXPECT_NEAR(std::abs(gamma(m, 3) - std::pow(a, 3) * 2.0 / (1.0 - 0.36)), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(gamma(m, -3) - std::conj(gamma(m, 3))), 0.0, 1e-15);
}

TEST(Gamma, HermitianSymmetry) {
  for (const auto& m : zoo())
    for (std::int64_t t = 0; t <= 2; ++t)
      EXPECT_NEAR(std::abs(gamma(m, -t) - std::conj(gamma(m, t))), 0.0, 1e-14) << name(m);
  for (const auto& m : zoo()) {
    if (std::holds_alternative<Tabulated>(m)) continue;
    for (std::int64_t t = 3; t <= 40; t += 3)
      EXPECT_NEAR(std::abs(gamma(m, -t) - std::conj(gamma(m, t))), 0.0, 1e-14) << name(m);
  }
}

TEST(Gamma, TabulatedRange) {
  Tabulated t{{cd{1.0, 0.0}, cd{0.2, 0.1}}};
  EXPECT_EQ(gamma(t, -1), cd(0.2, -0.1));
  EXPECT_THROW(gamma(t, 2), RangeError);
  EXPECT_FALSE(validate(CovarianceModel{Tabulated{{cd{1.0, 1e-9}}}}).empty());
}

TEST(Gamma, GammaSeqMatchesGamma) {
  for (const auto& m : zoo()) {
    if (std::holds_alternative<Tabulated>(m)) continue;
    auto seq = gamma_seq(m, 60);
    for (std::int64_t t = 0; t <= 60; ++t)
      EXPECT_NEAR(std::abs(seq[t] - gamma(m, t)), 0.0, 1e-13 * std::abs(seq[0])) << name(m);
  }
}

TEST(Validate, Examples) {
  EXPECT_TRUE(validate(CovarianceModel{CircularFGN{0.8, 1.0, std::tan(0.8 * kPi) * 2.0 / 3.0}}).empty());
  EXPECT_FALSE(validate(CovarianceModel{CircularFGN{0.25, 1.0, 2.0}}).empty());
  EXPECT_FALSE(validate(CovarianceModel{ComplexAR1{cd{1.1, 0.0}, 1.0, true}}).empty());
  EXPECT_FALSE(validate(CovarianceModel{CircularFGN{0.5, 1.0, 0.0}}).empty());
  EXPECT_FALSE(validate(CovarianceModel{WhiteNoise{-1.0}}).empty());
  EXPECT_THROW(require_valid(CovarianceModel{CircularFGN{0.25, 1.0, 2.0}}), DomainError);
  EXPECT_THROW(gamma(CovarianceModel{ComplexAR1{cd{1.1, 0.0}, 1.0, true}}, 1), DomainError);
  for (const auto& m : zoo()) EXPECT_TRUE(validate(m).empty()) << name(m);
}

TEST(Conjugate, Examples) {
  auto c = conjugate_model(Modulated{0.2, Exponential{1.0, 1.0}});
  EXPECT_DOUBLE_EQ(std::get<Modulated>(c).phi, -0.2);
  auto f = conjugate_model(CircularFGN{0.3, 2.0, 0.4});
  EXPECT_DOUBLE_EQ(std::get<CircularFGN>(f).eta, -0.4);
  std::mt19937_64 gen(3);
  std::uniform_int_distribution<int> lag(-300, 300);
  for (const auto& m : zoo()) {
    if (std::holds_alternative<Tabulated>(m)) continue;
    auto cm = conjugate_model(m);
    for (int i = 0; i < 100; ++i) {
      int t = lag(gen);
      EXPECT_NEAR(std::abs(gamma(cm, t) - std::conj(gamma(m, t))), 0.0, 1e-14) << name(m);
    }
  }
}

TEST(Slices, Examples) {
  auto s = slices(WhiteNoise{1.0}, 3);
  EXPECT_EQ(s.R, (std::vector<double>{1, 0, 0, 0}));
  EXPECT_EQ(s.I, (std::vector<double>{0, 0, 0, 0}));
  auto q = slices(Modulated{0.25, Exponential{0.7, 2.0}}, 2);
  EXPECT_NEAR(q.R[1], 0.0, 1e-15);
  EXPECT_NEAR(q.I[1], 2.0 * std::exp(-0.7), 1e-15);
  CircularFGN f{0.3, 1.0, 0.6};
  auto c = slices(f, 50);
  for (std::size_t j = 1; j <= 50; ++j) EXPECT_NEAR(c.I[j], -0.6 * c.R[j], 1e-15);
  EXPECT_EQ(c.I[0], 0.0);
  EXPECT_THROW(slices(WhiteNoise{1.0}, 0), DomainError);
}

TEST(ComplexFgn, ReducesToCircular) {
  for (double H : {0.2, 0.7}) {
    ComplexFGN g{H, 1.3, 1.3, 0.25};
    CircularFGN c{H, 1.3 * 1.3, 0.25};
    for (std::int64_t t = -20; t <= 20; ++t)
      EXPECT_NEAR(std::abs(gamma(g, t) - gamma(c, t)), 0.0, 1e-14);
  }
}

TEST(DenseGamma, NumericallyPsdAcrossZoo) {
  for (const auto& m : zoo()) {
    std::size_t n = std::holds_alternative<Tabulated>(m) ? 3 : 64;
    auto G = dense_gamma(m, n);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(G);
    EXPECT_GE(es.eigenvalues().minCoeff(), -1e-8 * G(0, 0).real()) << name(m);
  }
}
