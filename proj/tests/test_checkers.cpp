#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "cembed/embedding.hpp"
#include "cembed/errors.hpp"
#include "support.hpp"

using namespace cembed;
using tsupport::tan_abs;

TEST(Craigmile, CircularFgnLowHurst) {
  CovarianceModel m = CircularFGN{0.2, 1.0, 0.5};
  auto size = select_embedding_size(500);
  auto r = check_craigmile(m, size, CraigmileClause::II);
  EXPECT_TRUE(r.applicable);
  EXPECT_TRUE(r.flags.at("eta_below_min_1_tan"));
  EXPECT_TRUE(r.stated_condition);
  // Σ_{j>=1} R(j) → −R(0)/2 for H < 1/2, so A_m → −η R(0) < 0: no certificate.
  EXPECT_LT(r.values.at("A_m"), 0.0);
  EXPECT_FALSE(r.passed);
}

TEST(Craigmile, ClauseIIOnlyForCircularShapes) {
  auto size = select_embedding_size(50);
  EXPECT_FALSE(check_craigmile(Modulated{0.1, Exponential{}}, size, CraigmileClause::II).applicable);
  EXPECT_FALSE(check_craigmile(ComplexFGN{0.3, 1.0, 2.0, 0.1}, size, CraigmileClause::II).applicable);
  EXPECT_TRUE(check_craigmile(ComplexFGN{0.3, 1.5, 1.5, 0.1}, size, CraigmileClause::II).applicable);
}

TEST(Craigmile, ModulatedNegativeMemoryFarima) {
  CovarianceModel m = Modulated{0.2, FARIMA{-0.3, 1.0}};
  auto size = select_embedding_size(200);
  auto r = check_craigmile(m, size, CraigmileClause::III);
  EXPECT_TRUE(r.applicable);
  EXPECT_FALSE(r.flags.at("r_nonneg"));
  EXPECT_TRUE(r.flags.at("r_nonpos"));
  EXPECT_FALSE(r.stated_condition);
  // r(0) − 2Σ|r(j)| = 2Σ_{j>m}|r(j)| > 0 for d < 0
  EXPECT_GT(r.values.at("B_m"), 0.0);
  EXPECT_TRUE(r.passed);
  EXPECT_TRUE(build(m, size).nonnegative());
}

TEST(Craigmile, WhiteNoiseTrivial) {
  auto r = check_craigmile(WhiteNoise{1.0}, select_embedding_size(20), CraigmileClause::I);
  EXPECT_TRUE(r.passed);
  EXPECT_DOUBLE_EQ(r.values.at("A_m"), 1.0);
  EXPECT_FALSE(check_craigmile(WhiteNoise{1.0}, select_embedding_size(20), CraigmileClause::III).applicable);
  EXPECT_EQ(check_craigmile(WhiteNoise{1.0}, select_embedding_size(20)).size(), 3u);
}

TEST(Dietrich, CircularFgnFigureModel) {
  const double H = 0.8, eta = 2.0 / 3.0 * tan_abs(H);
  CovarianceModel m = CircularFGN{H, 1.0, eta};
  auto size = embedding_size_from_m(1000, 1000);
  auto r = check_dietrich(slices(m, 1000), size, eta);
  EXPECT_TRUE(r.applicable);
  EXPECT_TRUE(r.stated_condition);
  EXPECT_TRUE(r.passed);
  EXPECT_TRUE(build(m, size).nonnegative());
}

TEST(Dietrich, AboveThresholdFails) {
  const double H = 0.97, eta = tan_abs(H);
  CovarianceModel m = CircularFGN{H, 1.0, eta};
  auto size = embedding_size_from_m(1000, 1000);
  auto r = check_dietrich(slices(m, 1000), size, eta);
  EXPECT_TRUE(r.applicable);
  EXPECT_FALSE(r.stated_condition);
  EXPECT_FALSE(r.passed);
}

TEST(Dietrich, LinearDecreasingRealSequence) {
  std::size_t m = 50;
  CovarianceSlices s;
  for (std::size_t j = 0; j <= m; ++j) s.R.push_back(static_cast<double>(m + 1 - j));
  s.I.assign(m + 1, 0.0);
  auto r = check_dietrich(s, embedding_size_from_m(m + 1, m));
  EXPECT_TRUE(r.applicable);
  EXPECT_DOUBLE_EQ(r.values.at("delta2_R0"), 0.0);
  EXPECT_NEAR(r.values.at("S_m"), 0.0, 1e-9);
  EXPECT_TRUE(r.stated_condition);
  EXPECT_TRUE(r.passed);
}

TEST(Dietrich, WrongShapeNotApplicable) {
  auto size = select_embedding_size(40);
  auto r = check_dietrich(slices(Modulated{0.2, Exponential{}}, size.m), size, 0.5);
  EXPECT_FALSE(r.applicable);
  EXPECT_FALSE(r.passed);
}

TEST(Dietrich, NegativeEtaUsesConjugate) {
  const double H = 0.7, eta = -0.5 * tan_abs(H);
  CovarianceModel m = CircularFGN{H, 1.0, eta};
  auto size = select_embedding_size(300);
  auto r = check_dietrich(slices(m, size.m), size, eta);
  EXPECT_TRUE(r.applicable);
  EXPECT_TRUE(r.flags.at("conjugated"));
  EXPECT_TRUE(r.passed);
}

TEST(Modulated, Exponential) {
  for (std::size_t n : {10u, 100u, 1000u}) {
    auto size = select_embedding_size(n);
    EXPECT_TRUE(check_modulated(Exponential{1.0, 1.0}, size).passed) << n;
    EXPECT_TRUE(check_modulated(Exponential{1.0, 1.0}, size, 0.125).passed) << n;
  }
}

TEST(Modulated, FgnPhaseDependence) {
  auto size = select_embedding_size(500);
  auto with_phase = check_modulated(FGN{0.8, 1.0}, size, 0.125);
  EXPECT_TRUE(with_phase.stated_condition);
  EXPECT_TRUE(with_phase.passed);
  // Without a phase r(m)/sin(π/m̃) ≈ m̃ r(m) dominates Δ²r(0).
  auto all = check_modulated(FGN{0.8, 1.0}, size);
  EXPECT_TRUE(all.stated_condition);
  EXPECT_FALSE(all.passed);
  EXPECT_FALSE(check_modulated(FGN{0.3, 1.0}, size).passed);
  EXPECT_FALSE(check_modulated(FGN{0.3, 1.0}, size).stated_condition);
}

TEST(Modulated, TruncatedPower) {
  auto size = select_embedding_size(100);
  EXPECT_TRUE(check_modulated(TruncatedPower{2.0, 1.0}, size).passed);
  EXPECT_TRUE(check_modulated(TruncatedPower{2.0, 1.0, 20.0}, size).passed);
}

TEST(Modulated, ComplexAR1ViewedAsModulated) {
  CovarianceModel m = ComplexAR1{std::polar(0.6, std::numbers::pi / 4), 1.0, true};
  auto size = select_embedding_size(32);
  auto reports = check_all(m, size);
  bool found = false;
  for (const auto& r : reports)
    if (r.checker == Checker::Modulated) {
      found = true;
      EXPECT_TRUE(r.passed);
    }
  EXPECT_TRUE(found);
  EXPECT_TRUE(certified(m, reports));
}

TEST(CheckAll, SumsCheckedPerTerm) {
  SumOfModulated s{{Modulated{0.1, Exponential{1.0, 1.0}}, Modulated{0.37, FARIMA{0.3, 1.0}}}};
  auto size = select_embedding_size(400);
  auto reports = check_all(s, size);
  bool has0 = false, has1 = false;
  for (const auto& r : reports) {
    has0 = has0 || r.component == 0;
    has1 = has1 || r.component == 1;
    if (r.passed) EXPECT_TRUE(r.applicable);
  }
  EXPECT_TRUE(has0 && has1);
  EXPECT_TRUE(certified(s, reports));
  EXPECT_TRUE(build(s, size).nonnegative());
}

TEST(HTilde, PredicateAndThresholds) {
  EXPECT_TRUE(dietrich_fgn_predicate(0.8, 100));
  EXPECT_FALSE(dietrich_fgn_predicate(0.97, 100));
  EXPECT_NEAR(find_h_tilde(100), 0.939, 0.005);
  EXPECT_NEAR(find_h_tilde(1000), 0.954, 0.005);
  EXPECT_THROW(find_h_tilde(100, 0.01), DomainError);
}

TEST(Soundness, RandomSweep) {
  std::mt19937_64 g(2024);
  std::uniform_int_distribution<std::size_t> N(8, 400);
  int passed_cases = 0;
  for (int i = 0; i < 300; ++i) {
    auto m = tsupport::random_model(g);
    auto size = select_embedding_size(N(g));
    auto reports = check_all(m, size);
    auto e = build(m, size);
    for (const auto& r : reports) {
      if (r.passed) EXPECT_TRUE(r.applicable);
      if (r.passed && r.component < 0) {
        ++passed_cases;
        EXPECT_TRUE(e.nonnegative()) << name(m) << " " << checker_name(r.checker) << " min " << e.min_eig;
      }
    }
    if (certified(m, reports)) EXPECT_TRUE(e.nonnegative()) << name(m);
  }
  EXPECT_GT(passed_cases, 30);
}
