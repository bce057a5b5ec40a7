#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "cembed/embedding.hpp"
#include "cembed/errors.hpp"
#include "cembed/oracle.hpp"
#include "support.hpp"

using namespace cembed;

namespace {

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double max_rel_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) d = std::max(d, std::abs(a[k] - b[k]));
  return d / max_abs(a);
}

bool brute_smooth(std::size_t x) {
  for (std::size_t p = 2; p * p <= x; ++p)
    while (x % p == 0) {
      if (p != 3 && p != 5 && p != 7 && p != 11) return false;
      x /= p;
    }
  return x == 1 || x == 3 || x == 5 || x == 7 || x == 11;
}

}  // namespace

TEST(EmbeddingSize, Examples) {
  auto s3 = select_embedding_size(3);
  EXPECT_EQ(s3.m_tilde, 5u);
  EXPECT_EQ(s3.m, 2u);
  auto s1000 = select_embedding_size(1000);
  EXPECT_EQ(s1000.m_tilde, 2025u);
  EXPECT_EQ(s1000.m, 1012u);
  auto s2 = select_embedding_size(2);
  EXPECT_EQ(s2.m_tilde, 3u);
  EXPECT_EQ(s2.m, 1u);
  EXPECT_EQ(select_embedding_size(500).m_tilde, 1029u);
  EXPECT_THROW(select_embedding_size(1), DomainError);
}

TEST(EmbeddingSize, ExhaustiveMinimality) {
  for (std::size_t n = 2; n <= 3000; ++n) {
    auto s = select_embedding_size(n);
    ASSERT_TRUE(brute_smooth(s.m_tilde)) << n;
    ASSERT_GE(s.m_tilde, 2 * n - 1);
    ASSERT_EQ(s.m_tilde, 2 * s.m + 1);
    for (std::size_t x = 2 * n - 1; x < s.m_tilde; ++x) ASSERT_FALSE(brute_smooth(x)) << x;
  }
  EXPECT_TRUE(is_smooth(1029));
  EXPECT_FALSE(is_smooth(1024));
  EXPECT_EQ(next_smooth(1999), 2025u);
}

TEST(EmbeddingSize, GrowAndExplicit) {
  auto s = select_embedding_size(500);
  auto g = grow_embedding_size(s);
  EXPECT_TRUE(is_smooth(g.m_tilde));
  EXPECT_GE(g.m_tilde, 2 * s.m_tilde);
  EXPECT_EQ(g.n, 500u);
  auto e = embedding_size_from_m(10, 12);
  EXPECT_EQ(e.m_tilde, 25u);
  EXPECT_THROW(embedding_size_from_m(10, 8), SizeError);
}

TEST(Build, WhiteNoiseIsIdentity) {
  auto e = build(WhiteNoise{1.0}, select_embedding_size(37));
  for (double l : e.eigenvalues) EXPECT_NEAR(l, 1.0, 1e-13);
  EXPECT_TRUE(e.nonnegative());
}

TEST(Build, FirstRowStructureAndTrace) {
  for (const auto& m : tsupport::zoo()) {
    auto size = select_embedding_size(40);
    auto e = build(m, size);
    const auto& c = e.first_row;
    EXPECT_EQ(c[0].imag(), 0.0);
    for (std::size_t j = 1; j <= size.m; ++j) {
      const double tol = 1e-15 * c[0].real();
      EXPECT_LE(std::abs(c[j] - std::conj(gamma(m, static_cast<std::int64_t>(j)))), tol);
      EXPECT_LE(std::abs(c[size.m_tilde - j] - std::conj(c[j])), tol);
    }
    double tr = 0.0;
    for (double l : eigenvalues_fft(c)) tr += l;
    EXPECT_NEAR(tr, size.m_tilde * c[0].real(), 1e-8 * size.m_tilde * c[0].real()) << name(m);
  }
}

TEST(Build, ModulatedFarimaNonNegative) {
  auto e = build(Modulated{0.125, FARIMA{0.2, 1.0}}, select_embedding_size(500));
  EXPECT_EQ(e.size.m_tilde, 1029u);
  EXPECT_TRUE(e.nonnegative());
  EXPECT_GE(e.min_eig, -e.neg_tolerance);
}

TEST(Build, TopLeftBlockIsDenseGamma) {
  for (const auto& m : tsupport::zoo())
    for (std::size_t n : {2u, 9u, 32u}) {
      auto size = select_embedding_size(n);
      auto e = build(m, size);
      auto G = dense_gamma(m, n);
      const std::size_t N = size.m_tilde;
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k)
          ASSERT_LE(std::abs(e.first_row[(k + N - j) % N] - G(j, k)), 1e-14 * G(0, 0).real()) << name(m);
    }
}

TEST(Eigenvalues, DeltaRow) {
  std::vector<cd> c(9, cd{0.0, 0.0});
  c[0] = 1.0;
  for (double l : eigenvalues_fft(c)) EXPECT_NEAR(l, 1.0, 1e-15);
}

TEST(Eigenvalues, NonHermitianRowRejected) {
  std::vector<cd> c(7, cd{0.0, 0.0});
  c[0] = 1.0;
  c[1] = cd{0.3, 0.0};
  EXPECT_THROW(eigenvalues_fft(c), IntegrityError);
}

TEST(Eigenvalues, ClampingTolerance) {
  // λ = (1, 1, 1) + δ(−1e-12) stays exact; −1e-3 is a genuine negative.
  std::vector<cd> c{cd{1.0, 0.0}, cd{0.0, 0.0}, cd{0.0, 0.0}};
  auto e = build_from_first_row(c, 2);
  EXPECT_TRUE(e.nonnegative());
  std::vector<cd> bad{cd{0.2, 0.0}, cd{0.5, 0.0}, cd{0.5, 0.0}};
  auto b = build_from_first_row(bad, 2);
  EXPECT_EQ(b.negative_count, 2u);
  EXPECT_NEAR(b.min_eig, -0.3, 1e-14);
}

TEST(Eigenvalues, ThreeWayEquivalenceOnZoo) {
  for (const auto& m : tsupport::zoo())
    for (std::size_t n : {4u, 50u, 200u}) {
      auto size = select_embedding_size(n);
      ASSERT_LE(size.m_tilde, 512u);
      auto s = slices(m, size.m);
      auto fft = eigenvalues_fft(circulant_first_row(m, size));
      auto direct = eigenvalues_direct(s, size);
      auto kernel = eigenvalues_kernel_form(s, size);
      auto fast = eigenvalues_kernel_form_fast(s, size);
      EXPECT_LE(max_rel_diff(fft, direct), 1e-8) << name(m);
      EXPECT_LE(max_rel_diff(fft, kernel), 1e-6) << name(m);
      EXPECT_LE(max_rel_diff(fft, fast.value), 1e-6) << name(m);
      for (std::size_t k = 0; k < fft.size(); ++k)
        EXPECT_LE(std::abs(fft[k] - fast.value[k]), fast.error[k] + 1e-12 * max_abs(fft)) << name(m);
    }
}

TEST(Eigenvalues, RandomModelsDirectOracle) {
  std::mt19937_64 g(7);
  for (int i = 0; i < 60; ++i) {
    auto m = tsupport::random_model(g);
    auto size = select_embedding_size(2 + i * 4);
    if (size.m_tilde > 512) break;
    auto fft = eigenvalues_fft(circulant_first_row(m, size));
    auto direct = eigenvalues_direct(slices(m, size.m), size);
    EXPECT_LE(max_rel_diff(fft, direct), 1e-8) << name(m);
  }
}

TEST(Eigenvalues, KZeroAndRealCase) {
  auto m = Modulated{0.0, FGN{0.8, 1.0}};
  auto size = select_embedding_size(100);
  auto s = slices(m, size.m);
  auto d = eigenvalues_direct(s, size);
  double l0 = s.R[0];
  for (std::size_t j = 1; j <= size.m; ++j) l0 += 2.0 * s.R[j];
  EXPECT_NEAR(d[0], l0, 1e-12 * std::abs(l0));
  for (std::size_t j = 0; j <= size.m; ++j) EXPECT_EQ(s.I[j], 0.0);
  auto fgn = slices(Modulated{0.0, FGN{0.8, 1.0}}, 202);
  auto sz = embedding_size_from_m(100, 202);
  EXPECT_LE(max_rel_diff(eigenvalues_direct(fgn, sz), eigenvalues_kernel_form(fgn, sz)), 1e-6);
}

TEST(Eigenvalues, WhiteNoiseKernelForm) {
  auto size = select_embedding_size(20);
  auto k = eigenvalues_kernel_form(slices(WhiteNoise{2.5}, size.m), size);
  for (double l : k) EXPECT_NEAR(l, 2.5, 1e-12);
}

TEST(Eigenvalues, ConjugateReversesSpectrum) {
  for (const auto& m : tsupport::zoo()) {
    auto size = select_embedding_size(60);
    auto a = eigenvalues_fft(circulant_first_row(m, size));
    auto b = eigenvalues_fft(circulant_first_row(conjugate_model(m), size));
    for (std::size_t k = 1; k < size.m_tilde; ++k)
      EXPECT_NEAR(b[k], a[size.m_tilde - k], 1e-10 * max_abs(a)) << name(m);
  }
}

TEST(Eigenvalues, AdditivityForSums) {
  Modulated a{0.1, Exponential{1.0, 1.0}}, b{-0.2, FARIMA{0.3, 0.5}}, c{0.4, FGN{0.3, 0.7}};
  SumOfModulated s{{a, b, c}};
  auto size = select_embedding_size(300);
  auto ls = eigenvalues_fft(circulant_first_row(s, size));
  auto la = eigenvalues_fft(circulant_first_row(a, size));
  auto lb = eigenvalues_fft(circulant_first_row(b, size));
  auto lc = eigenvalues_fft(circulant_first_row(c, size));
  for (std::size_t k = 0; k < ls.size(); ++k) EXPECT_NEAR(ls[k], la[k] + lb[k] + lc[k], 1e-10 * max_abs(ls));
}

TEST(SumS, FftMatchesDirect) {
  std::mt19937_64 g(13);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (std::size_t m : {4u, 17u, 120u, 400u}) {
    std::vector<double> R(m + 1), I(m + 1);
    for (std::size_t j = 0; j <= m; ++j) {
      R[j] = U(g);
      I[j] = j ? U(g) : 0.0;
    }
    for (bool restricted : {true, false}) {
      double a = s_m_fft(R, I, 2 * m + 1, restricted);
      double b = s_m_direct(R, I, 2 * m + 1, restricted);
      EXPECT_NEAR(a, b, 1e-9 * std::max(1.0, std::abs(b))) << m;
    }
  }
}

TEST(SumS, RestrictedVersusFullOnFgn) {
  // Remark 1: kernels are non-negative on the first half, so restricting k loses nothing
  // when the weights are non-negative.
  for (double H : {0.6, 0.8, 0.9}) {
    std::size_t m = 300;
    std::vector<double> R(m + 1), I(m + 1, 0.0);
    double eta = tsupport::tan_abs(H);
    for (std::size_t j = 0; j <= m; ++j) R[j] = fgn_second_difference(H, j);
    for (std::size_t j = 1; j <= m; ++j) I[j] = -eta * R[j];
    double r = s_m_fft(R, I, 2 * m + 1, true);
    double f = s_m_fft(R, I, 2 * m + 1, false);
    EXPECT_LE(f, r + 1e-12);
    EXPECT_NEAR(f, r, 1e-9 * std::max(1.0, std::abs(r))) << H;
  }
}
