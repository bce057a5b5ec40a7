#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace cembed {

using cd = std::complex<double>;

// Real stationary covariances r(τ), τ ∈ ℤ.

// Increments of fBm: (σ²/2)(|τ−1|^{2H} − 2|τ|^{2H} + |τ+1|^{2H}).
struct FGN {
  double H = 0.7;
  double sigma2 = 1.0;
};

// FARIMA(0,d,0) with innovation variance sigma_eps2, d in [-1/2, 1/2).
struct FARIMA {
  double d = 0.2;
  double sigma_eps2 = 1.0;
};

// σ² e^{−α|τ|}
struct Exponential {
  double alpha = 1.0;
  double sigma2 = 1.0;
};

// σ² (1 + |τ|^α)^{−β}, α in (0,1]
struct GeneralizedCauchy {
  double alpha = 1.0;
  double beta = 1.0;
  double sigma2 = 1.0;
};

// σ² (1 − |τ|/range)₊^exponent
struct TruncatedPower {
  double exponent = 2.0;
  double sigma2 = 1.0;
  double range = 1.0;
};

// σ² ρ^{|τ|}
struct GeometricAR1 {
  double rho = 0.5;
  double sigma2 = 1.0;
};

// σ² exp(−(τ/ℓ)²)
struct GaussianBell {
  double ell = 5.0;
  double sigma2 = 1.0;
};

using RealCovariance = std::variant<FGN, FARIMA, Exponential, GeneralizedCauchy,
                                    TruncatedPower, GeometricAR1, GaussianBell>;

// Complex covariances γ(τ) = E[Z(t+τ) Z(t)*].

struct WhiteNoise {
  double sigma2 = 1.0;
};

// γ(τ) = e^{2iπφτ} r(τ); φ in cycles per sample.
struct Modulated {
  double phi = 0.0;
  RealCovariance base = Exponential{};
};

struct SumOfModulated {
  std::vector<Modulated> terms;
};

// Z(t) − a Z(t−1) = ε(t), Var ε = σ².
struct ComplexAR1 {
  cd a{0.5, 0.0};
  double sigma2 = 1.0;
  bool circular = true;
};

// ½{σ_R² + σ_I² − 2iη σ_R σ_I sign τ} g_H(τ)
struct ComplexFGN {
  double H = 0.7;
  double sigma_r = 1.0;
  double sigma_i = 1.0;
  double eta = 0.0;
};

// σ² (1 − iη sign τ) g_H(τ)
struct CircularFGN {
  double H = 0.7;
  double sigma2 = 1.0;
  double eta = 0.0;
};

// γ(0..m_max) supplied directly; γ(0) must be real.
struct Tabulated {
  std::vector<cd> values;
};

using CovarianceModel = std::variant<WhiteNoise, Modulated, SumOfModulated, ComplexAR1,
                                     ComplexFGN, CircularFGN, Tabulated>;

struct CovarianceSlices {
  std::vector<double> R;  // Re γ(0..m)
  std::vector<double> I;  // Im γ(0..m), I[0] = 0
  std::size_t m() const { return R.empty() ? 0 : R.size() - 1; }
};

// sign with sign(0) = 0
inline double sgn(double x) { return (x > 0) - (x < 0); }
inline double sgn(std::int64_t x) { return (x > 0) - (x < 0); }

// |τ−1|^{2H} − 2|τ|^{2H} + |τ+1|^{2H} for τ ≥ 0 (series form for large τ).
double fgn_second_difference(double H, std::uint64_t tau);

double acvf_real(const RealCovariance& model, std::uint64_t tau);
// r(0..m) in one pass (FARIMA by ratio recursion).
std::vector<double> acvf_real_seq(const RealCovariance& model, std::size_t m);

cd gamma(const CovarianceModel& model, std::int64_t tau);
// γ(0..m)
std::vector<cd> gamma_seq(const CovarianceModel& model, std::size_t m);

std::vector<std::string> validate(const RealCovariance& model);
std::vector<std::string> validate(const CovarianceModel& model);
// Throws DomainError listing every violation.
void require_valid(const RealCovariance& model);
void require_valid(const CovarianceModel& model);

CovarianceModel conjugate_model(const CovarianceModel& model);

CovarianceSlices slices(const CovarianceModel& model, std::size_t m);

std::string name(const RealCovariance& model);
std::string name(const CovarianceModel& model);

}  // namespace cembed
