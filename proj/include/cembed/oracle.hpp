#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <span>
#include <vector>

#include "cembed/covmodels.hpp"
#include "cembed/rng.hpp"

namespace cembed {

using DenseCovariance = Eigen::MatrixXcd;

// Γ_{jk} = γ(j−k). Hermitian Toeplitz by construction.
DenseCovariance dense_gamma(const CovarianceModel& model, std::size_t n, std::size_t cap = 4096);

// Γ = LL* by Cholesky; falls back to an eigendecomposition with eigenvalues in
// [−1e−8·γ(0), 0) clamped to 0. Below that, FactorizationError.
class CholeskySampler {
 public:
  explicit CholeskySampler(const DenseCovariance& gamma);

  // circular = false: Z = L·N, N real standard (pseudo-covariance LLᵀ).
  // circular = true: N = (S + iT)/√2 (pseudo-covariance 0).
  std::vector<cd> sample(bool circular, Rng& rng) const;
  std::size_t n() const { return static_cast<std::size_t>(factor_.rows()); }
  const Eigen::MatrixXcd& factor() const { return factor_; }
  bool clamped() const { return clamped_; }
  double min_eig() const { return min_eig_; }

 private:
  Eigen::MatrixXcd factor_;
  bool clamped_ = false;
  double min_eig_ = 0.0;  // only set on the eigendecomposition path
};

std::vector<cd> cholesky_simulate(const DenseCovariance& gamma, bool circular, Rng& rng);

// γ̂_{RI}(j) = n⁻¹ Σ_t (X(t+j) − X̄)(Y(t) − Ȳ), γ̂_{IR}(j) likewise with X, Y swapped,
// X = Re Z, Y = Im Z, j = 0..max_lag.
struct CrossCovariances {
  std::vector<double> ri;
  std::vector<double> ir;
};
CrossCovariances lagged_cross_cov(std::span<const cd> path, std::size_t max_lag);

// Running sums of Z Z* and Z Zᵀ (zero mean assumed) with per-entry standard
// errors of the real and imaginary parts.
class MomentAccumulator {
 public:
  explicit MomentAccumulator(std::size_t n, std::size_t max_lag = 0);
  void add(std::span<const cd> z);
  void merge(const MomentAccumulator& other);
  std::size_t count() const { return count_; }
  std::size_t n() const { return n_; }

  Eigen::MatrixXcd cov() const;
  Eigen::MatrixXcd pseudo() const;
  // SE of the mean of Re and Im of Z_j Z_k^* (resp. Z_j Z_k), stored as complex (se_re, se_im).
  Eigen::MatrixXcd cov_se() const;
  Eigen::MatrixXcd pseudo_se() const;
  // Per-path lagged cross-covariances averaged over the batch.
  CrossCovariances cross() const;

 private:
  std::size_t n_;
  std::size_t max_lag_;
  std::size_t count_ = 0;
  Eigen::MatrixXcd s_cov_, s_pseudo_;
  Eigen::MatrixXcd s2_cov_, s2_pseudo_;  // (Σ Re², Σ Im²) packed as complex
  std::vector<double> s_ri_, s_ir_;
};

struct EmpiricalMoments {
  Eigen::MatrixXcd cov;
  Eigen::MatrixXcd pseudo;
  Eigen::MatrixXcd cov_se;
  Eigen::MatrixXcd pseudo_se;
  CrossCovariances cross;
  std::size_t count = 0;
};

EmpiricalMoments empirical_moments(const std::vector<std::vector<cd>>& batch,
                                   std::size_t max_lag = 0);
EmpiricalMoments moments_of(const MomentAccumulator& acc);

}  // namespace cembed
