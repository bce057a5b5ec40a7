#include "cembed/oracle.hpp"

#include <cmath>
#include <string>

#include "cembed/errors.hpp"

namespace cembed {

DenseCovariance dense_gamma(const CovarianceModel& model, std::size_t n, std::size_t cap) {
  if (n == 0) throw SizeError("dense_gamma: n must be >= 1");
  if (n > cap)
    throw SizeError("dense_gamma: n = " + std::to_string(n) + " exceeds cap " +
                    std::to_string(cap));
  require_valid(model);
  auto g = gamma_seq(model, n - 1);
  if (std::abs(g[0].imag()) > 1e-12 * std::max(1.0, std::abs(g[0])))
    throw IntegrityError("dense_gamma: gamma(0) is not real");
  if (g[0].real() < 0.0) throw IntegrityError("dense_gamma: gamma(0) < 0");
  DenseCovariance G(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    G(j, j) = cd{g[0].real(), 0.0};
    for (std::size_t k = 0; k < j; ++k) {
      G(j, k) = g[j - k];
      G(k, j) = std::conj(g[j - k]);
    }
  }
  return G;
}

CholeskySampler::CholeskySampler(const DenseCovariance& gamma) {
  const auto n = gamma.rows();
  if (n == 0 || gamma.cols() != n) throw SizeError("CholeskySampler: square non-empty matrix required");
  Eigen::LLT<Eigen::MatrixXcd> llt(gamma);
  if (llt.info() == Eigen::Success) {
    factor_ = llt.matrixL();
    return;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gamma);
  if (es.info() != Eigen::Success) throw FactorizationError("CholeskySampler: eigendecomposition failed");
  const Eigen::VectorXd& ev = es.eigenvalues();
  min_eig_ = ev.minCoeff();
  const double tol = 1e-8 * gamma(0, 0).real();
  if (min_eig_ < -tol)
    throw FactorizationError("CholeskySampler: matrix is indefinite (min eigenvalue " +
                             std::to_string(min_eig_) + ")");
  Eigen::VectorXd root = ev.cwiseMax(0.0).cwiseSqrt();
  factor_ = es.eigenvectors() * root.asDiagonal();
  clamped_ = true;
}

std::vector<cd> CholeskySampler::sample(bool circular, Rng& rng) const {
  const auto n = factor_.rows();
  Eigen::VectorXcd N(n);
  if (circular) {
    const double s = std::sqrt(0.5);
    for (Eigen::Index j = 0; j < n; ++j) {
      double a = rng.normal();
      double b = rng.normal();
      N(j) = cd{s * a, s * b};
    }
  } else {
    for (Eigen::Index j = 0; j < n; ++j) N(j) = cd{rng.normal(), 0.0};
  }
  Eigen::VectorXcd z = factor_ * N;
  return {z.data(), z.data() + n};
}

std::vector<cd> cholesky_simulate(const DenseCovariance& gamma, bool circular, Rng& rng) {
  return CholeskySampler(gamma).sample(circular, rng);
}

CrossCovariances lagged_cross_cov(std::span<const cd> path, std::size_t max_lag) {
  const std::size_t n = path.size();
  if (n == 0) throw SizeError("lagged_cross_cov: empty path");
  if (max_lag >= n) throw SizeError("lagged_cross_cov: max_lag must be < n");
  double mx = 0.0, my = 0.0;
  for (const auto& z : path) {
    mx += z.real();
    my += z.imag();
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  CrossCovariances c;
  c.ri.assign(max_lag + 1, 0.0);
  c.ir.assign(max_lag + 1, 0.0);
  for (std::size_t j = 0; j <= max_lag; ++j) {
    double ri = 0.0, ir = 0.0;
    for (std::size_t t = 0; t + j < n; ++t) {
      ri += (path[t + j].real() - mx) * (path[t].imag() - my);
      ir += (path[t + j].imag() - my) * (path[t].real() - mx);
    }
    c.ri[j] = ri / static_cast<double>(n);
    c.ir[j] = ir / static_cast<double>(n);
  }
  return c;
}

MomentAccumulator::MomentAccumulator(std::size_t n, std::size_t max_lag)
    : n_(n),
      max_lag_(max_lag),
      s_cov_(Eigen::MatrixXcd::Zero(n, n)),
      s_pseudo_(Eigen::MatrixXcd::Zero(n, n)),
      s2_cov_(Eigen::MatrixXcd::Zero(n, n)),
      s2_pseudo_(Eigen::MatrixXcd::Zero(n, n)),
      s_ri_(max_lag + 1, 0.0),
      s_ir_(max_lag + 1, 0.0) {
  if (n == 0) throw SizeError("MomentAccumulator: n must be >= 1");
  if (max_lag >= n) throw SizeError("MomentAccumulator: max_lag must be < n");
}

namespace {

Eigen::MatrixXcd squares(const Eigen::MatrixXcd& P) {
  Eigen::MatrixXcd S(P.rows(), P.cols());
  S.real() = P.real().array().square().matrix();
  S.imag() = P.imag().array().square().matrix();
  return S;
}

Eigen::MatrixXcd standard_errors(const Eigen::MatrixXcd& s, const Eigen::MatrixXcd& s2,
                                 std::size_t count) {
  const double N = static_cast<double>(count);
  Eigen::MatrixXcd se(s.rows(), s.cols());
  for (Eigen::Index j = 0; j < s.rows(); ++j)
    for (Eigen::Index k = 0; k < s.cols(); ++k) {
      double mr = s(j, k).real() / N, mi = s(j, k).imag() / N;
      double vr = std::max(s2(j, k).real() / N - mr * mr, 0.0) * N / (N - 1.0);
      double vi = std::max(s2(j, k).imag() / N - mi * mi, 0.0) * N / (N - 1.0);
      se(j, k) = cd{std::sqrt(vr / N), std::sqrt(vi / N)};
    }
  return se;
}

}  // namespace

void MomentAccumulator::add(std::span<const cd> z) {
  if (z.size() != n_) throw SizeError("MomentAccumulator: path length mismatch");
  Eigen::Map<const Eigen::VectorXcd> v(z.data(), static_cast<Eigen::Index>(n_));
  Eigen::MatrixXcd P = v * v.adjoint();
  Eigen::MatrixXcd Q = v * v.transpose();
  s_cov_ += P;
  s_pseudo_ += Q;
  s2_cov_ += squares(P);
  s2_pseudo_ += squares(Q);
  auto c = lagged_cross_cov(z, max_lag_);
  for (std::size_t j = 0; j <= max_lag_; ++j) {
    s_ri_[j] += c.ri[j];
    s_ir_[j] += c.ir[j];
  }
  ++count_;
}

void MomentAccumulator::merge(const MomentAccumulator& o) {
  if (o.n_ != n_ || o.max_lag_ != max_lag_) throw SizeError("MomentAccumulator: shape mismatch");
  s_cov_ += o.s_cov_;
  s_pseudo_ += o.s_pseudo_;
  s2_cov_ += o.s2_cov_;
  s2_pseudo_ += o.s2_pseudo_;
  for (std::size_t j = 0; j <= max_lag_; ++j) {
    s_ri_[j] += o.s_ri_[j];
    s_ir_[j] += o.s_ir_[j];
  }
  count_ += o.count_;
}

Eigen::MatrixXcd MomentAccumulator::cov() const {
  if (count_ == 0) throw DegenerateError("MomentAccumulator: no samples");
  return s_cov_ / static_cast<double>(count_);
}

Eigen::MatrixXcd MomentAccumulator::pseudo() const {
  if (count_ == 0) throw DegenerateError("MomentAccumulator: no samples");
  return s_pseudo_ / static_cast<double>(count_);
}

Eigen::MatrixXcd MomentAccumulator::cov_se() const {
  if (count_ < 2) throw DegenerateError("MomentAccumulator: need at least 2 samples");
  return standard_errors(s_cov_, s2_cov_, count_);
}

Eigen::MatrixXcd MomentAccumulator::pseudo_se() const {
  if (count_ < 2) throw DegenerateError("MomentAccumulator: need at least 2 samples");
  return standard_errors(s_pseudo_, s2_pseudo_, count_);
}

CrossCovariances MomentAccumulator::cross() const {
  if (count_ == 0) throw DegenerateError("MomentAccumulator: no samples");
  CrossCovariances c{s_ri_, s_ir_};
  for (std::size_t j = 0; j <= max_lag_; ++j) {
    c.ri[j] /= static_cast<double>(count_);
    c.ir[j] /= static_cast<double>(count_);
  }
  return c;
}

EmpiricalMoments moments_of(const MomentAccumulator& acc) {
  EmpiricalMoments m;
  m.count = acc.count();
  m.cov = acc.cov();
  m.pseudo = acc.pseudo();
  if (acc.count() >= 2) {
    m.cov_se = acc.cov_se();
    m.pseudo_se = acc.pseudo_se();
  }
  m.cross = acc.cross();
  return m;
}

EmpiricalMoments empirical_moments(const std::vector<std::vector<cd>>& batch,
                                   std::size_t max_lag) {
  if (batch.empty()) throw SizeError("empirical_moments: empty batch");
  MomentAccumulator acc(batch.front().size(), max_lag);
  for (const auto& z : batch) acc.add(z);
  return moments_of(acc);
}

}  // namespace cembed
