#include "cembed/simulate.hpp"

#include <boost/math/distributions/normal.hpp>
#include <cmath>
#include <numeric>
#include <sstream>

#include "cembed/errors.hpp"
#include "cembed/parallel.hpp"

namespace cembed {

namespace {

std::vector<double> amplitudes(std::span<const double> lambda) {
  const std::size_t N = lambda.size();
  if (N < 3 || N % 2 == 0) throw SizeError("spectral weights: length must be odd and >= 3");
  std::vector<double> a(N);
  for (std::size_t k = 0; k < N; ++k) {
    if (lambda[k] < 0.0)
      throw DomainError("spectral weights: negative eigenvalue at k = " + std::to_string(k) +
                        "; approximate the spectrum first");
    a[k] = std::sqrt(lambda[k] / (2.0 * static_cast<double>(N)));
  }
  return a;
}

void fill_weights(std::span<const double> a, NoiseKind kind, Rng& rng, cd* W) {
  const std::size_t N = a.size(), m = (N - 1) / 2;
  if (kind == NoiseKind::RealStandard) {
    for (std::size_t k = 0; k <= m; ++k) {
      double S = rng.normal();
      double T = rng.normal();
      W[k] = a[k] * cd{S, T};
      if (k > 0) W[N - k] = a[N - k] * cd{S, -T};
    }
  } else {
    for (std::size_t k = 0; k < N; ++k) {
      double S = rng.normal();
      double T = rng.normal();
      W[k] = a[k] * cd{S, T};
    }
  }
}

std::string describe_failure(const CirculantEmbedding& e, int doublings) {
  std::ostringstream os;
  os << "embedding has " << e.negative_count << " negative eigenvalues (min " << e.min_eig
     << ", max " << e.max_eig << ") at m_tilde = " << e.size.m_tilde << " after " << doublings
     << " doublings";
  return os.str();
}

}  // namespace

std::vector<cd> sample_spectral_weights(std::span<const double> lambda, NoiseKind kind, Rng& rng) {
  auto a = amplitudes(lambda);
  std::vector<cd> W(a.size());
  fill_weights(a, kind, rng, W.data());
  return W;
}

std::vector<cd> reconstruct(std::span<const cd> W, std::size_t n) {
  const std::size_t N = W.size();
  if (N == 0 || n > (N + 1) / 2)
    throw SizeError("reconstruct: n must be <= (m_tilde + 1)/2");
  auto z = dft(W, FftDirection::Forward);
  z.resize(n);
  return z;
}

std::pair<std::vector<double>, double> approximate(std::span<const double> lambda) {
  double total = 0.0, pos = 0.0;
  for (double l : lambda) {
    total += l;
    if (l > 0.0) pos += l;
  }
  if (!(pos > 0.0)) throw DegenerateError("approximate: no positive eigenvalue");
  if (!(total > 0.0)) throw DegenerateError("approximate: non-positive trace");
  const double phi = total / pos;
  std::vector<double> out(lambda.size());
  for (std::size_t k = 0; k < lambda.size(); ++k) out[k] = lambda[k] > 0.0 ? phi * lambda[k] : 0.0;
  return {std::move(out), phi};
}

std::vector<cd> relation_first_row(std::span<const double> lambda) {
  const std::size_t N = lambda.size();
  if (N < 3 || N % 2 == 0) throw SizeError("relation_first_row: length must be odd and >= 3");
  std::vector<cd> v(N, cd{0.0, 0.0});
  for (std::size_t k = 1; k < N; ++k)
    v[k] = std::sqrt(std::max(lambda[k], 0.0) * std::max(lambda[N - k], 0.0));
  auto h = dft(v, FftDirection::Forward);
  for (auto& x : h) x /= static_cast<double>(N);
  return h;
}

CirculantSampler::CirculantSampler(const CovarianceModel& model, std::size_t n,
                                   const Policy& policy)
    : n_(n) {
  require_valid(model);
  EmbeddingSize size = select_embedding_size(n);
  emb_ = build(model, size);
  if (!emb_.nonnegative()) {
    if (const auto* g = std::get_if<GrowRetry>(&policy)) {
      while (!emb_.nonnegative() && doublings_ < g->max_doublings) {
        size = grow_embedding_size(size);
        emb_ = build(model, size);
        ++doublings_;
      }
      if (!emb_.nonnegative())
        throw EmbeddingFailure(describe_failure(emb_, doublings_), emb_.size, emb_.min_eig,
                               emb_.max_eig, emb_.negative_count);
    } else {
      auto [lam, phi] = approximate(emb_.eigenvalues);
      lambda_ = std::move(lam);
      phi_scale_ = phi;
      exact_ = false;
    }
  }
  if (exact_) lambda_ = emb_.eigenvalues;
  amp_ = amplitudes(lambda_);
  plan_ = std::make_shared<FftPlan>(emb_.size.m_tilde, FftDirection::Forward);
}

CirculantSampler::CirculantSampler(CirculantEmbedding embedding)
    : n_(embedding.size.n), emb_(std::move(embedding)) {
  if (!emb_.nonnegative())
    throw EmbeddingFailure(describe_failure(emb_, 0), emb_.size, emb_.min_eig, emb_.max_eig,
                           emb_.negative_count);
  lambda_ = emb_.eigenvalues;
  amp_ = amplitudes(lambda_);
  plan_ = std::make_shared<FftPlan>(emb_.size.m_tilde, FftDirection::Forward);
}

std::vector<cd> CirculantSampler::sample(NoiseKind kind, Rng& rng) const {
  const std::size_t N = amp_.size();
  std::vector<cd> W(N), Z(N);
  fill_weights(amp_, kind, rng, W.data());
  plan_->execute(W.data(), Z.data());
  Z.resize(n_);
  return Z;
}

SimulationOutput simulate(const CovarianceModel& model, std::size_t n, NoiseKind kind,
                          const Policy& policy, Rng& rng) {
  CirculantSampler sampler(model, n, policy);
  SimulationOutput out;
  out.z = sampler.sample(kind, rng);
  out.noise = kind;
  out.exact = sampler.exact();
  out.phi_scale = sampler.phi_scale();
  out.seed = rng.seed();
  out.stream = rng.stream();
  out.size = sampler.embedding().size;
  return out;
}

std::vector<SimulationOutput> simulate_batch(const CovarianceModel& model, std::size_t n,
                                             NoiseKind kind, const Policy& policy,
                                             std::uint64_t seed, std::size_t reps,
                                             unsigned threads) {
  CirculantSampler sampler(model, n, policy);
  std::vector<SimulationOutput> out(reps);
  parallel_for(reps, threads, [&](std::size_t r) {
    Rng rng(seed, r);
    auto& o = out[r];
    o.z = sampler.sample(kind, rng);
    o.noise = kind;
    o.exact = sampler.exact();
    o.phi_scale = sampler.phi_scale();
    o.seed = seed;
    o.stream = r;
    o.size = sampler.embedding().size;
  });
  return out;
}

ComponentVariances independent_difference_variances(double gamma0, std::size_t n) {
  if (gamma0 < 0.0) throw DomainError("variances: gamma(0) must be >= 0");
  ComponentVariances v;
  v.s.assign(n, std::sqrt(2.0 * gamma0));
  v.s_re.assign(n, std::sqrt(gamma0));
  v.s_im.assign(n, std::sqrt(gamma0));
  return v;
}

ComponentVariances covariance_difference_variances(double gamma0,
                                                   std::span<const double> lambda_app,
                                                   std::size_t n) {
  if (lambda_app.empty()) throw SizeError("variances: empty spectrum");
  double diag = std::accumulate(lambda_app.begin(), lambda_app.end(), 0.0) /
                static_cast<double>(lambda_app.size());
  double d = std::max(gamma0 - diag, 0.0);
  ComponentVariances v;
  v.s.assign(n, std::sqrt(d));
  v.s_re.assign(n, std::sqrt(0.5 * d));
  v.s_im.assign(n, std::sqrt(0.5 * d));
  return v;
}

ErrorBoundCurve error_bound(std::span<const double> x_grid, const ComponentVariances& variances,
                            std::size_t n) {
  if (variances.s.size() < n || variances.s_re.size() < n || variances.s_im.size() < n)
    throw SizeError("error_bound: need variances for n coordinates");
  for (std::size_t j = 0; j < n; ++j)
    if (!(variances.s[j] >= 0.0 && variances.s_re[j] >= 0.0 && variances.s_im[j] >= 0.0))
      throw DomainError("error_bound: variances must be non-negative");
  ErrorBoundCurve c;
  c.x_grid.assign(x_grid.begin(), x_grid.end());
  c.variances = variances;
  c.bound.resize(x_grid.size());
  for (std::size_t i = 0; i < x_grid.size(); ++i) {
    const double x = x_grid[i];
    if (!(x > 0.0)) throw DomainError("error_bound: x must be positive");
    double logp = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      for (double sc : {variances.s_re[j], variances.s_im[j]}) {
        if (sc <= 0.0) continue;
        // 2Φ(y) − 1 = erf(y/√2), y = x s_j/(s_c √2)
        double y = x * variances.s[j] / (2.0 * sc);
        logp += std::log1p(-std::erfc(y));
      }
    }
    c.bound[i] = -std::expm1(logp);
  }
  return c;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("normal_quantile: p must lie in (0,1)");
  return boost::math::quantile(boost::math::normal_distribution<double>(), p);
}

}  // namespace cembed
