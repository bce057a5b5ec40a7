#include "cembed/estimate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "cembed/errors.hpp"
#include "cembed/oracle.hpp"
#include "cembed/parallel.hpp"
#include "cembed/simulate.hpp"

namespace cembed {

FilterSpec validate_filter(std::vector<double> coeffs) {
  if (coeffs.size() < 2) throw DomainError("filter: need at least 2 coefficients");
  double scale = 0.0;
  for (double a : coeffs) {
    if (!std::isfinite(a)) throw DomainError("filter: non-finite coefficient");
    scale = std::max(scale, std::abs(a));
  }
  if (scale == 0.0) throw DomainError("filter: all coefficients are zero");
  const std::size_t ell = coeffs.size() - 1;
  int q = 0;
  for (std::size_t l = 0; l <= ell + 1; ++l) {
    double s = 0.0, mag = 0.0;
    for (std::size_t k = 0; k <= ell; ++k) {
      double t = coeffs[k] * std::pow(static_cast<double>(k), static_cast<double>(l));
      if (k == 0 && l == 0) t = coeffs[0];
      s += t;
      mag += std::abs(t);
    }
    if (std::abs(s) <= 1e-12 * mag) {
      ++q;
    } else {
      break;
    }
  }
  if (q == 0) throw DomainError("filter: coefficients do not sum to zero; not a variation filter");
  FilterSpec f;
  f.coeffs = std::move(coeffs);
  f.q = q;
  return f;
}

DilationSet make_dilation_set(std::vector<int> scales) {
  if (scales.size() < 2) throw DomainError("scales: need at least 2 dilation factors");
  for (std::size_t i = 0; i < scales.size(); ++i) {
    if (scales[i] < 1) throw DomainError("scales: dilation factors must be >= 1");
    if (i > 0 && scales[i] <= scales[i - 1])
      throw DomainError("scales: dilation factors must be strictly increasing");
  }
  return DilationSet{std::move(scales)};
}

FilterSpec dilate(const FilterSpec& filter, int mu) {
  if (mu < 1) throw DomainError("dilate: mu must be >= 1");
  FilterSpec out;
  out.q = filter.q;
  out.coeffs.assign(static_cast<std::size_t>(mu) * filter.ell() + 1, 0.0);
  for (std::size_t k = 0; k <= filter.ell(); ++k)
    out.coeffs[k * static_cast<std::size_t>(mu)] = filter.coeffs[k];
  return out;
}

std::vector<cd> filter_path(std::span<const cd> path, const FilterSpec& dilated) {
  const std::size_t L = dilated.ell();
  const std::size_t n = path.size();
  if (n <= L) throw SizeError("filter_path: path shorter than filter support");
  std::vector<cd> out(n - L, cd{0.0, 0.0});
  for (std::size_t k = 0; k <= L; ++k) {
    const double a = dilated.coeffs[k];
    if (a == 0.0) continue;
    for (std::size_t j = L; j < n; ++j) out[j - L] += a * path[j - k];
  }
  return out;
}

std::vector<cd> fbm_path(std::span<const cd> increments) {
  std::vector<cd> p(increments.size() + 1);
  p[0] = 0.0;
  for (std::size_t t = 0; t < increments.size(); ++t) p[t + 1] = p[t] + increments[t];
  return p;
}

std::vector<double> regression_vector(const DilationSet& scales) {
  if (scales.size() < 2) throw DomainError("regression: need at least 2 scales");
  std::vector<double> L(scales.size());
  double mean = 0.0;
  for (std::size_t i = 0; i < L.size(); ++i) {
    L[i] = std::log(static_cast<double>(scales.scales[i]));
    mean += L[i];
  }
  mean /= static_cast<double>(L.size());
  for (auto& x : L) x -= mean;
  return L;
}

double regress_hurst(std::span<const double> s2, const DilationSet& scales) {
  if (s2.size() != scales.size()) throw SizeError("regression: one S^2 per scale required");
  auto L = regression_vector(scales);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < L.size(); ++i) {
    if (!(s2[i] > 0.0)) throw DegenerateError("regression: S^2 must be positive");
    num += L[i] * std::log(s2[i]);
    den += L[i] * L[i];
  }
  return num / (2.0 * den);
}

namespace {

double clamp_h(double H) { return std::clamp(H, 0.005, 0.995); }

// η limited to the validity range |η| <= |tan πH| of the model at H.
double admissible_eta(double H, double eta) {
  const double bound = std::abs(std::tan(std::numbers::pi * H));
  return std::abs(eta) > bound ? std::copysign(bound, eta) : eta;
}

}  // namespace

EstimationResult estimate_hurst(std::span<const cd> path, const FilterSpec& filter,
                                const DilationSet& scales, std::optional<double> eta) {
  if (scales.size() < 2) throw DomainError("estimate: need at least 2 scales");
  const std::size_t n = path.size();
  const std::size_t need = static_cast<std::size_t>(scales.scales.back()) * filter.ell() + 1;
  if (n <= need) throw SizeError("estimate: path too short for the largest scale");
  EstimationResult r;
  r.n = n;
  r.filter = filter;
  r.scales = scales;
  for (int mu : scales.scales) {
    auto y = filter_path(path, dilate(filter, mu));
    double s = 0.0;
    for (const auto& v : y) s += std::norm(v);
    s /= static_cast<double>(y.size());
    if (!(s > 0.0)) throw DegenerateError("estimate: S^2 vanishes at scale " + std::to_string(mu));
    r.s2_per_scale.push_back(s);
  }
  r.h_hat = regress_hurst(r.s2_per_scale, scales);
  if (eta) {
    const double h = clamp_h(r.h_hat);
    auto av = asymptotic_variance(h, admissible_eta(h, *eta), filter, scales);
    r.asymptotic_sd = std::sqrt(av.value / static_cast<double>(n));
  }
  return r;
}

cd filtered_cross_cov(double H, double sigma2, double eta, const FilterSpec& filter, int mu,
                      int mu_prime, long long tau) {
  if (!(H > 0.0 && H < 1.0)) throw DomainError("filtered_cross_cov: H must lie in (0,1)");
  const double e = 2.0 * H;
  double re = 0.0, im = 0.0;
  for (std::size_t q = 0; q <= filter.ell(); ++q)
    for (std::size_t r = 0; r <= filter.ell(); ++r) {
      const long long d = tau + static_cast<long long>(mu_prime) * static_cast<long long>(r) -
                          static_cast<long long>(mu) * static_cast<long long>(q);
      if (d == 0) continue;
      const double p = filter.coeffs[q] * filter.coeffs[r] *
                       std::pow(static_cast<double>(std::llabs(d)), e);
      re += p;
      im -= eta * (d > 0 ? 1.0 : -1.0) * p;
    }
  return -sigma2 * cd{re, im};
}

AsymptoticVariance asymptotic_variance(double H, double eta, const FilterSpec& filter,
                                       const DilationSet& scales) {
  if (scales.size() < 2) throw DomainError("asymptotic_variance: need at least 2 scales");
  if (!(H > 0.0 && H < 1.0)) throw DomainError("asymptotic_variance: H must lie in (0,1)");
  constexpr std::size_t kCap = 100000;
  const std::size_t M = scales.size();
  std::vector<double> v0(M);
  for (std::size_t i = 0; i < M; ++i)
    v0[i] = filtered_cross_cov(H, 1.0, eta, filter, scales.scales[i], scales.scales[i], 0).real();
  AsymptoticVariance out;
  std::vector<double> sigma(M * M, 0.0);
  for (std::size_t i = 0; i < M; ++i)
    for (std::size_t j = i; j < M; ++j) {
      const int mu = scales.scales[i], mup = scales.scales[j];
      const long long support =
          static_cast<long long>(filter.ell()) * (static_cast<long long>(mu) + mup);
      double sum = std::norm(filtered_cross_cov(H, 1.0, eta, filter, mu, mup, 0));
      std::size_t k = 1;
      bool done = false;
      for (; k <= kCap; ++k) {
        const long long kk = static_cast<long long>(k);
        double t = std::norm(filtered_cross_cov(H, 1.0, eta, filter, mu, mup, kk)) +
                   std::norm(filtered_cross_cov(H, 1.0, eta, filter, mu, mup, -kk));
        sum += t;
        if (kk > support && t < 1e-12 * sum) {
          done = true;
          break;
        }
      }
      if (!done) out.converged = false;
      out.terms = std::max(out.terms, std::min(k, kCap));
      sigma[i * M + j] = sigma[j * M + i] = sum / (v0[i] * v0[j]);
    }
  auto L = regression_vector(scales);
  double quad = 0.0, ll = 0.0;
  for (std::size_t i = 0; i < M; ++i) {
    ll += L[i] * L[i];
    for (std::size_t j = 0; j < M; ++j) quad += L[i] * sigma[i * M + j] * L[j];
  }
  out.value = quad / (4.0 * ll * ll);
  return out;
}

AsymptoticSdCache::AsymptoticSdCache(double eta, FilterSpec filter, DilationSet scales,
                                     double step)
    : eta_(eta), filter_(std::move(filter)), scales_(std::move(scales)), step_(step) {
  if (!(step > 0.0 && step <= 0.05)) throw DomainError("AsymptoticSdCache: step must be in (0, 0.05]");
}

double AsymptoticSdCache::node(long long i) const {
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = nodes_.find(i);
    if (it != nodes_.end()) return it->second;
  }
  const double h = static_cast<double>(i) * step_;
  double v = std::sqrt(asymptotic_variance(h, admissible_eta(h, eta_), filter_, scales_).value);
  std::lock_guard<std::mutex> lock(mu_);
  nodes_.emplace(i, v);
  return v;
}

double AsymptoticSdCache::sd(double H) const {
  const long long lo = static_cast<long long>(std::ceil(0.005 / step_ - 1e-9));
  const long long hi = static_cast<long long>(std::floor(0.995 / step_ + 1e-9));
  double x = std::clamp(H / step_, static_cast<double>(lo), static_cast<double>(hi));
  long long i = std::min(static_cast<long long>(std::floor(x)), hi - 1);
  double t = x - static_cast<double>(i);
  return (1.0 - t) * node(i) + t * node(i + 1);
}

std::string ci_method_name(CiMethod m) {
  switch (m) {
    case CiMethod::Clt:
      return "clt";
    case CiMethod::Ppb:
      return "ppb";
    case CiMethod::Spb:
      return "spb";
  }
  return "?";
}

CiMethod parse_ci_method(const std::string& s) {
  if (s == "clt") return CiMethod::Clt;
  if (s == "ppb") return CiMethod::Ppb;
  if (s == "spb") return CiMethod::Spb;
  throw DomainError("unknown CI method '" + s + "' (expected clt, ppb or spb)");
}

BootstrapFallback parse_bootstrap_fallback(const std::string& s) {
  if (s == "propagate") return BootstrapFallback::Propagate;
  if (s == "dense") return BootstrapFallback::Dense;
  if (s == "approx" || s == "approximate") return BootstrapFallback::Approximate;
  throw DomainError("unknown bootstrap fallback '" + s + "' (expected propagate, dense or approx)");
}

double sample_quantile(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw SizeError("sample_quantile: empty data");
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("sample_quantile: p must lie in [0,1]");
  const double h = p * static_cast<double>(sorted.size() - 1);
  const auto i = static_cast<std::size_t>(std::floor(h));
  if (i + 1 >= sorted.size()) return sorted.back();
  return sorted[i] + (h - static_cast<double>(i)) * (sorted[i + 1] - sorted[i]);
}

BootstrapSample bootstrap_replicates(double h_hat, std::size_t n, const FilterSpec& filter,
                                     const DilationSet& scales, const BootstrapOptions& opts) {
  if (opts.B < 100) throw DomainError("bootstrap: B must be >= 100");
  if (n < 3) throw SizeError("bootstrap: path too short");
  BootstrapSample bs;
  double h = clamp_h(h_hat);
  if (std::abs(h - 0.5) < 1e-6) h = 0.5 + 1e-6;
  const double eta = admissible_eta(h, opts.eta);
  bs.eta_clipped = eta != opts.eta;
  bs.h_fit = h;
  bs.eta_fit = eta;
  const CovarianceModel model = CircularFGN{h, opts.sigma2, eta};
  const std::size_t len = n - 1;  // increments per replicate

  std::unique_ptr<CirculantSampler> circ;
  std::unique_ptr<CholeskySampler> dense;
  try {
    circ = std::make_unique<CirculantSampler>(model, len, GrowRetry{});
    bs.sampler = "circulant";
  } catch (const EmbeddingFailure& e) {
    switch (opts.fallback) {
      case BootstrapFallback::Propagate:
        throw EmbeddingFailure("bootstrap resimulation of circular fGn (H = " + std::to_string(h) +
                                   ", eta = " + std::to_string(eta) + "): " + e.what(),
                               e.size, e.min_eig, e.max_eig, e.negative_count);
      case BootstrapFallback::Dense:
        dense = std::make_unique<CholeskySampler>(dense_gamma(model, len));
        bs.sampler = "dense";
        break;
      case BootstrapFallback::Approximate:
        circ = std::make_unique<CirculantSampler>(model, len, Approximate{});
        bs.sampler = "approximate";
        break;
    }
  }

  bs.h_star.assign(opts.B, 0.0);
  parallel_for(opts.B, opts.threads, [&](std::size_t b) {
    Rng rng(opts.seed, b);
    std::vector<cd> inc =
        circ ? circ->sample(NoiseKind::CircularStandard, rng) : dense->sample(true, rng);
    auto path = fbm_path(inc);
    bs.h_star[b] = estimate_hurst(path, filter, scales).h_hat;
  });
  return bs;
}

std::vector<ConfidenceInterval> confidence_intervals(std::span<const cd> path,
                                                     const FilterSpec& filter,
                                                     const DilationSet& scales,
                                                     const std::vector<CiMethod>& methods,
                                                     double level, const BootstrapOptions& opts) {
  if (!(level >= 0.0 && level < 1.0)) throw DomainError("confidence interval: level must lie in [0,1)");
  const std::size_t n = path.size();
  auto est = estimate_hurst(path, filter, scales);
  const double h_hat = est.h_hat;
  const double sqrt_n = std::sqrt(static_cast<double>(n));

  std::unique_ptr<AsymptoticSdCache> own_cache;
  const AsymptoticSdCache* cache = opts.sd_cache;
  auto sd_at = [&](double H) {
    if (!cache) {
      own_cache = std::make_unique<AsymptoticSdCache>(opts.eta, filter, scales, opts.sd_grid_step);
      cache = own_cache.get();
    }
    return cache->sd(H) / sqrt_n;
  };
  const double h_sd = clamp_h(h_hat);
  const double sd_hat =
      std::sqrt(asymptotic_variance(h_sd, admissible_eta(h_sd, opts.eta), filter, scales).value) /
      sqrt_n;
  const double z = normal_quantile(0.5 + 0.5 * level);
  const double alpha = 1.0 - level;

  bool need_boot = std::any_of(methods.begin(), methods.end(),
                               [](CiMethod m) { return m != CiMethod::Clt; });
  BootstrapSample bs;
  std::vector<double> sorted;
  if (need_boot) {
    bs = bootstrap_replicates(h_hat, n, filter, scales, opts);
    sorted = bs.h_star;
    std::sort(sorted.begin(), sorted.end());
  }

  std::vector<ConfidenceInterval> out;
  for (CiMethod m : methods) {
    ConfidenceInterval ci;
    ci.method = m;
    ci.level = level;
    ci.h_hat = h_hat;
    ci.sd = sd_hat;
    switch (m) {
      case CiMethod::Clt:
        ci.lower = h_hat - z * sd_hat;
        ci.upper = h_hat + z * sd_hat;
        break;
      case CiMethod::Ppb:
        ci.lower = sample_quantile(sorted, alpha / 2.0);
        ci.upper = sample_quantile(sorted, 1.0 - alpha / 2.0);
        break;
      case CiMethod::Spb: {
        std::vector<double> t(bs.h_star.size());
        for (std::size_t b = 0; b < t.size(); ++b)
          t[b] = (bs.h_star[b] - bs.h_fit) / sd_at(bs.h_star[b]);
        std::sort(t.begin(), t.end());
        ci.lower = h_hat - sample_quantile(t, 1.0 - alpha / 2.0) * sd_hat;
        ci.upper = h_hat - sample_quantile(t, alpha / 2.0) * sd_hat;
        break;
      }
    }
    if (m != CiMethod::Clt) {
      ci.bootstrap_reps = opts.B;
      ci.eta_clipped = bs.eta_clipped;
      ci.sampler = bs.sampler;
    }
    out.push_back(ci);
  }
  return out;
}

ConfidenceInterval confidence_interval(std::span<const cd> path, const FilterSpec& filter,
                                       const DilationSet& scales, CiMethod method, double level,
                                       const BootstrapOptions& opts) {
  return confidence_intervals(path, filter, scales, {method}, level, opts).front();
}

}  // namespace cembed
