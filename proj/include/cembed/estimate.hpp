#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cembed/covmodels.hpp"

namespace cembed {

// Filter a_0..a_ℓ with vanishing moments Σ k^l a_k = 0 for l < q, Σ k^q a_k ≠ 0.
struct FilterSpec {
  std::vector<double> coeffs;
  int q = 0;
  std::size_t ell() const { return coeffs.empty() ? 0 : coeffs.size() - 1; }
};

// Strictly increasing positive scales, at least two.
struct DilationSet {
  std::vector<int> scales;
  std::size_t size() const { return scales.size(); }
};

FilterSpec validate_filter(std::vector<double> coeffs);
DilationSet make_dilation_set(std::vector<int> scales);
// a^μ_k = a_{k/μ} if μ | k, else 0.
FilterSpec dilate(const FilterSpec& filter, int mu);
// Z̃^μ(j) = Σ_{k=0}^{μℓ} a^μ_k Z̃(j−k), j = μℓ..n−1.
std::vector<cd> filter_path(std::span<const cd> path, const FilterSpec& dilated);
// Z̃(0) = 0, Z̃(t) = Σ_{s<t} increments(s); length n+1.
std::vector<cd> fbm_path(std::span<const cd> increments);

// L = log μ − mean(log μ)
std::vector<double> regression_vector(const DilationSet& scales);
// Ĥ = Lᵀ log S² / (2 LᵀL)
double regress_hurst(std::span<const double> s2, const DilationSet& scales);

struct EstimationResult {
  double h_hat = 0.0;
  std::vector<double> s2_per_scale;
  std::optional<double> asymptotic_sd;  // sd of Ĥ, needs η
  std::size_t n = 0;
  FilterSpec filter;
  DilationSet scales;
};

EstimationResult estimate_hurst(std::span<const cd> path, const FilterSpec& filter,
                                const DilationSet& scales,
                                std::optional<double> eta = std::nullopt);

// −σ² Σ_{q,r} a_q a_r (1 − iη sign d) |d|^{2H}, d = τ + μ′r − μq.
cd filtered_cross_cov(double H, double sigma2, double eta, const FilterSpec& filter, int mu,
                      int mu_prime, long long tau);

struct AsymptoticVariance {
  double value = 0.0;  // variance of √n(Ĥ − H)
  bool converged = true;
  std::size_t terms = 0;  // largest |k| summed
};

// (Σ_M)_{μμ′} = Σ_k |γ_{μμ′}(k)|² / (γ_μ(0) γ_{μ′}(0)); value = LᵀΣ_M L / (4 (LᵀL)²).
// Truncated once a term falls below 1e−12 of the partial sum, capped at |k| = 10⁵.
AsymptoticVariance asymptotic_variance(double H, double eta, const FilterSpec& filter,
                                       const DilationSet& scales);

// Linear interpolation of sqrt(asymptotic_variance) over an H grid, filled lazily.
// η is clipped to |tan πH| at nodes where it exceeds the validity range.
class AsymptoticSdCache {
 public:
  AsymptoticSdCache(double eta, FilterSpec filter, DilationSet scales, double step = 0.005);
  double sd(double H) const;  // sd of √n(Ĥ − H)

 private:
  double node(long long i) const;
  double eta_;
  FilterSpec filter_;
  DilationSet scales_;
  double step_;
  mutable std::mutex mu_;
  mutable std::map<long long, double> nodes_;
};

enum class CiMethod { Clt, Ppb, Spb };
std::string ci_method_name(CiMethod m);
CiMethod parse_ci_method(const std::string& s);

// What to do when the resampling model has no non-negative embedding.
enum class BootstrapFallback { Propagate, Dense, Approximate };
BootstrapFallback parse_bootstrap_fallback(const std::string& s);

struct BootstrapOptions {
  std::size_t B = 2000;
  double sigma2 = 1.0;
  double eta = 0.0;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  BootstrapFallback fallback = BootstrapFallback::Propagate;
  double sd_grid_step = 0.005;
  const AsymptoticSdCache* sd_cache = nullptr;  // optional shared cache
};

struct ConfidenceInterval {
  CiMethod method = CiMethod::Clt;
  double level = 0.95;
  double lower = 0.0;
  double upper = 0.0;
  std::size_t bootstrap_reps = 0;
  double h_hat = 0.0;
  double sd = 0.0;            // asymptotic sd of Ĥ at Ĥ
  bool eta_clipped = false;   // resampling η reduced to |tan πĤ|
  std::string sampler;        // "circulant", "dense" or "approximate"; empty for clt
};

// Replicates Ĥ*_b of the fitted model CircularFGN(Ĥ, σ², η); replicate b uses Rng(seed, b).
struct BootstrapSample {
  std::vector<double> h_star;
  double h_fit = 0.0;
  double eta_fit = 0.0;
  bool eta_clipped = false;
  std::string sampler;
};
BootstrapSample bootstrap_replicates(double h_hat, std::size_t n, const FilterSpec& filter,
                                     const DilationSet& scales, const BootstrapOptions& opts);

ConfidenceInterval confidence_interval(std::span<const cd> path, const FilterSpec& filter,
                                       const DilationSet& scales, CiMethod method, double level,
                                       const BootstrapOptions& opts);
// Several methods sharing one set of bootstrap replicates.
std::vector<ConfidenceInterval> confidence_intervals(std::span<const cd> path,
                                                     const FilterSpec& filter,
                                                     const DilationSet& scales,
                                                     const std::vector<CiMethod>& methods,
                                                     double level, const BootstrapOptions& opts);

// Type-7 sample quantile of sorted data.
double sample_quantile(std::span<const double> sorted, double p);

}  // namespace cembed
