#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <utility>
#include <variant>
#include <vector>

#include "cembed/covmodels.hpp"
#include "cembed/embedding.hpp"
#include "cembed/fft.hpp"
#include "cembed/rng.hpp"

namespace cembed {

// RealStandard: real noise vector, conjugate-paired weights.
// CircularStandard: circular complex noise, independent weights.
enum class NoiseKind { RealStandard, CircularStandard };

struct GrowRetry {
  int max_doublings = 3;
};
struct Approximate {};
using Policy = std::variant<GrowRetry, Approximate>;

class EmbeddingFailure : public std::runtime_error {
 public:
  EmbeddingFailure(const std::string& what, EmbeddingSize size, double min_eig, double max_eig,
                   std::size_t negative_count)
      : std::runtime_error(what),
        size(size),
        min_eig(min_eig),
        max_eig(max_eig),
        negative_count(negative_count) {}
  EmbeddingSize size;  // last size tried
  double min_eig;
  double max_eig;
  std::size_t negative_count;
};

struct SimulationOutput {
  std::vector<cd> z;
  NoiseKind noise = NoiseKind::CircularStandard;
  bool exact = true;
  double phi_scale = 1.0;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  EmbeddingSize size;
};

// W_k = sqrt(λ_k/(2m̃))(S_k + iT_k); RealStandard pairs k and m̃-k (2m+2 normals),
// CircularStandard draws every k independently (4m+2 normals).
std::vector<cd> sample_spectral_weights(std::span<const double> lambda, NoiseKind kind, Rng& rng);

// Z_k = Σ_j W_j e^{-2iπjk/m̃}, k < n.
std::vector<cd> reconstruct(std::span<const cd> W, std::size_t n);

// λ_app = φ·max(λ,0) with φ = Σλ / Σmax(λ,0); keeps Σλ (hence every output variance).
std::pair<std::vector<double>, double> approximate(std::span<const double> lambda);

// First row of H = Q*VQ, V = diag(0, sqrt(λ_k λ_{m̃-k})): H_{0k} = m̃⁻¹ Σ_j v_j e^{-2iπjk/m̃}.
// Pseudo-covariance E[Z_j Z_k] of RealStandard output is H_{0,|j-k|}.
std::vector<cd> relation_first_row(std::span<const double> lambda);

// Embedding built once, then any number of draws. sample() is const and
// thread-safe.
class CirculantSampler {
 public:
  CirculantSampler(const CovarianceModel& model, std::size_t n, const Policy& policy = GrowRetry{});
  // Exact sampler from an already-built non-negative embedding.
  explicit CirculantSampler(CirculantEmbedding embedding);

  std::vector<cd> sample(NoiseKind kind, Rng& rng) const;
  std::size_t n() const { return n_; }
  bool exact() const { return exact_; }
  double phi_scale() const { return phi_scale_; }
  const CirculantEmbedding& embedding() const { return emb_; }
  // Eigenvalues actually used for sampling (approximated when not exact).
  const std::vector<double>& spectrum() const { return lambda_; }
  int doublings() const { return doublings_; }

 private:
  std::size_t n_ = 0;
  CirculantEmbedding emb_;
  std::vector<double> lambda_;
  std::vector<double> amp_;  // sqrt(λ_k/(2m̃))
  bool exact_ = true;
  double phi_scale_ = 1.0;
  int doublings_ = 0;
  std::shared_ptr<FftPlan> plan_;
};

SimulationOutput simulate(const CovarianceModel& model, std::size_t n, NoiseKind kind,
                          const Policy& policy, Rng& rng);

// Replication r uses Rng(seed, r); threads = 0 reads CEMBED_THREADS.
std::vector<SimulationOutput> simulate_batch(const CovarianceModel& model, std::size_t n,
                                             NoiseKind kind, const Policy& policy,
                                             std::uint64_t seed, std::size_t reps,
                                             unsigned threads = 0);

// Per-coordinate variances of Δ = Z − Z_app: s_j², s_{j,R}², s_{j,I}².
struct ComponentVariances {
  std::vector<double> s;
  std::vector<double> s_re;
  std::vector<double> s_im;
};

// Z and Z_app independent and circular: s² = 2γ(0), s_R² = s_I² = γ(0).
ComponentVariances independent_difference_variances(double gamma0, std::size_t n);
// diag(Σ − Σ_app) split evenly between real and imaginary parts.
ComponentVariances covariance_difference_variances(double gamma0,
                                                   std::span<const double> lambda_app,
                                                   std::size_t n);

struct ErrorBoundCurve {
  std::vector<double> x_grid;
  std::vector<double> bound;
  ComponentVariances variances;
};

// bound(x) = 1 − Π_j Π_{c∈{R,I}} [2Φ(x s_j / (s_{j,c} √2)) − 1]
ErrorBoundCurve error_bound(std::span<const double> x_grid, const ComponentVariances& variances,
                            std::size_t n);

double normal_cdf(double x);
double normal_quantile(double p);

}  // namespace cembed
