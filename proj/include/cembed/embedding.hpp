#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cembed/covmodels.hpp"

namespace cembed {

struct EmbeddingSize {
  std::size_t n = 0;        // requested length
  std::size_t m = 0;        // half size, m >= n-1
  std::size_t m_tilde = 0;  // 2m+1
};

// Prime factors all in {3,5,7,11}.
bool is_smooth(std::size_t x);
std::size_t next_smooth(std::size_t x);

// Smallest smooth m̃ >= 2n-1.
EmbeddingSize select_embedding_size(std::size_t n);
// Explicit m (any m >= n-1, smooth or not).
EmbeddingSize embedding_size_from_m(std::size_t n, std::size_t m);
// Next smooth size >= 2·m̃.
EmbeddingSize grow_embedding_size(const EmbeddingSize& size);

struct CirculantEmbedding {
  EmbeddingSize size;
  std::vector<cd> first_row;
  std::vector<double> eigenvalues;  // round-off negatives clamped to 0
  double min_eig = 0.0;             // before clamping
  double max_eig = 0.0;
  double neg_tolerance = 0.0;       // 1e-10 · max λ
  std::size_t negative_count = 0;   // λ < -neg_tolerance
  bool nonnegative() const { return negative_count == 0; }
};

// c_0 = γ(0), c_j = γ(j)* (1 <= j <= m), c_j = γ(m̃-j) (m < j < m̃).
std::vector<cd> circulant_first_row(const CovarianceModel& model, const EmbeddingSize& size);
CirculantEmbedding build(const CovarianceModel& model, const EmbeddingSize& size);
CirculantEmbedding build_from_first_row(std::vector<cd> first_row, std::size_t n);

// λ_k = Σ_j c_j e^{-2iπjk/m̃}; throws IntegrityError on imaginary residue > 1e-8·max|λ|.
std::vector<double> eigenvalues_fft(std::span<const cd> first_row);
// λ_k = γ(0) + 2Σ_{j=1}^m [R(j) cos(2πjk/m̃) − I(j) sin(2πjk/m̃)], O(m̃ m).
std::vector<double> eigenvalues_direct(const CovarianceSlices& s, const EmbeddingSize& size);
// Summation-by-parts form with Dirichlet/Féjer kernels, O(m̃ m).
std::vector<double> eigenvalues_kernel_form(const CovarianceSlices& s, const EmbeddingSize& size);

// Weighted kernel sums at ω_k = (k + shift)/N, k = 0..N-1, by one length-N FFT:
//   fejer:      Σ_{j<len} w_j K_j(ω_k)
//   conj_fejer: Σ_{j<len} w_j K̃_j(ω_k)
// `error` is a rounding bound for each entry.
struct KernelSums {
  std::vector<double> value;
  std::vector<double> error;
};
KernelSums fejer_sums(std::span<const double> w, std::size_t N, double shift = 0.0);
KernelSums conj_fejer_sums(std::span<const double> w, std::size_t N, double shift = 0.0);

// Fast kernel-form eigenvalues (FFT route), with per-k rounding bounds.
KernelSums eigenvalues_kernel_form_fast(const CovarianceSlices& s, const EmbeddingSize& size);

// S_m = inf_k Σ_{j=1}^{m-2} {Δ²R(j) K_j(k/m̃) − Δ²I(j) K̃_j(k/m̃)},
// over k in {m+1..m̃-1} (restricted) or {0..m̃-1}.
double s_m_fft(std::span<const double> R, std::span<const double> I, std::size_t m_tilde,
               bool restricted = true);
double s_m_direct(std::span<const double> R, std::span<const double> I, std::size_t m_tilde,
                  bool restricted = true);

enum class Checker { CraigmileI, CraigmileII, CraigmileIII, DietrichI, DietrichII, Modulated };
std::string checker_name(Checker c);

struct CheckReport {
  Checker checker = Checker::CraigmileI;
  int component = -1;             // term index for sums, -1 = whole model
  bool applicable = false;
  bool stated_condition = false;  // the published sufficient condition
  bool passed = false;            // sound verdict; passed implies applicable
  std::map<std::string, double> values;
  std::map<std::string, bool> flags;
  std::optional<std::size_t> first_violation;
  std::string note;
};

enum class CraigmileClause { I, II, III };
CheckReport check_craigmile(const CovarianceModel& model, const EmbeddingSize& size,
                            CraigmileClause clause);
std::vector<CheckReport> check_craigmile(const CovarianceModel& model, const EmbeddingSize& size);

// Clause (i) without eta, clause (ii) with I(j) = -eta sign(j) R(j).
CheckReport check_dietrich(const CovarianceSlices& s, const EmbeddingSize& size,
                           std::optional<double> eta = std::nullopt);

// With phase: bound over k at that phase. Without: bound valid for every phase.
CheckReport check_modulated(const RealCovariance& base, const EmbeddingSize& size,
                            std::optional<double> phase = std::nullopt);

// Every checker that can be applied to the model; sums are checked per term.
std::vector<CheckReport> check_all(const CovarianceModel& model, const EmbeddingSize& size);
// A passing whole-model report, or every term of a sum certified by some report.
bool certified(const CovarianceModel& model, const std::vector<CheckReport>& reports);

// Δ²γ_R(0) + S_m(η) >= η γ_R(m) for circular fGn at η = |tan πH|.
bool dietrich_fgn_predicate(double H, std::size_t m);
// Largest H̃ with the predicate true on (1/2, H̃): grid scan then bisection.
double find_h_tilde(std::size_t m, double grid_step = 1e-3);

}  // namespace cembed
