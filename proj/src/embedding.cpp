#include "cembed/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "cembed/errors.hpp"
#include "cembed/fft.hpp"
#include "cembed/kernels.hpp"

namespace cembed {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEps = std::numeric_limits<double>::epsilon();

// Small tolerance for the monotone/convex hypotheses on exactly-zero differences.
constexpr double kHypTol = 1e-13;

bool decreasing_convex(std::span<const double> f, double scale, std::size_t* where = nullptr) {
  double tol = kHypTol * scale;
  for (std::size_t k = 0; k + 1 < f.size(); ++k)
    if (f[k] - f[k + 1] < -tol) {
      if (where) *where = k;
      return false;
    }
  for (std::size_t k = 0; k + 2 < f.size(); ++k)
    if (f[k] - 2.0 * f[k + 1] + f[k + 2] < -tol) {
      if (where) *where = k;
      return false;
    }
  return true;
}

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

// sin(π x / N) for real x, reduced mod 2N.
double sinpi_over(double x, double N) {
  double r = std::fmod(x, 2.0 * N);
  if (r < 0) r += 2.0 * N;
  if (r > N) r -= 2.0 * N;
  return std::sin(kPi * r / N);
}

bool near_integer_grid(double x, double N) {
  double r = std::fmod(x, N);
  if (r < 0) r += N;
  return std::min(r, N - r) < 1e-12 * N;
}

// U_k = Σ_t u_t e^{2iπ t (k+shift)/N} with u_{j+1} = w_j.
std::vector<cd> shifted_trig_sums(std::span<const double> w, std::size_t N, double shift) {
  if (w.size() + 1 > N) throw SizeError("kernel sums: too many weights for the grid");
  std::vector<cd> u(N, cd{0.0, 0.0});
  for (std::size_t j = 0; j < w.size(); ++j) {
    double t = static_cast<double>(j + 1);
    if (shift == 0.0) {
      u[j + 1] = w[j];
    } else {
      double f = t * shift / static_cast<double>(N);
      f -= std::floor(f);
      u[j + 1] = w[j] * std::polar(1.0, 2.0 * kPi * f);
    }
  }
  std::vector<cd> out(N);
  FftPlan plan(N, FftDirection::Backward);
  plan.execute(u.data(), out.data());
  return out;
}

struct Orientation {
  std::vector<double> I;
  bool conjugated = false;
};

}  // namespace

bool is_smooth(std::size_t x) {
  if (x == 0) return false;
  for (std::size_t p : {3u, 5u, 7u, 11u})
    while (x % p == 0) x /= p;
  return x == 1;
}

std::size_t next_smooth(std::size_t x) {
  if (x <= 1) return 1;
  const std::size_t limit = 2 * x + 11;
  std::size_t best = std::numeric_limits<std::size_t>::max();
  for (std::size_t a = 1; a <= limit; a *= 3)
    for (std::size_t b = a; b <= limit; b *= 5)
      for (std::size_t c = b; c <= limit; c *= 7)
        for (std::size_t d = c; d <= limit; d *= 11)
          if (d >= x && d < best) best = d;
  return best;
}

EmbeddingSize select_embedding_size(std::size_t n) {
  if (n < 2) throw DomainError("select_embedding_size: n must be >= 2");
  std::size_t mt = next_smooth(2 * n - 1);
  return {n, (mt - 1) / 2, mt};
}

EmbeddingSize embedding_size_from_m(std::size_t n, std::size_t m) {
  if (n < 1) throw DomainError("embedding size: n must be >= 1");
  if (m < 1 || m + 1 < n) throw SizeError("embedding size: need m >= max(1, n-1)");
  return {n, m, 2 * m + 1};
}

EmbeddingSize grow_embedding_size(const EmbeddingSize& size) {
  std::size_t mt = next_smooth(2 * size.m_tilde);
  return {size.n, (mt - 1) / 2, mt};
}

std::vector<cd> circulant_first_row(const CovarianceModel& model, const EmbeddingSize& size) {
  if (size.m_tilde != 2 * size.m + 1 || size.m + 1 < size.n)
    throw SizeError("circulant_first_row: inconsistent embedding size");
  auto g = gamma_seq(model, size.m);
  std::vector<cd> c(size.m_tilde);
  c[0] = {g[0].real(), 0.0};
  for (std::size_t j = 1; j <= size.m; ++j) {
    c[j] = std::conj(g[j]);
    c[size.m_tilde - j] = g[j];
  }
  return c;
}

std::vector<double> eigenvalues_fft(std::span<const cd> first_row) {
  const std::size_t N = first_row.size();
  if (N < 3 || N % 2 == 0) throw SizeError("eigenvalues_fft: length must be odd and >= 3");
  auto spec = dft(first_row, FftDirection::Forward);
  std::vector<double> lam(N);
  double mx = 0.0, im = 0.0;
  for (std::size_t k = 0; k < N; ++k) {
    lam[k] = spec[k].real();
    mx = std::max(mx, std::abs(spec[k].real()));
    im = std::max(im, std::abs(spec[k].imag()));
  }
  if (im > 1e-8 * mx && im > 1e-300)
    throw IntegrityError("eigenvalues_fft: imaginary residue " + std::to_string(im) +
                         " exceeds 1e-8 max|lambda|; first row is not conjugate-symmetric");
  return lam;
}

CirculantEmbedding build_from_first_row(std::vector<cd> first_row, std::size_t n) {
  CirculantEmbedding e;
  const std::size_t N = first_row.size();
  if (N < 3 || N % 2 == 0) throw SizeError("build: circulant size must be odd and >= 3");
  e.size = embedding_size_from_m(n, (N - 1) / 2);
  e.eigenvalues = eigenvalues_fft(first_row);
  e.first_row = std::move(first_row);
  e.min_eig = *std::min_element(e.eigenvalues.begin(), e.eigenvalues.end());
  e.max_eig = *std::max_element(e.eigenvalues.begin(), e.eigenvalues.end());
  e.neg_tolerance = 1e-10 * std::max(e.max_eig, 0.0);
  for (auto& l : e.eigenvalues) {
    if (l < -e.neg_tolerance)
      ++e.negative_count;
    else if (l < 0.0)
      l = 0.0;
  }
  return e;
}

CirculantEmbedding build(const CovarianceModel& model, const EmbeddingSize& size) {
  return build_from_first_row(circulant_first_row(model, size), size.n);
}

std::vector<double> eigenvalues_direct(const CovarianceSlices& s, const EmbeddingSize& size) {
  const std::size_t m = size.m, N = size.m_tilde;
  if (s.R.size() != m + 1 || s.I.size() != m + 1)
    throw SizeError("eigenvalues_direct: slices must have length m+1");
  std::vector<double> ct(N), st(N);
  for (std::size_t t = 0; t < N; ++t) {
    ct[t] = std::cos(2.0 * kPi * static_cast<double>(t) / static_cast<double>(N));
    st[t] = std::sin(2.0 * kPi * static_cast<double>(t) / static_cast<double>(N));
  }
  std::vector<double> lam(N);
  for (std::size_t k = 0; k < N; ++k) {
    double acc = 0.0;
    std::size_t t = 0;
    for (std::size_t j = 1; j <= m; ++j) {
      t += k;
      if (t >= N) t %= N;
      acc += s.R[j] * ct[t] - s.I[j] * st[t];
    }
    lam[k] = s.R[0] + 2.0 * acc;
  }
  return lam;
}

namespace {

// Weights of the two kernel sums in the summation-by-parts form:
// Féjer: w_j = Δ²R(j), j <= m-2, w_{m-1} = ΔR(m-1);
// conjugate Féjer: v_j = -Δ²I(j), 1 <= j <= m-2, v_{m-1} = -ΔI(m-1), v_0 = 0.
void kernel_weights(const CovarianceSlices& s, std::vector<double>& w, std::vector<double>& v) {
  const std::size_t m = s.m();
  w.assign(m, 0.0);
  v.assign(m, 0.0);
  for (std::size_t j = 0; j + 2 <= m; ++j) w[j] = s.R[j] - 2.0 * s.R[j + 1] + s.R[j + 2];
  w[m - 1] = s.R[m - 1] - s.R[m];
  for (std::size_t j = 1; j + 2 <= m; ++j) v[j] = -(s.I[j] - 2.0 * s.I[j + 1] + s.I[j + 2]);
  if (m >= 2) v[m - 1] = -(s.I[m - 1] - s.I[m]);
}

}  // namespace

std::vector<double> eigenvalues_kernel_form(const CovarianceSlices& s, const EmbeddingSize& size) {
  const std::size_t m = size.m, N = size.m_tilde;
  if (s.R.size() != m + 1 || s.I.size() != m + 1)
    throw SizeError("eigenvalues_kernel_form: slices must have length m+1");
  std::vector<double> w, v;
  kernel_weights(s, w, v);
  const long long NN = static_cast<long long>(N);
  std::vector<double> lam(N);
  for (std::size_t k = 0; k < N; ++k) {
    const long long kk = static_cast<long long>(k);
    double acc = s.R[m] * kernel_eval_grid(KernelKind::Dirichlet, m, kk, NN) -
                 s.I[m] * kernel_eval_grid(KernelKind::ConjDirichlet, m, kk, NN);
    for (std::size_t j = 0; j < m; ++j) {
      if (w[j] != 0.0) acc += w[j] * kernel_eval_grid(KernelKind::Fejer, j, kk, NN);
      if (v[j] != 0.0) acc += v[j] * kernel_eval_grid(KernelKind::ConjFejer, j, kk, NN);
    }
    lam[k] = acc;
  }
  return lam;
}

KernelSums fejer_sums(std::span<const double> w, std::size_t N, double shift) {
  KernelSums out;
  out.value.assign(N, 0.0);
  out.error.assign(N, 0.0);
  if (w.empty()) return out;
  auto U = shifted_trig_sums(w, N, shift);
  double W = 0.0, sw = 0.0, sq = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j) {
    W += std::abs(w[j]);
    sw += w[j];
    sq += w[j] * static_cast<double>(j + 1) * static_cast<double>(j + 1);
  }
  const double dN = static_cast<double>(N);
  const double fft_err = 8.0 * kEps * (std::log2(dN) + 2.0) * W;
  for (std::size_t k = 0; k < N; ++k) {
    double x = static_cast<double>(k) + shift;
    if (near_integer_grid(x, dN)) {
      out.value[k] = sq;
      out.error[k] = 4.0 * kEps * std::abs(sq) * static_cast<double>(w.size());
      continue;
    }
    double sn = sinpi_over(x, dN);
    double den = 2.0 * sn * sn;
    out.value[k] = (sw - U[k].real()) / den;
    out.error[k] = fft_err / den + 4.0 * kEps * std::abs(out.value[k]);
  }
  return out;
}

KernelSums conj_fejer_sums(std::span<const double> w, std::size_t N, double shift) {
  KernelSums out;
  out.value.assign(N, 0.0);
  out.error.assign(N, 0.0);
  if (w.empty()) return out;
  auto U = shifted_trig_sums(w, N, shift);
  double W = 0.0, Wj = 0.0, swj = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j) {
    double t = static_cast<double>(j + 1);
    W += std::abs(w[j]);
    Wj += std::abs(w[j]) * t;
    swj += w[j] * t;
  }
  const double dN = static_cast<double>(N);
  const double fft_err = 8.0 * kEps * (std::log2(dN) + 2.0) * W;
  for (std::size_t k = 0; k < N; ++k) {
    double x = static_cast<double>(k) + shift;
    if (near_integer_grid(x, dN)) continue;
    double sn = sinpi_over(x, dN);
    double s2 = sinpi_over(2.0 * x, dN);
    double den = 2.0 * sn * sn;
    out.value[k] = (s2 * swj - U[k].imag()) / den;
    out.error[k] = (fft_err + 8.0 * kEps * Wj * std::abs(s2)) / den + 4.0 * kEps * std::abs(out.value[k]);
  }
  return out;
}

KernelSums eigenvalues_kernel_form_fast(const CovarianceSlices& s, const EmbeddingSize& size) {
  const std::size_t m = size.m, N = size.m_tilde;
  if (s.R.size() != m + 1 || s.I.size() != m + 1)
    throw SizeError("eigenvalues_kernel_form_fast: slices must have length m+1");
  std::vector<double> w, v;
  kernel_weights(s, w, v);
  auto F = fejer_sums(w, N, 0.0);
  auto G = conj_fejer_sums(v, N, 0.0);
  const long long NN = static_cast<long long>(N);
  KernelSums out;
  out.value.resize(N);
  out.error.resize(N);
  for (std::size_t k = 0; k < N; ++k) {
    const long long kk = static_cast<long long>(k);
    double b1 = s.R[m] * kernel_eval_grid(KernelKind::Dirichlet, m, kk, NN);
    double b2 = -s.I[m] * kernel_eval_grid(KernelKind::ConjDirichlet, m, kk, NN);
    out.value[k] = F.value[k] + G.value[k] + b1 + b2;
    out.error[k] = F.error[k] + G.error[k] + 8.0 * kEps * (std::abs(b1) + std::abs(b2)) +
                   4.0 * kEps * std::abs(out.value[k]);
  }
  return out;
}

double s_m_fft(std::span<const double> R, std::span<const double> I, std::size_t m_tilde,
               bool restricted) {
  if (R.size() != I.size() || R.empty()) throw SizeError("s_m: R and I must match");
  const std::size_t m = R.size() - 1;
  if (m_tilde < 2 * m + 1) throw SizeError("s_m: m_tilde must be >= 2m+1");
  if (m < 3) return 0.0;
  std::vector<double> w(m - 1, 0.0), v(m - 1, 0.0);
  for (std::size_t j = 1; j + 2 <= m; ++j) {
    w[j] = R[j] - 2.0 * R[j + 1] + R[j + 2];
    v[j] = -(I[j] - 2.0 * I[j + 1] + I[j + 2]);
  }
  auto F = fejer_sums(w, m_tilde, 0.0);
  auto G = conj_fejer_sums(v, m_tilde, 0.0);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = restricted ? m + 1 : 0; k < m_tilde; ++k)
    best = std::min(best, F.value[k] + G.value[k]);
  return best;
}

double s_m_direct(std::span<const double> R, std::span<const double> I, std::size_t m_tilde,
                  bool restricted) {
  if (R.size() != I.size() || R.empty()) throw SizeError("s_m: R and I must match");
  const std::size_t m = R.size() - 1;
  if (m_tilde < 2 * m + 1) throw SizeError("s_m: m_tilde must be >= 2m+1");
  if (m < 3) return 0.0;
  const long long NN = static_cast<long long>(m_tilde);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = restricted ? m + 1 : 0; k < m_tilde; ++k) {
    double acc = 0.0;
    for (std::size_t j = 1; j + 2 <= m; ++j) {
      double d2R = R[j] - 2.0 * R[j + 1] + R[j + 2];
      double d2I = I[j] - 2.0 * I[j + 1] + I[j + 2];
      acc += d2R * kernel_eval_grid(KernelKind::Fejer, j, k, NN) -
             d2I * kernel_eval_grid(KernelKind::ConjFejer, j, k, NN);
    }
    best = std::min(best, acc);
  }
  return best;
}

std::string checker_name(Checker c) {
  switch (c) {
    case Checker::CraigmileI:
      return "Craigmile-i";
    case Checker::CraigmileII:
      return "Craigmile-ii";
    case Checker::CraigmileIII:
      return "Craigmile-iii";
    case Checker::DietrichI:
      return "Dietrich-i";
    case Checker::DietrichII:
      return "Dietrich-ii";
    case Checker::Modulated:
      return "Modulated";
  }
  return "?";
}

namespace {

// Circular fGn-type models: returns η with I(j) = -η sign(j) R(j).
std::optional<double> circular_eta(const CovarianceModel& model) {
  if (const auto* f = std::get_if<CircularFGN>(&model)) return f->eta;
  if (const auto* f = std::get_if<ComplexFGN>(&model))
    if (f->sigma_r == f->sigma_i) return f->eta;
  return std::nullopt;
}

struct ModulatedView {
  RealCovariance base;
  double phase;
};

std::optional<ModulatedView> modulated_view(const CovarianceModel& model) {
  if (const auto* md = std::get_if<Modulated>(&model)) return ModulatedView{md->base, md->phi};
  if (const auto* ar = std::get_if<ComplexAR1>(&model)) {
    double rho = std::abs(ar->a);
    if (rho <= 0.0) return std::nullopt;
    return ModulatedView{GeometricAR1{rho, ar->sigma2 / (1.0 - rho * rho)},
                         std::arg(ar->a) / (2.0 * kPi)};
  }
  return std::nullopt;
}

// Minimum over k of (bound − rounding) from a kernel-form evaluation.
void certificate_from(const KernelSums& ks, CheckReport& r, double& cert_min) {
  cert_min = std::numeric_limits<double>::infinity();
  double raw = std::numeric_limits<double>::infinity();
  std::size_t arg = 0;
  for (std::size_t k = 0; k < ks.value.size(); ++k) {
    double b = ks.value[k] - ks.error[k];
    raw = std::min(raw, ks.value[k]);
    if (b < cert_min) {
      cert_min = b;
      arg = k;
    }
  }
  r.values["bound_min"] = raw;
  r.values["bound_min_minus_rounding"] = cert_min;
  r.values["bound_argmin_k"] = static_cast<double>(arg);
}

CheckReport craigmile_i(const CovarianceSlices& s) {
  CheckReport r;
  r.checker = Checker::CraigmileI;
  r.applicable = true;
  const std::size_t m = s.m();
  bool neg = true;
  int sgn_i = 0;
  bool const_sign = true;
  for (std::size_t j = 1; j <= m; ++j) {
    if (s.R[j] > 0.0 && neg) {
      neg = false;
      r.first_violation = j;
    }
    int sj = (s.I[j] > 0) - (s.I[j] < 0);
    if (sj != 0) {
      if (sgn_i == 0)
        sgn_i = sj;
      else if (sj != sgn_i)
        const_sign = false;
    }
  }
  double A = s.R[0];
  for (std::size_t j = 1; j <= m; ++j) A += 2.0 * (s.R[j] - sgn_i * s.I[j]);
  r.values["A_m"] = A;
  r.values["s"] = sgn_i;
  r.flags["R_nonpositive"] = neg;
  r.flags["sign_constant"] = const_sign;
  r.stated_condition = neg && const_sign;
  r.passed = r.stated_condition && A >= 0.0;
  return r;
}

CheckReport craigmile_ii(const CovarianceModel& model, const CovarianceSlices& s) {
  CheckReport r;
  r.checker = Checker::CraigmileII;
  auto eta = circular_eta(model);
  if (!eta) {
    r.note = "model is not circular fGn-type";
    return r;
  }
  r.applicable = true;
  const std::size_t m = s.m();
  double ae = std::abs(*eta);
  bool neg = true;
  double sumR = 0.0;
  for (std::size_t j = 1; j <= m; ++j) {
    if (s.R[j] > 0.0 && neg) {
      neg = false;
      r.first_violation = j;
    }
    sumR += s.R[j];
  }
  double A = s.R[0] + 2.0 * (1.0 + ae) * sumR;
  r.values["A_m"] = A;
  r.values["eta"] = *eta;
  r.flags["eta_in_unit_interval"] = ae <= 1.0;
  r.flags["R_nonpositive"] = neg;
  if (const auto* f = std::get_if<CircularFGN>(&model)) {
    double t = std::abs(std::tan(kPi * f->H));
    r.flags["eta_below_min_1_tan"] = ae < std::min(1.0, t);
  }
  r.stated_condition = ae <= 1.0 && neg;
  r.passed = r.stated_condition && A >= 0.0;
  return r;
}

CheckReport craigmile_iii(const CovarianceModel& model, const EmbeddingSize& size) {
  CheckReport r;
  r.checker = Checker::CraigmileIII;
  auto mv = modulated_view(model);
  if (!mv) {
    r.note = "model is not modulated";
    return r;
  }
  r.applicable = true;
  auto rv = acvf_real_seq(mv->base, size.m);
  bool nonneg = true, nonpos = true;
  double B = rv[0];
  for (std::size_t j = 1; j <= size.m; ++j) {
    if (rv[j] < 0.0) nonneg = false;
    if (rv[j] > 0.0) nonpos = false;
    B -= 2.0 * std::abs(rv[j]);
  }
  r.values["B_m"] = B;
  r.values["phase"] = mv->phase;
  r.flags["r_nonneg"] = nonneg;
  r.flags["r_nonpos"] = nonpos;
  r.stated_condition = nonneg;
  r.passed = B >= 0.0;
  r.note = "passed uses the bound r(0) - 2 sum |r(j)|";
  return r;
}

}  // namespace

CheckReport check_craigmile(const CovarianceModel& model, const EmbeddingSize& size,
                            CraigmileClause clause) {
  require_valid(model);
  switch (clause) {
    case CraigmileClause::I:
      return craigmile_i(slices(model, size.m));
    case CraigmileClause::II:
      return craigmile_ii(model, slices(model, size.m));
    case CraigmileClause::III:
      return craigmile_iii(model, size);
  }
  return {};
}

std::vector<CheckReport> check_craigmile(const CovarianceModel& model, const EmbeddingSize& size) {
  require_valid(model);
  auto s = slices(model, size.m);
  return {craigmile_i(s), craigmile_ii(model, s), craigmile_iii(model, size)};
}

CheckReport check_dietrich(const CovarianceSlices& s, const EmbeddingSize& size,
                           std::optional<double> eta) {
  CheckReport r;
  r.checker = eta ? Checker::DietrichII : Checker::DietrichI;
  const std::size_t m = size.m;
  if (s.R.size() != m + 1 || s.I.size() != m + 1)
    throw SizeError("check_dietrich: slices must have length m+1");
  if (m < 3) {
    r.note = "needs m >= 3";
    return r;
  }
  const double scale = std::max(max_abs(s.R), max_abs(s.I));
  CovarianceSlices o = s;  // oriented copy (conjugated when needed)
  bool hyp = false;
  double rhs = 0.0;

  if (eta) {
    double e = *eta;
    double mismatch = 0.0;
    for (std::size_t j = 1; j <= m; ++j) mismatch = std::max(mismatch, std::abs(s.I[j] + e * s.R[j]));
    if (mismatch > 1e-10 * std::max(scale, 1e-300)) {
      r.note = "slices are not of the form I(j) = -eta R(j)";
      r.values["form_mismatch"] = mismatch;
      return r;
    }
    r.applicable = true;
    if (e < 0.0) {
      e = -e;
      for (auto& x : o.I) x = -x;
      r.flags["conjugated"] = true;
    }
    std::size_t where = 0;
    bool dc = decreasing_convex(o.R, scale, &where);
    if (!dc) r.first_violation = where;
    bool tail = o.R[m] >= 0.0;
    r.flags["R_decreasing_convex"] = dc;
    r.flags["R_m_nonneg"] = tail;
    hyp = dc && tail;
    rhs = e * o.R[m];
    r.values["eta"] = e;
  } else {
    r.applicable = true;
    auto hyp_for = [&](const std::vector<double>& I, std::size_t* where) {
      std::vector<double> negI(I.begin() + 1, I.end());
      for (auto& x : negI) x = -x;
      return decreasing_convex(negI, scale, where) && -I[m] >= 0.0;
    };
    std::size_t wR = 0, wI = 0;
    bool dcR = decreasing_convex(o.R, scale, &wR);
    bool hI = hyp_for(o.I, &wI);
    if (!hI) {
      std::vector<double> flipped = o.I;
      for (auto& x : flipped) x = -x;
      std::size_t w2 = 0;
      if (hyp_for(flipped, &w2)) {
        o.I = std::move(flipped);
        hI = true;
        r.flags["conjugated"] = true;
      }
    }
    if (!dcR)
      r.first_violation = wR;
    else if (!hI)
      r.first_violation = wI + 1;
    r.flags["R_decreasing_convex"] = dcR;
    r.flags["minus_I_decreasing_convex"] = hI;
    hyp = dcR && hI;
    rhs = -o.I[m];
  }

  const double d2R0 = o.R[0] - 2.0 * o.R[1] + o.R[2];
  const double Sm = s_m_fft(o.R, o.I, size.m_tilde, true);
  const double Sm_full = s_m_fft(o.R, o.I, size.m_tilde, false);
  r.values["delta2_R0"] = d2R0;
  r.values["S_m"] = Sm;
  r.values["S_m_full"] = Sm_full;
  r.values["rhs"] = rhs;
  const bool cond = d2R0 + Sm >= rhs;
  r.flags["condition"] = cond;
  r.stated_condition = hyp && cond;

  double cert = 0.0;
  certificate_from(eigenvalues_kernel_form_fast(o, size), r, cert);
  r.flags["complete_bound_nonneg"] = cert >= 0.0;
  r.passed = r.stated_condition && cert >= 0.0;
  return r;
}

CheckReport check_modulated(const RealCovariance& base, const EmbeddingSize& size,
                            std::optional<double> phase) {
  require_valid(base);
  CheckReport r;
  r.checker = Checker::Modulated;
  r.applicable = true;
  const std::size_t m = size.m, N = size.m_tilde;
  auto rv = acvf_real_seq(base, m);
  std::size_t where = 0;
  bool dc = decreasing_convex(rv, std::abs(rv[0]), &where);
  if (!dc) r.first_violation = where;
  r.flags["decreasing_convex"] = dc;
  r.stated_condition = dc;
  const double dN = static_cast<double>(N);

  if (phase) {
    double x = *phase * dN;
    double shift = x - std::floor(x);
    r.values["phase"] = *phase;
    r.values["grid_shift"] = shift;
    // r(m) D_m(ω') + Σ_{j<=m-2} Δ²r(j) K_j(ω'); the dropped Δr(m-1) K_{m-1} is >= 0.
    std::vector<double> w(m >= 2 ? m - 1 : 0);
    for (std::size_t j = 0; j + 2 <= m; ++j) w[j] = rv[j] - 2.0 * rv[j + 1] + rv[j + 2];
    auto F = fejer_sums(w, N, shift);
    const double sps = std::sin(kPi * shift);
    for (std::size_t k = 0; k < N; ++k) {
      double xk = static_cast<double>(k) + shift;
      double D;
      if (near_integer_grid(xk, dN))
        D = dN;
      else
        D = ((k % 2) ? -sps : sps) / sinpi_over(xk, dN);
      double b = rv[m] * D;
      F.value[k] += b;
      F.error[k] += 8.0 * kEps * std::abs(b) + 4.0 * kEps * std::abs(F.value[k]);
    }
    double cert = 0.0;
    certificate_from(F, r, cert);
    if (m < 1) cert = -1.0;
    r.flags["phase_bound_nonneg"] = cert >= 0.0;
    r.passed = dc && cert >= 0.0 && rv[m - 1] - rv[m] >= 0.0;
  } else {
    // D_m >= -1/sin(π/m̃) off the main lobe and <= m̃ on it.
    double lead = m >= 2 ? rv[0] - 2.0 * rv[1] + rv[2] : rv[0] - rv[1];
    double tail = rv[m] >= 0.0 ? -rv[m] / std::sin(kPi / dN) : rv[m] * dN;
    double bound = lead + tail;
    r.values["all_phase_bound"] = bound;
    r.flags["all_phase_bound_nonneg"] = bound >= 0.0;
    r.passed = dc && bound >= 0.0;
  }
  return r;
}

std::vector<CheckReport> check_all(const CovarianceModel& model, const EmbeddingSize& size) {
  require_valid(model);
  std::vector<CheckReport> out;
  auto s = slices(model, size.m);
  out.push_back(craigmile_i(s));
  out.push_back(craigmile_ii(model, s));
  out.push_back(craigmile_iii(model, size));
  out.push_back(check_dietrich(s, size));
  if (auto eta = circular_eta(model)) out.push_back(check_dietrich(s, size, *eta));
  if (auto mv = modulated_view(model)) out.push_back(check_modulated(mv->base, size, mv->phase));
  if (const auto* sum = std::get_if<SumOfModulated>(&model)) {
    for (std::size_t t = 0; t < sum->terms.size(); ++t) {
      CovarianceModel term = sum->terms[t];
      auto st = slices(term, size.m);
      std::vector<CheckReport> rs{craigmile_i(st), craigmile_iii(term, size),
                                  check_dietrich(st, size),
                                  check_modulated(sum->terms[t].base, size, sum->terms[t].phi)};
      for (auto& r : rs) {
        r.component = static_cast<int>(t);
        out.push_back(std::move(r));
      }
    }
  }
  return out;
}

bool certified(const CovarianceModel& model, const std::vector<CheckReport>& reports) {
  for (const auto& r : reports)
    if (r.component < 0 && r.passed) return true;
  if (const auto* sum = std::get_if<SumOfModulated>(&model)) {
    for (std::size_t t = 0; t < sum->terms.size(); ++t) {
      bool ok = false;
      for (const auto& r : reports)
        if (r.component == static_cast<int>(t) && r.passed) ok = true;
      if (!ok) return false;
    }
    return !sum->terms.empty();
  }
  return false;
}

bool dietrich_fgn_predicate(double H, std::size_t m) {
  if (m < 3) throw DomainError("dietrich_fgn_predicate: m must be >= 3");
  const double eta = std::abs(std::tan(kPi * H));
  std::vector<double> R(m + 1), I(m + 1, 0.0);
  for (std::size_t j = 0; j <= m; ++j) R[j] = fgn_second_difference(H, j);
  for (std::size_t j = 1; j <= m; ++j) I[j] = -eta * R[j];
  if (!decreasing_convex(R, R[0]) || R[m] < 0.0) return false;
  const double d2R0 = R[0] - 2.0 * R[1] + R[2];
  return d2R0 + s_m_fft(R, I, 2 * m + 1, true) >= eta * R[m];
}

double find_h_tilde(std::size_t m, double grid_step) {
  if (!(grid_step > 0.0 && grid_step <= 1e-3))
    throw DomainError("find_h_tilde: grid_step must lie in (0, 1e-3]");
  const long steps = static_cast<long>(std::floor(0.5 / grid_step));
  double last_ok = 0.5;
  for (long i = 1; i < steps; ++i) {
    double H = 0.5 + i * grid_step;
    if (H >= 1.0) break;
    if (!dietrich_fgn_predicate(H, m)) {
      double lo = last_ok, hi = H;
      if (lo <= 0.5) return 0.5;
      while (hi - lo > 1e-7) {
        double mid = 0.5 * (lo + hi);
        if (dietrich_fgn_predicate(mid, m))
          lo = mid;
        else
          hi = mid;
      }
      return lo;
    }
    last_ok = H;
  }
  return last_ok;
}

}  // namespace cembed
