// cembed: simulation, embedding diagnostics, Hurst estimation and oracle checks.
//
// Exit status: 0 ok, 1 verification failed or internal error, 2 usage,
// 3 model validation, 4 embedding failure, 5 i/o.

#include <CLI11.hpp>
#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <nlohmann/json.hpp>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "cembed/covmodels.hpp"
#include "cembed/embedding.hpp"
#include "cembed/errors.hpp"
#include "cembed/estimate.hpp"
#include "cembed/fft.hpp"
#include "cembed/model_json.hpp"
#include "cembed/oracle.hpp"
#include "cembed/parallel.hpp"
#include "cembed/rng.hpp"
#include "cembed/simulate.hpp"

using namespace cembed;
using nlohmann::json;

namespace {

constexpr int kExitVerifyFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitModel = 3;
constexpr int kExitEmbedding = 4;
constexpr int kExitIo = 5;

std::string num(double x) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, p);
}

CovarianceModel model_arg(const std::string& arg) {
  auto first = arg.find_first_not_of(" \t\n");
  if (first != std::string::npos && arg[first] == '{') return parse_model(arg);
  return load_model(arg);
}

// Writes to `path`, or stdout when empty or "-".
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty() && path != "-") {
      file_.open(path);
      if (!file_) throw IoError("cannot write '" + path + "'");
      os_ = &file_;
    }
  }
  std::ostream& stream() { return *os_; }
  void close() {
    os_->flush();
    if (!*os_) throw IoError("write failed");
  }

 private:
  std::ofstream file_;
  std::ostream* os_ = &std::cout;
};

std::vector<double> parse_doubles(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(tok, &used));
      if (tok.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw DomainError("not a number list: '" + s + "'");
    }
  }
  return out;
}

std::vector<int> parse_ints(const std::string& s) {
  std::vector<int> out;
  for (double x : parse_doubles(s)) {
    if (x != std::floor(x)) throw DomainError("not an integer list: '" + s + "'");
    out.push_back(static_cast<int>(x));
  }
  return out;
}

json report_json(const CheckReport& r) {
  json j{{"checker", checker_name(r.checker)},
         {"component", r.component},
         {"applicable", r.applicable},
         {"stated_condition", r.stated_condition},
         {"passed", r.passed},
         {"values", r.values},
         {"flags", r.flags},
         {"note", r.note}};
  j["first_violation"] = r.first_violation ? json(*r.first_violation) : json(nullptr);
  return j;
}

EmbeddingSize size_args(std::size_t n, std::size_t m) {
  if (n < 2) throw DomainError("--n must be >= 2");
  return m ? embedding_size_from_m(n, m) : select_embedding_size(n);
}

// ---- simulate ----

struct SimulateArgs {
  std::string model;
  std::size_t n = 0;
  std::string algorithm = "circular";
  std::string policy = "grow";
  int max_doublings = 3;
  std::uint64_t seed = 0;
  std::size_t reps = 1;
  std::string format = "csv";
  std::string output;
  unsigned threads = 0;
};

int run_simulate(const SimulateArgs& a) {
  auto model = model_arg(a.model);
  require_valid(model);
  NoiseKind kind;
  if (a.algorithm == "real") {
    kind = NoiseKind::RealStandard;
  } else if (a.algorithm == "circular") {
    kind = NoiseKind::CircularStandard;
  } else {
    throw CLI::ValidationError("--algorithm", "expected real or circular");
  }
  Policy policy;
  if (a.policy == "grow") {
    policy = GrowRetry{a.max_doublings};
  } else if (a.policy == "approx") {
    policy = Approximate{};
  } else {
    throw CLI::ValidationError("--policy", "expected grow or approx");
  }
  if (a.n < 2) throw DomainError("--n must be >= 2");
  auto batch = simulate_batch(model, a.n, kind, policy, a.seed, a.reps, a.threads);
  const auto& first = batch.front();

  json meta{{"seed", a.seed},
            {"model", model_to_json(model)},
            {"n", a.n},
            {"reps", a.reps},
            {"algorithm", a.algorithm},
            {"policy", a.policy},
            {"m", first.size.m},
            {"m_tilde", first.size.m_tilde},
            {"exact", first.exact},
            {"phi_scale", first.phi_scale}};

  Output out(a.output);
  auto& os = out.stream();
  if (a.format == "json") {
    json paths = json::array();
    for (const auto& s : batch) {
      json p = json::array();
      for (const auto& z : s.z) p.push_back(json::array({z.real(), z.imag()}));
      paths.push_back(std::move(p));
    }
    os << json{{"metadata", meta}, {"paths", paths}}.dump() << '\n';
  } else if (a.format == "csv") {
    os << "# " << meta.dump() << '\n';
    const bool long_form = a.reps > 1;
    os << (long_form ? "rep,index,re,im\n" : "index,re,im\n");
    for (std::size_t r = 0; r < batch.size(); ++r)
      for (std::size_t k = 0; k < batch[r].z.size(); ++k) {
        if (long_form) os << r << ',';
        os << k << ',' << num(batch[r].z[k].real()) << ',' << num(batch[r].z[k].imag()) << '\n';
      }
  } else {
    throw CLI::ValidationError("--out", "expected csv or json");
  }
  out.close();
  return 0;
}

// ---- check-embedding / eigplot ----

struct EmbeddingArgs {
  std::string model;
  std::size_t n = 0;
  std::size_t m = 0;
  std::string csv;
  std::string output;
  std::uint64_t seed = 0;
  bool checkers = true;
};

void write_eigen_csv(const std::string& path, const CirculantEmbedding& e, std::uint64_t seed) {
  Output out(path);
  auto& os = out.stream();
  os << "# " << json{{"seed", seed}, {"m", e.size.m}, {"m_tilde", e.size.m_tilde}}.dump() << '\n';
  os << "k,lambda\n";
  // raw eigenvalues, before clamping
  auto raw = eigenvalues_fft(e.first_row);
  for (std::size_t k = 0; k < raw.size(); ++k) os << k << ',' << num(raw[k]) << '\n';
  out.close();
}

int run_check_embedding(const EmbeddingArgs& a) {
  auto model = model_arg(a.model);
  require_valid(model);
  auto size = size_args(a.n, a.m);
  auto emb = build(model, size);
  json j{{"seed", a.seed},
         {"model", model_to_json(model)},
         {"n", size.n},
         {"m", size.m},
         {"m_tilde", size.m_tilde},
         {"min_eig", emb.min_eig},
         {"max_eig", emb.max_eig},
         {"neg_tolerance", emb.neg_tolerance},
         {"negative_count", emb.negative_count}};
  if (a.checkers) {
    auto reports = check_all(model, size);
    json arr = json::array();
    for (const auto& r : reports) arr.push_back(report_json(r));
    j["checkers"] = arr;
    j["certified"] = certified(model, reports);
  }
  Output out(a.output);
  out.stream() << j.dump(2) << '\n';
  out.close();
  if (!a.csv.empty()) write_eigen_csv(a.csv, emb, a.seed);
  return 0;
}

int run_eigplot(const EmbeddingArgs& a) {
  auto model = model_arg(a.model);
  require_valid(model);
  auto emb = build(model, size_args(a.n, a.m));
  write_eigen_csv(a.output, emb, a.seed);
  return 0;
}

// ---- estimate ----

struct EstimateArgs {
  std::string in;
  std::string path_kind = "increments";
  std::size_t rep = 0;
  std::string filter = "1,-2,1";
  std::string scales = "1,2,3,4";
  std::string ci;
  double level = 0.95;
  std::size_t B = 2000;
  double sigma2 = 1.0;
  std::optional<double> eta;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  std::string fallback = "propagate";
  std::string output;
};

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    while (!tok.empty() && (tok.back() == '\r' || tok.back() == ' ')) tok.pop_back();
    out.push_back(tok);
  }
  return out;
}

double parse_field(const std::string& s, std::size_t line_no) {
  double v = 0.0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size())
    throw IoError("line " + std::to_string(line_no) + ": not a number: '" + s + "'");
  return v;
}

std::vector<cd> read_series_csv(const std::string& path, std::size_t rep) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read '" + path + "'");
  std::string line;
  std::size_t line_no = 0;
  int c_rep = -1, c_re = -1, c_im = -1;
  std::vector<std::pair<long long, cd>> rows;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    auto f = split_csv_line(line);
    if (c_re < 0) {
      for (std::size_t i = 0; i < f.size(); ++i) {
        if (f[i] == "rep") c_rep = static_cast<int>(i);
        if (f[i] == "re") c_re = static_cast<int>(i);
        if (f[i] == "im") c_im = static_cast<int>(i);
      }
      if (c_re < 0 || c_im < 0) throw IoError(path + ": header must contain re and im columns");
      continue;
    }
    if (f.size() <= static_cast<std::size_t>(std::max({c_rep, c_re, c_im})))
      throw IoError(path + ": short row at line " + std::to_string(line_no));
    if (c_rep >= 0 && parse_field(f[c_rep], line_no) != static_cast<double>(rep)) continue;
    rows.push_back({static_cast<long long>(rows.size()),
                    cd{parse_field(f[c_re], line_no), parse_field(f[c_im], line_no)}});
  }
  if (c_re < 0) throw IoError(path + ": no header row");
  std::vector<cd> z;
  z.reserve(rows.size());
  for (auto& r : rows) z.push_back(r.second);
  if (z.empty()) throw IoError(path + ": no data rows for rep " + std::to_string(rep));
  return z;
}

// {"model": {...}, "n": N, "seed": s (optional, defaults to --seed)}
std::vector<cd> simulate_inline(const std::string& spec, std::uint64_t seed, std::optional<double>& eta_hint,
                                double& sigma2_hint) {
  json j;
  try {
    j = json::parse(spec);
  } catch (const json::parse_error& e) {
    throw DomainError(std::string("--in: invalid JSON: ") + e.what());
  }
  if (!j.contains("model") || !j.contains("n")) throw DomainError("--in: inline spec needs 'model' and 'n'");
  auto model = model_from_json(j.at("model"));
  require_valid(model);
  if (const auto* f = std::get_if<CircularFGN>(&model)) {
    if (!eta_hint) eta_hint = f->eta;
    sigma2_hint = f->sigma2;
  }
  std::uint64_t s = j.value("seed", seed);
  Rng rng(s, 0);
  return simulate(model, j.at("n").get<std::size_t>(), NoiseKind::CircularStandard, GrowRetry{}, rng).z;
}

int run_estimate(EstimateArgs a, bool sigma_given) {
  auto filter = validate_filter(parse_doubles(a.filter));
  auto scales = make_dilation_set(parse_ints(a.scales));
  std::vector<cd> series;
  auto first = a.in.find_first_not_of(" \t\n");
  if (first != std::string::npos && a.in[first] == '{') {
    double s2 = a.sigma2;
    series = simulate_inline(a.in, a.seed, a.eta, s2);
    if (!sigma_given) a.sigma2 = s2;
  } else {
    series = read_series_csv(a.in, a.rep);
  }
  std::vector<cd> path;
  if (a.path_kind == "increments") {
    path = fbm_path(series);
  } else if (a.path_kind == "path") {
    path = series;
  } else {
    throw CLI::ValidationError("--path-kind", "expected increments or path");
  }
  auto est = estimate_hurst(path, filter, scales, a.eta);
  json j{{"seed", a.seed},
         {"h_hat", est.h_hat},
         {"n", est.n},
         {"filter", filter.coeffs},
         {"q", filter.q},
         {"scales", scales.scales},
         {"s2_per_scale", est.s2_per_scale}};
  j["sd"] = est.asymptotic_sd ? json(*est.asymptotic_sd) : json(nullptr);
  if (!a.ci.empty()) {
    if (!a.eta) throw DomainError("--ci needs --eta (eta is assumed known)");
    BootstrapOptions opts;
    opts.B = a.B;
    opts.sigma2 = a.sigma2;
    opts.eta = *a.eta;
    opts.seed = a.seed;
    opts.threads = a.threads;
    opts.fallback = parse_bootstrap_fallback(a.fallback);
    auto ci = confidence_interval(path, filter, scales, parse_ci_method(a.ci), a.level, opts);
    j["ci"] = json{{"method", ci_method_name(ci.method)},
                   {"level", ci.level},
                   {"lower", ci.lower},
                   {"upper", ci.upper},
                   {"bootstrap_reps", ci.bootstrap_reps},
                   {"sampler", ci.sampler},
                   {"eta_clipped", ci.eta_clipped}};
  }
  Output out(a.output);
  out.stream() << j.dump(2) << '\n';
  out.close();
  return 0;
}

// ---- verify ----

struct VerifyArgs {
  std::string model;
  std::size_t n = 16;
  std::size_t reps = 20000;
  double band = 5.0;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  std::string output;
};

std::vector<std::pair<std::string, CovarianceModel>> default_zoo() {
  const double pi = std::numbers::pi;
  return {
      {"white_noise", WhiteNoise{1.0}},
      {"complex_ar1", ComplexAR1{std::polar(0.6, pi / 4), 1.0, true}},
      {"modulated_farima", Modulated{0.125, FARIMA{0.2, 1.0}}},
      {"circular_fgn_0.2", CircularFGN{0.2, 1.0, 2.0 / 3.0 * std::abs(std::tan(0.2 * pi))}},
      {"circular_fgn_0.8", CircularFGN{0.8, 1.0, 2.0 / 3.0 * std::abs(std::tan(0.8 * pi))}},
  };
}

// Largest |est − ref| / se over entries with se > 0; entries with se = 0 must match to 1e-12.
double max_z(const Eigen::MatrixXcd& est, const Eigen::MatrixXcd& se, const Eigen::MatrixXcd& ref) {
  double z = 0.0;
  for (Eigen::Index j = 0; j < est.rows(); ++j)
    for (Eigen::Index k = 0; k < est.cols(); ++k) {
      double dr = std::abs(est(j, k).real() - ref(j, k).real());
      double di = std::abs(est(j, k).imag() - ref(j, k).imag());
      double sr = se(j, k).real(), si = se(j, k).imag();
      z = std::max(z, sr > 0 ? dr / sr : (dr > 1e-12 ? INFINITY : 0.0));
      z = std::max(z, si > 0 ? di / si : (di > 1e-12 ? INFINITY : 0.0));
    }
  return z;
}

int run_verify(const VerifyArgs& a) {
  if (a.n < 2 || a.n > 64) throw DomainError("--n must lie in [2, 64]");
  if (a.reps < 100) throw DomainError("--reps must be >= 100");
  auto zoo = a.model.empty() ? default_zoo()
                             : std::vector<std::pair<std::string, CovarianceModel>>{{"model", model_arg(a.model)}};
  json checks = json::array();
  bool all = true;
  auto record = [&](const std::string& model, const std::string& check, bool ok, json detail) {
    all = all && ok;
    checks.push_back({{"model", model}, {"check", check}, {"passed", ok}, {"detail", detail}});
  };
  for (const auto& [label, model] : zoo) {
    require_valid(model);
    auto size = select_embedding_size(a.n);
    auto emb = build(model, size);
    auto s = slices(model, size.m);
    auto direct = eigenvalues_direct(s, size);
    auto kform = eigenvalues_kernel_form(s, size);
    auto raw = eigenvalues_fft(emb.first_row);
    double scale = 0.0, d1 = 0.0, d2 = 0.0;
    for (std::size_t k = 0; k < raw.size(); ++k) scale = std::max(scale, std::abs(raw[k]));
    for (std::size_t k = 0; k < raw.size(); ++k) {
      d1 = std::max(d1, std::abs(raw[k] - direct[k]));
      d2 = std::max(d2, std::abs(raw[k] - kform[k]));
    }
    record(label, "eigenvalue_equivalence", d1 <= 1e-6 * scale && d2 <= 1e-6 * scale,
           {{"fft_vs_direct", d1 / scale}, {"fft_vs_kernel", d2 / scale}});

    auto G = dense_gamma(model, a.n);
    double blk = 0.0;
    const std::size_t N = size.m_tilde;
    for (std::size_t j = 0; j < a.n; ++j)
      for (std::size_t k = 0; k < a.n; ++k)
        blk = std::max(blk, std::abs(emb.first_row[(k + N - j) % N] - G(j, k)));
    record(label, "circulant_block", blk <= 1e-12 * std::max(1.0, G(0, 0).real()), {{"max_abs_diff", blk}});

    CholeskySampler chol(G);
    MomentAccumulator acc_chol(a.n);
    for (std::size_t r = 0; r < a.reps; ++r) {
      Rng rng(a.seed, r);
      acc_chol.add(chol.sample(true, rng));
    }
    double zc = max_z(acc_chol.cov(), acc_chol.cov_se(), G);
    record(label, "cholesky_covariance", zc <= a.band, {{"max_z", zc}, {"band", a.band}});

    if (!emb.nonnegative()) {
      record(label, "circulant_covariance", false,
             {{"negative_count", emb.negative_count}, {"min_eig", emb.min_eig}});
      continue;
    }
    CirculantSampler sampler(emb);
    MomentAccumulator acc(a.n);
    for (std::size_t r = 0; r < a.reps; ++r) {
      Rng rng(a.seed + 1, r);
      acc.add(sampler.sample(NoiseKind::CircularStandard, rng));
    }
    double z = max_z(acc.cov(), acc.cov_se(), G);
    double zp = max_z(acc.pseudo(), acc.pseudo_se(), Eigen::MatrixXcd::Zero(a.n, a.n));
    record(label, "circulant_covariance", z <= a.band, {{"max_z", z}, {"band", a.band}});
    record(label, "circulant_pseudo_zero", zp <= a.band, {{"max_z", zp}, {"band", a.band}});
  }
  json j{{"seed", a.seed}, {"n", a.n}, {"reps", a.reps}, {"passed", all}, {"checks", checks}};
  Output out(a.output);
  out.stream() << j.dump(2) << '\n';
  out.close();
  return all ? 0 : kExitVerifyFailed;
}

// ---- bench-fft ----

struct BenchArgs {
  std::vector<std::size_t> n{1000, 5000, 10000, 50000, 100000, 500000, 1000000};
  std::size_t reps = 10;
  std::uint64_t seed = 0;
  std::string output;
};

// Smallest Π p_i^{e_i} >= target over the given primes with e_i >= min_exp[i].
std::size_t smallest_product(std::size_t target, const std::vector<std::size_t>& primes,
                             const std::vector<int>& min_exp) {
  std::size_t best = SIZE_MAX;
  std::function<void(std::size_t, std::size_t)> go = [&](std::size_t i, std::size_t acc) {
    if (acc >= best) return;
    if (i == primes.size()) {
      if (acc >= target) best = acc;
      return;
    }
    std::size_t v = acc;
    for (int e = 0; e < min_exp[i]; ++e) v *= primes[i];
    while (true) {
      go(i + 1, v);
      if (v >= target || v > best / primes[i]) break;
      v *= primes[i];
    }
  };
  go(0, 1);
  return best;
}

int run_bench(const BenchArgs& a) {
  Output out(a.output);
  auto& os = out.stream();
  os << "# " << json{{"seed", a.seed}, {"reps", a.reps}}.dump() << '\n';
  os << "n,family,length,mean_ms\n";
  Rng rng(a.seed, 0);
  for (std::size_t n : a.n) {
    if (n < 2) throw DomainError("bench-fft: n must be >= 2");
    std::size_t pow2 = 1;
    while (pow2 < 2 * (n - 1)) pow2 *= 2;
    const std::size_t t = 2 * n - 1;
    std::vector<std::pair<std::string, std::size_t>> rows{
        {"2^p", pow2},
        {"3^p", smallest_product(t, {3}, {1})},
        {"5^p", smallest_product(t, {5}, {1})},
        {"7^p", smallest_product(t, {7}, {1})},
        {"11^p", smallest_product(t, {11}, {1})},
        {"3^a5^b", smallest_product(t, {3, 5}, {1, 1})},
        {"3^a5^b7^c", smallest_product(t, {3, 5, 7}, {1, 1, 1})},
        {"3^a5^b7^c11^d", smallest_product(t, {3, 5, 7, 11}, {1, 1, 1, 1})},
        {"smooth", select_embedding_size(n).m_tilde}};
    for (const auto& [family, len] : rows) {
      FftPlan plan(len, FftDirection::Forward);
      std::vector<cd> x(len), y(len);
      double total = 0.0;
      for (std::size_t r = 0; r < a.reps; ++r) {
        for (auto& v : x) v = cd{rng.normal(), 0.0};
        auto t0 = std::chrono::steady_clock::now();
        plan.execute(x.data(), y.data());
        auto t1 = std::chrono::steady_clock::now();
        total += std::chrono::duration<double, std::milli>(t1 - t0).count();
      }
      os << n << ',' << family << ',' << len << ',' << num(total / static_cast<double>(a.reps)) << '\n';
    }
  }
  out.close();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Circulant-embedding simulation of complex stationary Gaussian sequences"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* c_sim = app.add_subcommand("simulate", "Simulate paths (CSV index,re,im or JSON)");
  c_sim->add_option("--model", sim.model, "Model JSON file or inline JSON")->required();
  c_sim->add_option("--n", sim.n, "Path length")->required();
  c_sim->add_option("--algorithm", sim.algorithm, "real | circular")->check(CLI::IsMember({"real", "circular"}));
  c_sim->add_option("--policy", sim.policy, "grow | approx")->check(CLI::IsMember({"grow", "approx"}));
  c_sim->add_option("--max-doublings", sim.max_doublings, "Growth steps for --policy grow");
  c_sim->add_option("--seed", sim.seed, "RNG seed");
  c_sim->add_option("--reps", sim.reps, "Number of replications")->check(CLI::PositiveNumber);
  c_sim->add_option("--out", sim.format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
  c_sim->add_option("-o,--output", sim.output, "Output file (default stdout)");
  c_sim->add_option("--threads", sim.threads, "Worker threads (0: CEMBED_THREADS or all cores)");

  EmbeddingArgs chk;
  auto* c_chk = app.add_subcommand("check-embedding", "Embedding eigenvalue and checker report (JSON)");
  c_chk->add_option("--model", chk.model, "Model JSON file or inline JSON")->required();
  c_chk->add_option("--n", chk.n, "Path length")->required();
  c_chk->add_option("--m", chk.m, "Explicit half size m >= n-1 (default: minimal smooth)");
  c_chk->add_option("--csv", chk.csv, "Also write k,lambda to this file");
  c_chk->add_option("-o,--output", chk.output, "Output file (default stdout)");
  c_chk->add_option("--seed", chk.seed, "Recorded in metadata");
  c_chk->add_flag("!--no-checkers", chk.checkers, "Skip the sufficient-condition checkers");

  EmbeddingArgs eig;
  auto* c_eig = app.add_subcommand("eigplot", "Write k,lambda CSV of the embedding spectrum");
  c_eig->add_option("--model", eig.model, "Model JSON file or inline JSON")->required();
  c_eig->add_option("--n", eig.n, "Path length")->required();
  c_eig->add_option("--m", eig.m, "Explicit half size m >= n-1");
  c_eig->add_option("-o,--output", eig.output, "Output file (default stdout)");
  c_eig->add_option("--seed", eig.seed, "Recorded in metadata");

  EstimateArgs est;
  std::optional<double> eta_opt;
  auto* c_est = app.add_subcommand("estimate", "Hurst estimation and confidence intervals (JSON)");
  c_est->add_option("--in", est.in, "CSV from simulate, or inline {\"model\":..,\"n\":..}")->required();
  c_est->add_option("--path-kind", est.path_kind, "increments (integrated first) | path")
      ->check(CLI::IsMember({"increments", "path"}));
  c_est->add_option("--rep", est.rep, "Replication to read from a long-format CSV");
  c_est->add_option("--filter", est.filter, "Filter coefficients, comma separated");
  c_est->add_option("--scales", est.scales, "Dilation factors, comma separated");
  c_est->add_option("--ci", est.ci, "clt | ppb | spb")->check(CLI::IsMember({"clt", "ppb", "spb"}));
  c_est->add_option("--level", est.level, "Confidence level")->check(CLI::Range(0.0, 0.999999));
  c_est->add_option("--B", est.B, "Bootstrap replications (>= 100)");
  c_est->add_option("--sigma2", est.sigma2, "Known sigma^2");
  c_est->add_option("--eta", eta_opt, "Known eta");
  c_est->add_option("--seed", est.seed, "RNG seed");
  c_est->add_option("--threads", est.threads, "Worker threads");
  c_est->add_option("--bootstrap-fallback", est.fallback, "propagate | dense | approx")
      ->check(CLI::IsMember({"propagate", "dense", "approx"}));
  c_est->add_option("-o,--output", est.output, "Output file (default stdout)");

  VerifyArgs ver;
  auto* c_ver = app.add_subcommand("verify", "Oracle cross-checks (JSON pass/fail summary)");
  c_ver->add_option("--model", ver.model, "Model JSON (default: built-in zoo)");
  c_ver->add_option("--n", ver.n, "Path length (<= 64)");
  c_ver->add_option("--reps", ver.reps, "Monte Carlo draws per method");
  c_ver->add_option("--band", ver.band, "Allowed standard errors");
  c_ver->add_option("--seed", ver.seed, "RNG seed");
  c_ver->add_option("-o,--output", ver.output, "Output file (default stdout)");

  BenchArgs bench;
  auto* c_bench = app.add_subcommand("bench-fft", "FFT timings at power-of-two and smooth lengths (CSV)");
  c_bench->add_option("--n", bench.n, "Sample sizes");
  c_bench->add_option("--reps", bench.reps, "Replications per length")->check(CLI::PositiveNumber);
  c_bench->add_option("--seed", bench.seed, "RNG seed");
  c_bench->add_option("-o,--output", bench.output, "Output file (default stdout)");

  auto usage = [&](const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  };
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return usage(e);
  }

  try {
    if (c_sim->parsed()) return run_simulate(sim);
    if (c_chk->parsed()) return run_check_embedding(chk);
    if (c_eig->parsed()) return run_eigplot(eig);
    if (c_est->parsed()) {
      est.eta = eta_opt;
      return run_estimate(est, c_est->count("--sigma2") > 0);
    }
    if (c_ver->parsed()) return run_verify(ver);
    if (c_bench->parsed()) return run_bench(bench);
  } catch (const CLI::ParseError& e) {
    return usage(e);
  } catch (const EmbeddingFailure& e) {
    std::cerr << "embedding failure: " << e.what() << '\n';
    return kExitEmbedding;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kExitIo;
  } catch (const DomainError& e) {
    std::cerr << "invalid model or parameters: " << e.what() << '\n';
    return kExitModel;
  } catch (const SizeError& e) {
    std::cerr << "invalid size: " << e.what() << '\n';
    return kExitModel;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
