#include "cembed/covmodels.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "cembed/errors.hpp"

namespace cembed {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr double kPi = std::numbers::pi;

bool finite_all(std::initializer_list<double> xs) {
  for (double x : xs)
    if (!std::isfinite(x)) return false;
  return true;
}

// e^{2iπ x}, reducing x mod 1 first.
cd unit_phase(double x) {
  double f = x - std::round(x);
  return std::polar(1.0, 2.0 * kPi * f);
}

double farima_r0(const FARIMA& f) {
  double g = std::tgamma(1.0 - f.d);
  return f.sigma_eps2 * std::tgamma(1.0 - 2.0 * f.d) / (g * g);
}

cd ar1_gamma_nonneg(const ComplexAR1& ar, std::uint64_t tau) {
  double rho = std::abs(ar.a);
  double scale = ar.sigma2 / (1.0 - rho * rho);
  if (tau == 0) return {scale, 0.0};
  double mag = std::pow(rho, static_cast<double>(tau)) * scale;
  double ang = std::arg(ar.a) / (2.0 * kPi) * static_cast<double>(tau);
  return mag * unit_phase(ang);
}

cd circular_factor(double eta, std::int64_t tau) { return {1.0, -eta * sgn(tau)}; }

bool fgn_eta_ok(double H, double eta) {
  double t = std::tan(kPi * H);
  return eta * eta <= t * t * (1.0 + 1e-12);
}

void fgn_checks(double H, double eta, std::vector<std::string>& out) {
  if (!(H > 0.0 && H < 1.0)) out.push_back("H must lie in (0,1)");
  if (std::abs(H - 0.5) < 1e-12) out.push_back("H = 1/2 is not supported");
  if (!std::isfinite(eta))
    out.push_back("eta must be finite");
  else if (H > 0.0 && H < 1.0 && !fgn_eta_ok(H, eta))
    out.push_back("eta^2 > tan^2(pi H)");
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(10);
  os << x;
  return os.str();
}

}  // namespace

double fgn_second_difference(double H, std::uint64_t tau) {
  const double e = 2.0 * H;
  if (tau == 0) return 2.0;
  const double t = static_cast<double>(tau);
  if (tau < 8) return std::pow(t - 1.0, e) - 2.0 * std::pow(t, e) + std::pow(t + 1.0, e);
  // τ^{2H} · 2 Σ_{k≥1} C(2H,2k) τ^{−2k}
  const double inv2 = 1.0 / (t * t);
  double b = e * (e - 1.0) / 2.0;
  double p = inv2;
  double sum = 0.0;
  for (int k = 1; k < 60; ++k) {
    double term = b * p;
    sum += term;
    if (std::abs(term) <= 1e-18 * std::abs(sum)) break;
    b *= (e - 2.0 * k) * (e - 2.0 * k - 1.0) / ((2.0 * k + 1.0) * (2.0 * k + 2.0));
    p *= inv2;
  }
  return 2.0 * std::pow(t, e) * sum;
}

double acvf_real(const RealCovariance& model, std::uint64_t tau) {
  require_valid(model);
  const double t = static_cast<double>(tau);
  return std::visit(
      overloaded{
          [&](const FGN& f) { return 0.5 * f.sigma2 * fgn_second_difference(f.H, tau); },
          [&](const FARIMA& f) {
            double r = farima_r0(f);
            for (std::uint64_t k = 0; k < tau; ++k) {
              double kk = static_cast<double>(k);
              r *= (kk + f.d) / (kk + 1.0 - f.d);
            }
            return r;
          },
          [&](const Exponential& f) { return f.sigma2 * std::exp(-f.alpha * t); },
          [&](const GeneralizedCauchy& f) {
            return f.sigma2 * std::pow(1.0 + std::pow(t, f.alpha), -f.beta);
          },
          [&](const TruncatedPower& f) {
            double u = 1.0 - t / f.range;
            return u > 0.0 ? f.sigma2 * std::pow(u, f.exponent) : 0.0;
          },
          [&](const GeometricAR1& f) { return f.sigma2 * std::pow(f.rho, t); },
          [&](const GaussianBell& f) {
            double u = t / f.ell;
            return f.sigma2 * std::exp(-u * u);
          }},
      model);
}

std::vector<double> acvf_real_seq(const RealCovariance& model, std::size_t m) {
  require_valid(model);
  std::vector<double> r(m + 1);
  if (const auto* f = std::get_if<FARIMA>(&model)) {
    r[0] = farima_r0(*f);
    for (std::size_t k = 0; k < m; ++k) {
      double kk = static_cast<double>(k);
      r[k + 1] = r[k] * (kk + f->d) / (kk + 1.0 - f->d);
    }
    return r;
  }
  for (std::size_t k = 0; k <= m; ++k) r[k] = acvf_real(model, k);
  return r;
}

cd gamma(const CovarianceModel& model, std::int64_t tau) {
  require_valid(model);
  const std::uint64_t a = static_cast<std::uint64_t>(tau < 0 ? -tau : tau);
  return std::visit(
      overloaded{
          [&](const WhiteNoise& w) { return tau == 0 ? cd{w.sigma2, 0.0} : cd{0.0, 0.0}; },
          [&](const Modulated& md) {
            return acvf_real(md.base, a) * unit_phase(md.phi * static_cast<double>(tau));
          },
          [&](const SumOfModulated& s) {
            cd acc{0.0, 0.0};
            for (const auto& md : s.terms)
              acc += acvf_real(md.base, a) * unit_phase(md.phi * static_cast<double>(tau));
            return acc;
          },
          [&](const ComplexAR1& ar) {
            cd g = ar1_gamma_nonneg(ar, a);
            return tau < 0 ? std::conj(g) : g;
          },
          [&](const ComplexFGN& f) {
            cd c{0.5 * (f.sigma_r * f.sigma_r + f.sigma_i * f.sigma_i),
                 -f.eta * f.sigma_r * f.sigma_i * sgn(tau)};
            return c * fgn_second_difference(f.H, a);
          },
          [&](const CircularFGN& f) {
            return f.sigma2 * circular_factor(f.eta, tau) * fgn_second_difference(f.H, a);
          },
          [&](const Tabulated& tb) {
            if (a >= tb.values.size())
              throw RangeError("lag " + std::to_string(tau) + " outside tabulated range 0.." +
                               std::to_string(tb.values.size() - 1));
            if (a == 0) return cd{tb.values[0].real(), 0.0};
            return tau < 0 ? std::conj(tb.values[a]) : tb.values[a];
          }},
      model);
}

std::vector<cd> gamma_seq(const CovarianceModel& model, std::size_t m) {
  require_valid(model);
  std::vector<cd> g(m + 1);
  auto add_modulated = [&](const Modulated& md) {
    auto r = acvf_real_seq(md.base, m);
    for (std::size_t k = 0; k <= m; ++k) g[k] += r[k] * unit_phase(md.phi * static_cast<double>(k));
  };
  if (const auto* md = std::get_if<Modulated>(&model)) {
    add_modulated(*md);
  } else if (const auto* s = std::get_if<SumOfModulated>(&model)) {
    for (const auto& t : s->terms) add_modulated(t);
  } else {
    for (std::size_t k = 0; k <= m; ++k) g[k] = gamma(model, static_cast<std::int64_t>(k));
  }
  g[0] = {g[0].real(), 0.0};
  return g;
}

std::vector<std::string> validate(const RealCovariance& model) {
  std::vector<std::string> out;
  std::visit(overloaded{
                 [&](const FGN& f) {
                   if (!(f.H > 0.0 && f.H < 1.0)) out.push_back("H must lie in (0,1)");
                   if (!(f.sigma2 > 0.0)) out.push_back("sigma2 must be positive");
                 },
                 [&](const FARIMA& f) {
                   if (!(f.d >= -0.5 && f.d < 0.5)) out.push_back("d must lie in [-1/2, 1/2)");
                   if (!(f.sigma_eps2 > 0.0)) out.push_back("sigma_eps2 must be positive");
                 },
                 [&](const Exponential& f) {
                   if (!(f.alpha > 0.0)) out.push_back("alpha must be positive");
                   if (!(f.sigma2 > 0.0)) out.push_back("sigma2 must be positive");
                 },
                 [&](const GeneralizedCauchy& f) {
                   if (!(f.alpha > 0.0 && f.alpha <= 1.0)) out.push_back("alpha must lie in (0,1]");
                   if (!(f.beta > 0.0)) out.push_back("beta must be positive");
                   if (!(f.sigma2 > 0.0)) out.push_back("sigma2 must be positive");
                 },
                 [&](const TruncatedPower& f) {
                   if (!(f.exponent > 0.0)) out.push_back("exponent must be positive");
                   if (!(f.range > 0.0)) out.push_back("range must be positive");
                   if (!(f.sigma2 > 0.0)) out.push_back("sigma2 must be positive");
                 },
                 [&](const GeometricAR1& f) {
                   if (!(f.rho > 0.0 && f.rho < 1.0)) out.push_back("rho must lie in (0,1)");
                   if (!(f.sigma2 > 0.0)) out.push_back("sigma2 must be positive");
                 },
                 [&](const GaussianBell& f) {
                   if (!(f.ell > 0.0)) out.push_back("ell must be positive");
                   if (!(f.sigma2 > 0.0)) out.push_back("sigma2 must be positive");
                 }},
             model);
  return out;
}

std::vector<std::string> validate(const CovarianceModel& model) {
  std::vector<std::string> out;
  auto add_all = [&](const std::vector<std::string>& v, const std::string& prefix) {
    for (const auto& s : v) out.push_back(prefix + s);
  };
  std::visit(
      overloaded{
          [&](const WhiteNoise& w) {
            if (!(w.sigma2 > 0.0)) out.push_back("sigma2 must be positive");
          },
          [&](const Modulated& md) {
            if (!std::isfinite(md.phi)) out.push_back("phi must be finite");
            add_all(validate(md.base), "");
          },
          [&](const SumOfModulated& s) {
            if (s.terms.empty()) out.push_back("sum needs at least one term");
            for (std::size_t k = 0; k < s.terms.size(); ++k) {
              if (!std::isfinite(s.terms[k].phi))
                out.push_back("term " + std::to_string(k) + ": phi must be finite");
              add_all(validate(s.terms[k].base), "term " + std::to_string(k) + ": ");
            }
          },
          [&](const ComplexAR1& ar) {
            if (!finite_all({ar.a.real(), ar.a.imag()}) || !(std::abs(ar.a) < 1.0))
              out.push_back("|a| must be < 1");
            if (!(ar.sigma2 > 0.0)) out.push_back("sigma2 must be positive");
          },
          [&](const ComplexFGN& f) {
            fgn_checks(f.H, f.eta, out);
            if (!(f.sigma_r >= 0.0) || !(f.sigma_i >= 0.0))
              out.push_back("sigma_r and sigma_i must be non-negative");
            else if (!(f.sigma_r * f.sigma_r + f.sigma_i * f.sigma_i > 0.0))
              out.push_back("sigma_r and sigma_i cannot both be zero");
          },
          [&](const CircularFGN& f) {
            fgn_checks(f.H, f.eta, out);
            if (!(f.sigma2 > 0.0)) out.push_back("sigma2 must be positive");
          },
          [&](const Tabulated& tb) {
            if (tb.values.empty()) {
              out.push_back("tabulated covariance needs gamma(0)");
              return;
            }
            for (const auto& v : tb.values)
              if (!finite_all({v.real(), v.imag()})) {
                out.push_back("tabulated values must be finite");
                break;
              }
            if (std::abs(tb.values[0].imag()) > 1e-12) out.push_back("gamma(0) must be real");
            if (tb.values[0].real() < 0.0) out.push_back("gamma(0) must be non-negative");
          }},
      model);
  return out;
}

namespace {
template <class M>
void require_valid_impl(const M& model) {
  auto v = validate(model);
  if (v.empty()) return;
  std::string msg = "invalid model " + name(model) + ":";
  for (const auto& s : v) msg += " " + s + ";";
  throw DomainError(msg);
}
}  // namespace

void require_valid(const RealCovariance& model) { require_valid_impl(model); }
void require_valid(const CovarianceModel& model) { require_valid_impl(model); }

CovarianceModel conjugate_model(const CovarianceModel& model) {
  return std::visit(
      overloaded{[](const WhiteNoise& w) -> CovarianceModel { return w; },
                 [](Modulated md) -> CovarianceModel {
                   md.phi = -md.phi;
                   return md;
                 },
                 [](SumOfModulated s) -> CovarianceModel {
                   for (auto& t : s.terms) t.phi = -t.phi;
                   return s;
                 },
                 [](ComplexAR1 ar) -> CovarianceModel {
                   ar.a = std::conj(ar.a);
                   return ar;
                 },
                 [](ComplexFGN f) -> CovarianceModel {
                   f.eta = -f.eta;
                   return f;
                 },
                 [](CircularFGN f) -> CovarianceModel {
                   f.eta = -f.eta;
                   return f;
                 },
                 [](Tabulated tb) -> CovarianceModel {
                   for (auto& v : tb.values) v = std::conj(v);
                   return tb;
                 }},
      model);
}

CovarianceSlices slices(const CovarianceModel& model, std::size_t m) {
  if (m < 1) throw DomainError("slices: m must be >= 1");
  auto g = gamma_seq(model, m);
  CovarianceSlices s;
  s.R.resize(m + 1);
  s.I.resize(m + 1);
  for (std::size_t j = 0; j <= m; ++j) {
    s.R[j] = g[j].real();
    s.I[j] = g[j].imag();
  }
  s.I[0] = 0.0;
  return s;
}

std::string name(const RealCovariance& model) {
  return std::visit(
      overloaded{
          [](const FGN& f) { return "FGN(H=" + fmt(f.H) + ", sigma2=" + fmt(f.sigma2) + ")"; },
          [](const FARIMA& f) {
            return "FARIMA(d=" + fmt(f.d) + ", sigma_eps2=" + fmt(f.sigma_eps2) + ")";
          },
          [](const Exponential& f) {
            return "Exponential(alpha=" + fmt(f.alpha) + ", sigma2=" + fmt(f.sigma2) + ")";
          },
          [](const GeneralizedCauchy& f) {
            return "GeneralizedCauchy(alpha=" + fmt(f.alpha) + ", beta=" + fmt(f.beta) +
                   ", sigma2=" + fmt(f.sigma2) + ")";
          },
          [](const TruncatedPower& f) {
            return "TruncatedPower(exponent=" + fmt(f.exponent) + ", sigma2=" + fmt(f.sigma2) +
                   ", range=" + fmt(f.range) + ")";
          },
          [](const GeometricAR1& f) {
            return "GeometricAR1(rho=" + fmt(f.rho) + ", sigma2=" + fmt(f.sigma2) + ")";
          },
          [](const GaussianBell& f) {
            return "GaussianBell(ell=" + fmt(f.ell) + ", sigma2=" + fmt(f.sigma2) + ")";
          }},
      model);
}

std::string name(const CovarianceModel& model) {
  return std::visit(
      overloaded{
          [](const WhiteNoise& w) { return "WhiteNoise(sigma2=" + fmt(w.sigma2) + ")"; },
          [](const Modulated& md) {
            return "Modulated(phi=" + fmt(md.phi) + ", " + name(md.base) + ")";
          },
          [](const SumOfModulated& s) {
            std::string out = "SumOfModulated(";
            for (std::size_t k = 0; k < s.terms.size(); ++k) {
              if (k) out += ", ";
              out += "phi=" + fmt(s.terms[k].phi) + " " + name(s.terms[k].base);
            }
            return out + ")";
          },
          [](const ComplexAR1& ar) {
            return "ComplexAR1(a=" + fmt(ar.a.real()) + (ar.a.imag() < 0 ? "" : "+") +
                   fmt(ar.a.imag()) + "i, sigma2=" + fmt(ar.sigma2) + ")";
          },
          [](const ComplexFGN& f) {
            return "ComplexFGN(H=" + fmt(f.H) + ", sigma_r=" + fmt(f.sigma_r) +
                   ", sigma_i=" + fmt(f.sigma_i) + ", eta=" + fmt(f.eta) + ")";
          },
          [](const CircularFGN& f) {
            return "CircularFGN(H=" + fmt(f.H) + ", sigma2=" + fmt(f.sigma2) +
                   ", eta=" + fmt(f.eta) + ")";
          },
          [](const Tabulated& tb) {
            return "Tabulated(m_max=" + std::to_string(tb.values.size() ? tb.values.size() - 1 : 0) +
                   ")";
          }},
      model);
}

}  // namespace cembed
