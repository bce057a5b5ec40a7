#include "cembed/model_json.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "cembed/errors.hpp"

namespace cembed {

using nlohmann::json;

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

class Params {
 public:
  Params(const json& j, std::string variant) : variant_(std::move(variant)) {
    if (j.is_null()) return;
    if (!j.is_object()) throw DomainError(variant_ + ": params must be an object");
    j_ = j;
  }
  double num(const std::string& key) {
    used_.insert(key);
    if (!j_.contains(key)) throw DomainError(variant_ + ": missing parameter '" + key + "'");
    return as_num(j_.at(key), key);
  }
  double num(const std::string& key, double fallback) {
    used_.insert(key);
    if (!j_.contains(key)) return fallback;
    return as_num(j_.at(key), key);
  }
  bool has(const std::string& key) const { return j_.contains(key); }
  bool flag(const std::string& key, bool fallback) {
    used_.insert(key);
    if (!j_.contains(key)) return fallback;
    if (!j_.at(key).is_boolean()) throw DomainError(variant_ + ": '" + key + "' must be a boolean");
    return j_.at(key).get<bool>();
  }
  const json& raw(const std::string& key) {
    used_.insert(key);
    if (!j_.contains(key)) throw DomainError(variant_ + ": missing parameter '" + key + "'");
    return j_.at(key);
  }
  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!used_.count(it.key()))
        throw DomainError(variant_ + ": unknown parameter '" + it.key() + "'");
  }

 private:
  double as_num(const json& v, const std::string& key) const {
    if (!v.is_number()) throw DomainError(variant_ + ": '" + key + "' must be a number");
    return v.get<double>();
  }
  std::string variant_;
  json j_ = json::object();
  std::set<std::string> used_;
};

cd complex_from(const json& v, const std::string& what) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
    return {v[0].get<double>(), v[1].get<double>()};
  throw DomainError(what + ": complex values are [re, im] or a real number");
}

json complex_to(cd z) { return json::array({z.real(), z.imag()}); }

std::pair<std::string, json> split(const json& j) {
  if (!j.is_object()) throw DomainError("model: expected a JSON object");
  if (!j.contains("variant") || !j.at("variant").is_string())
    throw DomainError("model: missing string field 'variant'");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (it.key() != "variant" && it.key() != "params")
      throw DomainError("model: unknown top-level field '" + it.key() + "'");
  return {j.at("variant").get<std::string>(), j.contains("params") ? j.at("params") : json()};
}

// η given either directly or as a fraction of |tan πH|.
double eta_param(Params& p, const std::string& variant, double H) {
  if (p.has("eta") && p.has("eta_rel"))
    throw DomainError(variant + ": give either 'eta' or 'eta_rel', not both");
  if (p.has("eta_rel")) return p.num("eta_rel") * std::abs(std::tan(std::numbers::pi * H));
  return p.num("eta", 0.0);
}

Modulated modulated_from(const json& params) {
  Params p(params, "Modulated");
  Modulated md;
  md.phi = p.num("phi");
  md.base = real_model_from_json(p.raw("base"));
  p.finish();
  return md;
}

json modulated_params(const Modulated& md) {
  return json{{"phi", md.phi}, {"base", real_model_to_json(md.base)}};
}

}  // namespace

RealCovariance real_model_from_json(const json& j) {
  auto [variant, params] = split(j);
  Params p(params, variant);
  RealCovariance out;
  if (variant == "FGN") {
    out = FGN{p.num("H"), p.num("sigma2", 1.0)};
  } else if (variant == "FARIMA") {
    out = FARIMA{p.num("d"), p.num("sigma_eps2", 1.0)};
  } else if (variant == "Exponential") {
    out = Exponential{p.num("alpha"), p.num("sigma2", 1.0)};
  } else if (variant == "GeneralizedCauchy") {
    double a = p.num("alpha"), b = p.num("beta");
    out = GeneralizedCauchy{a, b, p.num("sigma2", 1.0)};
  } else if (variant == "TruncatedPower") {
    double e = p.num("exponent");
    double s = p.num("sigma2", 1.0);
    out = TruncatedPower{e, s, p.num("range", 1.0)};
  } else if (variant == "GeometricAR1") {
    out = GeometricAR1{p.num("rho"), p.num("sigma2", 1.0)};
  } else if (variant == "GaussianBell") {
    out = GaussianBell{p.num("ell"), p.num("sigma2", 1.0)};
  } else {
    throw DomainError("unknown real covariance variant '" + variant + "'");
  }
  p.finish();
  return out;
}

CovarianceModel model_from_json(const json& j) {
  auto [variant, params] = split(j);
  if (variant == "Modulated") return modulated_from(params);
  Params p(params, variant);
  CovarianceModel out;
  if (variant == "WhiteNoise") {
    out = WhiteNoise{p.num("sigma2", 1.0)};
  } else if (variant == "SumOfModulated") {
    const json& terms = p.raw("terms");
    if (!terms.is_array()) throw DomainError("SumOfModulated: 'terms' must be an array");
    SumOfModulated s;
    for (const auto& t : terms) {
      if (t.is_object() && t.contains("variant")) {
        auto m = model_from_json(t);
        if (!std::holds_alternative<Modulated>(m))
          throw DomainError("SumOfModulated: terms must be Modulated");
        s.terms.push_back(std::get<Modulated>(m));
      } else {
        s.terms.push_back(modulated_from(t));
      }
    }
    out = s;
  } else if (variant == "ComplexAR1") {
    ComplexAR1 ar;
    ar.a = complex_from(p.raw("a"), "ComplexAR1.a");
    ar.sigma2 = p.num("sigma2", 1.0);
    ar.circular = p.flag("circular", true);
    out = ar;
  } else if (variant == "ComplexFGN") {
    ComplexFGN f;
    f.H = p.num("H");
    f.sigma_r = p.num("sigma_r", 1.0);
    f.sigma_i = p.num("sigma_i", 1.0);
    f.eta = eta_param(p, variant, f.H);
    out = f;
  } else if (variant == "CircularFGN") {
    CircularFGN f;
    f.H = p.num("H");
    f.sigma2 = p.num("sigma2", 1.0);
    f.eta = eta_param(p, variant, f.H);
    out = f;
  } else if (variant == "Tabulated") {
    const json& v = p.raw("values");
    if (!v.is_array() || v.empty()) throw DomainError("Tabulated: 'values' must be a non-empty array");
    Tabulated t;
    for (const auto& x : v) t.values.push_back(complex_from(x, "Tabulated.values"));
    out = t;
  } else {
    throw DomainError("unknown model variant '" + variant + "'");
  }
  p.finish();
  return out;
}

json real_model_to_json(const RealCovariance& model) {
  return std::visit(
      overloaded{
          [](const FGN& f) { return json{{"variant", "FGN"}, {"params", {{"H", f.H}, {"sigma2", f.sigma2}}}}; },
          [](const FARIMA& f) {
            return json{{"variant", "FARIMA"}, {"params", {{"d", f.d}, {"sigma_eps2", f.sigma_eps2}}}};
          },
          [](const Exponential& f) {
            return json{{"variant", "Exponential"}, {"params", {{"alpha", f.alpha}, {"sigma2", f.sigma2}}}};
          },
          [](const GeneralizedCauchy& f) {
            return json{{"variant", "GeneralizedCauchy"},
                        {"params", {{"alpha", f.alpha}, {"beta", f.beta}, {"sigma2", f.sigma2}}}};
          },
          [](const TruncatedPower& f) {
            return json{{"variant", "TruncatedPower"},
                        {"params", {{"exponent", f.exponent}, {"sigma2", f.sigma2}, {"range", f.range}}}};
          },
          [](const GeometricAR1& f) {
            return json{{"variant", "GeometricAR1"}, {"params", {{"rho", f.rho}, {"sigma2", f.sigma2}}}};
          },
          [](const GaussianBell& f) {
            return json{{"variant", "GaussianBell"}, {"params", {{"ell", f.ell}, {"sigma2", f.sigma2}}}};
          }},
      model);
}

json model_to_json(const CovarianceModel& model) {
  return std::visit(
      overloaded{
          [](const WhiteNoise& w) { return json{{"variant", "WhiteNoise"}, {"params", {{"sigma2", w.sigma2}}}}; },
          [](const Modulated& md) { return json{{"variant", "Modulated"}, {"params", modulated_params(md)}}; },
          [](const SumOfModulated& s) {
            json terms = json::array();
            for (const auto& t : s.terms) terms.push_back(modulated_params(t));
            return json{{"variant", "SumOfModulated"}, {"params", {{"terms", terms}}}};
          },
          [](const ComplexAR1& ar) {
            return json{{"variant", "ComplexAR1"},
                        {"params", {{"a", complex_to(ar.a)}, {"sigma2", ar.sigma2}, {"circular", ar.circular}}}};
          },
          [](const ComplexFGN& f) {
            return json{{"variant", "ComplexFGN"},
                        {"params", {{"H", f.H}, {"sigma_r", f.sigma_r}, {"sigma_i", f.sigma_i}, {"eta", f.eta}}}};
          },
          [](const CircularFGN& f) {
            return json{{"variant", "CircularFGN"},
                        {"params", {{"H", f.H}, {"sigma2", f.sigma2}, {"eta", f.eta}}}};
          },
          [](const Tabulated& t) {
            json v = json::array();
            for (const auto& z : t.values) v.push_back(complex_to(z));
            return json{{"variant", "Tabulated"}, {"params", {{"values", v}}}};
          }},
      model);
}

CovarianceModel parse_model(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw DomainError(std::string("model: invalid JSON: ") + e.what());
  }
  return model_from_json(j);
}

CovarianceModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read model file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_model(ss.str());
}

}  // namespace cembed
