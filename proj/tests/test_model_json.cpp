#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "cembed/errors.hpp"
#include "cembed/model_json.hpp"
#include "support.hpp"

using namespace cembed;
using nlohmann::json;

TEST(ModelJson, RoundTripZoo) {
  auto models = tsupport::zoo();
  models.push_back(Tabulated{{cd{2.0, 0.0}, cd{0.5, 0.25}}});
  for (const auto& m : models) {
    auto j = model_to_json(m);
    auto back = model_from_json(json::parse(j.dump()));
    EXPECT_EQ(name(back), name(m));
    for (std::int64_t t = -1; t <= 1; ++t) EXPECT_EQ(gamma(back, t), gamma(m, t)) << j.dump();
  }
}

TEST(ModelJson, RoundTripRandom) {
  std::mt19937_64 g(3);
  for (int i = 0; i < 200; ++i) {
    auto m = tsupport::random_model(g);
    auto back = model_from_json(json::parse(model_to_json(m).dump()));
    for (std::int64_t t = 0; t <= 4; ++t) EXPECT_EQ(gamma(back, t), gamma(m, t));
  }
}

TEST(ModelJson, Parsing) {
  auto m = parse_model(R"({"variant": "Modulated", "params": {"phi": 0.125,
      "base": {"variant": "FARIMA", "params": {"d": 0.2}}}})");
  const auto& mod = std::get<Modulated>(m);
  EXPECT_EQ(mod.phi, 0.125);
  EXPECT_EQ(std::get<FARIMA>(mod.base).sigma_eps2, 1.0);
  auto ar = std::get<ComplexAR1>(parse_model(R"({"variant":"ComplexAR1","params":{"a":[0.3,0.4]}})"));
  EXPECT_EQ(ar.a, cd(0.3, 0.4));
  auto real_a = std::get<ComplexAR1>(parse_model(R"({"variant":"ComplexAR1","params":{"a":0.5}})"));
  EXPECT_EQ(real_a.a, cd(0.5, 0.0));
  auto wn = std::get<WhiteNoise>(parse_model(R"({"variant":"WhiteNoise","params":{}})"));
  EXPECT_EQ(wn.sigma2, 1.0);
}

TEST(ModelJson, EtaRelative) {
  auto c = std::get<CircularFGN>(
      parse_model(R"({"variant":"CircularFGN","params":{"H":0.8,"eta_rel":0.6666666666666666}})"));
  EXPECT_NEAR(c.eta, 2.0 / 3.0 * tsupport::tan_abs(0.8), 1e-15);
  EXPECT_THROW(parse_model(R"({"variant":"CircularFGN","params":{"H":0.8,"eta":0.1,"eta_rel":0.5}})"),
               DomainError);
}

TEST(ModelJson, Errors) {
  EXPECT_THROW(parse_model(R"({"variant":"Nope","params":{}})"), DomainError);
  EXPECT_THROW(parse_model(R"({"variant":"WhiteNoise","params":{"sigma":1}})"), DomainError);
  EXPECT_THROW(parse_model(R"({"variant":"WhiteNoise","params":{},"extra":1})"), DomainError);
  EXPECT_THROW(parse_model(R"({"params":{}})"), DomainError);
  EXPECT_THROW(parse_model("not json"), DomainError);
  EXPECT_THROW(parse_model(R"({"variant":"FGN","params":{}})"), DomainError);
  EXPECT_THROW(real_model_from_json(json::parse(R"({"variant":"WhiteNoise","params":{}})")), DomainError);
  EXPECT_THROW(load_model("/nonexistent/model.json"), IoError);
}
