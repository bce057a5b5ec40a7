#pragma once

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "cembed/covmodels.hpp"

namespace cembed::tsupport {

inline double tan_abs(double H) { return std::abs(std::tan(std::numbers::pi * H)); }

// One model of every kind, all valid.
inline std::vector<CovarianceModel> zoo() {
  const double pi = std::numbers::pi;
  return {
      WhiteNoise{1.0},
      Modulated{0.125, FARIMA{0.2, 1.0}},
      Modulated{0.3, FARIMA{-0.3, 1.0}},
      Modulated{-0.3, FGN{0.8, 1.5}},
      Modulated{0.2, FGN{0.3, 1.0}},
      Modulated{0.07, Exponential{0.5, 1.0}},
      Modulated{0.2, GeneralizedCauchy{0.7, 1.3, 1.0}},
      Modulated{0.33, TruncatedPower{2.0, 1.0, 9.0}},
      Modulated{0.41, GeometricAR1{0.6, 2.0}},
      Modulated{0.1, GaussianBell{3.0, 1.0}},
      SumOfModulated{{Modulated{0.1, Exponential{1.0, 1.0}}, Modulated{-0.2, FARIMA{0.3, 0.5}}}},
      ComplexAR1{std::polar(0.6, pi / 4), 1.0, true},
      ComplexAR1{cd{-0.5, 0.2}, 2.0, false},
      ComplexFGN{0.3, 1.0, 0.5, 0.4},
      ComplexFGN{0.75, 0.8, 1.2, -0.9},
      CircularFGN{0.2, 1.0, 2.0 / 3.0 * tan_abs(0.2)},
      CircularFGN{0.8, 1.0, 2.0 / 3.0 * tan_abs(0.8)},
      CircularFGN{0.65, 2.0, -1.0},
  };
}

inline RealCovariance random_real(std::mt19937_64& g) {
  std::uniform_real_distribution<double> U(0.0, 1.0);
  switch (std::uniform_int_distribution<int>(0, 6)(g)) {
    case 0: {
      double H = 0.02 + 0.96 * U(g);
      return FGN{H, 0.5 + U(g)};
    }
    case 1:
      return FARIMA{-0.49 + 0.98 * U(g), 0.5 + U(g)};
    case 2:
      return Exponential{0.01 + 3.0 * U(g), 0.5 + U(g)};
    case 3:
      return GeneralizedCauchy{0.05 + 0.95 * U(g), 0.05 + 3.0 * U(g), 0.5 + U(g)};
    case 4:
      return TruncatedPower{0.2 + 4.0 * U(g), 0.5 + U(g), 1.0 + 60.0 * U(g)};
    case 5:
      return GeometricAR1{0.01 + 0.98 * U(g), 0.5 + U(g)};
    default:
      return GaussianBell{0.3 + 30.0 * U(g), 0.5 + U(g)};
  }
}

inline CovarianceModel random_model(std::mt19937_64& g) {
  std::uniform_real_distribution<double> U(0.0, 1.0);
  auto H_of = [&] {
    double H;
    do H = 0.02 + 0.96 * U(g);
    while (std::abs(H - 0.5) < 0.01);
    return H;
  };
  switch (std::uniform_int_distribution<int>(0, 6)(g)) {
    case 0:
      return WhiteNoise{0.5 + U(g)};
    case 1:
      return Modulated{U(g) - 0.5, random_real(g)};
    case 2: {
      SumOfModulated s;
      int k = 2 + static_cast<int>(U(g) * 2);
      for (int i = 0; i < k; ++i) s.terms.push_back(Modulated{U(g) - 0.5, random_real(g)});
      return s;
    }
    case 3:
      return ComplexAR1{std::polar(0.95 * U(g), 2.0 * std::numbers::pi * U(g)), 0.5 + U(g), true};
    case 4: {
      double H = H_of();
      return ComplexFGN{H, 0.3 + U(g), 0.3 + U(g), (2.0 * U(g) - 1.0) * tan_abs(H)};
    }
    default: {
      double H = H_of();
      return CircularFGN{H, 0.5 + U(g), (2.0 * U(g) - 1.0) * tan_abs(H)};
    }
  }
}

}  // namespace cembed::tsupport
