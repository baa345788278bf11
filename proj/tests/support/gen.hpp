#pragma once

// Seeded generators for the property tests.

#include <cstdint>
#include <random>
#include <vector>

namespace gen {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(eng_);
  }
  int integer(int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(eng_);
  }
  /// Monomial coefficients, low to high.
  std::vector<double> poly(int degree, double scale = 1.0) {
    std::vector<double> c(static_cast<std::size_t>(degree + 1));
    for (double& x : c) x = uniform(-scale, scale);
    return c;
  }

 private:
  std::mt19937_64 eng_;
};

inline double horner(const std::vector<double>& c, double z) {
  double acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * z + *it;
  return acc;
}

inline std::vector<double> deriv(const std::vector<double>& c) {
  std::vector<double> out;
  for (std::size_t k = 1; k < c.size(); ++k) out.push_back(k * c[k]);
  if (out.empty()) out.push_back(0.0);
  return out;
}

}  // namespace gen
