#ifndef BALLHEAT_RNG_HPP
#define BALLHEAT_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace ballheat {

// Deterministic uniform generator. Bit-level conversion from the mt19937_64
// stream so that output does not depend on the standard library's
// distribution implementations.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  // uniform in [0,1)
  double uniform() {
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
  }

  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  // uniform integer in [0, n)
  std::uint64_t uniform_int(std::uint64_t n) {
    // modulo bias is irrelevant at the sample sizes used here
    return eng_() % n;
  }

  double normal() {
    // Box-Muller, one value per call
    double u1 = uniform();
    double u2 = uniform();
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }

  // uniform point in the closed unit ball of dimension d
  std::vector<double> ball_point(int d) {
    for (;;) {
      std::vector<double> x(d);
      double s = 0.0;
      for (int i = 0; i < d; ++i) {
        x[i] = uniform(-1.0, 1.0);
        s += x[i] * x[i];
      }
      if (s <= 1.0) return x;
    }
  }

  // uniform point on S^{d-1} in R^d
  std::vector<double> sphere_point(int d) {
    for (;;) {
      std::vector<double> x(d);
      double s = 0.0;
      for (int i = 0; i < d; ++i) {
        x[i] = normal();
        s += x[i] * x[i];
      }
      if (s > 1e-30) {
        s = std::sqrt(s);
        for (int i = 0; i < d; ++i) x[i] /= s;
        return x;
      }
    }
  }

private:
  std::mt19937_64 eng_;
};

}  // namespace ballheat

#endif
