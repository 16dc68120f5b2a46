#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "ballheat/geometry.hpp"
#include "ballheat/jacobi.hpp"
#include "ballheat/quadrature.hpp"
#include "ballheat/rng.hpp"
#include "ballheat/spectral.hpp"
#include "doctest.h"

using namespace ballheat;

namespace {
constexpr double kPi = 3.14159265358979323846;

// trapezoid oracle for int_0^inf u^{-1/2} e^{-u - a/u} du with the
// substitution u = sqrt(a) e^w, which turns the integrand into
// a^{1/4} e^{w/2} exp(-2 sqrt(a) cosh w); doubly-exponential decay makes
// the trapezoid rule converge to machine precision
double subordination_oracle(double a) {
  double h = 0.02, acc = 0.0;
  for (int i = -2000; i <= 2000; ++i) {
    double w = h * i;
    acc += h * std::pow(a, 0.25) * std::exp(0.5 * w) *
           std::exp(-2.0 * std::sqrt(a) * std::cosh(w));
  }
  return acc;
}
}  // namespace

TEST_CASE("solid harmonics are orthonormal on the sphere") {
  for (int d : {2, 3}) {
    QuadratureRule sph = sphere_rule(d, 20);
    for (int k1 = 0; k1 <= 4; ++k1) {
      for (long kap1 = 1; kap1 <= harmonic_dim(d, k1); ++kap1) {
        for (int k2 = k1; k2 <= 4; ++k2) {
          for (long kap2 = 1; kap2 <= harmonic_dim(d, k2); ++kap2) {
            double s = 0.0;
            for (long i = 0; i < sph.size(); ++i)
              s += sph.weights[i] *
                   solid_harmonic(d, k1, (int)kap1, sph.node(i)) *
                   solid_harmonic(d, k2, (int)kap2, sph.node(i));
            double target = (k1 == k2 && kap1 == kap2) ? 1.0 : 0.0;
            CHECK(s == doctest::Approx(target).epsilon(1e-10));
          }
        }
      }
    }
  }
}

TEST_CASE("solid harmonics are homogeneous of degree k") {
  Rng rng(401);
  for (int d : {2, 3}) {
    for (int k = 0; k <= 5; ++k) {
      for (long kap = 1; kap <= harmonic_dim(d, k); ++kap) {
        std::vector<double> x = rng.ball_point(d);
        std::vector<double> sx = x;
        double c = 0.35;
        for (double& v : sx) v *= c;
        CHECK(solid_harmonic(d, k, (int)kap, sx.data()) ==
              doctest::Approx(std::pow(c, k) *
                              solid_harmonic(d, k, (int)kap, x.data()))
                  .epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("zonal kernel matches the explicit kappa sum") {
  Rng rng(402);
  for (int d : {2, 3}) {
    for (int k = 0; k <= 6; ++k) {
      for (int trial = 0; trial < 10; ++trial) {
        std::vector<double> x = rng.ball_point(d), y = rng.ball_point(d);
        double s = 0.0;
        for (long kap = 1; kap <= harmonic_dim(d, k); ++kap)
          s += solid_harmonic(d, k, (int)kap, x.data()) *
               solid_harmonic(d, k, (int)kap, y.data());
        CHECK(zonal_kernel(d, k, x.data(), y.data()) ==
              doctest::Approx(s).epsilon(1e-11));
      }
    }
  }
}

TEST_CASE("constant basis element") {
  // Q_{0,0,1} is the constant 1/sqrt(W_mu(B))
  for (int d : {2, 3}) {
    for (double mu : {0.0, 0.5, 1.5}) {
      ModelParams p(d, mu);
      Rng rng(403);
      double expect = 1.0 / std::sqrt(total_mass(p));
      for (int trial = 0; trial < 5; ++trial) {
        std::vector<double> x = rng.ball_point(d);
        CHECK(basis_eval(p, MultiIndex{0, 0, 1}, x.data()) ==
              doctest::Approx(expect).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("index enumeration counts") {
  // sum_{n<=N} sum_j h(n-2j) equals dim of polynomials of degree <= N,
  // C(N+d, d)
  for (int d : {2, 3}) {
    ModelParams p(d, 0.5);
    for (int N : {0, 1, 4, 8}) {
      auto idx = enumerate_indices(p, N);
      long expect = 1;
      for (int i = 1; i <= d; ++i) expect = expect * (N + i) / i;
      CHECK((long)idx.size() == expect);
      for (const MultiIndex& ix : idx) {
        CHECK(ix.n <= N);
        CHECK(0 <= ix.j);
        CHECK(2 * ix.j <= ix.n);
        CHECK(1 <= ix.kappa);
        CHECK(ix.kappa <= harmonic_dim(d, ix.n - 2 * ix.j));
      }
    }
  }
}

TEST_CASE("heat kernel symmetry, positivity, equilibrium") {
  Rng rng(404);
  for (int d : {2, 3}) {
    for (double mu : {0.0, 0.5, 1.5}) {
      ModelParams p(d, mu);
      Truncation tr;
      HeatKernelEvaluator H(p, tr);
      for (int trial = 0; trial < 10; ++trial) {
        std::vector<double> x = rng.ball_point(d), y = rng.ball_point(d);
        for (double t : {0.05, 0.3, 2.0}) {
          double v = H(t, x.data(), y.data());
          CHECK(v == doctest::Approx(H(t, y.data(), x.data())).epsilon(1e-12));
          CHECK(v > 0.0);
        }
        // t -> infinity: uniform equilibrium 1 / W_mu(B)
        CHECK(H(50.0, x.data(), y.data()) ==
              doctest::Approx(1.0 / total_mass(p)).epsilon(1e-12));
      }
      CHECK_THROWS_AS(H(0.01, rng.ball_point(d).data(), rng.ball_point(d).data()),
                      std::invalid_argument);
      CHECK(H.tail_bound(0.05) < tr.tail_tol);
    }
  }
}

TEST_CASE("analyze and synthesize round-trip a polynomial") {
  ModelParams p(2, 1.5);
  QuadratureRule rule = ball_rule(p, 10, 20);
  GridFunction f = sample(rule, [](const double* x, int) {
    return 1.0 + 2.0 * x[0] - x[1] * x[1] + 0.3 * x[0] * x[1] * x[1];
  });
  SpectralCoefficients c = analyze(p, f, 6);
  GridFunction g = synthesize(p, c, rule);
  for (long i = 0; i < rule.size(); ++i)
    CHECK(g.values[i] == doctest::Approx(f.values[i]).epsilon(1e-10));
  // degree-3 content only: coefficients with n > 3 vanish
  for (std::size_t a = 0; a < c.idx.size(); ++a)
    if (c.idx[a].n > 3) CHECK(std::abs(c.coef[a]) < 1e-10);
}

TEST_CASE("spectral and kernel routes agree") {
  ModelParams p(2, 0.5);
  Truncation tr;
  tr.n_max = 30;
  QuadratureRule rule = ball_rule(p, 31, 60);
  GridFunction f = sample(rule, [](const double* x, int) {
    return std::exp(-x[0]) + x[1];
  });
  for (double t : {0.1, 1.0}) {
    GridFunction a = apply_heat(p, tr, t, f);
    GridFunction b = apply_heat_kernel_route(p, tr, t, f);
    for (long i = 0; i < rule.size(); ++i)
      CHECK(a.values[i] == doctest::Approx(b.values[i]).epsilon(1e-7));
  }
}

TEST_CASE("heat semigroup property on coefficients") {
  ModelParams p(3, 1.5);
  Truncation tr;
  tr.n_max = 12;
  QuadratureRule rule = ball_rule(p, 14, 28);
  GridFunction f = sample(rule, [](const double* x, int) {
    return x[0] * x[0] - x[2] + 0.5;
  });
  GridFunction one_step = apply_heat(p, tr, 0.7, f);
  GridFunction two_step = apply_heat(p, tr, 0.3, apply_heat(p, tr, 0.4, f));
  for (long i = 0; i < rule.size(); ++i)
    CHECK(one_step.values[i] ==
          doctest::Approx(two_step.values[i]).epsilon(1e-11));
}

TEST_CASE("subordination oracle sanity") {
  // closed form: int_0^inf u^{-1/2} e^{-u - a/u} du = sqrt(pi) e^{-2 sqrt(a)}
  for (double a : {0.5, 1.0, 4.0, 9.0}) {
    CHECK(subordination_oracle(a) ==
          doctest::Approx(std::sqrt(kPi) * std::exp(-2.0 * std::sqrt(a)))
              .epsilon(1e-12));
  }
}

TEST_CASE("poisson routes agree") {
  // spectral damping e^{-t sqrt(lambda)} against the gauss-laguerre
  // subordination integral; t chosen so a = lambda t^2 / 4 >= 1 for every
  // retained mode, where the laguerre route is accurate
  ModelParams p(2, 0.5);
  Truncation tr;
  tr.n_max = 10;
  QuadratureRule rule = ball_rule(p, 12, 24);
  GridFunction f = sample(rule, [](const double* x, int) {
    return x[0] + 0.2 * x[1] * x[1];
  });
  for (double t : {1.5, 3.0}) {
    GridFunction a = apply_poisson(p, tr, t, f);
    GridFunction b = apply_poisson_quadrature_route(p, tr, t, f);
    for (long i = 0; i < rule.size(); ++i)
      CHECK(a.values[i] == doctest::Approx(b.values[i]).epsilon(1e-6));
  }
  // contraction toward the mean as t grows
  GridFunction far = apply_poisson(p, tr, 40.0, f);
  double mean = integrate(f) / total_mass(p);
  for (long i = 0; i < rule.size(); ++i)
    CHECK(far.values[i] == doctest::Approx(mean).epsilon(1e-6));
}

TEST_CASE("apply_heat validates its inputs") {
  ModelParams p(2, 0.5);
  Truncation tr;
  tr.n_max = 20;
  QuadratureRule rule = ball_rule(p, 10, 20);  // exactness 20 < 2 n_max
  GridFunction f = sample(rule, [](const double* x, int) { return x[0]; });
  CHECK_THROWS_AS(apply_heat(p, tr, 1.0, f), std::invalid_argument);
  QuadratureRule rule2 = ball_rule(p, 24, 48);
  GridFunction g = sample(rule2, [](const double* x, int) { return x[0]; });
  CHECK_THROWS_AS(apply_heat(p, tr, 0.01, g), std::invalid_argument);
}
