#ifndef BALLHEAT_DIRICHLET_HPP
#define BALLHEAT_DIRICHLET_HPP

#include <functional>
#include <string>
#include <vector>

#include "ballheat/geometry.hpp"
#include "ballheat/quadrature.hpp"
#include "ballheat/rng.hpp"

namespace ballheat {

/// A C^1 test function with an analytic gradient. Registration validates the
/// gradient against central finite differences at random interior points.
struct SmoothTestFunction {
  std::function<double(const double*, int)> value;
  std::function<void(const double*, int, double*)> gradient;
  std::string family;  // trig-polynomial | basis-element | intrinsic | custom
};

/// Validates the gradient (1e-6 against central differences at `samples`
/// random interior points) and returns the function. Throws on mismatch.
SmoothTestFunction register_test_function(const ModelParams& p,
                                          SmoothTestFunction f, Rng& rng,
                                          int samples = 100);

/// Random sparse algebraic polynomial of total degree <= max_degree with
/// coefficients in [-1,1]; gradient is analytic.
SmoothTestFunction make_random_polynomial(const ModelParams& p, Rng& rng,
                                          int max_degree = 8, int terms = 12);

/// d_r f(x) = <x/|x|, grad f(x)>. Undefined at the origin.
double radial_derivative(const SmoothTestFunction& f, const double* x, int d);

/// grad_0 f(x) = |x| grad f(x) - x d_r f(x); orthogonal to x.
void spherical_gradient(const SmoothTestFunction& f, const double* x, int d,
                        double* out);

/// Energy density (1-|x|^2)(d_r f)(d_r g) + |x|^{-2} grad_0 f . grad_0 g.
double carre_du_champ(const SmoothTestFunction& f, const SmoothTestFunction& g,
                      const double* x, int d);
double carre_du_champ(const SmoothTestFunction& f, const SmoothTestFunction& g,
                      const BallPoint& x);

/// |grad~_0 f~(x, sqrt(1-|x|^2))|^2 via the hemisphere transfer identity;
/// equals carre_du_champ(f,f) on B minus the origin.
double hemisphere_energy(const SmoothTestFunction& f, const double* x, int d);

/// E(f,g) = int_B Gamma(f,g) dW_mu by quadrature. Nodes with |x| < 1e-8
/// are skipped (Gamma is defined away from the origin).
double dirichlet_form(const ModelParams& p, const SmoothTestFunction& f,
                      const SmoothTestFunction& g, const QuadratureRule& rule);

/// The intrinsic-distance test function f_{delta,eps} centered at y,
/// with analytic gradient. Requires 0 < eps < delta.
SmoothTestFunction intrinsic_test_function(const BallPoint& y, double delta,
                                           double eps);

struct PoincareResult {
  double ratio = 0.0;  // LHS / (r^2 RHS)
  double lhs = 0.0;    // int |f - mean|^2 dW over the (inner) region
  double rhs = 0.0;    // int Gamma(f,f) dW over the (outer) region
  long nodes = 0;      // interior node count of the inner region
};

/// Variance-vs-energy ratio on B(z,r), both sides over the same region.
PoincareResult poincare_ratio(const ModelParams& p, const SmoothTestFunction& f,
                              const BallRegion& region, const QuadratureRule& rule);

/// Hemisphere version of the ratio (Dirichlet side on the full cap, variance
/// side on the tau-shrunken cap, tau = 1/(3 pi)), computed on the ball via
/// the measure transfer.
PoincareResult hemisphere_poincare_ratio(const ModelParams& p,
                                         const SmoothTestFunction& f,
                                         const SpherePoint& center, double r,
                                         const QuadratureRule& rule);

/// Double-integral form of the cap variance (mean-free comparison helper).
double poincare_double_form(const ModelParams& p, const SmoothTestFunction& f,
                            const BallRegion& region, const QuadratureRule& rule);

constexpr double kPoincareTau = 1.0 / (3.0 * 3.14159265358979323846);

}  // namespace ballheat

#endif
