#ifndef BALLHEAT_WEIGHTS_HPP
#define BALLHEAT_WEIGHTS_HPP

#include <string>
#include <vector>

#include "ballheat/geometry.hpp"
#include "ballheat/quadrature.hpp"
#include "ballheat/rng.hpp"

namespace ballheat {

enum class WeightFamily { SpherePower, RadialPower, BallProduct, Constant };

/// Power weight on one of the three spaces:
///  - sphere: v(x') = dist(x', pole)^a (geodesic distance on S^{d-1})
///  - interval: u(r) = (1-r)^b r^c on ((0,1), dlambda_mu)
///  - ball product: w(x) = v(x/|x|) u(|x|)
struct WeightSpec {
  WeightFamily family = WeightFamily::Constant;
  std::vector<double> pole;  // unit vector in R^d
  double a = 0.0;
  double b = 0.0, c = 0.0;

  double eval_sphere(const double* xp, int d) const;
  double eval_radial(double r) const;
  double eval_ball(const double* x, int d) const;
};

/// Factories check the standard power-weight admissibility range for the
/// requested p unless `allow_inadmissible` (used to build known-bad cases):
///  sphere: -(d-1) < a < (d-1)(p-1);
///  interval: -(mu+1/2) < b < (mu+1/2)(p-1) and -d < c < d(p-1).
WeightSpec sphere_power_weight(const ModelParams& params, std::vector<double> pole,
                               double a, double p, bool allow_inadmissible = false);
WeightSpec radial_power_weight(const ModelParams& params, double b, double c,
                               double p, bool allow_inadmissible = false);
WeightSpec constant_weight();

/// w(x) = v(x/|x|) u(|x|) on the ball.
WeightSpec product_weight(const WeightSpec& v, const WeightSpec& u);

struct ApEstimate {
  double p = 0.0;
  double constant = 1.0;  // sample sup of the A_p quotient, >= 1 up to noise
  int regions = 0;
  std::string space;  // "sphere" | "interval" | "ball"
};

/// Sample-sup estimate of [w]_p over `region_count` random regions:
/// geodesic caps on S^{d-1}, subintervals of (0,1), or d_B balls with
/// r in [0.02, pi] (the latter needs a ball quadrature rule). Lower bound
/// of the true constant; non-decreasing in the sample.
ApEstimate ap_constant(const ModelParams& params, const WeightSpec& w, double p,
                       const std::string& space, int region_count, Rng& rng,
                       const QuadratureRule* ball_quadrature = nullptr);

/// The explicit interval x cap product region containing B(x, s).
struct Containment {
  double i_lo = 0.0, i_hi = 1.0;     // radial interval I
  std::vector<double> cap_center;    // cap direction (ignored for full caps)
  double cap_angle = 0.0;            // geodesic cap radius; >= pi means all of S^{d-1}
  int case_id = 0;                   // 0: s >= 1/6; 1..3: the three cases
  double quotient = 0.0;             // lambda_mu(I) sigma(Q) / W_mu(B(x,s))
};

Containment containment_construct(const ModelParams& params, const BallPoint& x,
                                  double s);

/// Membership z in P_{I,Q}.
bool in_product_region(const Containment& cont, const double* z, int d);

/// Surface measure of a geodesic cap of radius `angle` on S^{d-1}, d in {2,3}.
double cap_area(int d, double angle);

/// Grid estimate (over 0 < x < y < 1, log-spaced toward y -> 1) of the
/// Ciaurri supremum for the interval weight u; may return +inf.
double ciaurri_condition(const ModelParams& params, const WeightSpec& u, double p,
                         int grid = 100);

/// Checks "finite Ciaurri supremum => finite A_p((0,1), dlambda_mu) estimate"
/// by comparing growth under refinement; requires mu >= 0.
bool implication_check(const ModelParams& params, const WeightSpec& u, double p,
                       Rng& rng);

}  // namespace ballheat

#endif
