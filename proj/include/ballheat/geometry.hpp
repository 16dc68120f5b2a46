#ifndef BALLHEAT_GEOMETRY_HPP
#define BALLHEAT_GEOMETRY_HPP

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace ballheat {

/// Global model context: dimension d >= 2 and type parameter mu > -1/2.
struct ModelParams {
  int d;
  double mu;

  ModelParams(int d_, double mu_) : d(d_), mu(mu_) {
    if (d < 2) throw std::invalid_argument("ModelParams: d must be >= 2");
    if (!(mu > -0.5)) throw std::invalid_argument("ModelParams: mu must be > -1/2");
  }
};

/// Point of the closed unit ball B in R^d.
struct BallPoint {
  std::vector<double> c;

  BallPoint() = default;
  explicit BallPoint(std::vector<double> coords);

  int dim() const { return static_cast<int>(c.size()); }
  double norm() const;
};

enum class Chart { Hemisphere, EquatorSphere };

/// Point of S^d_+ (chart Hemisphere, d+1 coordinates) or S^{d-1}
/// (chart EquatorSphere, d coordinates).
struct SpherePoint {
  std::vector<double> c;
  Chart chart = Chart::EquatorSphere;

  SpherePoint() = default;
  SpherePoint(std::vector<double> coords, Chart chart_);
};

/// Geodesic ball B(center, radius) with respect to dist_ball.
struct BallRegion {
  BallPoint center;
  double radius = 0.0;

  BallRegion() = default;
  BallRegion(BallPoint z, double r) : center(std::move(z)), radius(r) {
    if (r < 0.0) throw std::invalid_argument("BallRegion: radius must be >= 0");
  }
};

double dot(const std::vector<double>& a, const std::vector<double>& b);

/// Geodesic distance on B: arccos(<x,y> + sqrt(1-|x|^2) sqrt(1-|y|^2)).
/// The arccos argument is clamped to [-1,1].
double dist_ball(const BallPoint& x, const BallPoint& y);

/// Same, on raw coordinate arrays (hot loops).
double dist_ball_raw(const double* x, const double* y, int d);

/// Hemisphere lift x -> (x, sqrt(1-|x|^2)).
SpherePoint lift(const BallPoint& x);

/// Projection of S^d_+ onto B, dropping the last coordinate.
/// Rejects points with negative last coordinate.
BallPoint project(const SpherePoint& xi);

/// Geodesic distance on S^d between two lifted points.
double dist_sphere(const SpherePoint& a, const SpherePoint& b);

/// W_mu(x) = (1-|x|^2)^{mu-1/2}. Throws for |x| = 1 when mu < 1/2.
double weight_density(const ModelParams& p, const BallPoint& x);

/// Surface measure of S^{d-1}: 2 pi^{d/2} / Gamma(d/2).
double sphere_area(int d);

/// Total mass W_mu(B) = sigma(S^{d-1}) * (1/2) B(d/2, mu+1/2).
double total_mass(const ModelParams& p);

/// lambda_mu(a,b) = int_a^b r^{d-1} (1-r^2)^{mu-1/2} dr, endpoint-exact.
double lambda_measure(const ModelParams& p, double a, double b);

/// Closed-form comparability expression r^d (sqrt(1-|z|^2)+r)^{2 mu},
/// equal to 1 for r > pi.
double volume_comparability(const ModelParams& p, const BallRegion& region);

class QuadratureRule;  // quadrature.hpp

struct BallVolumeResult {
  double value = 0.0;
  long interior_nodes = 0;
  bool low_resolution = false;  // fewer than 50 interior nodes
};

/// W_mu(B(z,r)) by sharp-indicator quadrature on the given rule.
/// Geodesic balls about 0 reduce to {|x| < sin r} and use an exact
/// 1-D radial integral instead.
BallVolumeResult ball_volume_detail(const ModelParams& p, const BallRegion& region,
                                    const QuadratureRule& rule);
double ball_volume(const ModelParams& p, const BallRegion& region,
                   const QuadratureRule& rule);

/// Accurate reference route for W_mu(B(z,r)), d in {2,3}: the region is the
/// projection of a spherical cap, and the cap integral reduces to 1-D
/// panel quadrature (d=3 has a closed-form inner integral).
double ball_volume_ref(const ModelParams& p, const BallRegion& region);

struct CapVolume {
  double value = 0.0;          // W~(c+(xi,r))
  double comparability = 0.0;  // r^d (x_{d+1}+r)^{2 mu}
};

/// Cap measure on the hemisphere, computed by transfer to the ball.
CapVolume cap_volume(const ModelParams& p, const SpherePoint& center, double r,
                     const QuadratureRule& rule);

}  // namespace ballheat

#endif
