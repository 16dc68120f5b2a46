#include "ballheat/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>

#include "ballheat/quadrature.hpp"

namespace ballheat {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kPointTol = 1e-12;

double clamp1(double v) { return std::max(-1.0, std::min(1.0, v)); }

double norm_of(const std::vector<double>& c) {
  double s = 0.0;
  for (double v : c) s += v * v;
  return std::sqrt(s);
}
}  // namespace

BallPoint::BallPoint(std::vector<double> coords) : c(std::move(coords)) {
  if (c.size() < 2) throw std::invalid_argument("BallPoint: need at least 2 coordinates");
  double r = norm_of(c);
  if (r > 1.0 + kPointTol) throw std::invalid_argument("BallPoint: |coords| > 1");
}

double BallPoint::norm() const { return norm_of(c); }

SpherePoint::SpherePoint(std::vector<double> coords, Chart chart_)
    : c(std::move(coords)), chart(chart_) {
  double r = norm_of(c);
  if (std::abs(r - 1.0) > kPointTol)
    throw std::invalid_argument("SpherePoint: |coords| != 1");
  if (chart == Chart::Hemisphere && c.back() < -kPointTol)
    throw std::invalid_argument("SpherePoint: hemisphere point with negative last coordinate");
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double dist_ball_raw(const double* x, const double* y, int d) {
  double xy = 0.0, xx = 0.0, yy = 0.0;
  for (int i = 0; i < d; ++i) {
    xy += x[i] * y[i];
    xx += x[i] * x[i];
    yy += y[i] * y[i];
  }
  double sx = std::sqrt(std::max(0.0, 1.0 - xx));
  double sy = std::sqrt(std::max(0.0, 1.0 - yy));
  return std::acos(clamp1(xy + sx * sy));
}

double dist_ball(const BallPoint& x, const BallPoint& y) {
  if (x.dim() != y.dim()) throw std::invalid_argument("dist_ball: dimension mismatch");
  return dist_ball_raw(x.c.data(), y.c.data(), x.dim());
}

SpherePoint lift(const BallPoint& x) {
  std::vector<double> c = x.c;
  double r2 = 0.0;
  for (double v : c) r2 += v * v;
  c.push_back(std::sqrt(std::max(0.0, 1.0 - r2)));
  return SpherePoint(std::move(c), Chart::Hemisphere);
}

BallPoint project(const SpherePoint& xi) {
  if (xi.c.back() < -kPointTol)
    throw std::invalid_argument("project: point below the equator");
  std::vector<double> c(xi.c.begin(), xi.c.end() - 1);
  // roundoff can leave |c| marginally above 1
  double r = norm_of(c);
  if (r > 1.0 && r < 1.0 + kPointTol)
    for (double& v : c) v /= r;
  return BallPoint(std::move(c));
}

double dist_sphere(const SpherePoint& a, const SpherePoint& b) {
  if (a.c.size() != b.c.size()) throw std::invalid_argument("dist_sphere: dimension mismatch");
  return std::acos(clamp1(dot(a.c, b.c)));
}

double weight_density(const ModelParams& p, const BallPoint& x) {
  double r2 = 0.0;
  for (double v : x.c) r2 += v * v;
  double q = 1.0 - r2;
  double e = p.mu - 0.5;
  if (q <= 0.0) {
    if (e < 0.0)
      throw std::domain_error("weight_density: boundary singularity (|x|=1, mu < 1/2)");
    return e > 0.0 ? 0.0 : 1.0;
  }
  return std::pow(q, e);
}

double sphere_area(int d) {
  return 2.0 * std::pow(kPi, 0.5 * d) / std::tgamma(0.5 * d);
}

double total_mass(const ModelParams& p) {
  double logB = std::lgamma(0.5 * p.d) + std::lgamma(p.mu + 0.5) -
                std::lgamma(0.5 * p.d + p.mu + 0.5);
  return sphere_area(p.d) * 0.5 * std::exp(logB);
}

double lambda_measure(const ModelParams& p, double a, double b) {
  if (!(0.0 <= a && a <= b && b <= 1.0))
    throw std::invalid_argument("lambda_measure: need 0 <= a <= b <= 1");
  if (a == b) return 0.0;
  // substitute s = r^2: (1/2) int_{a^2}^{b^2} s^{d/2-1} (1-s)^{mu-1/2} ds
  double lo = a * a, hi = b * b;
  std::vector<double> x, w;
  double acc = 0.0;
  if (hi >= 1.0 - 1e-14 && lo <= 1e-14) {
    // full interval: both endpoint factors go into a two-weight Jacobi rule
    // with s = (t+1)/2, so the remaining integrand is the constant 1
    gauss_jacobi(64, p.mu - 0.5, 0.5 * p.d - 1.0, x, w);
    double scale = 0.5 * 0.5 * std::pow(0.5, p.mu - 0.5 + 0.5 * p.d - 1.0);
    for (std::size_t i = 0; i < x.size(); ++i) acc += scale * w[i];
  } else if (hi >= 1.0 - 1e-14) {
    // Jacobi rule with weight (1-t)^{mu-1/2} on [-1,1], mapped to [lo,1]
    gauss_jacobi(64, p.mu - 0.5, 0.0, x, w);
    double half = 0.5 * (1.0 - lo);
    // (1-s) = half*(1-t) contributes half^{mu-1/2}; ds = half dt
    double scale = 0.5 * std::pow(half, p.mu - 0.5) * half;
    for (std::size_t i = 0; i < x.size(); ++i) {
      double s = lo + half * (x[i] + 1.0);
      acc += scale * w[i] * std::pow(s, 0.5 * p.d - 1.0);
    }
  } else {
    // b < 1: integrate in r directly, where r^{d-1}(1-r^2)^{mu-1/2} is
    // analytic on [a, b]
    gauss_legendre(64, x, w);
    double half = 0.5 * (b - a);
    for (std::size_t i = 0; i < x.size(); ++i) {
      double r = a + half * (x[i] + 1.0);
      acc += half * w[i] * std::pow(r, p.d - 1.0) *
             std::pow(1.0 - r * r, p.mu - 0.5);
    }
  }
  return acc;
}

double volume_comparability(const ModelParams& p, const BallRegion& region) {
  double r = region.radius;
  if (r > kPi) return 1.0;
  double s = std::sqrt(std::max(0.0, 1.0 - region.center.norm() * region.center.norm()));
  return std::pow(r, p.d) * std::pow(s + r, 2.0 * p.mu);
}

BallVolumeResult ball_volume_detail(const ModelParams& p, const BallRegion& region,
                                    const QuadratureRule& rule) {
  if (rule.domain != Domain::Ball)
    throw std::invalid_argument("ball_volume: rule must be defined on B");
  BallVolumeResult res;
  double r = region.radius;
  if (r <= 0.0) return res;

  if (region.center.norm() < 1e-14) {
    // geodesic ball about 0 is {|x| < sin r}; exact radial integral
    double rr = r >= 0.5 * kPi ? 1.0 : std::sin(r);
    res.value = sphere_area(p.d) * lambda_measure(p, 0.0, rr);
    res.interior_nodes = rule.size();
    return res;
  }

  const double* z = region.center.c.data();
  double acc = 0.0, comp = 0.0;
  long inside = 0;
  for (long i = 0; i < rule.size(); ++i) {
    if (dist_ball_raw(rule.node(i), z, p.d) < r) {
      double term = rule.weights[static_cast<std::size_t>(i)] - comp;
      double next = acc + term;
      comp = (next - acc) - term;
      acc = next;
      ++inside;
    }
  }
  res.value = acc;
  res.interior_nodes = inside;
  if (inside < 50) {
    res.low_resolution = true;
    std::cerr << "ball_volume: region resolves only " << inside
              << " interior nodes (r=" << r << ")\n";
  }
  return res;
}

double ball_volume(const ModelParams& p, const BallRegion& region,
                   const QuadratureRule& rule) {
  return ball_volume_detail(p, region, rule).value;
}

namespace {

// int over phi in [0, 2pi) of (a + b cos phi)_+^{2mu}, by Gauss panels split
// at the sign-change kinks.
double circle_power_integral(double a, double b, double twomu) {
  b = std::abs(b);
  std::vector<double> x, w;
  gauss_legendre(24, x, w);
  auto seg = [&](double p0, double p1) {
    double half = 0.5 * (p1 - p0);
    double mid = 0.5 * (p0 + p1);
    double acc = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      double phi = mid + half * x[i];
      double v = a + b * std::cos(phi);
      if (v > 0.0) acc += half * w[i] * std::pow(v, twomu);
    }
    return acc;
  };
  // integrand is even in phi; kink where cos phi = -a/b
  double total;
  if (b < 1e-300) {
    total = a > 0.0 ? 2.0 * kPi * std::pow(a, twomu) : 0.0;
  } else {
    double c = -a / b;
    if (c >= 1.0) return 0.0;
    double cut = c <= -1.0 ? kPi : std::acos(std::max(-1.0, c));
    // split [0,cut] into a few panels for the near-kink behaviour
    int m = 6;
    double acc = 0.0;
    for (int k = 0; k < m; ++k)
      acc += seg(cut * k / m, cut * (k + 1) / m);
    total = 2.0 * acc;
  }
  return total;
}

}  // namespace

double ball_volume_ref(const ModelParams& p, const BallRegion& region) {
  double r = region.radius;
  if (r <= 0.0) return 0.0;
  if (r > kPi) return total_mass(p);
  if (region.center.norm() < 1e-14) {
    double rr = r >= 0.5 * kPi ? 1.0 : std::sin(r);
    return sphere_area(p.d) * lambda_measure(p, 0.0, rr);
  }
  if (p.d != 2 && p.d != 3)
    throw std::invalid_argument("ball_volume_ref: d must be 2 or 3");

  // W_mu(B(z,r)) = int over the spherical cap c(z~, r) cap S^d_+ of
  // x_{d+1}^{2 mu} dsigma. Parametrize by geodesic distance theta from z~.
  double zd2 = 0.0;
  for (double v : region.center.c) zd2 += v * v;
  double zlast = std::sqrt(std::max(0.0, 1.0 - zd2));  // z~_{d+1}
  double slast = std::sqrt(std::max(0.0, 1.0 - zlast * zlast));
  double twomu = 2.0 * p.mu;

  std::vector<double> x, w;
  gauss_legendre(32, x, w);
  double acc = 0.0;
  int panels = 12;
  for (int k = 0; k < panels; ++k) {
    double t0 = r * k / panels, t1 = r * (k + 1) / panels;
    double half = 0.5 * (t1 - t0), mid = 0.5 * (t0 + t1);
    for (std::size_t i = 0; i < x.size(); ++i) {
      double th = mid + half * x[i];
      double a = zlast * std::cos(th);
      double b = slast * std::sin(th);
      double inner;
      if (p.d == 2) {
        inner = circle_power_integral(a, b, twomu);
      } else {
        // directions on S^2: the last-coordinate component of the geodesic
        // sphere is a + b c with c uniform on [-1,1] of measure 2 pi dc
        double lo = -1.0, hi = 1.0;
        if (std::abs(b) < 1e-300) {
          inner = a > 0.0 ? 4.0 * kPi * std::pow(a, twomu) : 0.0;
        } else {
          double c0 = -a / b;
          if (b > 0.0) lo = std::max(lo, c0); else hi = std::min(hi, c0);
          if (lo >= hi) {
            inner = 0.0;
          } else {
            double vhi = a + b * hi, vlo = a + b * lo;
            inner = 2.0 * kPi *
                    (std::pow(std::max(0.0, vhi), twomu + 1.0) -
                     std::pow(std::max(0.0, vlo), twomu + 1.0)) /
                    (b * (twomu + 1.0));
          }
        }
      }
      double jac = p.d == 2 ? std::sin(th) : std::sin(th) * std::sin(th);
      acc += half * w[i] * jac * inner;
    }
  }
  return acc;
}

CapVolume cap_volume(const ModelParams& p, const SpherePoint& center, double r,
                     const QuadratureRule& rule) {
  if (center.chart != Chart::Hemisphere)
    throw std::invalid_argument("cap_volume: center must lie on S^d_+");
  if (!(r > 0.0)) throw std::invalid_argument("cap_volume: need r > 0");
  CapVolume out;
  BallRegion region(project(center), std::min(r, kPi + 1e-9));
  out.value = r > kPi ? total_mass(p) : ball_volume(p, region, rule);
  out.comparability = std::pow(r, p.d) * std::pow(center.c.back() + r, 2.0 * p.mu);
  return out;
}

}  // namespace ballheat
