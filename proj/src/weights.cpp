#include "ballheat/weights.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ballheat {

namespace {
constexpr double kPi = 3.14159265358979323846;

double unit_dot(const double* a, const double* b, int d) {
  double s = 0.0;
  for (int i = 0; i < d; ++i) s += a[i] * b[i];
  return std::max(-1.0, std::min(1.0, s));
}
}  // namespace

double WeightSpec::eval_sphere(const double* xp, int d) const {
  if (family == WeightFamily::Constant || a == 0.0) return 1.0;
  double dist = std::acos(unit_dot(xp, pole.data(), d));
  return std::pow(dist, a);
}

double WeightSpec::eval_radial(double r) const {
  if (family == WeightFamily::Constant) return 1.0;
  double v = 1.0;
  if (b != 0.0) v *= std::pow(1.0 - r, b);
  if (c != 0.0) v *= std::pow(r, c);
  return v;
}

double WeightSpec::eval_ball(const double* x, int d) const {
  if (family == WeightFamily::Constant) return 1.0;
  double r2 = 0.0;
  for (int i = 0; i < d; ++i) r2 += x[i] * x[i];
  double r = std::sqrt(r2);
  double v = eval_radial(r);
  if (a != 0.0 && !pole.empty()) {
    std::vector<double> dir(static_cast<std::size_t>(d), 0.0);
    if (r > 1e-12)
      for (int i = 0; i < d; ++i) dir[static_cast<std::size_t>(i)] = x[i] / r;
    else
      dir[0] = 1.0;
    v *= eval_sphere(dir.data(), d);
  }
  return v;
}

WeightSpec sphere_power_weight(const ModelParams& params, std::vector<double> pole,
                               double a, double p, bool allow_inadmissible) {
  if (static_cast<int>(pole.size()) != params.d)
    throw std::invalid_argument("sphere_power_weight: pole dimension mismatch");
  double n2 = 0.0;
  for (double v : pole) n2 += v * v;
  if (std::abs(n2 - 1.0) > 1e-10)
    throw std::invalid_argument("sphere_power_weight: pole must be a unit vector");
  double dim = params.d - 1.0;
  if (!allow_inadmissible && !(-dim < a && a < dim * (p - 1.0)))
    throw std::invalid_argument("sphere_power_weight: exponent outside the A_p range");
  WeightSpec w;
  w.family = WeightFamily::SpherePower;
  w.pole = std::move(pole);
  w.a = a;
  return w;
}

WeightSpec radial_power_weight(const ModelParams& params, double b, double c,
                               double p, bool allow_inadmissible) {
  double right = params.mu + 0.5;  // measure growth exponent at r = 1
  double left = static_cast<double>(params.d);
  if (!allow_inadmissible &&
      (!(-right < b && b < right * (p - 1.0)) || !(-left < c && c < left * (p - 1.0))))
    throw std::invalid_argument("radial_power_weight: exponent outside the A_p range");
  WeightSpec w;
  w.family = WeightFamily::RadialPower;
  w.b = b;
  w.c = c;
  return w;
}

WeightSpec constant_weight() { return WeightSpec{}; }

WeightSpec product_weight(const WeightSpec& v, const WeightSpec& u) {
  WeightSpec w;
  w.family = WeightFamily::BallProduct;
  w.pole = v.pole;
  w.a = (v.family == WeightFamily::Constant) ? 0.0 : v.a;
  w.b = (u.family == WeightFamily::Constant) ? 0.0 : u.b;
  w.c = (u.family == WeightFamily::Constant) ? 0.0 : u.c;
  return w;
}

namespace {

// avg of g over a geodesic cap on S^{d-1}, d in {2, 3}.
double cap_average(int d, const std::vector<double>& center, double rho,
                   const std::function<double(const double*, int)>& g) {
  rho = std::min(rho, kPi);
  std::vector<double> gx, gw;
  gauss_legendre(48, gx, gw);
  if (d == 2) {
    double phi0 = std::atan2(center[1], center[0]);
    double s = 0.0;
    for (std::size_t i = 0; i < gx.size(); ++i) {
      double phi = phi0 + rho * gx[i];
      double x[2] = {std::cos(phi), std::sin(phi)};
      s += gw[i] * g(x, 2);
    }
    return s / 2.0;  // weights sum to 2 on [-1,1]
  }
  if (d != 3) throw std::invalid_argument("cap_average: d must be 2 or 3");
  // frame orthogonal to the center
  std::vector<double> e1(3), e2(3);
  int k = 0;
  for (int i = 1; i < 3; ++i)
    if (std::abs(center[static_cast<std::size_t>(i)]) <
        std::abs(center[static_cast<std::size_t>(k)]))
      k = i;
  for (int i = 0; i < 3; ++i) e1[static_cast<std::size_t>(i)] = 0.0;
  e1[static_cast<std::size_t>(k)] = 1.0;
  double ce = unit_dot(e1.data(), center.data(), 3);
  double nrm = 0.0;
  for (int i = 0; i < 3; ++i) {
    e1[static_cast<std::size_t>(i)] -= ce * center[static_cast<std::size_t>(i)];
    nrm += e1[static_cast<std::size_t>(i)] * e1[static_cast<std::size_t>(i)];
  }
  nrm = std::sqrt(nrm);
  for (int i = 0; i < 3; ++i) e1[static_cast<std::size_t>(i)] /= nrm;
  e2[0] = center[1] * e1[2] - center[2] * e1[1];
  e2[1] = center[2] * e1[0] - center[0] * e1[2];
  e2[2] = center[0] * e1[1] - center[1] * e1[0];
  const int naz = 64;
  double clow = std::cos(rho);
  double s = 0.0;
  for (std::size_t i = 0; i < gx.size(); ++i) {
    double cth = 0.5 * (1.0 + clow) + 0.5 * (1.0 - clow) * gx[i];
    double sth = std::sqrt(std::max(0.0, 1.0 - cth * cth));
    double ring = 0.0;
    for (int aidx = 0; aidx < naz; ++aidx) {
      double phi = 2.0 * kPi * (aidx + 0.5) / naz;
      double x[3];
      for (int q = 0; q < 3; ++q)
        x[q] = cth * center[static_cast<std::size_t>(q)] +
               sth * (std::cos(phi) * e1[static_cast<std::size_t>(q)] +
                      std::sin(phi) * e2[static_cast<std::size_t>(q)]);
      ring += g(x, 3);
    }
    s += gw[i] * ring / naz;
  }
  return s / 2.0;  // GL mass over the cosine range, normalized
}

// avg of g over [x, y] with respect to dlambda_mu.
double interval_average(const ModelParams& p, double x, double y,
                        const std::function<double(double)>& g) {
  std::vector<double> gx, gw;
  gauss_legendre(64, gx, gw);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < gx.size(); ++i) {
    double r = 0.5 * (x + y) + 0.5 * (y - x) * gx[i];
    double dens = std::pow(r, p.d - 1.0) * std::pow(1.0 - r * r, p.mu - 0.5);
    num += gw[i] * dens * g(r);
    den += gw[i] * dens;
  }
  return num / den;
}

}  // namespace

double cap_area(int d, double angle) {
  angle = std::min(angle, kPi);
  if (d == 2) return 2.0 * angle;
  if (d == 3) return 2.0 * kPi * (1.0 - std::cos(angle));
  throw std::invalid_argument("cap_area: d must be 2 or 3");
}

ApEstimate ap_constant(const ModelParams& params, const WeightSpec& w, double p,
                       const std::string& space, int region_count, Rng& rng,
                       const QuadratureRule* ball_quadrature) {
  if (!(p > 1.0)) throw std::invalid_argument("ap_constant: need p > 1");
  if (region_count < 200)
    throw std::invalid_argument("ap_constant: need >= 200 regions");
  const double pc = 1.0 - p / (p - 1.0);  // 1 - p'
  ApEstimate est;
  est.p = p;
  est.space = space;
  double sup = 1.0;
  if (space == "sphere") {
    for (int reg = 0; reg < region_count; ++reg) {
      std::vector<double> center = rng.sphere_point(params.d);
      double rho = std::exp(rng.uniform(std::log(0.05), std::log(kPi)));
      double aw = cap_average(params.d, center, rho, [&](const double* x, int d) {
        return w.eval_sphere(x, d);
      });
      double ad = cap_average(params.d, center, rho, [&](const double* x, int d) {
        return std::pow(w.eval_sphere(x, d), pc);
      });
      double qv = aw * std::pow(ad, p - 1.0);
      if (!std::isfinite(qv))
        throw std::runtime_error("ap_constant: non-integrable dual weight on a cap");
      sup = std::max(sup, qv);
      ++est.regions;
    }
  } else if (space == "interval") {
    for (int reg = 0; reg < region_count; ++reg) {
      double y = 1.0 - std::exp(rng.uniform(std::log(1e-4), std::log(0.999)));
      double len = std::exp(rng.uniform(std::log(1e-3 * y), std::log(y)));
      double x = y - len;
      double aw = interval_average(params, x, y,
                                   [&](double r) { return w.eval_radial(r); });
      double ad = interval_average(params, x, y, [&](double r) {
        return std::pow(w.eval_radial(r), pc);
      });
      double qv = aw * std::pow(ad, p - 1.0);
      if (!std::isfinite(qv))
        throw std::runtime_error(
            "ap_constant: non-integrable dual weight on an interval");
      sup = std::max(sup, qv);
      ++est.regions;
    }
  } else if (space == "ball") {
    if (!ball_quadrature)
      throw std::invalid_argument("ap_constant: ball space needs a quadrature rule");
    const QuadratureRule& rule = *ball_quadrature;
    std::vector<double> wv(static_cast<std::size_t>(rule.size()));
    std::vector<double> wd(static_cast<std::size_t>(rule.size()));
    for (long i = 0; i < rule.size(); ++i) {
      double v = w.eval_ball(rule.node(i), params.d);
      wv[static_cast<std::size_t>(i)] = v;
      wd[static_cast<std::size_t>(i)] = std::pow(v, pc);
    }
    for (int reg = 0; reg < region_count; ++reg) {
      std::vector<double> center = rng.ball_point(params.d);
      double rad = std::exp(rng.uniform(std::log(0.02), std::log(kPi)));
      double mass = 0.0, aw = 0.0, ad = 0.0;
      long inside = 0;
      for (long i = 0; i < rule.size(); ++i) {
        if (dist_ball_raw(rule.node(i), center.data(), params.d) >= rad) continue;
        double qw = rule.weights[static_cast<std::size_t>(i)];
        mass += qw;
        aw += qw * wv[static_cast<std::size_t>(i)];
        ad += qw * wd[static_cast<std::size_t>(i)];
        ++inside;
      }
      if (inside < 8) continue;  // unresolved region, skip
      double qv = (aw / mass) * std::pow(ad / mass, p - 1.0);
      if (!std::isfinite(qv))
        throw std::runtime_error("ap_constant: non-integrable dual weight on a ball");
      sup = std::max(sup, qv);
      ++est.regions;
    }
  } else {
    throw std::invalid_argument("ap_constant: unknown space tag " + space);
  }
  est.constant = sup;
  return est;
}

Containment containment_construct(const ModelParams& params, const BallPoint& x,
                                  double s) {
  if (!(s > 0.0)) throw std::invalid_argument("containment_construct: need s > 0");
  Containment cont;
  double r = x.norm();
  double h = std::sqrt(std::max(0.0, 1.0 - r * r));
  cont.cap_center.assign(static_cast<std::size_t>(params.d), 0.0);
  if (r > 1e-12)
    for (int i = 0; i < params.d; ++i)
      cont.cap_center[static_cast<std::size_t>(i)] = x.c[static_cast<std::size_t>(i)] / r;
  else
    cont.cap_center[0] = 1.0;

  if (s >= 1.0 / 6.0) {
    cont.case_id = 0;
    cont.i_lo = 0.0;
    cont.i_hi = 1.0;
    cont.cap_angle = kPi;
  } else if (h > 2.0 * s && r <= 2.0 * s) {
    cont.case_id = 1;
    cont.i_lo = 0.0;
    cont.i_hi = std::min(1.0, 3.0 * s);
    cont.cap_angle = kPi;
  } else if (h > 2.0 * s) {
    cont.case_id = 2;
    double half = 1.5 * s * h;
    cont.i_lo = std::max(0.0, r - half);
    cont.i_hi = std::min(1.0, r + half);
    cont.cap_angle = kPi * s / (2.0 * r);
  } else {
    cont.case_id = 3;
    cont.i_lo = std::sqrt(std::max(0.0, 1.0 - 9.0 * s * s));
    cont.i_hi = 1.0;
    cont.cap_angle = kPi * s;
  }
  double num = lambda_measure(params, cont.i_lo, cont.i_hi) *
               cap_area(params.d, cont.cap_angle);
  double den = ball_volume_ref(params, BallRegion(x, s));
  cont.quotient = num / den;
  return cont;
}

bool in_product_region(const Containment& cont, const double* z, int d) {
  double r2 = 0.0;
  for (int i = 0; i < d; ++i) r2 += z[i] * z[i];
  double r = std::sqrt(r2);
  if (r < cont.i_lo - 1e-12 || r > cont.i_hi + 1e-12) return false;
  if (cont.cap_angle >= kPi) return true;
  if (r < 1e-12) return false;
  double s = 0.0;
  for (int i = 0; i < d; ++i) s += z[i] * cont.cap_center[static_cast<std::size_t>(i)];
  double ang = std::acos(std::max(-1.0, std::min(1.0, s / r)));
  return ang <= cont.cap_angle + 1e-12;
}

double ciaurri_condition(const ModelParams& params, const WeightSpec& u, double p,
                         int grid) {
  if (!(p > 1.0)) throw std::invalid_argument("ciaurri_condition: need p > 1");
  const double pprime = p / (p - 1.0);
  auto alpha_p = [&](double r) {
    return std::pow(r, (params.d - 1.0) * (1.0 - 0.5 * p)) *
           std::pow(1.0 - r, params.mu * (1.0 - 0.5 * p) - 0.5);
  };
  auto beta_p = [&](double r) {
    return std::pow(std::sqrt(1.0 - r) * alpha_p(r), 1.0 - pprime) /
           std::sqrt(1.0 - r);
  };
  std::vector<double> gx, gw;
  gauss_legendre(48, gx, gw);
  double sup = 0.0;
  for (int iy = 0; iy < grid; ++iy) {
    double gap = std::exp(std::log(1e-4) +
                          (std::log(0.99) - std::log(1e-4)) * iy / (grid - 1.0));
    double y = 1.0 - gap;
    for (int ix = 0; ix < grid; ++ix) {
      double frac = std::exp(std::log(1e-3) +
                             (std::log(1.0) - std::log(1e-3)) * ix / (grid - 1.0));
      double x = y * (1.0 - frac);
      if (!(x > 0.0)) x = 1e-9;
      double ia = 0.0, ib = 0.0;
      for (std::size_t k = 0; k < gx.size(); ++k) {
        double r = 0.5 * (x + y) + 0.5 * (y - x) * gx[k];
        double jac = 0.5 * (y - x) * gw[k];
        ia += jac * u.eval_radial(r) * alpha_p(r);
        ib += jac * std::pow(u.eval_radial(r), 1.0 - pprime) * beta_p(r);
      }
      double val = std::pow(1.0 - x, 0.5 * p) / std::pow(y - x, p) * ia *
                   std::pow(ib, p - 1.0);
      if (!std::isfinite(val)) return std::numeric_limits<double>::infinity();
      sup = std::max(sup, val);
    }
  }
  return sup;
}

bool implication_check(const ModelParams& params, const WeightSpec& u, double p,
                       Rng& rng) {
  if (params.mu < 0.0)
    throw std::invalid_argument("implication_check: requires mu >= 0");
  double c_coarse = ciaurri_condition(params, u, p, 60);
  double c_fine = ciaurri_condition(params, u, p, 120);
  bool ciaurri_divergent =
      !std::isfinite(c_fine) || c_fine > 4.0 * std::max(c_coarse, 1.0);
  double a_coarse = ap_constant(params, u, p, "interval", 400, rng).constant;
  double a_fine = std::max(
      a_coarse, ap_constant(params, u, p, "interval", 800, rng).constant);
  bool ap_divergent = !std::isfinite(a_fine) || a_fine > 4.0 * a_coarse;
  // the implication fails only if Ciaurri is finite while A_p diverges
  return ciaurri_divergent || !ap_divergent;
}

}  // namespace ballheat
