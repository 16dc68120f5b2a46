#include "ballheat/dirichlet.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>

namespace ballheat {

namespace {
constexpr double kOriginTol = 1e-14;
constexpr double kNodeSkip = 1e-8;

void grad_of(const SmoothTestFunction& f, const double* x, int d, double* g) {
  f.gradient(x, d, g);
}
}  // namespace

SmoothTestFunction register_test_function(const ModelParams& p,
                                          SmoothTestFunction f, Rng& rng,
                                          int samples) {
  const double h = 1e-5;
  std::vector<double> xp, xm, g(static_cast<std::size_t>(p.d));
  for (int s = 0; s < samples; ++s) {
    std::vector<double> x = rng.ball_point(p.d);
    double r = 0.0;
    for (double v : x) r += v * v;
    r = std::sqrt(r);
    if (r < 0.05 || r > 0.95) {
      --s;
      continue;
    }
    f.gradient(x.data(), p.d, g.data());
    for (int i = 0; i < p.d; ++i) {
      xp = x; xm = x;
      xp[static_cast<std::size_t>(i)] += h;
      xm[static_cast<std::size_t>(i)] -= h;
      double fd = (f.value(xp.data(), p.d) - f.value(xm.data(), p.d)) / (2.0 * h);
      if (std::abs(fd - g[static_cast<std::size_t>(i)]) > 1e-6)
        throw std::runtime_error(
            "register_test_function: analytic gradient disagrees with finite differences");
    }
  }
  return f;
}

SmoothTestFunction make_random_polynomial(const ModelParams& p, Rng& rng,
                                          int max_degree, int terms) {
  struct Term {
    double c;
    std::vector<int> a;
  };
  auto data = std::make_shared<std::vector<Term>>();
  for (int t = 0; t < terms; ++t) {
    Term term;
    term.c = rng.uniform(-1.0, 1.0);
    term.a.resize(static_cast<std::size_t>(p.d), 0);
    int budget = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(max_degree) + 1));
    for (int b = 0; b < budget; ++b)
      ++term.a[static_cast<std::size_t>(rng.uniform_int(static_cast<std::uint64_t>(p.d)))];
    data->push_back(std::move(term));
  }
  SmoothTestFunction f;
  f.family = "trig-polynomial";
  f.value = [data](const double* x, int d) {
    double s = 0.0;
    for (const auto& t : *data) {
      double m = t.c;
      for (int i = 0; i < d; ++i)
        for (int k = 0; k < t.a[static_cast<std::size_t>(i)]; ++k) m *= x[i];
      s += m;
    }
    return s;
  };
  f.gradient = [data](const double* x, int d, double* g) {
    for (int i = 0; i < d; ++i) g[i] = 0.0;
    for (const auto& t : *data) {
      for (int i = 0; i < d; ++i) {
        int ai = t.a[static_cast<std::size_t>(i)];
        if (ai == 0) continue;
        double m = t.c * ai;
        for (int k = 0; k < ai - 1; ++k) m *= x[i];
        for (int q = 0; q < d; ++q) {
          if (q == i) continue;
          for (int k = 0; k < t.a[static_cast<std::size_t>(q)]; ++k) m *= x[q];
        }
        g[i] += m;
      }
    }
  };
  return f;
}

double radial_derivative(const SmoothTestFunction& f, const double* x, int d) {
  double r2 = 0.0;
  for (int i = 0; i < d; ++i) r2 += x[i] * x[i];
  if (r2 < kOriginTol * kOriginTol)
    throw std::domain_error("radial_derivative: undefined at the origin");
  double r = std::sqrt(r2);
  std::vector<double> g(static_cast<std::size_t>(d));
  grad_of(f, x, d, g.data());
  double s = 0.0;
  for (int i = 0; i < d; ++i) s += x[i] * g[static_cast<std::size_t>(i)];
  return s / r;
}

void spherical_gradient(const SmoothTestFunction& f, const double* x, int d,
                        double* out) {
  double r2 = 0.0;
  for (int i = 0; i < d; ++i) r2 += x[i] * x[i];
  if (r2 < kOriginTol * kOriginTol)
    throw std::domain_error("spherical_gradient: undefined at the origin");
  double r = std::sqrt(r2);
  std::vector<double> g(static_cast<std::size_t>(d));
  grad_of(f, x, d, g.data());
  double xg = 0.0;
  for (int i = 0; i < d; ++i) xg += x[i] * g[static_cast<std::size_t>(i)];
  double dr = xg / r;
  for (int i = 0; i < d; ++i) out[i] = r * g[static_cast<std::size_t>(i)] - x[i] * dr;
}

double carre_du_champ(const SmoothTestFunction& f, const SmoothTestFunction& g,
                      const double* x, int d) {
  double r2 = 0.0;
  for (int i = 0; i < d; ++i) r2 += x[i] * x[i];
  if (r2 < kOriginTol * kOriginTol)
    throw std::domain_error("carre_du_champ: undefined at the origin");
  std::vector<double> gf(static_cast<std::size_t>(d)), gg(static_cast<std::size_t>(d));
  grad_of(f, x, d, gf.data());
  grad_of(g, x, d, gg.data());
  double xf = 0.0, xg = 0.0;
  for (int i = 0; i < d; ++i) {
    xf += x[i] * gf[static_cast<std::size_t>(i)];
    xg += x[i] * gg[static_cast<std::size_t>(i)];
  }
  double drf = xf / std::sqrt(r2), drg = xg / std::sqrt(r2);
  // grad_0 f . grad_0 g = r^2 grad f . grad g - (x.grad f)(x.grad g)
  double gfg = 0.0;
  for (int i = 0; i < d; ++i) gfg += gf[static_cast<std::size_t>(i)] * gg[static_cast<std::size_t>(i)];
  double sph = r2 * gfg - xf * xg;
  return (1.0 - r2) * drf * drg + sph / r2;
}

double carre_du_champ(const SmoothTestFunction& f, const SmoothTestFunction& g,
                      const BallPoint& x) {
  return carre_du_champ(f, g, x.c.data(), x.dim());
}

double hemisphere_energy(const SmoothTestFunction& f, const double* x, int d) {
  double r2 = 0.0;
  for (int i = 0; i < d; ++i) r2 += x[i] * x[i];
  if (r2 < kOriginTol * kOriginTol) {
    // transfer formula extends to 0 as |grad f(0)|^2
    std::vector<double> g(static_cast<std::size_t>(d));
    grad_of(f, x, d, g.data());
    double s = 0.0;
    for (double v : g) s += v * v;
    return s;
  }
  double r = std::sqrt(r2);
  std::vector<double> g(static_cast<std::size_t>(d));
  grad_of(f, x, d, g.data());
  double xg = 0.0;
  for (int i = 0; i < d; ++i) xg += x[i] * g[static_cast<std::size_t>(i)];
  double dr = xg / r;
  double s = 0.0;
  for (int i = 0; i < d; ++i) {
    double v = g[static_cast<std::size_t>(i)] - x[i] * r * dr;
    s += v * v;
  }
  double last = -std::sqrt(std::max(0.0, 1.0 - r2)) * r * dr;
  return s + last * last;
}

double dirichlet_form(const ModelParams& p, const SmoothTestFunction& f,
                      const SmoothTestFunction& g, const QuadratureRule& rule) {
  if (rule.domain != Domain::Ball)
    throw std::invalid_argument("dirichlet_form: rule must be on B");
  double s = 0.0, comp = 0.0;
  for (long i = 0; i < rule.size(); ++i) {
    const double* x = rule.node(i);
    double r2 = 0.0;
    for (int k = 0; k < p.d; ++k) r2 += x[k] * x[k];
    if (r2 < kNodeSkip * kNodeSkip) continue;
    double term = rule.weights[static_cast<std::size_t>(i)] *
                      carre_du_champ(f, g, x, p.d) - comp;
    double next = s + term;
    comp = (next - s) - term;
    s = next;
  }
  return s;
}

SmoothTestFunction intrinsic_test_function(const BallPoint& y, double delta,
                                           double eps) {
  if (!(0.0 < eps && eps < delta))
    throw std::invalid_argument("intrinsic_test_function: need 0 < eps < delta");
  auto yc = std::make_shared<std::vector<double>>(y.c);
  double ry2 = 0.0;
  for (double v : y.c) ry2 += v * v;
  double e1 = (1.0 + eps) * (1.0 + eps);
  double d1 = (1.0 + delta) * (1.0 + delta);
  double by = std::sqrt(e1 - ry2);

  SmoothTestFunction f;
  f.family = "intrinsic";
  f.value = [yc, e1, d1, by](const double* x, int d) {
    double xy = 0.0, rx2 = 0.0;
    for (int i = 0; i < d; ++i) {
      xy += x[i] * (*yc)[static_cast<std::size_t>(i)];
      rx2 += x[i] * x[i];
    }
    double ax = std::sqrt(e1 - rx2);
    double arg = (xy + ax * by) / d1;
    return std::acos(std::max(-1.0, std::min(1.0, arg)));
  };
  f.gradient = [yc, e1, d1, by](const double* x, int d, double* g) {
    double xy = 0.0, rx2 = 0.0;
    for (int i = 0; i < d; ++i) {
      xy += x[i] * (*yc)[static_cast<std::size_t>(i)];
      rx2 += x[i] * x[i];
    }
    double ax = std::sqrt(e1 - rx2);
    double arg = (xy + ax * by) / d1;
    double denom = d1 * std::sqrt(std::max(1e-300, 1.0 - arg * arg));
    for (int i = 0; i < d; ++i)
      g[i] = -((*yc)[static_cast<std::size_t>(i)] - x[i] * by / ax) / denom;
  };
  return f;
}

namespace {
struct RegionMask {
  std::vector<long> nodes;
  double mass = 0.0;
};

RegionMask mask_region(const ModelParams& p, const BallRegion& region,
                       const QuadratureRule& rule) {
  RegionMask m;
  const double* z = region.center.c.data();
  for (long i = 0; i < rule.size(); ++i) {
    if (dist_ball_raw(rule.node(i), z, p.d) < region.radius) {
      m.nodes.push_back(i);
      m.mass += rule.weights[static_cast<std::size_t>(i)];
    }
  }
  return m;
}
}  // namespace

PoincareResult poincare_ratio(const ModelParams& p, const SmoothTestFunction& f,
                              const BallRegion& region, const QuadratureRule& rule) {
  RegionMask m = mask_region(p, region, rule);
  if (m.nodes.size() < 50)
    throw std::invalid_argument("poincare_ratio: region resolves fewer than 50 nodes");
  PoincareResult res;
  res.nodes = static_cast<long>(m.nodes.size());
  double fm = 0.0;
  std::vector<double> fv(m.nodes.size());
  for (std::size_t k = 0; k < m.nodes.size(); ++k) {
    fv[k] = f.value(rule.node(m.nodes[k]), p.d);
    fm += rule.weights[static_cast<std::size_t>(m.nodes[k])] * fv[k];
  }
  fm /= m.mass;
  for (std::size_t k = 0; k < m.nodes.size(); ++k) {
    double dv = fv[k] - fm;
    res.lhs += rule.weights[static_cast<std::size_t>(m.nodes[k])] * dv * dv;
  }
  for (long i : m.nodes) {
    const double* x = rule.node(i);
    double r2 = 0.0;
    for (int k = 0; k < p.d; ++k) r2 += x[k] * x[k];
    if (r2 < kNodeSkip * kNodeSkip) continue;
    res.rhs += rule.weights[static_cast<std::size_t>(i)] * carre_du_champ(f, f, x, p.d);
  }
  double scale = region.radius * region.radius * res.rhs;
  if (scale <= 0.0) {
    if (res.lhs <= 1e-20) {
      res.ratio = 0.0;
      return res;
    }
    throw std::runtime_error("poincare_ratio: zero energy with nonzero variance");
  }
  res.ratio = res.lhs / scale;
  return res;
}

PoincareResult hemisphere_poincare_ratio(const ModelParams& p,
                                         const SmoothTestFunction& f,
                                         const SpherePoint& center, double r,
                                         const QuadratureRule& rule) {
  if (!(r > 0.0 && r <= 1.0 / 6.0 + 1e-12))
    throw std::invalid_argument("hemisphere_poincare_ratio: need 0 < r <= 1/6");
  BallPoint z = project(center);
  RegionMask inner = mask_region(p, BallRegion(z, kPoincareTau * r), rule);
  RegionMask outer = mask_region(p, BallRegion(z, r), rule);
  if (inner.nodes.size() < 50)
    throw std::invalid_argument(
        "hemisphere_poincare_ratio: inner cap resolves fewer than 50 nodes");
  PoincareResult res;
  res.nodes = static_cast<long>(inner.nodes.size());
  double fm = 0.0;
  std::vector<double> fv(inner.nodes.size());
  for (std::size_t k = 0; k < inner.nodes.size(); ++k) {
    fv[k] = f.value(rule.node(inner.nodes[k]), p.d);
    fm += rule.weights[static_cast<std::size_t>(inner.nodes[k])] * fv[k];
  }
  fm /= inner.mass;
  for (std::size_t k = 0; k < inner.nodes.size(); ++k) {
    double dv = fv[k] - fm;
    res.lhs += rule.weights[static_cast<std::size_t>(inner.nodes[k])] * dv * dv;
  }
  for (long i : outer.nodes) {
    const double* x = rule.node(i);
    double r2 = 0.0;
    for (int k = 0; k < p.d; ++k) r2 += x[k] * x[k];
    if (r2 < kNodeSkip * kNodeSkip) continue;
    res.rhs += rule.weights[static_cast<std::size_t>(i)] * carre_du_champ(f, f, x, p.d);
  }
  double scale = r * r * res.rhs;
  if (scale <= 0.0) {
    if (res.lhs <= 1e-20) {
      res.ratio = 0.0;
      return res;
    }
    throw std::runtime_error("hemisphere_poincare_ratio: zero energy with nonzero variance");
  }
  res.ratio = res.lhs / scale;
  return res;
}

double poincare_double_form(const ModelParams& p, const SmoothTestFunction& f,
                            const BallRegion& region, const QuadratureRule& rule) {
  RegionMask m = mask_region(p, region, rule);
  if (m.nodes.empty() || m.mass <= 0.0) return 0.0;
  std::vector<double> fv(m.nodes.size());
  for (std::size_t k = 0; k < m.nodes.size(); ++k)
    fv[k] = f.value(rule.node(m.nodes[k]), p.d);
  double acc = 0.0;
  for (std::size_t a = 0; a < m.nodes.size(); ++a)
    for (std::size_t b = 0; b < m.nodes.size(); ++b) {
      double dv = fv[a] - fv[b];
      acc += rule.weights[static_cast<std::size_t>(m.nodes[a])] *
             rule.weights[static_cast<std::size_t>(m.nodes[b])] * dv * dv;
    }
  return acc / m.mass;
}

}  // namespace ballheat
