#include "ballheat/quadrature.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "ballheat/rng.hpp"

namespace ballheat {

namespace {
constexpr double kPi = 3.14159265358979323846;

// Golub-Welsch: nodes/weights from the symmetric Jacobi matrix of a monic
// orthogonal-polynomial recurrence (a_k diagonal, sqrt(b_k) off-diagonal).
void golub_welsch(const std::vector<double>& a, const std::vector<double>& b,
                  double mu0, std::vector<double>& x, std::vector<double>& w) {
  int n = static_cast<int>(a.size());
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) J(i, i) = a[static_cast<std::size_t>(i)];
  for (int i = 1; i < n; ++i) {
    double off = std::sqrt(b[static_cast<std::size_t>(i)]);
    J(i, i - 1) = off;
    J(i - 1, i) = off;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  x.resize(static_cast<std::size_t>(n));
  w.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    x[static_cast<std::size_t>(i)] = es.eigenvalues()(i);
    double v = es.eigenvectors()(0, i);
    w[static_cast<std::size_t>(i)] = mu0 * v * v;
  }
}
}  // namespace

void gauss_jacobi(int n, double alpha, double beta,
                  std::vector<double>& x, std::vector<double>& w) {
  if (n < 1) throw std::invalid_argument("gauss_jacobi: n must be >= 1");
  if (alpha <= -1.0 || beta <= -1.0)
    throw std::invalid_argument("gauss_jacobi: alpha, beta must be > -1");
  std::vector<double> a(static_cast<std::size_t>(n)), b(static_cast<std::size_t>(n), 0.0);
  double ab = alpha + beta;
  a[0] = (beta - alpha) / (ab + 2.0);
  for (int k = 1; k < n; ++k) {
    double t = 2.0 * k + ab;
    a[static_cast<std::size_t>(k)] = (beta * beta - alpha * alpha) / (t * (t + 2.0));
    if (k == 1)
      b[1] = 4.0 * (alpha + 1.0) * (beta + 1.0) /
             ((ab + 2.0) * (ab + 2.0) * (ab + 3.0));
    else
      b[static_cast<std::size_t>(k)] =
          4.0 * k * (k + alpha) * (k + beta) * (k + ab) /
          (t * t * (t + 1.0) * (t - 1.0));
  }
  double mu0 = std::exp((ab + 1.0) * std::log(2.0) + std::lgamma(alpha + 1.0) +
                        std::lgamma(beta + 1.0) - std::lgamma(ab + 2.0));
  golub_welsch(a, b, mu0, x, w);
}

void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  gauss_jacobi(n, 0.0, 0.0, x, w);
}

void gauss_laguerre(int n, double alpha,
                    std::vector<double>& x, std::vector<double>& w) {
  if (n < 1) throw std::invalid_argument("gauss_laguerre: n must be >= 1");
  if (alpha <= -1.0) throw std::invalid_argument("gauss_laguerre: alpha must be > -1");
  std::vector<double> a(static_cast<std::size_t>(n)), b(static_cast<std::size_t>(n), 0.0);
  for (int k = 0; k < n; ++k) {
    a[static_cast<std::size_t>(k)] = 2.0 * k + alpha + 1.0;
    if (k >= 1) b[static_cast<std::size_t>(k)] = k * (k + alpha);
  }
  golub_welsch(a, b, std::tgamma(alpha + 1.0), x, w);
}

void QuadratureRule::validate(double expected_mass) const {
  double s = 0.0, comp = 0.0;
  for (double v : weights) {
    if (!(v > 0.0)) throw std::runtime_error("QuadratureRule: nonpositive weight");
    double term = v - comp;
    double next = s + term;
    comp = (next - s) - term;
    s = next;
  }
  if (std::abs(s - expected_mass) > 1e-10 * std::max(1.0, std::abs(expected_mass)))
    throw std::runtime_error("QuadratureRule: total mass mismatch");
}

void QuadratureRule::export_csv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("export_csv: cannot open " + path);
  for (int k = 0; k < dim; ++k) out << "x" << k + 1 << ",";
  out << "weight\n";
  char buf[64];
  for (long i = 0; i < size(); ++i) {
    for (int k = 0; k < dim; ++k) {
      std::snprintf(buf, sizeof(buf), "%.17g", node(i)[k]);
      out << buf << ",";
    }
    std::snprintf(buf, sizeof(buf), "%.17g", weights[static_cast<std::size_t>(i)]);
    out << buf << "\n";
  }
}

QuadratureRule sphere_rule(int d, int angular_order) {
  if (angular_order < 1) throw std::invalid_argument("sphere_rule: order must be >= 1");
  if (d != 2 && d != 3)
    throw std::invalid_argument("sphere_rule: exact rules require d in {2,3}");
  QuadratureRule rule;
  rule.domain = Domain::Sphere;
  rule.dim = d;
  if (d == 2) {
    int n = angular_order + 1;
    if (n % 2) ++n;
    rule.exactness = n - 1;
    double wgt = 2.0 * kPi / n;
    for (int i = 0; i < n; ++i) {
      double th = 2.0 * kPi * i / n;
      rule.nodes.push_back(std::cos(th));
      rule.nodes.push_back(std::sin(th));
      rule.weights.push_back(wgt);
    }
  } else {
    int npol = angular_order / 2 + 1;
    int naz = angular_order + 1;
    if (naz % 2) ++naz;
    rule.exactness = std::min(2 * npol - 1, naz - 1);
    std::vector<double> c, wc;
    gauss_legendre(npol, c, wc);
    for (int i = 0; i < npol; ++i) {
      double ct = c[static_cast<std::size_t>(i)];
      double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
      for (int j = 0; j < naz; ++j) {
        double ph = 2.0 * kPi * j / naz;
        rule.nodes.push_back(st * std::cos(ph));
        rule.nodes.push_back(st * std::sin(ph));
        rule.nodes.push_back(ct);
        rule.weights.push_back(wc[static_cast<std::size_t>(i)] * 2.0 * kPi / naz);
      }
    }
  }
  rule.validate(sphere_area(d));
  return rule;
}

QuadratureRule ball_rule(const ModelParams& p, int radial_order, int angular_order,
                         std::uint64_t mc_seed, long mc_samples) {
  if (radial_order < 1 || angular_order < 1)
    throw std::invalid_argument("ball_rule: orders must be >= 1");
  QuadratureRule rule;
  rule.domain = Domain::Ball;
  rule.dim = p.d;

  if (p.d > 3) {
    // Monte Carlo fallback
    rule.exactness = 0;
    rule.mc_samples = mc_samples;
    Rng rng(mc_seed);
    double vol = std::pow(kPi, 0.5 * p.d) / std::tgamma(0.5 * p.d + 1.0);
    for (long i = 0; i < mc_samples; ++i) {
      std::vector<double> x = rng.ball_point(p.d);
      double r2 = 0.0;
      for (double v : x) r2 += v * v;
      rule.nodes.insert(rule.nodes.end(), x.begin(), x.end());
      rule.weights.push_back(std::pow(1.0 - r2, p.mu - 0.5) * vol / mc_samples);
    }
    return rule;
  }

  QuadratureRule sph = sphere_rule(p.d, angular_order);
  std::vector<double> s, ws;
  gauss_jacobi(radial_order, p.mu - 0.5, 0.5 * p.d - 1.0, s, ws);
  double scale = std::pow(2.0, -(0.5 * p.d + p.mu + 0.5));
  rule.radial_r.resize(static_cast<std::size_t>(radial_order));
  rule.radial_w.resize(static_cast<std::size_t>(radial_order));
  for (int i = 0; i < radial_order; ++i) {
    rule.radial_r[static_cast<std::size_t>(i)] =
        std::sqrt(0.5 * (1.0 + s[static_cast<std::size_t>(i)]));
    rule.radial_w[static_cast<std::size_t>(i)] = scale * ws[static_cast<std::size_t>(i)];
  }
  rule.sphere_nodes = sph.nodes;
  rule.sphere_w = sph.weights;
  rule.exactness = std::min(4 * radial_order - 2, sph.exactness);
  for (int i = 0; i < radial_order; ++i) {
    double r = rule.radial_r[static_cast<std::size_t>(i)];
    double wr = rule.radial_w[static_cast<std::size_t>(i)];
    for (long j = 0; j < sph.size(); ++j) {
      for (int k = 0; k < p.d; ++k) rule.nodes.push_back(r * sph.node(j)[k]);
      rule.weights.push_back(wr * sph.weights[static_cast<std::size_t>(j)]);
    }
  }
  rule.validate(total_mass(p));
  return rule;
}

GridFunction sample(const QuadratureRule& rule,
                    const std::function<double(const double*, int)>& f) {
  GridFunction g(rule);
  for (long i = 0; i < rule.size(); ++i)
    g.values[static_cast<std::size_t>(i)] = f(rule.node(i), rule.dim);
  return g;
}

double integrate(const GridFunction& f) {
  if (!f.rule) throw std::invalid_argument("integrate: unbound GridFunction");
  double s = 0.0, comp = 0.0;
  for (long i = 0; i < f.rule->size(); ++i) {
    double term = f.rule->weights[static_cast<std::size_t>(i)] *
                      f.values[static_cast<std::size_t>(i)] - comp;
    double next = s + term;
    comp = (next - s) - term;
    s = next;
  }
  return s;
}

double inner_product(const GridFunction& f, const GridFunction& g) {
  if (!f.rule || f.rule != g.rule)
    throw std::invalid_argument("inner_product: functions must share one rule");
  double s = 0.0, comp = 0.0;
  for (long i = 0; i < f.rule->size(); ++i) {
    double term = f.rule->weights[static_cast<std::size_t>(i)] *
                      f.values[static_cast<std::size_t>(i)] *
                      g.values[static_cast<std::size_t>(i)] - comp;
    double next = s + term;
    comp = (next - s) - term;
    s = next;
  }
  return s;
}

}  // namespace ballheat
