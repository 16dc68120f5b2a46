#include "ballheat/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ballheat {

namespace {
constexpr double kPi = 3.14159265358979323846;

// Fully normalized associated Legendre values P~_k^m(cos theta) for fixed m,
// k = m..kmax, such that the real spherical harmonics built from them are
// orthonormal in L2(dsigma) on S^2.
void assoc_legendre_normalized(int kmax, int m, double ct, double st,
                               std::vector<double>& out) {
  out.assign(static_cast<std::size_t>(kmax - m + 1), 0.0);
  double pmm = std::sqrt(1.0 / (4.0 * kPi));
  for (int i = 1; i <= m; ++i)
    pmm *= -std::sqrt((2.0 * i + 1.0) / (2.0 * i)) * st;
  out[0] = pmm;
  if (kmax == m) return;
  double pm1 = std::sqrt(2.0 * m + 3.0) * ct * pmm;
  out[1] = pm1;
  for (int k = m + 2; k <= kmax; ++k) {
    double a = std::sqrt((4.0 * k * k - 1.0) / (static_cast<double>(k) * k - m * m));
    double b = std::sqrt((static_cast<double>(k - 1) * (k - 1) - m * m) /
                         (4.0 * static_cast<double>(k - 1) * (k - 1) - 1.0));
    double pk = a * (ct * pm1 - b * pmm);
    pmm = pm1;
    pm1 = pk;
    out[static_cast<std::size_t>(k - m)] = pk;
  }
}
}  // namespace

double solid_harmonic(int d, int k, int kappa, const double* x) {
  if (d != 2 && d != 3)
    throw std::invalid_argument("solid_harmonic: d must be 2 or 3");
  if (k < 0 || kappa < 1 || kappa > harmonic_dim(d, k))
    throw std::invalid_argument("solid_harmonic: invalid (k, kappa)");
  double r2 = 0.0;
  for (int i = 0; i < d; ++i) r2 += x[i] * x[i];
  double r = std::sqrt(r2);
  if (k == 0) return 1.0 / std::sqrt(sphere_area(d));
  if (r < 1e-300) return 0.0;

  if (d == 2) {
    double th = std::atan2(x[1], x[0]);
    double ang = kappa == 1 ? std::cos(k * th) : std::sin(k * th);
    return std::pow(r, k) * ang / std::sqrt(kPi);
  }
  // d == 3: kappa = 1 -> m = 0; kappa = 2m -> cos; kappa = 2m+1 -> sin
  int m = kappa / 2;
  bool use_sin = (kappa >= 3) && (kappa % 2 == 1);
  double ct = x[2] / r;
  ct = std::max(-1.0, std::min(1.0, ct));
  double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
  std::vector<double> leg;
  assoc_legendre_normalized(k, m, ct, st, leg);
  double y = leg.back();
  if (m > 0) {
    double ph = std::atan2(x[1], x[0]);
    y *= std::sqrt(2.0) * (use_sin ? std::sin(m * ph) : std::cos(m * ph));
  }
  return std::pow(r, k) * y;
}

double solid_harmonic(int d, int k, int kappa, const BallPoint& x) {
  return solid_harmonic(d, k, kappa, x.c.data());
}

double zonal_kernel(int d, int k, const double* x, const double* y) {
  if (d != 2 && d != 3)
    throw std::invalid_argument("zonal_kernel: d must be 2 or 3");
  double sigma = sphere_area(d);
  if (k == 0) return 1.0 / sigma;
  double rx2 = 0.0, ry2 = 0.0, xy = 0.0;
  for (int i = 0; i < d; ++i) {
    rx2 += x[i] * x[i];
    ry2 += y[i] * y[i];
    xy += x[i] * y[i];
  }
  double rx = std::sqrt(rx2), ry = std::sqrt(ry2);
  if (rx < 1e-300 || ry < 1e-300) return 0.0;
  double cg = std::max(-1.0, std::min(1.0, xy / (rx * ry)));
  double radial = std::pow(rx * ry, k);
  if (d == 2) {
    // cos(k gamma) via Chebyshev, 2/sigma = 1/pi
    return radial * std::cos(k * std::acos(cg)) / kPi;
  }
  // Legendre P_k(cos gamma)
  double pm1 = 1.0, pk = cg;
  for (int i = 2; i <= k; ++i) {
    double next = ((2.0 * i - 1.0) * cg * pk - (i - 1.0) * pm1) / i;
    pm1 = pk;
    pk = next;
  }
  return radial * static_cast<double>(harmonic_dim(3, k)) / sigma * pk;
}

double zonal_kernel(int d, int k, const BallPoint& x, const BallPoint& y) {
  return zonal_kernel(d, k, x.c.data(), y.c.data());
}

double basis_eval(const ModelParams& p, const MultiIndex& idx, const double* x) {
  int n = idx.n, j = idx.j, k = n - 2 * j;
  if (n < 0 || j < 0 || 2 * j > n || idx.kappa < 1 || idx.kappa > harmonic_dim(p.d, k))
    throw std::invalid_argument("basis_eval: invalid MultiIndex");
  double r2 = 0.0;
  for (int i = 0; i < p.d; ++i) r2 += x[i] * x[i];
  JacobiParams jp(p.mu - 0.5, k + 0.5 * p.d - 1.0);
  double pj = jacobi_eval(j, jp, 2.0 * r2 - 1.0);
  return pj * solid_harmonic(p.d, k, idx.kappa, x) / norm_const(p, n, j);
}

double basis_eval(const ModelParams& p, const MultiIndex& idx, const BallPoint& x) {
  return basis_eval(p, idx, x.c.data());
}

std::vector<MultiIndex> enumerate_indices(const ModelParams& p, int n_max) {
  std::vector<MultiIndex> out;
  for (int n = 0; n <= n_max; ++n)
    for (int j = 0; 2 * j <= n; ++j)
      for (int kap = 1; kap <= harmonic_dim(p.d, n - 2 * j); ++kap)
        out.push_back(MultiIndex{n, j, kap});
  return out;
}

HeatKernelEvaluator::HeatKernelEvaluator(const ModelParams& p, const Truncation& trunc)
    : params_(p), trunc_(trunc) {
  if (trunc_.n_max < 0) throw std::invalid_argument("Truncation: n_max must be >= 0");
  offset_.resize(static_cast<std::size_t>(trunc_.n_max) + 1);
  lambda_.resize(static_cast<std::size_t>(trunc_.n_max) + 1);
  long off = 0;
  for (int n = 0; n <= trunc_.n_max; ++n) {
    offset_[static_cast<std::size_t>(n)] = off;
    lambda_[static_cast<std::size_t>(n)] = eigenvalue(p, n);
    for (int j = 0; 2 * j <= n; ++j) {
      c2inv_.push_back(std::exp(-2.0 * log_norm_const(p, n, j)));
      ++off;
    }
  }
  // Exponential envelope sup|Q_n| <= C e^{g n}: the rate is the steepest
  // consecutive slope of the analytic per-degree envelope (plus margin), the
  // constant the smallest one dominating every row, with a 10x safety factor.
  std::vector<QEnvelopeRow> rows = q_envelope(p, std::min(trunc_.n_max, 40));
  double g = 0.0;
  for (std::size_t n = 10; n < rows.size(); ++n)
    g = std::max(g, std::log(rows[n].analytic / rows[n - 1].analytic));
  growth_rate_ = g + 0.02;
  double c = 0.0;
  for (const auto& row : rows)
    c = std::max(c, row.analytic * std::exp(-growth_rate_ * row.n));
  growth_c_ = 10.0 * c;
}

double HeatKernelEvaluator::tail_bound(double t) const {
  double c2 = growth_c_ * growth_c_;
  double acc = 0.0;
  for (int n = trunc_.n_max + 1; n < trunc_.n_max + 4000; ++n) {
    double lam = eigenvalue(params_, n);
    double term = c2 * std::pow(n + 1.0, params_.d) *
                  std::exp(2.0 * growth_rate_ * n - t * lam);
    acc += term;
    if (term < 1e-30 && n > trunc_.n_max + 10) break;
  }
  return acc;
}

double HeatKernelEvaluator::value_unchecked(double t, const double* x,
                                            const double* y) const {
  int d = params_.d;
  double rx2 = 0.0, ry2 = 0.0, xy = 0.0;
  for (int i = 0; i < d; ++i) {
    rx2 += x[i] * x[i];
    ry2 += y[i] * y[i];
    xy += x[i] * y[i];
  }
  double rx = std::sqrt(rx2), ry = std::sqrt(ry2);
  double sx = 2.0 * rx2 - 1.0, sy = 2.0 * ry2 - 1.0;
  double sigma = sphere_area(d);
  bool degenerate = rx < 1e-300 || ry < 1e-300;
  double cg = degenerate ? 1.0
                         : std::max(-1.0, std::min(1.0, xy / (rx * ry)));

  // exp(-t lambda_n) table
  std::vector<double> damp(lambda_.size());
  for (std::size_t n = 0; n < lambda_.size(); ++n)
    damp[n] = std::exp(-t * lambda_[n]);

  // zonal factors z_k and the k-major collapse of the (n,j,kappa) sum
  int n_max = trunc_.n_max;
  std::vector<double> bufx(static_cast<std::size_t>(n_max / 2) + 1);
  std::vector<double> bufy(static_cast<std::size_t>(n_max / 2) + 1);
  double acc = 0.0;
  double radial_pow = 1.0;  // (rx ry)^k
  double cheb_km1 = 1.0, cheb_k = cg;   // cos(k gamma) recurrence (d=2)
  double leg_km1 = 1.0, leg_k = cg;     // P_k(cos gamma) recurrence (d=3)
  for (int k = 0; k <= n_max; ++k) {
    double zk;
    if (k == 0) {
      zk = 1.0 / sigma;
    } else if (degenerate) {
      zk = 0.0;
    } else {
      double ang = d == 2 ? 2.0 * cheb_k
                          : static_cast<double>(harmonic_dim(3, k)) * leg_k;
      zk = radial_pow * ang / sigma;
    }
    if (zk != 0.0 || k == 0) {
      int jmax = (n_max - k) / 2;
      double alpha = params_.mu - 0.5;
      double beta = k + 0.5 * d - 1.0;
      jacobi_eval_all(jmax, alpha, beta, sx, bufx.data());
      jacobi_eval_all(jmax, alpha, beta, sy, bufy.data());
      double inner = 0.0;
      for (int j = 0; j <= jmax; ++j) {
        int n = k + 2 * j;
        inner += damp[static_cast<std::size_t>(n)] *
                 c2inv_[static_cast<std::size_t>(offset_[static_cast<std::size_t>(n)] + j)] *
                 bufx[static_cast<std::size_t>(j)] * bufy[static_cast<std::size_t>(j)];
      }
      acc += zk * inner;
    }
    // advance recurrences to k+1
    radial_pow *= rx * ry;
    if (k >= 1) {
      double cnext = 2.0 * cg * cheb_k - cheb_km1;
      cheb_km1 = cheb_k;
      cheb_k = cnext;
      double lnext = ((2.0 * k + 1.0) * cg * leg_k - k * leg_km1) / (k + 1.0);
      leg_km1 = leg_k;
      leg_k = lnext;
    }
  }
  return acc;
}

double HeatKernelEvaluator::operator()(double t, const double* x,
                                       const double* y) const {
  if (t < trunc_.t_min)
    throw std::invalid_argument("heat_kernel: t below truncation t_min");
  double tb = tail_bound(t);
  if (tb > trunc_.tail_tol)
    throw std::runtime_error(
        "heat_kernel: tail bound exceeds tail_tol; increase n_max or t");
  return value_unchecked(t, x, y);
}

double HeatKernelEvaluator::operator()(double t, const BallPoint& x,
                                       const BallPoint& y) const {
  return (*this)(t, x.c.data(), y.c.data());
}

SpectralCoefficients analyze(const ModelParams& p, const GridFunction& f, int n_max) {
  if (!f.rule) throw std::invalid_argument("analyze: unbound GridFunction");
  SpectralCoefficients out;
  out.n_max = n_max;
  out.idx = enumerate_indices(p, n_max);
  out.coef.resize(out.idx.size());
  const QuadratureRule& rule = *f.rule;
  for (std::size_t a = 0; a < out.idx.size(); ++a) {
    double s = 0.0, comp = 0.0;
    for (long i = 0; i < rule.size(); ++i) {
      double term = rule.weights[static_cast<std::size_t>(i)] *
                        f.values[static_cast<std::size_t>(i)] *
                        basis_eval(p, out.idx[a], rule.node(i)) - comp;
      double next = s + term;
      comp = (next - s) - term;
      s = next;
    }
    out.coef[a] = std::abs(s) < 1e-14 ? 0.0 : s;
  }
  return out;
}

GridFunction synthesize(const ModelParams& p, const SpectralCoefficients& c,
                        const QuadratureRule& rule) {
  GridFunction g(rule);
  for (long i = 0; i < rule.size(); ++i) {
    double s = 0.0;
    for (std::size_t a = 0; a < c.idx.size(); ++a)
      if (c.coef[a] != 0.0)
        s += c.coef[a] * basis_eval(p, c.idx[a], rule.node(i));
    g.values[static_cast<std::size_t>(i)] = s;
  }
  return g;
}

namespace {
GridFunction apply_damped(const ModelParams& p, const Truncation& trunc,
                          const GridFunction& f,
                          const std::function<double(double)>& damp_of_lambda) {
  if (!f.rule) throw std::invalid_argument("apply: unbound GridFunction");
  if (f.rule->exactness != 0 && f.rule->exactness < 2 * trunc.n_max)
    throw std::invalid_argument("apply: rule exactness below 2 n_max");
  SpectralCoefficients c = analyze(p, f, trunc.n_max);
  for (std::size_t a = 0; a < c.idx.size(); ++a)
    c.coef[a] *= damp_of_lambda(eigenvalue(p, c.idx[a].n));
  return synthesize(p, c, *f.rule);
}
}  // namespace

GridFunction apply_heat(const ModelParams& p, const Truncation& trunc, double t,
                        const GridFunction& f) {
  if (t < trunc.t_min)
    throw std::invalid_argument("apply_heat: t below truncation t_min");
  return apply_damped(p, trunc, f,
                      [t](double lam) { return std::exp(-t * lam); });
}

GridFunction apply_heat_kernel_route(const ModelParams& p, const Truncation& trunc,
                                     double t, const GridFunction& f) {
  if (!f.rule) throw std::invalid_argument("apply_heat: unbound GridFunction");
  HeatKernelEvaluator h(p, trunc);
  const QuadratureRule& rule = *f.rule;
  GridFunction g(rule);
  for (long i = 0; i < rule.size(); ++i) {
    double s = 0.0, comp = 0.0;
    for (long j = 0; j < rule.size(); ++j) {
      double term = rule.weights[static_cast<std::size_t>(j)] *
                        f.values[static_cast<std::size_t>(j)] *
                        h(t, rule.node(i), rule.node(j)) - comp;
      double next = s + term;
      comp = (next - s) - term;
      s = next;
    }
    g.values[static_cast<std::size_t>(i)] = s;
  }
  return g;
}

GridFunction apply_poisson(const ModelParams& p, const Truncation& trunc, double t,
                           const GridFunction& f) {
  if (!(t > 0.0)) throw std::invalid_argument("apply_poisson: need t > 0");
  return apply_damped(p, trunc, f, [t](double lam) {
    return std::exp(-t * std::sqrt(lam));
  });
}

GridFunction apply_poisson_quadrature_route(const ModelParams& p,
                                            const Truncation& trunc, double t,
                                            const GridFunction& f,
                                            int laguerre_order) {
  if (!(t > 0.0)) throw std::invalid_argument("apply_poisson: need t > 0");
  std::vector<double> u, w;
  gauss_laguerre(laguerre_order, -0.5, u, w);
  double norm = std::tgamma(0.5);  // sqrt(pi)
  return apply_damped(p, trunc, f, [&](double lam) {
    if (lam == 0.0) return 1.0;
    double s = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i)
      s += w[i] * std::exp(-lam * t * t / (4.0 * u[i]));
    return s / norm;
  });
}

}  // namespace ballheat
