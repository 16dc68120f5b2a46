#include "ballheat/jacobi.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ballheat {

namespace {
constexpr int kDegreeCap = 200;
}

JacobiParams::JacobiParams(double a, double b) : alpha(a), beta(b) {
  if (alpha <= -1.0 || beta <= -1.0)
    throw std::invalid_argument("JacobiParams: alpha, beta must be > -1");
}

void jacobi_eval_all(int jmax, double alpha, double beta, double x, double* out) {
  out[0] = 1.0;
  if (jmax == 0) return;
  out[1] = (alpha + 1.0) + 0.5 * (alpha + beta + 2.0) * (x - 1.0);
  double ab = alpha + beta;
  for (int n = 2; n <= jmax; ++n) {
    double t = 2.0 * n + ab;
    double a1 = 2.0 * n * (n + ab) * (t - 2.0);
    double a2 = (t - 1.0) * (alpha * alpha - beta * beta);
    double a3 = (t - 1.0) * t * (t - 2.0);
    double a4 = 2.0 * (n + alpha - 1.0) * (n + beta - 1.0) * t;
    out[n] = ((a2 + a3 * x) * out[n - 1] - a4 * out[n - 2]) / a1;
  }
}

double jacobi_eval(int j, const JacobiParams& p, double x) {
  if (j < 0) throw std::invalid_argument("jacobi_eval: j must be >= 0");
  if (j > kDegreeCap) throw std::invalid_argument("jacobi_eval: degree cap exceeded");
  if (std::abs(x) > 1.0 + 1e-12) throw std::invalid_argument("jacobi_eval: |x| > 1");
  std::vector<double> buf(static_cast<std::size_t>(j) + 1);
  jacobi_eval_all(j, p.alpha, p.beta, std::min(1.0, std::max(-1.0, x)), buf.data());
  return buf[static_cast<std::size_t>(j)];
}

double log_norm_const(const ModelParams& p, int n, int j) {
  if (n < 0 || j < 0 || 2 * j > n)
    throw std::invalid_argument("norm_const: need 0 <= 2j <= n");
  double num = std::lgamma(j + p.mu + 0.5) + std::lgamma(n - j + 0.5 * p.d);
  double den = std::log(2.0 * (n + p.mu + 0.5 * (p.d - 1))) +
               std::lgamma(j + 1.0) +
               std::lgamma(n - j + p.mu + 0.5 * (p.d - 1));
  return 0.5 * (num - den);
}

double norm_const(const ModelParams& p, int n, int j) {
  double lv = log_norm_const(p, n, j);
  if (std::abs(lv) > 700.0)
    throw std::overflow_error("norm_const: log value out of representable range");
  return std::exp(lv);
}

double eigenvalue(const ModelParams& p, int n) {
  if (n < 0) throw std::invalid_argument("eigenvalue: n must be >= 0");
  return static_cast<double>(n) * (n + p.d + 2.0 * p.mu - 1.0);
}

namespace {
long binom_long(int a, int b) {
  if (b < 0 || b > a) return 0;
  long double acc = 1.0L;
  for (int i = 1; i <= b; ++i) acc = acc * (a - b + i) / i;
  return static_cast<long>(std::llround(static_cast<double>(acc)));
}
}  // namespace

long harmonic_dim(int d, int k) {
  if (k < 0) throw std::invalid_argument("harmonic_dim: k must be >= 0");
  long h = binom_long(d + k - 1, k);
  if (k >= 2) h -= binom_long(d + k - 3, k - 2);
  return h;
}

double jacobi_sup(int j, const JacobiParams& p) {
  double q = std::max(p.alpha, p.beta);
  if (q < -0.5)
    throw std::invalid_argument("jacobi_sup: formula requires max(alpha,beta) >= -1/2");
  if (j == 0) return 1.0;
  // binom(j+q, j) through log-gamma
  return std::exp(std::lgamma(j + q + 1.0) - std::lgamma(j + 1.0) -
                  std::lgamma(q + 1.0));
}

StirlingBoundA stirling_bound_a(double x, double a) {
  if (!(x > 0.0) || !(a > 0.0))
    throw std::invalid_argument("stirling_bound_a: arguments must be positive");
  StirlingBoundA r{};
  double lo = x * std::log(x);
  double v = x * std::log(x + a);
  double hi = a + x * std::log(x);
  r.lower = lo;
  r.value = v;
  r.upper = hi;
  r.holds = (lo <= v + 1e-12) && (v <= hi + 1e-12);
  return r;
}

StirlingBoundB stirling_bound_b(double x, double y) {
  if (!(x > 0.0) || !(y > 0.0))
    throw std::invalid_argument("stirling_bound_b: arguments must be positive");
  StirlingBoundB r{};
  r.value = (x + y) * std::log(x + y);
  r.bound = (x + y) * std::log(2.0) + x * std::log(x) + y * std::log(y);
  r.holds = r.value <= r.bound + 1e-12;
  return r;
}

double gamma_asymptotic_ratio(double x) {
  if (!(x >= 0.5)) throw std::invalid_argument("gamma_asymptotic_ratio: need x >= 1/2");
  return std::exp(std::lgamma(x) - (x - 0.5) * std::log(x) + x);
}

std::vector<QEnvelopeRow> q_envelope(const ModelParams& p, int n_max) {
  if (n_max > 40) throw std::invalid_argument("q_envelope: n_max must be <= 40");
  double sigma = sphere_area(p.d);
  std::vector<QEnvelopeRow> rows;
  const int nr = 200;
  for (int n = 0; n <= n_max; ++n) {
    QEnvelopeRow row{n, 0.0, 0.0};
    for (int j = 0; 2 * j <= n; ++j) {
      int k = n - 2 * j;
      JacobiParams jp(p.mu - 0.5, k + 0.5 * p.d - 1.0);
      double cinv = std::exp(-log_norm_const(p, n, j));
      double aggr = std::sqrt(static_cast<double>(harmonic_dim(p.d, k)) / sigma);
      row.analytic = std::max(row.analytic, cinv * jacobi_sup(j, jp) * aggr);
      // grid search of the kappa-aggregated magnitude, radial only: the
      // aggregate sqrt(sum_kappa S^2) depends on |x| alone
      std::vector<double> pj(static_cast<std::size_t>(j) + 1);
      for (int i = 0; i <= nr; ++i) {
        double r = static_cast<double>(i) / nr;
        jacobi_eval_all(j, jp.alpha, jp.beta, 2.0 * r * r - 1.0, pj.data());
        double v = cinv * std::abs(pj[static_cast<std::size_t>(j)]) * aggr *
                   std::pow(r, k);
        row.empirical = std::max(row.empirical, v);
      }
    }
    rows.push_back(row);
  }
  return rows;
}

double q_growth_constant(const ModelParams& p, int n_max) {
  double c = 0.0;
  for (const auto& row : q_envelope(p, n_max))
    c = std::max(c, row.analytic * std::exp(-static_cast<double>(row.n)));
  return c;
}

}  // namespace ballheat
