#ifndef BALLHEAT_JACOBI_HPP
#define BALLHEAT_JACOBI_HPP

#include <vector>

#include "ballheat/geometry.hpp"

namespace ballheat {

struct JacobiParams {
  double alpha;
  double beta;

  JacobiParams(double a, double b);
};

/// Basis index (n, j, kappa) with 0 <= 2j <= n and 1 <= kappa <= h(n-2j).
struct MultiIndex {
  int n = 0;
  int j = 0;
  int kappa = 1;
};

/// P_j^{alpha,beta}(x) by the standard three-term recurrence. Degree cap 200.
double jacobi_eval(int j, const JacobiParams& p, double x);

/// Fills out[0..jmax] with P_0 .. P_jmax at x (single recurrence pass).
void jacobi_eval_all(int jmax, double alpha, double beta, double x,
                     double* out);

/// Normalizing constant C_{n,j}^mu, evaluated through log-gamma with one
/// final exponentiation. Throws on overflow of the log value.
double norm_const(const ModelParams& p, int n, int j);
double log_norm_const(const ModelParams& p, int n, int j);

/// lambda_n^mu = n (n + d + 2 mu - 1).
double eigenvalue(const ModelParams& p, int n);

/// h(k) = binom(d+k-1,k) - [k>=2] binom(d+k-3,k-2).
long harmonic_dim(int d, int k);

/// sup over [-1,1] of |P_j^{alpha,beta}| = binom(j+q, j), q = max(alpha,beta).
/// Requires max(alpha,beta) >= -1/2.
double jacobi_sup(int j, const JacobiParams& p);

struct StirlingBoundA {
  double lower, value, upper;  // x^x <= (x+a)^x <= e^a x^x, in log space
  bool holds;
};
struct StirlingBoundB {
  double value, bound;  // (x+y)^{x+y} <= 2^{x+y} x^x y^y, in log space
  bool holds;
};

StirlingBoundA stirling_bound_a(double x, double a);
StirlingBoundB stirling_bound_b(double x, double y);

/// Gamma(x) / (x^{x-1/2} e^{-x}), computed in log space. Requires x >= 1/2.
double gamma_asymptotic_ratio(double x);

struct QEnvelopeRow {
  int n;
  double analytic;   // max_j C^{-1} sup|P_j| sqrt(h/sigma)
  double empirical;  // grid sup of the kappa-aggregated basis magnitude
};

/// Per-degree sup envelopes of the basis, analytic and empirical,
/// for n = 0..n_max.
std::vector<QEnvelopeRow> q_envelope(const ModelParams& p, int n_max);

/// max_n analytic_envelope(n) / e^n; growth constant used in kernel
/// tail bounds (caller applies its own safety factor).
double q_growth_constant(const ModelParams& p, int n_max = 40);

}  // namespace ballheat

#endif
