#ifndef BALLHEAT_SPECTRAL_HPP
#define BALLHEAT_SPECTRAL_HPP

#include <vector>

#include "ballheat/geometry.hpp"
#include "ballheat/jacobi.hpp"
#include "ballheat/quadrature.hpp"

namespace ballheat {

/// Truncation policy for the spectral series. Kernel evaluations reject
/// t < t_min; the analytic tail bound must stay below tail_tol.
struct Truncation {
  int n_max = 40;
  double tail_tol = 1e-8;
  double t_min = 0.05;
};

/// Solid spherical harmonic S_{k,kappa}(x), L2(dsigma)-orthonormal on
/// S^{d-1}. d=2: r^k cos/sin(k theta) normalized; d=3: real spherical
/// harmonics times r^k. d > 3 unsupported.
double solid_harmonic(int d, int k, int kappa, const double* x);
double solid_harmonic(int d, int k, int kappa, const BallPoint& x);

/// Zonal collapse sum_kappa S_{k,kappa}(x) S_{k,kappa}(y).
double zonal_kernel(int d, int k, const double* x, const double* y);
double zonal_kernel(int d, int k, const BallPoint& x, const BallPoint& y);

/// Q_{n,j,kappa}(x).
double basis_eval(const ModelParams& p, const MultiIndex& idx, const double* x);
double basis_eval(const ModelParams& p, const MultiIndex& idx, const BallPoint& x);

/// All indices with n <= n_max, in (n, j, kappa) lexicographic order.
std::vector<MultiIndex> enumerate_indices(const ModelParams& p, int n_max);

/// Truncated heat kernel via the zonal collapse. Normalizing constants and
/// the tail-bound growth constant are precomputed at construction.
class HeatKernelEvaluator {
public:
  HeatKernelEvaluator(const ModelParams& p, const Truncation& trunc);

  /// h_t(x,y) with the t >= t_min and tail-bound checks.
  double operator()(double t, const double* x, const double* y) const;
  double operator()(double t, const BallPoint& x, const BallPoint& y) const;

  /// Analytic bound on the discarded tail sum_{n > n_max}.
  double tail_bound(double t) const;

  const ModelParams& params() const { return params_; }
  const Truncation& truncation() const { return trunc_; }

private:
  double value_unchecked(double t, const double* x, const double* y) const;

  ModelParams params_;
  Truncation trunc_;
  std::vector<double> c2inv_;   // C_{n,j}^{-2}, packed by (n, j)
  std::vector<long> offset_;    // row offsets into c2inv_
  std::vector<double> lambda_;  // eigenvalues for n <= n_max
  double growth_c_;             // fitted envelope constant x safety factor
  double growth_rate_;          // fitted envelope rate g in sup|Q_n| <= C e^{g n}
};

struct SpectralCoefficients {
  std::vector<MultiIndex> idx;
  std::vector<double> coef;
  int n_max = 0;
};

/// Quadrature inner products <f, Q> for all n <= n_max; coefficients below
/// 1e-14 are flushed to zero.
SpectralCoefficients analyze(const ModelParams& p, const GridFunction& f, int n_max);
GridFunction synthesize(const ModelParams& p, const SpectralCoefficients& c,
                        const QuadratureRule& rule);

/// H_t f by the spectral route (analyze, damp by e^{-t lambda}, synthesize).
/// Requires rule exactness >= 2 n_max.
GridFunction apply_heat(const ModelParams& p, const Truncation& trunc, double t,
                        const GridFunction& f);

/// H_t f by kernel quadrature, int h_t(x,y) f(y) dW(y) per node.
GridFunction apply_heat_kernel_route(const ModelParams& p, const Truncation& trunc,
                                     double t, const GridFunction& f);

/// P_t f by spectral subordination (damping e^{-t sqrt(lambda)}).
GridFunction apply_poisson(const ModelParams& p, const Truncation& trunc, double t,
                           const GridFunction& f);

/// P_t f with the subordination integral evaluated by generalized
/// Gauss-Laguerre quadrature (weight u^{-1/2} e^{-u}).
GridFunction apply_poisson_quadrature_route(const ModelParams& p,
                                            const Truncation& trunc, double t,
                                            const GridFunction& f,
                                            int laguerre_order = 96);

}  // namespace ballheat

#endif
