#ifndef BALLHEAT_KERNEL_LAB_HPP
#define BALLHEAT_KERNEL_LAB_HPP

#include <cstdint>
#include <functional>
#include <vector>

#include "ballheat/geometry.hpp"
#include "ballheat/quadrature.hpp"
#include "ballheat/rng.hpp"
#include "ballheat/spectral.hpp"

namespace ballheat {

/// Geometric t-grid t_min * ratio^k, clipped at t_max (t_max always included).
std::vector<double> make_t_grid(double t_min, double t_max, double ratio = 1.15);

struct GaussianScanConfig {
  ModelParams params{2, 0.5};
  Truncation trunc;
  double t_min = 0.05;
  double t_max = 5.0;
  double t_ratio = 1.15;
  // For each pair, t is drawn only among grid values with d_B(x,y)^2/t <=
  // u_max: beyond that the truncated kernel sits at its accuracy floor and
  // the envelope fit would be conditioned on numerical noise.
  double u_max = 12.0;
  int pair_count = 500;
  std::uint64_t seed = 1;
};

struct GaussianSample {
  double t = 0.0;
  std::vector<double> x, y;
  double h = 0.0;         // h_t(x,y)
  double ball_vol = 0.0;  // W_mu(B(x, sqrt(t)))
  double dist = 0.0;      // d_B(x,y)
  double u = 0.0;         // dist^2 / t
  double log_ratio = 0.0; // log(h * ball_vol)
};

struct EnvelopeFit {
  double log_c1 = 0.0, c1 = 0.0;  // lower: log R >= log C1 - c1 u
  double log_c2 = 0.0, c2 = 0.0;  // upper: log R <= log C2 - c2 u
};

struct GaussianScanReport {
  std::vector<GaussianSample> samples;
  EnvelopeFit fit;
  bool pass = false;  // all h > 0 and every sample inside both envelopes
};

/// Envelope fits log C2 - c2 u above and log C1 - c1 u below all points.
/// Both envelopes share the bulk least-squares slope of log_r against u
/// (clamped to >= 0); the intercepts are the tightest supporting values.
/// Deterministic, no solver.
EnvelopeFit fit_envelopes(const std::vector<double>& u,
                          const std::vector<double>& log_r);

/// Normalized-kernel scan: samples stratified point pairs (1/3 both deep,
/// 1/3 one near the boundary, 1/3 uniform), evaluates
/// R = h_t(x,y) W_mu(B(x,sqrt(t))) and fits Gaussian envelopes in
/// u = d_B(x,y)^2 / t. Throws on any h <= 0.
GaussianScanReport gaussian_scan(const GaussianScanConfig& config);

/// H_* f = max over the t-grid of |H_t f| (spectral route, basis matrix
/// assembled once).
GridFunction maximal_function(const ModelParams& p, const Truncation& trunc,
                              const GridFunction& f,
                              const std::vector<double>& t_grid);

/// Hardy-Littlewood maximal function: max over radii of the |f| average
/// over B(x, r) with respect to W_mu, on the node set of f.
GridFunction hl_maximal(const ModelParams& p, const GridFunction& f,
                        const std::vector<double>& radius_grid);

/// (int |f|^p w dW_mu)^{1/p}; w sampled on the same rule, w > 0 required.
double weighted_lp_norm(const GridFunction& f, const GridFunction& w, double p);

/// max over 30 log-spaced levels lambda in [0.01, 1] * sup|f| of
/// lambda * w-measure{ hstar > lambda } / ||f||_{L1(w)}.
double weak_l1_ratio(const GridFunction& hstar, const GridFunction& f,
                     const GridFunction& w);

/// Ratio of the two sides of the mixed-norm inequality: the polar-product
/// integral of (int |H_* f(r x')|^q v dsigma)^{p/q} u(r) dlambda_mu over the
/// same expression with f in place of H_* f. Requires a product-structured
/// ball rule. Returns 0 when the denominator vanishes.
double mixed_norm_ratio(const ModelParams& p, const Truncation& trunc,
                        const GridFunction& f, double lp, double lq,
                        const std::function<double(const double*, int)>& v,
                        const std::function<double(double)>& u,
                        const std::vector<double>& t_grid);

/// Same ratio with H_* f supplied by the caller (amortizes the maximal
/// function across many (p, q, v, u) combinations).
double mixed_norm_ratio(const ModelParams& p, const GridFunction& f,
                        const GridFunction& hstar, double lp, double lq,
                        const std::function<double(const double*, int)>& v,
                        const std::function<double(double)>& u);

}  // namespace ballheat

#endif
