#ifndef BALLHEAT_QUADRATURE_HPP
#define BALLHEAT_QUADRATURE_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "ballheat/geometry.hpp"

namespace ballheat {

enum class Domain { Ball, Sphere, Interval };

/// Immutable node/weight list with a declared polynomial exactness degree.
/// Nodes are stored flat, row-major, `dim` coordinates per node.
class QuadratureRule {
public:
  Domain domain = Domain::Interval;
  int dim = 1;             // ambient coordinates per node
  int exactness = 0;       // total polynomial degree; 0 for Monte Carlo
  long mc_samples = 0;     // nonzero for the Monte Carlo fallback
  std::vector<double> nodes;
  std::vector<double> weights;

  // Product structure of ball rules (radial x sphere), kept for
  // polar-factorized norms. Node ordering is radial-major.
  std::vector<double> radial_r;       // radii
  std::vector<double> radial_w;      // d lambda_mu weights
  std::vector<double> sphere_nodes;  // directions on S^{d-1}, flat
  std::vector<double> sphere_w;

  long size() const { return static_cast<long>(weights.size()); }
  const double* node(long i) const { return nodes.data() + static_cast<long>(dim) * i; }

  /// Checks weight positivity and that the total mass matches `expected_mass`
  /// to 1e-10 (relative).
  void validate(double expected_mass) const;

  void export_csv(const std::string& path) const;
};

/// Gauss-Jacobi rule on [-1,1] for the weight (1-x)^alpha (1+x)^beta,
/// Golub-Welsch on the symmetric three-term recurrence.
void gauss_jacobi(int n, double alpha, double beta,
                  std::vector<double>& x, std::vector<double>& w);

void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w);

/// Generalized Gauss-Laguerre for the weight u^alpha e^{-u} on (0,inf).
void gauss_laguerre(int n, double alpha,
                    std::vector<double>& x, std::vector<double>& w);

/// Rule on S^{d-1} exact for (spherical-harmonic) degree <= angular_order.
/// d=2: uniform points on the circle; d=3: Gauss-Legendre in the polar
/// cosine times uniform azimuth. d > 3 is unsupported.
QuadratureRule sphere_rule(int d, int angular_order);

/// Product rule on B: radial Gauss-Jacobi in s = 2r^2-1 times a sphere rule.
/// Exact for total degree <= min(4*radial_order-2, angular_order).
/// d > 3 falls back to Monte Carlo (exactness 0) with `mc_samples` draws.
QuadratureRule ball_rule(const ModelParams& p, int radial_order, int angular_order,
                         std::uint64_t mc_seed = 1, long mc_samples = 200000);

/// Values of a function sampled on a rule's nodes.
struct GridFunction {
  const QuadratureRule* rule = nullptr;
  std::vector<double> values;

  GridFunction() = default;
  explicit GridFunction(const QuadratureRule& r)
      : rule(&r), values(static_cast<std::size_t>(r.size()), 0.0) {}
};

GridFunction sample(const QuadratureRule& rule,
                    const std::function<double(const double*, int)>& f);

/// Compensated (Kahan) weighted sum.
double integrate(const GridFunction& f);
double inner_product(const GridFunction& f, const GridFunction& g);

}  // namespace ballheat

#endif
