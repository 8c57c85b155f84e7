#pragma once

#include "curlcurl/grid.hpp"
#include "curlcurl/model.hpp"

namespace curlcurl {

/// J(u) split into its pieces: quad = (1/2)|u|_eps^2, nl = int F(u),
/// total = quad - nl, nehari = |u|_eps^2 - int f(u) u.
struct EnergyBreakdown {
  double quad = 0.0;
  double nl = 0.0;
  double total = 0.0;
  double nehari = 0.0;
};

/// Caches the operator for repeated energy/gradient/fibering evaluations on
/// one (potential, epsilon, grid) triple.
class EnergyFunctional {
 public:
  EnergyFunctional(std::shared_ptr<const CylGrid> grid, const Potential& pot,
                   const Nonlinearity& nl, double epsilon);

  EnergyBreakdown energy(const Field& u) const;
  /// Representation g of DJ(u) in the weighted inner product: g = A u - f(u).
  Field gradient(const Field& u) const;
  /// Unique t > 0 with t^2 |u|^2 = int f(tu) tu; bracketed doubling/halving
  /// from t = 1, bisection, Newton polish.
  double fiber_scale(const Field& u) const;
  Field nehari_project(const Field& u) const;

  const SchrodingerOp& op() const { return op_; }
  const Nonlinearity& nonlinearity() const { return nl_; }

 private:
  SchrodingerOp op_;
  Nonlinearity nl_;
};

EnergyBreakdown energy(const Field& u, const ProblemSpec& spec);
Field gradient(const Field& u, const ProblemSpec& spec);
double fiber_scale(const Field& u, const ProblemSpec& spec);
Field nehari_project(const Field& u, const ProblemSpec& spec);

/// Relative Nehari residual |nehari| / |u|_eps^2; the manifold membership
/// test used throughout is <= 1e-10.
double nehari_residual_rel(const EnergyBreakdown& e);

inline constexpr double kNehariTol = 1e-10;

}  // namespace curlcurl
