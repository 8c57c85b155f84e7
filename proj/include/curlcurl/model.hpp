#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace curlcurl {

/// Scalar potential V with cylindrical symmetry: eval takes the radial
/// coordinate r = |y| and the axial coordinate s, in unscaled units.
/// The semiclassically scaled potential is V(eps*r, eps*s).
struct Potential {
  std::function<double(double, double)> eval;
  double v0 = 0.0;       // inf V, must be positive
  double v_inf = 0.0;    // limit of V at infinity
  bool is_constant = false;
  std::optional<double> holder_exponent_at_zero;
  int dim_n = 3;  // ambient dimension N
  int sym_k = 2;  // rotational symmetry rank K, N > K >= 2
  std::string family;
  std::vector<double> params;

  double operator()(double r, double s) const { return eval(r, s); }

  /// V + h, metadata shifted accordingly.
  Potential shifted(double h) const;
};

/// Families: constant(k), well(depth, plateau, width),
/// radial-step(inner, outer, radius[, transition]),
/// double-well-axis(depth, plateau, separation, width).
Potential builtin_potential(const std::string& name, const std::vector<double>& params);

/// Superlinear, subcritical nonlinearity f with primitive F, F(0) = 0.
/// df is f' and feeds the Newton polish in the fibering-map root finder.
struct Nonlinearity {
  std::function<double(double)> f;
  std::function<double(double)> F;
  std::function<double(double)> df;
  double p = 4.0;  // growth exponent, 2 < p < 2N/(N-2)
  bool odd = true;
  std::optional<double> kerr_chi3;  // set iff f(u) = (chi3/2)|u|^2 u
  std::string family;
  std::vector<double> params;
};

/// Families: kerr(chi3), pure-power(p), mixed(a, q1, b, q2) with
/// f(u) = a|u|^{q1-2}u + b|u|^{q2-2}u.
Nonlinearity builtin_nonlinearity(const std::string& name, const std::vector<double>& params);

struct Domain {
  double r_max = 16.0;
  double s_max = 32.0;
};

struct Resolution {
  int n_r = 128;
  int n_s = 256;
};

struct ProblemSpec {
  Potential potential;
  Nonlinearity nonlinearity;
  double epsilon = 1.0;
  Domain domain;
  Resolution resolution;

  /// Throws std::invalid_argument on violated parameter constraints.
  void validate() const;
};

}  // namespace curlcurl
