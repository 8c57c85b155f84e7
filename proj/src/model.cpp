#include "curlcurl/model.hpp"

#include <cmath>
#include <stdexcept>

namespace curlcurl {

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument(msg);
}

double smoothstep(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  return t * t * (3.0 - 2.0 * t);
}

/// Cheap sampling validation of the inf / limit metadata on a net that
/// extends a few decay lengths past the family's own scale.
void check_metadata(const Potential& pot, double scale) {
  const double extent = 8.0 * scale;
  const int n = 64;
  double vmin = pot(0.0, 0.0);
  for (int i = 0; i <= n; ++i) {
    for (int j = -n; j <= n; ++j) {
      const double r = extent * i / n;
      const double s = extent * j / n;
      vmin = std::min(vmin, pot(r, s));
    }
  }
  require(vmin > 0.0, "potential: inf V must be positive");
  require(vmin >= pot.v0 - 1e-9 * std::abs(pot.v0),
          "potential: sampled minimum undershoots the declared V0");
  if (!pot.is_constant) {
    require(pot(0.0, 0.0) < pot.v_inf, "potential: V(0) must lie strictly below V_inf");
  }
}

}  // namespace

Potential Potential::shifted(double h) const {
  Potential out = *this;
  auto base = eval;
  out.eval = [base, h](double r, double s) { return base(r, s) + h; };
  out.v0 = v0 + h;
  out.v_inf = v_inf + h;
  out.family = family + "+shift";
  out.params.push_back(h);
  if (out.v0 <= 0.0) throw std::invalid_argument("potential shift breaks positivity of V0");
  return out;
}

Potential builtin_potential(const std::string& name, const std::vector<double>& params) {
  Potential pot;
  pot.family = name;
  pot.params = params;
  pot.holder_exponent_at_zero = 1.0;  // every builtin is smooth at the origin

  if (name == "constant") {
    require(params.size() == 1, "constant potential takes one parameter (level)");
    const double k = params[0];
    require(k > 0.0, "constant potential level must be positive");
    pot.eval = [k](double, double) { return k; };
    pot.v0 = k;
    pot.v_inf = k;
    pot.is_constant = true;
    return pot;
  }

  if (name == "well") {
    require(params.size() == 3, "well potential takes (depth, plateau, width)");
    const double depth = params[0], plateau = params[1], width = params[2];
    require(depth > 0.0, "well: depth must be positive (it is inf V)");
    require(plateau > depth, "well: plateau must exceed depth");
    require(width > 0.0, "well: width must be positive");
    pot.eval = [=](double r, double s) {
      const double q = (r * r + s * s) / (width * width);
      return plateau - (plateau - depth) * std::exp(-q);
    };
    pot.v0 = depth;
    pot.v_inf = plateau;
    check_metadata(pot, width);
    return pot;
  }

  if (name == "radial-step") {
    require(params.size() == 3 || params.size() == 4,
            "radial-step takes (inner, outer, radius[, transition])");
    const double inner = params[0], outer = params[1], radius = params[2];
    const double trans = params.size() == 4 ? params[3] : 1.0;
    require(inner > 0.0, "radial-step: inner level must be positive");
    require(outer > inner, "radial-step: outer level must exceed inner");
    require(radius > 0.0 && trans > 0.0, "radial-step: radius and transition must be positive");
    pot.eval = [=](double r, double s) {
      const double rho = std::hypot(r, s);
      return inner + (outer - inner) * smoothstep((rho - radius) / trans);
    };
    pot.v0 = inner;
    pot.v_inf = outer;
    check_metadata(pot, radius + trans);
    return pot;
  }

  if (name == "double-well-axis") {
    require(params.size() == 4,
            "double-well-axis takes (depth, plateau, separation, width)");
    const double depth = params[0], plateau = params[1], sep = params[2], width = params[3];
    require(depth > 0.0, "double-well-axis: depth must be positive");
    require(plateau > depth, "double-well-axis: plateau must exceed depth");
    require(sep > 0.0 && width > 0.0, "double-well-axis: separation and width must be positive");
    // q vanishes exactly at (0, +-sep), so the declared V0 = depth is attained.
    pot.eval = [=](double r, double s) {
      const double d = s * s - sep * sep;
      const double q = (r * r + d * d / (4.0 * sep * sep)) / (width * width);
      return plateau - (plateau - depth) * std::exp(-q);
    };
    pot.v0 = depth;
    pot.v_inf = plateau;
    check_metadata(pot, sep + width);
    return pot;
  }

  throw std::invalid_argument("unknown potential family: " + name);
}

Nonlinearity builtin_nonlinearity(const std::string& name, const std::vector<double>& params) {
  Nonlinearity nl;
  nl.family = name;
  nl.params = params;

  // subcritical bound for the default dimension N = 3
  constexpr double kTwoStar = 6.0;

  if (name == "kerr") {
    require(params.size() == 1, "kerr takes one parameter (chi3)");
    const double chi = params[0];
    require(chi > 0.0, "kerr: chi3 must be positive");
    nl.f = [chi](double u) { return 0.5 * chi * u * u * u; };
    nl.F = [chi](double u) { return 0.125 * chi * u * u * u * u; };
    nl.df = [chi](double u) { return 1.5 * chi * u * u; };
    nl.p = 4.0;
    nl.kerr_chi3 = chi;
    return nl;
  }

  if (name == "pure-power") {
    require(params.size() == 1, "pure-power takes one parameter (p)");
    const double p = params[0];
    require(p > 2.0 && p < kTwoStar, "pure-power: p must lie in (2, 2N/(N-2))");
    nl.f = [p](double u) { return std::pow(std::abs(u), p - 2.0) * u; };
    nl.F = [p](double u) { return std::pow(std::abs(u), p) / p; };
    nl.df = [p](double u) { return (p - 1.0) * std::pow(std::abs(u), p - 2.0); };
    nl.p = p;
    return nl;
  }

  if (name == "mixed") {
    require(params.size() == 4, "mixed takes (a, q1, b, q2)");
    const double a = params[0], q1 = params[1], b = params[2], q2 = params[3];
    require(a > 0.0 && b > 0.0, "mixed: coefficients must be positive");
    require(q1 > 2.0 && q1 < kTwoStar && q2 > 2.0 && q2 < kTwoStar,
            "mixed: exponents must lie in (2, 2N/(N-2))");
    nl.f = [=](double u) {
      const double au = std::abs(u);
      return a * std::pow(au, q1 - 2.0) * u + b * std::pow(au, q2 - 2.0) * u;
    };
    nl.F = [=](double u) {
      const double au = std::abs(u);
      return a * std::pow(au, q1) / q1 + b * std::pow(au, q2) / q2;
    };
    nl.df = [=](double u) {
      const double au = std::abs(u);
      return a * (q1 - 1.0) * std::pow(au, q1 - 2.0) + b * (q2 - 1.0) * std::pow(au, q2 - 2.0);
    };
    nl.p = std::max(q1, q2);
    return nl;
  }

  throw std::invalid_argument("unknown nonlinearity family: " + name);
}

void ProblemSpec::validate() const {
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  if (!(domain.r_max > 0.0 && domain.s_max > 0.0))
    throw std::invalid_argument("domain extents must be positive");
  if (resolution.n_r < 8 || resolution.n_s < 8)
    throw std::invalid_argument("resolution must be at least 8x8");
  if (!(potential.v0 > 0.0)) throw std::invalid_argument("potential must have positive V0");
  const int n = potential.dim_n, k = potential.sym_k;
  if (!(n > k && k >= 2)) throw std::invalid_argument("dimensions must satisfy N > K >= 2");
  if (n - k != 1)
    throw std::invalid_argument("the reduced grid supports exactly one axial dimension (N - K = 1)");
  const double two_star = 2.0 * n / (n - 2.0);
  if (!(nonlinearity.p > 2.0 && nonlinearity.p < two_star))
    throw std::invalid_argument("nonlinearity growth exponent out of (2, 2N/(N-2))");
}

}  // namespace curlcurl
