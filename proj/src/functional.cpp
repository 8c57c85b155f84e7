#include "curlcurl/functional.hpp"

#include <cassert>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "curlcurl/errors.hpp"

namespace curlcurl {

std::shared_ptr<const CylGrid> make_grid(const ProblemSpec& spec) {
  return CylGrid::make(spec.resolution.n_r, spec.resolution.n_s, spec.domain.r_max,
                       spec.domain.s_max, spec.potential.sym_k);
}

EnergyFunctional::EnergyFunctional(std::shared_ptr<const CylGrid> grid, const Potential& pot,
                                   const Nonlinearity& nl, double epsilon)
    : op_(std::move(grid), pot, epsilon), nl_(nl) {}

EnergyBreakdown EnergyFunctional::energy(const Field& u) const {
  const CylGrid& g = op_.grid();
  const double q2 = op_.quad_form(u);
  double nl_sum = 0.0, fu_sum = 0.0;
  for (int i = 0; i < g.n_r; ++i) {
    const double wr = g.rad_w[i] * g.h_s;
    double row_nl = 0.0, row_fu = 0.0;
    for (int j = 0; j < g.n_s; ++j) {
      const double x = u.at(i, j);
      row_nl += nl_.F(x);
      row_fu += nl_.f(x) * x;
    }
    nl_sum += wr * row_nl;
    fu_sum += wr * row_fu;
  }
  EnergyBreakdown e;
  e.quad = 0.5 * q2;
  e.nl = nl_sum;
  e.total = e.quad - e.nl;
  e.nehari = q2 - fu_sum;
  return e;
}

Field EnergyFunctional::gradient(const Field& u) const {
  Field g = op_.apply(u);
  for (size_t n = 0; n < g.v.size(); ++n) g.v[n] -= nl_.f(u.v[n]);
  return g;
}

namespace {

/// sum_ij w_ij f(t u_ij) u_ij / t; strictly increasing in t under the
/// monotone-quotient contract on f. Non-finite evaluations are mapped to
/// +inf so overflow at huge t reads as "past the root".
double ray_quotient(const CylGrid& g, const Nonlinearity& nl, const Field& u, double t) {
  double sum = 0.0;
  for (int i = 0; i < g.n_r; ++i) {
    const double wr = g.rad_w[i] * g.h_s;
    double row = 0.0;
    for (int j = 0; j < g.n_s; ++j) {
      const double x = u.at(i, j);
      row += nl.f(t * x) * x;
    }
    sum += wr * row;
  }
  const double q = sum / t;
  return std::isfinite(q) ? q : std::numeric_limits<double>::infinity();
}

}  // namespace

double EnergyFunctional::fiber_scale(const Field& u) const {
  const CylGrid& g = op_.grid();
  const double q2 = op_.quad_form(u);
  if (!(q2 > 0.0)) throw std::domain_error("fiber_scale: zero field has no fibering projection");

  constexpr double kTMin = 0x1p-60, kTMax = 0x1p60;
  double t_lo = 1.0, t_hi = 1.0;
  if (ray_quotient(g, nl_, u, 1.0) < q2) {
    while (ray_quotient(g, nl_, u, t_hi) < q2) {
      t_hi *= 2.0;
      if (t_hi > kTMax)
        throw DegenerateInputError("fiber_scale: no root below 2^60 (superlinearity violated?)");
    }
    t_lo = 0.5 * t_hi;
  } else {
    while (ray_quotient(g, nl_, u, t_lo) >= q2) {
      t_lo *= 0.5;
      if (t_lo < kTMin)
        throw DegenerateInputError("fiber_scale: no root above 2^-60 (input underflow?)");
    }
    t_hi = 2.0 * t_lo;
  }

  // bisection to relative width 1e-12
  for (int it = 0; it < 200 && (t_hi - t_lo) > 1e-12 * t_hi; ++it) {
    const double mid = 0.5 * (t_lo + t_hi);
    if (ray_quotient(g, nl_, u, mid) < q2)
      t_lo = mid;
    else
      t_hi = mid;
  }
  double t = 0.5 * (t_lo + t_hi);

  // Newton polish on psi(t) = t^2 q2 - sum w f(tu) tu
  if (nl_.df) {
    for (int it = 0; it < 3; ++it) {
      double fu = 0.0, dfu = 0.0;
      for (int i = 0; i < g.n_r; ++i) {
        const double wr = g.rad_w[i] * g.h_s;
        double row_f = 0.0, row_df = 0.0;
        for (int j = 0; j < g.n_s; ++j) {
          const double x = u.at(i, j);
          const double tx = t * x;
          row_f += nl_.f(tx) * x;
          row_df += (nl_.df(tx) * tx + nl_.f(tx)) * x;
        }
        fu += wr * row_f;
        dfu += wr * row_df;
      }
      const double psi = t * t * q2 - t * fu;
      const double dpsi = 2.0 * t * q2 - dfu;
      if (dpsi == 0.0) break;
      const double t_new = t - psi / dpsi;
      if (!(t_new > 0.25 * t && t_new < 4.0 * t)) break;
      t = t_new;
    }
  }

#ifndef NDEBUG
  // coarse max-on-ray check: J(t u) peaks at the projection
  {
    const EnergyBreakdown at_t = [&] {
      Field tu = u;
      for (double& x : tu.v) x *= t;
      return energy(tu);
    }();
    Field tu = u;
    for (int k = -8; k <= 8; ++k) {
      const double tk = t * std::pow(2.0, k / 2.0);
      for (size_t n = 0; n < u.v.size(); ++n) tu.v[n] = tk * u.v[n];
      const EnergyBreakdown ek = energy(tu);
      assert(ek.total <= at_t.total + 1e-9 * (1.0 + std::abs(at_t.total)));
    }
  }
#endif
  return t;
}

Field EnergyFunctional::nehari_project(const Field& u) const {
  const double t = fiber_scale(u);
  Field out = u;
  for (double& x : out.v) x *= t;
  return out;
}

namespace {

EnergyFunctional make_functional(const Field& u, const ProblemSpec& spec) {
  auto g = make_grid(spec);
  if (!u.grid || !u.grid->same_as(*g))
    throw std::invalid_argument("field does not live on the problem grid");
  return EnergyFunctional(u.grid, spec.potential, spec.nonlinearity, spec.epsilon);
}

}  // namespace

EnergyBreakdown energy(const Field& u, const ProblemSpec& spec) {
  return make_functional(u, spec).energy(u);
}

Field gradient(const Field& u, const ProblemSpec& spec) {
  return make_functional(u, spec).gradient(u);
}

double fiber_scale(const Field& u, const ProblemSpec& spec) {
  return make_functional(u, spec).fiber_scale(u);
}

Field nehari_project(const Field& u, const ProblemSpec& spec) {
  return make_functional(u, spec).nehari_project(u);
}

double nehari_residual_rel(const EnergyBreakdown& e) {
  const double norm2 = 2.0 * e.quad;
  return norm2 > 0.0 ? std::abs(e.nehari) / norm2 : 0.0;
}

}  // namespace curlcurl
