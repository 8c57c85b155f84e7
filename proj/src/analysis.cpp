#include "curlcurl/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "curlcurl/errors.hpp"
#include "curlcurl/functional.hpp"

namespace curlcurl {

double nu_star_for_dimension(int dim_n) {
  const double a = dim_n - 2.0;
  return 0.5 * (a + std::sqrt(a * a + 4.0));
}

namespace {

struct LinFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

LinFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const size_t n = x.size();
  double mx = 0.0, my = 0.0;
  for (size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  LinFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r2 = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return fit;
}

double smoothstep(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  return t * t * (3.0 - 2.0 * t);
}

}  // namespace

DecayFit decay_fit(const Solution& sol, double x_lo, double x_hi) {
  const Field& u = sol.u;
  const CylGrid& g = *u.grid;
  if (!(x_lo > 0.0 && x_lo < x_hi)) throw std::invalid_argument("decay_fit: bad window");
  // the fit ray runs axially, so only the s-extent can pollute it
  if (x_hi > 0.8 * g.s_max)
    throw std::invalid_argument("decay_fit: window reaches into the truncation zone");

  int pi = 0, pj = 0;
  double peak = -1.0;
  for (int i = 0; i < g.n_r; ++i)
    for (int j = 0; j < g.n_s; ++j)
      if (std::abs(u.at(i, j)) > peak) {
        peak = std::abs(u.at(i, j));
        pi = i;
        pj = j;
      }
  (void)pj;
  const double r_peak = g.r[pi];

  const double floor = 10.0 * std::numeric_limits<double>::min();
  std::vector<double> lx, ly;
  for (int j = 0; j < g.n_s; ++j) {
    const double x = std::hypot(r_peak, g.s[j]);
    const double val = std::abs(u.at(pi, j));
    if (x >= x_lo && x <= x_hi && val > floor) {
      lx.push_back(std::log(x));
      ly.push_back(std::log(val));
    }
  }
  if (lx.size() < 4) throw std::invalid_argument("decay_fit: window holds no usable samples");

  const LinFit fit = least_squares(lx, ly);
  DecayFit out;
  out.nu_est = -fit.slope;
  out.x_lo = x_lo;
  out.x_hi = x_hi;
  out.r2 = fit.r2;
  out.nu_star = nu_star_for_dimension(sol.spec.potential.dim_n);
  out.n_samples = static_cast<int>(lx.size());
  return out;
}

std::pair<double, double> compare_potentials(const Potential& v_hi, const Potential& v_lo,
                                             const Nonlinearity& nl, double epsilon,
                                             const Domain& domain, const Resolution& res,
                                             const SolverConfig& cfg) {
  auto grid = CylGrid::make(res.n_r, res.n_s, domain.r_max, domain.s_max, v_hi.sym_k);
  for (int i = 0; i < grid->n_r; ++i)
    for (int j = 0; j < grid->n_s; ++j) {
      const double r = epsilon * grid->r[i], s = epsilon * grid->s[j];
      if (v_hi(r, s) < v_lo(r, s) - 1e-12 * (std::abs(v_hi(r, s)) + 1.0))
        throw std::invalid_argument("compare_potentials: potentials are not pointwise ordered");
    }

  auto solve_with = [&](const Potential& pot) {
    ProblemSpec spec;
    spec.potential = pot;
    spec.nonlinearity = nl;
    spec.epsilon = epsilon;
    spec.domain = domain;
    spec.resolution = res;
    return solve_ground_state(spec, cfg).energy.total;
  };
  const double c_hi = solve_with(v_hi);
  const double c_lo = solve_with(v_lo);
  if (c_hi < c_lo - 1e-6 * std::abs(c_lo))
    throw std::runtime_error("compare_potentials: levels violate the comparison ordering");
  return {c_hi, c_lo};
}

ContinuityTable continuity_scan(const Potential& pot, const std::vector<double>& h_list,
                                const Nonlinearity& nl, double epsilon,
                                const Domain& domain, const Resolution& res,
                                const SolverConfig& cfg) {
  for (double h : h_list)
    if (pot.v0 + h <= 0.0)
      throw std::invalid_argument("continuity_scan: shift destroys positivity of V");

  auto solve_with = [&](const Potential& p) {
    ProblemSpec spec;
    spec.potential = p;
    spec.nonlinearity = nl;
    spec.epsilon = epsilon;
    spec.domain = domain;
    spec.resolution = res;
    return solve_ground_state(spec, cfg).energy.total;
  };

  ContinuityTable table;
  table.c_base = solve_with(pot);
  for (double h : h_list) {
    ContinuityRow row;
    row.h = h;
    row.c = h == 0.0 ? table.c_base : solve_with(pot.shifted(h));
    table.rows.push_back(row);
  }

  std::vector<ContinuityRow> sorted = table.rows;
  std::sort(sorted.begin(), sorted.end(),
            [](const ContinuityRow& a, const ContinuityRow& b) {
              return std::abs(a.h) > std::abs(b.h);
            });
  for (size_t i = 0; i < sorted.size(); ++i) {
    const double diff = std::abs(sorted[i].c - table.c_base);
    if (sorted[i].h != 0.0)
      table.lipschitz_estimate = std::max(table.lipschitz_estimate, diff / std::abs(sorted[i].h));
    if (i > 0) {
      const double prev = std::abs(sorted[i - 1].c - table.c_base);
      if (diff > prev + 1e-10) table.diffs_monotone = false;
    }
    if (sorted[i].h > 0.0 && sorted[i].c < table.c_base - 1e-9) table.shifts_ordered = false;
    if (sorted[i].h < 0.0 && sorted[i].c > table.c_base + 1e-9) table.shifts_ordered = false;
  }
  return table;
}

std::pair<double, double> cutoff_gamma(double r_cut, const Solution& limiting_sol, double k) {
  if (!(k > 0.0)) throw std::invalid_argument("cutoff_gamma: k must be positive");
  const Field& w = limiting_sol.u;
  const CylGrid& g = *w.grid;
  const double diag = std::hypot(g.r_max, g.s_max);
  if (r_cut + 2.0 > std::min(g.r_max, g.s_max) && r_cut < diag)
    throw std::invalid_argument("cutoff_gamma: cutoff transition band exceeds the grid");

  Field v = w;
  for (int i = 0; i < g.n_r; ++i)
    for (int j = 0; j < g.n_s; ++j) {
      const double rho = std::hypot(g.r[i], g.s[j]);
      v.at(i, j) *= 1.0 - smoothstep(0.5 * (rho - r_cut));
    }

  EnergyFunctional func(w.grid, builtin_potential("constant", {k}),
                        limiting_sol.spec.nonlinearity, 1.0);
  const double gamma = func.energy(func.nehari_project(v)).total;
  const double phi_w = func.energy(w).total;
  return {gamma, gamma - phi_w};
}

std::vector<ConcentrationReport> concentration_scan(const std::vector<SweepEntry>& sweep,
                                                    double m_v0, double m_vinf) {
  if (sweep.empty()) throw std::invalid_argument("concentration_scan: empty sweep");
  std::vector<ConcentrationReport> reports;
  for (const SweepEntry& entry : sweep) {
    if (!entry.solution) continue;
    const Solution& sol = *entry.solution;
    const CylGrid& g = *sol.u.grid;

    // axial mass marginal
    std::vector<double> marg(static_cast<size_t>(g.n_s), 0.0);
    for (int i = 0; i < g.n_r; ++i) {
      const double wr = g.rad_w[i] * g.h_s;
      for (int j = 0; j < g.n_s; ++j) {
        const double x = sol.u.at(i, j);
        marg[j] += wr * x * x;
      }
    }
    double total = 0.0, peak = 0.0, center = 0.0;
    int peak_j = 0;
    for (int j = 0; j < g.n_s; ++j) {
      total += marg[j];
      center += marg[j] * g.s[j];
      if (marg[j] > peak) {
        peak = marg[j];
        peak_j = j;
      }
    }
    center /= total;
    double var = 0.0;
    for (int j = 0; j < g.n_s; ++j) var += marg[j] * (g.s[j] - center) * (g.s[j] - center);
    const double width = std::sqrt(var / total);

    // bump count: marginal maxima above 10% of the peak, clustered at a
    // three-width separation; the width proxy is the contiguous
    // super-threshold interval around the dominant bump (the global second
    // moment would swallow far-apart bumps)
    int lo = peak_j, hi = peak_j;
    while (lo > 0 && marg[lo - 1] >= 0.1 * peak) --lo;
    while (hi + 1 < g.n_s && marg[hi + 1] >= 0.1 * peak) ++hi;
    const double bump_width = (hi - lo + 1) * g.h_s;

    std::vector<double> maxima_s;
    for (int j = 1; j + 1 < g.n_s; ++j)
      if (marg[j] >= 0.1 * peak && marg[j] > marg[j - 1] && marg[j] >= marg[j + 1])
        maxima_s.push_back(g.s[j]);
    if (maxima_s.empty()) maxima_s.push_back(g.s[peak_j]);
    int clusters = 1;
    double last = maxima_s.front();
    for (double sv : maxima_s)
      if (sv - last >= 3.0 * bump_width) {
        ++clusters;
        last = sv;
      }

    ConcentrationReport rep;
    rep.eps = entry.eps;
    rep.peak_s = g.s[peak_j];
    rep.mass_center = center;
    rep.width = width;
    rep.c_eps = sol.energy.total;
    rep.profile_count_est = clusters;
    rep.ell_bound = m_vinf / m_v0;
    rep.bound_violated = clusters > static_cast<int>(std::ceil(rep.ell_bound));
    reports.push_back(rep);
  }
  return reports;
}

}  // namespace curlcurl
