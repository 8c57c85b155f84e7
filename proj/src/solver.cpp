#include "curlcurl/solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace curlcurl {

namespace {

// splitmix64; keeps seeded runs bit-stable across standard libraries
std::uint64_t next_u64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double unit_symmetric(std::uint64_t& state) {
  return 2.0 * (next_u64(state) >> 11) * 0x1.0p-53 - 1.0;
}

struct DescentResult {
  Field u;
  EnergyBreakdown e;
  double grad_abs = 0.0;
  double u_norm = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<double> energy_history;
};

DescentResult run_descent(const EnergyFunctional& func, const SolverConfig& cfg, Field u) {
  const bool flip_allowed = func.nonlinearity().odd && cfg.enforce_nonneg;
  DescentResult res;
  u = func.nehari_project(u);
  EnergyBreakdown e = func.energy(u);
  res.energy_history.push_back(e.total);

  Field g, gt, dir, cg_guess;
  bool have_cg_guess = false;

  auto tangential = [&](const Field& grad, const Field& at) {
    const double gu = inner_weighted(grad, at);
    const double uu = inner_weighted(at, at);
    Field t = grad;
    const double c = gu / uu;
    for (size_t n = 0; n < t.v.size(); ++n) t.v[n] -= c * at.v[n];
    return t;
  };

  int it = 0;
  for (; it < cfg.max_iters; ++it) {
    g = func.gradient(u);
    gt = tangential(g, u);
    const double grad_abs = norm_weighted(gt);
    const double u_norm = norm_weighted(u);
    res.grad_abs = grad_abs;
    res.u_norm = u_norm;
    if (grad_abs <= cfg.grad_tol * u_norm) {
      res.converged = true;
      break;
    }

    // descent direction; the inverse-operator (Sobolev) direction unless
    // preconditioning is off or the CG result loses the descent property
    double slope;
    if (cfg.precondition) {
      const double cg_tol = std::clamp(0.1 * grad_abs / u_norm, cfg.cg_tol, 1e-4);
      dir = func.op().solve(gt, cg_tol, cfg.cg_max_iters,
                            have_cg_guess ? &cg_guess : nullptr);
      cg_guess = dir;
      have_cg_guess = true;
      for (double& x : dir.v) x = -x;
      slope = inner_weighted(g, dir);
      if (!(slope < 0.0)) {
        dir = gt;
        for (double& x : dir.v) x = -x;
        slope = -grad_abs * grad_abs;
      }
    } else {
      dir = gt;
      for (double& x : dir.v) x = -x;
      slope = -grad_abs * grad_abs;
    }

    // Armijo backtracking on the reprojected iterate; the absolute 1e-12
    // slack keeps progress possible once energy differences sit below
    // floating-point noise
    double alpha = cfg.line_search.alpha0;
    bool accepted = false;
    Field trial(u.grid);
    for (int bt = 0; bt < cfg.line_search.max_backtracks; ++bt) {
      for (size_t n = 0; n < u.v.size(); ++n) trial.v[n] = u.v[n] + alpha * dir.v[n];
      try {
        Field proj = func.nehari_project(trial);
        EnergyBreakdown pe = func.energy(proj);
        if (pe.total <= e.total + 1e-12 + cfg.line_search.c1 * alpha * slope) {
          u = std::move(proj);
          e = pe;
          res.energy_history.push_back(e.total);
          accepted = true;
          break;
        }
      } catch (const DegenerateInputError&) {
        // trial collapsed towards zero; shorten the step
      } catch (const std::domain_error&) {
      }
      alpha *= cfg.line_search.shrink;
    }
    if (!accepted) break;  // stalled at the floating-point floor

    if (flip_allowed) {
      const CylGrid& grid = *u.grid;
      double pos = 0.0, neg = 0.0;
      for (int i = 0; i < grid.n_r; ++i) {
        const double wr = grid.rad_w[i] * grid.h_s;
        for (int j = 0; j < grid.n_s; ++j) {
          const double x = u.at(i, j);
          if (x >= 0.0)
            pos += wr * x * x;
          else
            neg += wr * x * x;
        }
      }
      if (neg > pos)
        for (double& x : u.v) x = -x;
    }
  }

  res.u = std::move(u);
  res.e = e;
  res.iterations = it;
  if (!res.converged) {
    // re-measure at the exit iterate
    g = func.gradient(res.u);
    gt = tangential(g, res.u);
    res.grad_abs = norm_weighted(gt);
    res.u_norm = norm_weighted(res.u);
    res.converged = res.grad_abs <= cfg.grad_tol * res.u_norm;
  }
  return res;
}

Solution finalize(const EnergyFunctional& func, const SolverConfig& cfg,
                  const ProblemSpec& spec, DescentResult res,
                  std::chrono::steady_clock::time_point t0, int extra_iters) {
  const bool odd = func.nonlinearity().odd;

  if (odd && cfg.enforce_nonneg) {
    double max_abs = 0.0, min_v = 0.0;
    for (double x : res.u.v) {
      max_abs = std::max(max_abs, std::abs(x));
      min_v = std::min(min_v, x);
    }
    // round-off level undershoots: clamp and reproject
    if (min_v < 0.0 && min_v >= -1e-8 * max_abs) {
      for (double& x : res.u.v) x = std::max(x, 0.0);
      res.u = func.nehari_project(res.u);
      res.e = func.energy(res.u);
      Field g = func.gradient(res.u);
      const double gu = inner_weighted(g, res.u);
      const double uu = inner_weighted(res.u, res.u);
      for (size_t n = 0; n < g.v.size(); ++n) g.v[n] -= (gu / uu) * res.u.v[n];
      res.grad_abs = norm_weighted(g);
      res.u_norm = std::sqrt(uu);
    }
  }

  Solution sol;
  sol.u = std::move(res.u);
  sol.energy = res.e;
  sol.grad_norm = res.grad_abs;
  sol.iterations = res.iterations + extra_iters;
  sol.spec = spec;
  sol.converged = res.converged;
  sol.nehari_rel = nehari_residual_rel(res.e);
  sol.energy_history = std::move(res.energy_history);
  sol.wallclock = std::chrono::steady_clock::now() - t0;
  if (!sol.converged) {
    throw SolveFailure("ground-state descent did not reach grad_tol within max_iters", sol);
  }
  return sol;
}

}  // namespace

Field initial_guess(const ProblemSpec& spec, double center_s, double width) {
  if (!(width > 0.0)) throw std::invalid_argument("initial_guess: width must be positive");
  Field u(make_grid(spec));
  const CylGrid& g = *u.grid;
  for (int i = 0; i < g.n_r; ++i) {
    const double r = g.r[i];
    for (int j = 0; j < g.n_s; ++j) {
      const double ds = g.s[j] - center_s;
      u.at(i, j) = r * std::exp(-(r * r + ds * ds) / (width * width));
    }
  }
  return u;
}

Solution solve_ground_state(const ProblemSpec& spec, const SolverConfig& cfg) {
  Field u0 = initial_guess(spec, cfg.init_center_s, cfg.init_width);
  std::uint64_t state = cfg.seed;
  for (double& x : u0.v) x *= 1.0 + 0.01 * unit_symmetric(state);
  return solve_ground_state(spec, cfg, u0);
}

Solution solve_ground_state(const ProblemSpec& spec, const SolverConfig& cfg,
                            const Field& start) {
  spec.validate();
  const auto t0 = std::chrono::steady_clock::now();
  auto grid = make_grid(spec);
  if (!start.grid || !start.grid->same_as(*grid))
    throw std::invalid_argument("solve_ground_state: start field grid mismatch");
  EnergyFunctional func(start.grid, spec.potential, spec.nonlinearity, spec.epsilon);

  DescentResult res = run_descent(func, cfg, start);

  // mixed-sign exit: restart once from the reprojected absolute value
  if (spec.nonlinearity.odd && cfg.enforce_nonneg) {
    double max_abs = 0.0, min_v = 0.0;
    for (double x : res.u.v) {
      max_abs = std::max(max_abs, std::abs(x));
      min_v = std::min(min_v, x);
    }
    if (min_v < -1e-8 * max_abs) {
      Field abs_u = res.u;
      for (double& x : abs_u.v) x = std::abs(x);
      const int first_iters = res.iterations;
      res = run_descent(func, cfg, abs_u);
      return finalize(func, cfg, spec, std::move(res), t0, first_iters);
    }
  }
  return finalize(func, cfg, spec, std::move(res), t0, 0);
}

Solution solve_limiting(double k, const Domain& domain, const Resolution& res,
                        const Nonlinearity& nl, const SolverConfig& cfg) {
  if (!(k > 0.0)) throw std::invalid_argument("solve_limiting: k must be positive");
  ProblemSpec spec;
  spec.potential = builtin_potential("constant", {k});
  spec.nonlinearity = nl;
  spec.epsilon = 1.0;
  spec.domain = domain;
  spec.resolution = res;
  return solve_ground_state(spec, cfg);
}

std::vector<SweepEntry> continuation_sweep(const ProblemSpec& spec_template,
                                           const std::vector<double>& eps_list,
                                           const SolverConfig& cfg) {
  if (eps_list.empty()) throw std::invalid_argument("continuation_sweep: empty epsilon list");
  for (size_t i = 0; i < eps_list.size(); ++i) {
    if (!(eps_list[i] > 0.0))
      throw std::invalid_argument("continuation_sweep: epsilons must be positive");
    if (i > 0 && !(eps_list[i] < eps_list[i - 1]))
      throw std::invalid_argument("continuation_sweep: epsilon list must be descending");
  }

  std::vector<SweepEntry> out;
  const Field* warm = nullptr;
  for (double eps : eps_list) {
    ProblemSpec spec = spec_template;
    spec.epsilon = eps;
    SweepEntry entry;
    entry.eps = eps;
    try {
      entry.solution = warm ? solve_ground_state(spec, cfg, *warm)
                            : solve_ground_state(spec, cfg);
    } catch (const SolveFailure& err) {
      entry.error = err.what();
    } catch (const std::exception& err) {
      entry.error = err.what();
    }
    out.push_back(std::move(entry));
    if (out.back().solution) warm = &out.back().solution->u;
  }
  return out;
}

}  // namespace curlcurl
