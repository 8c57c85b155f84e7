#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "curlcurl/errors.hpp"
#include "curlcurl/functional.hpp"
#include "curlcurl/grid.hpp"
#include "curlcurl/model.hpp"

namespace curlcurl {

struct LineSearch {
  double c1 = 1e-4;        // Armijo slope fraction
  double shrink = 0.5;     // backtracking factor
  int max_backtracks = 40;
  double alpha0 = 1.0;
};

struct SolverConfig {
  double grad_tol = 1e-8;  // stop at |tangential gradient|_w <= grad_tol |u|_w
  int max_iters = 3000;
  bool precondition = true;
  LineSearch line_search;
  std::uint64_t seed = 1;  // initial-guess perturbation
  double init_center_s = 0.0;
  double init_width = 2.0;
  bool enforce_nonneg = true;  // meaningful for odd f only
  double cg_tol = 1e-8;
  int cg_max_iters = 20000;
};

struct Solution {
  Field u;
  EnergyBreakdown energy;
  double grad_norm = 0.0;  // weighted norm of the tangential gradient at exit
  int iterations = 0;
  ProblemSpec spec;
  std::chrono::duration<double> wallclock{0.0};
  bool converged = false;
  double nehari_rel = 0.0;
  std::vector<double> energy_history;  // J at every accepted iterate
};

/// Thrown when the descent exhausts its budget; carries the best iterate.
struct SolveFailure : ConvergenceError {
  Solution best;
  SolveFailure(const std::string& what, Solution b)
      : ConvergenceError(what, b.grad_norm, b.iterations), best(std::move(b)) {}
};

/// Axis-vanishing Gaussian bump r exp(-(r^2 + (s - center)^2)/width^2).
Field initial_guess(const ProblemSpec& spec, double center_s, double width);

/// Minimizes J over the Nehari manifold by preconditioned descent with
/// reprojection. Throws ConvergenceError (carrying the best iterate's data)
/// when max_iters is exceeded.
Solution solve_ground_state(const ProblemSpec& spec, const SolverConfig& cfg);
Solution solve_ground_state(const ProblemSpec& spec, const SolverConfig& cfg,
                            const Field& start);

/// Ground state of the constant-potential limiting problem; the returned
/// energy total is the m_k estimate on this grid.
Solution solve_limiting(double k, const Domain& domain, const Resolution& res,
                        const Nonlinearity& nl, const SolverConfig& cfg);

struct SweepEntry {
  double eps = 0.0;
  std::optional<Solution> solution;
  std::string error;  // empty on success
};

/// Solves along a descending epsilon list, warm-starting each run from the
/// previous solution reprojected. Per-epsilon failures are recorded and the
/// sweep continues.
std::vector<SweepEntry> continuation_sweep(const ProblemSpec& spec_template,
                                           const std::vector<double>& eps_list,
                                           const SolverConfig& cfg);

}  // namespace curlcurl
