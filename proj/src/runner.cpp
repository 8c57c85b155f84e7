#include "curlcurl/runner.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>

#include <json.hpp>

#include "curlcurl/errors.hpp"
#include "curlcurl/maxwell.hpp"

namespace curlcurl {

namespace fs = std::filesystem;
using nlohmann::json;

std::string format_g17(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

namespace {

int resolve_threads(const RunConfig& cfg) {
  if (cfg.threads > 0) return cfg.threads;
  if (const char* env = std::getenv(kThreadsEnvVar)) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return 1;
}

json solution_scalars(const Solution& sol) {
  json j;
  j["c"] = sol.energy.total;
  j["quad"] = sol.energy.quad;
  j["nl"] = sol.energy.nl;
  j["nehari"] = sol.energy.nehari;
  j["nehari_residual"] = sol.nehari_rel;
  j["grad_norm"] = sol.grad_norm;
  j["iterations"] = sol.iterations;
  j["wallclock_s"] = sol.wallclock.count();
  j["converged"] = sol.converged;
  return j;
}

json config_echo(const RunConfig& cfg) {
  json j;
  j["text"] = cfg.source_text;
  j["potential"] = {{"family", cfg.potential_family}, {"params", cfg.potential_params}};
  j["nonlinearity"] = {{"family", cfg.nonlinearity_family}, {"params", cfg.nonlinearity_params}};
  j["problem"] = {{"epsilon", cfg.epsilon},          {"r_max", cfg.domain.r_max},
                  {"s_max", cfg.domain.s_max},       {"n_r", cfg.resolution.n_r},
                  {"n_s", cfg.resolution.n_s},       {"dim_n", cfg.dim_n},
                  {"sym_k", cfg.sym_k}};
  j["solver"] = {{"grad_tol", cfg.solver.grad_tol},
                 {"max_iters", cfg.solver.max_iters},
                 {"precondition", cfg.solver.precondition},
                 {"armijo_c1", cfg.solver.line_search.c1},
                 {"armijo_shrink", cfg.solver.line_search.shrink},
                 {"armijo_max_backtracks", cfg.solver.line_search.max_backtracks},
                 {"armijo_alpha0", cfg.solver.line_search.alpha0},
                 {"seed", cfg.solver.seed},
                 {"init_center_s", cfg.solver.init_center_s},
                 {"init_width", cfg.solver.init_width},
                 {"enforce_nonneg", cfg.solver.enforce_nonneg},
                 {"cg_tol", cfg.solver.cg_tol},
                 {"cg_max_iters", cfg.solver.cg_max_iters}};
  j["experiment"] = {{"kind", to_string(cfg.kind)},   {"output_dir", cfg.output_dir},
                     {"emit_fields", cfg.emit_fields}, {"threads", cfg.threads},
                     {"warm_start", cfg.warm_start},   {"eps_list", cfg.eps_list},
                     {"limit_k", cfg.limit_k},         {"fit_lo", cfg.fit_lo},
                     {"fit_hi", cfg.fit_hi},           {"compare_family", cfg.compare_family},
                     {"compare_params", cfg.compare_params}, {"shift_list", cfg.shift_list},
                     {"cutoff_radii", cfg.cutoff_radii}, {"box_n", cfg.box_n},
                     {"box_half", cfg.box_half}};
  return j;
}

void write_summary(const fs::path& dir, json body) {
  std::ofstream out(dir / "summary.json");
  if (!out) throw std::runtime_error("cannot write summary.json under " + dir.string());
  out << body.dump(2) << '\n';
}

void write_csv(const fs::path& path, const std::string& header,
               const std::vector<std::vector<std::string>>& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write csv: " + path.string());
  out << header << '\n';
  for (const auto& row : rows) {
    for (size_t i = 0; i < row.size(); ++i) out << row[i] << (i + 1 < row.size() ? "," : "");
    out << '\n';
  }
}

SolverConfig limiting_config(const RunConfig& cfg) {
  SolverConfig sc = cfg.solver;
  sc.init_center_s = 0.0;  // limiting solves always start centered
  return sc;
}

double safe_fit_hi(const RunConfig& cfg) {
  return std::min(cfg.fit_hi, 0.8 * cfg.domain.s_max);
}

int run_solve(const RunConfig& cfg, const fs::path& dir, json& summary) {
  try {
    const Solution sol = solve_ground_state(cfg.problem(), cfg.solver);
    summary["solution"] = solution_scalars(sol);
    summary["c_eps"] = sol.energy.total;
    if (cfg.emit_fields) write_field((dir / "field.txt").string(), sol.u);
    return kExitOk;
  } catch (const SolveFailure& err) {
    summary["error"] = err.what();
    summary["solution"] = solution_scalars(err.best);
    return kExitNoConvergence;
  }
}

int run_limit(const RunConfig& cfg, const fs::path& dir, json& summary) {
  const Nonlinearity nl = builtin_nonlinearity(cfg.nonlinearity_family, cfg.nonlinearity_params);
  try {
    const Solution sol =
        solve_limiting(cfg.limit_k, cfg.domain, cfg.resolution, nl, limiting_config(cfg));
    summary["solution"] = solution_scalars(sol);
    summary["m_k"] = sol.energy.total;
    summary["k"] = cfg.limit_k;
    if (cfg.emit_fields) write_field((dir / "field.txt").string(), sol.u);
    return kExitOk;
  } catch (const SolveFailure& err) {
    summary["error"] = err.what();
    summary["solution"] = solution_scalars(err.best);
    return kExitNoConvergence;
  }
}

int run_sweep(const RunConfig& cfg, const fs::path& dir, json& summary) {
  const ProblemSpec spec = cfg.problem();
  const Nonlinearity nl = spec.nonlinearity;
  const SolverConfig lim_cfg = limiting_config(cfg);

  const double m_v0 =
      solve_limiting(spec.potential.v0, cfg.domain, cfg.resolution, nl, lim_cfg).energy.total;
  const double m_vinf =
      spec.potential.is_constant
          ? m_v0
          : solve_limiting(spec.potential.v_inf, cfg.domain, cfg.resolution, nl, lim_cfg)
                .energy.total;

  std::vector<SweepEntry> entries;
  const int threads = resolve_threads(cfg);
  if (!cfg.warm_start && threads > 1) {
    // member solves are independent without warm starts
    const size_t n = cfg.eps_list.size();
    entries.resize(n);
    auto solve_one = [&](size_t i) {
      SweepEntry entry;
      entry.eps = cfg.eps_list[i];
      ProblemSpec s = spec;
      s.epsilon = cfg.eps_list[i];
      try {
        entry.solution = solve_ground_state(s, cfg.solver);
      } catch (const SolveFailure& err) {
        entry.error = err.what();
      }
      return entry;
    };
    for (size_t start = 0; start < n; start += threads) {
      const size_t end = std::min(n, start + threads);
      std::vector<std::future<SweepEntry>> batch;
      for (size_t i = start; i < end; ++i)
        batch.push_back(std::async(std::launch::async, solve_one, i));
      for (size_t i = start; i < end; ++i) entries[i] = batch[i - start].get();
    }
  } else if (!cfg.warm_start) {
    for (double eps : cfg.eps_list) {
      SweepEntry entry;
      entry.eps = eps;
      ProblemSpec s = spec;
      s.epsilon = eps;
      try {
        entry.solution = solve_ground_state(s, cfg.solver);
      } catch (const SolveFailure& err) {
        entry.error = err.what();
      }
      entries.push_back(std::move(entry));
    }
  } else {
    entries = continuation_sweep(spec, cfg.eps_list, cfg.solver);
  }

  const auto reports = concentration_scan(entries, m_v0, m_vinf);

  std::vector<SweepRow> rows;
  json per_eps = json::array();
  size_t rep_idx = 0;
  bool any_failure = false;
  for (size_t i = 0; i < entries.size(); ++i) {
    const SweepEntry& e = entries[i];
    json je;
    je["eps"] = e.eps;
    if (!e.solution) {
      any_failure = true;
      je["error"] = e.error;
      per_eps.push_back(je);
      continue;
    }
    const ConcentrationReport& rep = reports[rep_idx++];
    double nu_est = std::nan("");
    double r2 = std::nan("");
    try {
      const DecayFit fit = decay_fit(*e.solution, cfg.fit_lo, safe_fit_hi(cfg));
      nu_est = fit.nu_est;
      r2 = fit.r2;
    } catch (const std::exception&) {
    }
    rows.push_back(SweepRow{e.eps, rep.c_eps, m_v0, m_vinf, rep.peak_s, e.eps * rep.peak_s,
                            rep.width, rep.profile_count_est, nu_est, e.solution->grad_norm,
                            e.solution->iterations});
    je["solution"] = solution_scalars(*e.solution);
    je["peak_s"] = rep.peak_s;
    je["mass_center"] = rep.mass_center;
    je["width"] = rep.width;
    je["profile_count"] = rep.profile_count_est;
    je["nu_est"] = nu_est;
    je["r2"] = r2;
    per_eps.push_back(je);
    if (cfg.emit_fields)
      write_field((dir / ("field_eps_" + std::to_string(i) + ".txt")).string(), e.solution->u);
  }

  emit_sweep_csv((dir / "sweep.csv").string(), rows);
  summary["m_V0"] = m_v0;
  summary["m_Vinf"] = m_vinf;
  summary["ell_bound"] = m_vinf / m_v0;
  summary["runs"] = per_eps;
  return any_failure ? kExitNoConvergence : kExitOk;
}

int run_decay(const RunConfig& cfg, const fs::path& dir, json& summary) {
  try {
    const Solution sol = solve_ground_state(cfg.problem(), cfg.solver);
    summary["solution"] = solution_scalars(sol);
    const DecayFit fit = decay_fit(sol, cfg.fit_lo, safe_fit_hi(cfg));
    summary["nu_est"] = fit.nu_est;
    summary["r2"] = fit.r2;
    summary["nu_star"] = fit.nu_star;
    summary["fit_window"] = {fit.x_lo, fit.x_hi};
    summary["fit_samples"] = fit.n_samples;

    // tail samples along the fit ray, for plotting
    const CylGrid& g = *sol.u.grid;
    int pi = 0;
    double peak = -1.0;
    for (int i = 0; i < g.n_r; ++i)
      for (int j = 0; j < g.n_s; ++j)
        if (std::abs(sol.u.at(i, j)) > peak) {
          peak = std::abs(sol.u.at(i, j));
          pi = i;
        }
    std::vector<std::vector<std::string>> rows;
    for (int j = 0; j < g.n_s; ++j)
      rows.push_back({format_g17(std::hypot(g.r[pi], g.s[j])), format_g17(sol.u.at(pi, j))});
    write_csv(dir / "decay.csv", "x,u", rows);
    if (cfg.emit_fields) write_field((dir / "field.txt").string(), sol.u);
    return kExitOk;
  } catch (const SolveFailure& err) {
    summary["error"] = err.what();
    summary["solution"] = solution_scalars(err.best);
    return kExitNoConvergence;
  }
}

int run_compare(const RunConfig& cfg, const fs::path& dir, json& summary) {
  const ProblemSpec spec = cfg.problem();
  try {
    const auto [c_hi, c_lo] =
        compare_potentials(spec.potential, cfg.compare_potential(), spec.nonlinearity,
                           cfg.epsilon, cfg.domain, cfg.resolution, cfg.solver);
    summary["c_hi"] = c_hi;
    summary["c_lo"] = c_lo;
    write_csv(dir / "compare.csv", "c_hi,c_lo",
              {{format_g17(c_hi), format_g17(c_lo)}});
    return kExitOk;
  } catch (const SolveFailure& err) {
    summary["error"] = err.what();
    return kExitNoConvergence;
  }
}

int run_continuity(const RunConfig& cfg, const fs::path& dir, json& summary) {
  const ProblemSpec spec = cfg.problem();
  try {
    const ContinuityTable table =
        continuity_scan(spec.potential, cfg.shift_list, spec.nonlinearity, cfg.epsilon,
                        cfg.domain, cfg.resolution, cfg.solver);
    summary["c_base"] = table.c_base;
    summary["lipschitz_estimate"] = table.lipschitz_estimate;
    summary["diffs_monotone"] = table.diffs_monotone;
    summary["shifts_ordered"] = table.shifts_ordered;
    std::vector<std::vector<std::string>> rows;
    for (const ContinuityRow& row : table.rows)
      rows.push_back({format_g17(row.h), format_g17(row.c)});
    write_csv(dir / "continuity.csv", "h,c", rows);
    return kExitOk;
  } catch (const SolveFailure& err) {
    summary["error"] = err.what();
    return kExitNoConvergence;
  }
}

int run_reconstruct(const RunConfig& cfg, const fs::path& dir, json& summary) {
  const ProblemSpec spec = cfg.problem();
  try {
    const Solution sol = solve_ground_state(spec, cfg.solver);
    summary["solution"] = solution_scalars(sol);
    const CartGrid3 box = centered_box(cfg.box_n, cfg.box_half);

    // derivative-based diagnostics use the C^2 sampling
    const VectorField3 U = reconstruct(sol.u, box, Sampling::spline);
    const double div_max = max_abs_interior(divergence(U), box, 1);
    const double residual = curlcurl_residual(U, spec.potential, spec.epsilon, spec.nonlinearity);
    const double e_curl = energy_curl(U, spec.potential, spec.epsilon, spec.nonlinearity);
    const double e_box = energy_in_box(sol.u, spec, cfg.box_half);
    summary["div_max"] = div_max;
    summary["curlcurl_residual"] = residual;
    summary["energy_curl"] = e_curl;
    summary["energy_box"] = e_box;
    summary["energy_rel_mismatch"] = std::abs(e_curl - e_box) / std::abs(e_box);
    write_csv(dir / "reconstruct.csv", "div_max,curlcurl_residual,energy_curl,energy_box",
              {{format_g17(div_max), format_g17(residual), format_g17(e_curl),
                format_g17(e_box)}});
    if (cfg.emit_fields) {
      write_vtk(reconstruct(sol.u, box, Sampling::bilinear), (dir / "U.vtk").string());
      write_field((dir / "field.txt").string(), sol.u);
    }
    return kExitOk;
  } catch (const SolveFailure& err) {
    summary["error"] = err.what();
    summary["solution"] = solution_scalars(err.best);
    return kExitNoConvergence;
  }
}

int run_cutoff(const RunConfig& cfg, const fs::path& dir, json& summary) {
  const Nonlinearity nl = builtin_nonlinearity(cfg.nonlinearity_family, cfg.nonlinearity_params);
  try {
    const Solution wsol =
        solve_limiting(cfg.limit_k, cfg.domain, cfg.resolution, nl, limiting_config(cfg));
    summary["m_k"] = wsol.energy.total;
    summary["k"] = cfg.limit_k;
    std::vector<std::vector<std::string>> rows;
    json jrows = json::array();
    for (double r_cut : cfg.cutoff_radii) {
      const auto [gamma, psi] = cutoff_gamma(r_cut, wsol, cfg.limit_k);
      rows.push_back({format_g17(r_cut), format_g17(gamma), format_g17(psi)});
      jrows.push_back({{"r_cut", r_cut}, {"gamma", gamma}, {"psi", psi}});
    }
    write_csv(dir / "cutoff.csv", "r_cut,gamma,psi", rows);
    summary["cutoff"] = jrows;
    return kExitOk;
  } catch (const SolveFailure& err) {
    summary["error"] = err.what();
    return kExitNoConvergence;
  }
}

}  // namespace

void emit_sweep_csv(const std::string& path, const std::vector<SweepRow>& rows) {
  if (rows.empty()) throw std::invalid_argument("emit_sweep_csv: no rows to write");
  std::vector<std::vector<std::string>> cells;
  for (const SweepRow& r : rows)
    cells.push_back({format_g17(r.eps), format_g17(r.c_eps), format_g17(r.m_v0),
                     format_g17(r.m_vinf), format_g17(r.peak_s),
                     format_g17(r.eps_times_peak_s), format_g17(r.width),
                     std::to_string(r.profile_count), format_g17(r.nu_est),
                     format_g17(r.grad_norm), std::to_string(r.iters)});
  write_csv(path, "eps,c_eps,m_V0,m_Vinf,peak_s,eps_times_peak_s,width,profile_count,nu_est,grad_norm,iters",
            cells);
}

int run_experiment(const RunConfig& cfg) {
  const fs::path dir(cfg.output_dir);
  fs::create_directories(dir);

  json summary;
  summary["version"] = kVersion;
  summary["experiment"] = to_string(cfg.kind);
  summary["config"] = config_echo(cfg);

  int status = kExitOk;
  try {
    switch (cfg.kind) {
      case ExperimentKind::solve: status = run_solve(cfg, dir, summary); break;
      case ExperimentKind::limit: status = run_limit(cfg, dir, summary); break;
      case ExperimentKind::sweep: status = run_sweep(cfg, dir, summary); break;
      case ExperimentKind::decay: status = run_decay(cfg, dir, summary); break;
      case ExperimentKind::compare: status = run_compare(cfg, dir, summary); break;
      case ExperimentKind::continuity: status = run_continuity(cfg, dir, summary); break;
      case ExperimentKind::reconstruct: status = run_reconstruct(cfg, dir, summary); break;
      case ExperimentKind::cutoff: status = run_cutoff(cfg, dir, summary); break;
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& err) {
    throw ConfigError(err.what());
  }
  write_summary(dir, std::move(summary));
  return status;
}

}  // namespace curlcurl
