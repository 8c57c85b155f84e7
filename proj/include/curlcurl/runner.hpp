#pragma once

#include <string>

#include "curlcurl/analysis.hpp"
#include "curlcurl/config.hpp"

namespace curlcurl {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kThreadsEnvVar = "CURLCURL_THREADS";

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 1;
inline constexpr int kExitNoConvergence = 2;

/// Executes the configured experiment, writing summary.json and the
/// experiment CSVs under cfg.output_dir. Returns a process exit status.
int run_experiment(const RunConfig& cfg);

/// Row of the sweep CSV; columns are fixed by the file contract.
struct SweepRow {
  double eps, c_eps, m_v0, m_vinf, peak_s, eps_times_peak_s, width;
  int profile_count;
  double nu_est, grad_norm;
  int iters;
};

void emit_sweep_csv(const std::string& path, const std::vector<SweepRow>& rows);

/// 17-significant-digit formatting used for every floating CSV/JSON value.
std::string format_g17(double value);

}  // namespace curlcurl
