#pragma once

#include <optional>
#include <string>
#include <vector>

#include "curlcurl/model.hpp"
#include "curlcurl/solver.hpp"

namespace curlcurl {

enum class ExperimentKind { solve, limit, sweep, decay, compare, continuity, reconstruct, cutoff };

std::string to_string(ExperimentKind kind);
ExperimentKind experiment_from_string(const std::string& name);

/// Parsed run configuration. The file format is sectioned key-value text
/// with quoted strings and bracketed lists; unknown sections or keys are
/// rejected so a misspelled tolerance cannot silently default.
struct RunConfig {
  std::string potential_family = "constant";
  std::vector<double> potential_params{1.0};
  std::string nonlinearity_family = "kerr";
  std::vector<double> nonlinearity_params{1.0};

  double epsilon = 1.0;
  Domain domain;
  Resolution resolution;
  int dim_n = 3;
  int sym_k = 2;

  SolverConfig solver;

  ExperimentKind kind = ExperimentKind::solve;
  bool kind_explicit = false;  // the config file named its experiment
  std::string output_dir = "out";
  bool emit_fields = false;
  int threads = 0;  // 0: fall back to the environment default
  bool warm_start = true;

  // experiment-specific knobs
  std::vector<double> eps_list{0.5, 0.25, 0.125};
  double limit_k = 1.0;
  double fit_lo = 8.0;
  double fit_hi = 20.0;
  std::string compare_family = "constant";
  std::vector<double> compare_params{1.0};
  std::vector<double> shift_list{0.2, 0.1, 0.05};
  std::vector<double> cutoff_radii{6.0, 10.0, 14.0};
  int box_n = 64;
  double box_half = 8.0;

  std::string source_text;  // verbatim config file contents

  ProblemSpec problem() const;
  Potential compare_potential() const;
};

RunConfig parse_config_text(const std::string& text);
RunConfig parse_config_file(const std::string& path);

}  // namespace curlcurl
