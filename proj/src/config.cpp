#include "curlcurl/config.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "curlcurl/errors.hpp"

namespace curlcurl {

std::string to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::solve: return "solve";
    case ExperimentKind::limit: return "limit";
    case ExperimentKind::sweep: return "sweep";
    case ExperimentKind::decay: return "decay";
    case ExperimentKind::compare: return "compare";
    case ExperimentKind::continuity: return "continuity";
    case ExperimentKind::reconstruct: return "reconstruct";
    case ExperimentKind::cutoff: return "cutoff";
  }
  return "solve";
}

ExperimentKind experiment_from_string(const std::string& name) {
  static const std::map<std::string, ExperimentKind> lookup = {
      {"solve", ExperimentKind::solve},       {"limit", ExperimentKind::limit},
      {"sweep", ExperimentKind::sweep},       {"decay", ExperimentKind::decay},
      {"compare", ExperimentKind::compare},   {"continuity", ExperimentKind::continuity},
      {"reconstruct", ExperimentKind::reconstruct}, {"cutoff", ExperimentKind::cutoff}};
  auto it = lookup.find(name);
  if (it == lookup.end()) throw ConfigError("unknown experiment kind: " + name);
  return it->second;
}

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::string strip_comment(const std::string& line) {
  bool quoted = false;
  for (size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') quoted = !quoted;
    if (line[i] == '#' && !quoted) return line.substr(0, i);
  }
  return line;
}

struct RawValue {
  std::string text;
  int line = 0;
};

/// section -> key -> value, with duplicate keys rejected
using RawConfig = std::map<std::string, std::map<std::string, RawValue>>;

RawConfig tokenize(const std::string& text) {
  RawConfig raw;
  std::istringstream in(text);
  std::string line, section;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(strip_comment(line));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("line " + std::to_string(line_no) + ": malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty())
        throw ConfigError("line " + std::to_string(line_no) + ": empty section name");
      raw[section];
      continue;
    }
    const size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    if (section.empty())
      throw ConfigError("line " + std::to_string(line_no) + ": key outside any section");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ConfigError("line " + std::to_string(line_no) + ": empty key or value");
    auto [it, inserted] = raw[section].emplace(key, RawValue{value, line_no});
    if (!inserted)
      throw ConfigError("line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
  }
  return raw;
}

/// Typed view over one section that tracks which keys were consumed, so
/// anything left over can be reported by name.
class Section {
 public:
  Section(const RawConfig& raw, const std::string& name) : name_(name) {
    auto it = raw.find(name);
    if (it != raw.end()) entries_ = &it->second;
  }

  bool has(const std::string& key) const {
    return entries_ && entries_->count(key) > 0;
  }

  std::string get_string(const std::string& key, const std::string& fallback) {
    const RawValue* v = take(key);
    if (!v) return fallback;
    std::string s = v->text;
    if (s.size() < 2 || s.front() != '"' || s.back() != '"')
      throw ConfigError(context(key) + ": expected a quoted string");
    return s.substr(1, s.size() - 2);
  }

  double get_double(const std::string& key, double fallback) {
    const RawValue* v = take(key);
    if (!v) return fallback;
    return parse_double(v->text, key);
  }

  int get_int(const std::string& key, int fallback) {
    const RawValue* v = take(key);
    if (!v) return fallback;
    const double d = parse_double(v->text, key);
    const int i = static_cast<int>(d);
    if (static_cast<double>(i) != d)
      throw ConfigError(context(key) + ": expected an integer");
    return i;
  }

  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) {
    const RawValue* v = take(key);
    if (!v) return fallback;
    char* end = nullptr;
    const unsigned long long val = std::strtoull(v->text.c_str(), &end, 10);
    if (end == v->text.c_str() || *end != '\0')
      throw ConfigError(context(key) + ": expected an unsigned integer");
    return val;
  }

  bool get_bool(const std::string& key, bool fallback) {
    const RawValue* v = take(key);
    if (!v) return fallback;
    if (v->text == "true") return true;
    if (v->text == "false") return false;
    throw ConfigError(context(key) + ": expected true or false");
  }

  std::vector<double> get_list(const std::string& key, std::vector<double> fallback) {
    const RawValue* v = take(key);
    if (!v) return fallback;
    std::string s = v->text;
    if (s.size() < 2 || s.front() != '[' || s.back() != ']')
      throw ConfigError(context(key) + ": expected a bracketed list");
    s = s.substr(1, s.size() - 2);
    std::vector<double> out;
    std::string item;
    std::istringstream parts(s);
    while (std::getline(parts, item, ',')) {
      item = trim(item);
      if (item.empty()) continue;
      out.push_back(parse_double(item, key));
    }
    return out;
  }

  void finish() const {
    if (!entries_) return;
    for (const auto& [key, value] : *entries_)
      if (!consumed_.count(key))
        throw ConfigError("line " + std::to_string(value.line) + ": unknown key '" + key +
                          "' in section [" + name_ + "]");
  }

 private:
  const RawValue* take(const std::string& key) {
    if (!entries_) return nullptr;
    auto it = entries_->find(key);
    if (it == entries_->end()) return nullptr;
    consumed_.insert(key);
    return &it->second;
  }

  double parse_double(const std::string& text, const std::string& key) const {
    char* end = nullptr;
    const double d = std::strtod(text.c_str(), &end);
    if (end == text.c_str() || *end != '\0')
      throw ConfigError(context(key) + ": expected a number, got '" + text + "'");
    return d;
  }

  std::string context(const std::string& key) const {
    return "key '" + key + "' in section [" + name_ + "]";
  }

  std::string name_;
  const std::map<std::string, RawValue>* entries_ = nullptr;
  std::set<std::string> consumed_;
};

}  // namespace

ProblemSpec RunConfig::problem() const {
  ProblemSpec spec;
  spec.potential = builtin_potential(potential_family, potential_params);
  spec.potential.dim_n = dim_n;
  spec.potential.sym_k = sym_k;
  spec.nonlinearity = builtin_nonlinearity(nonlinearity_family, nonlinearity_params);
  spec.epsilon = epsilon;
  spec.domain = domain;
  spec.resolution = resolution;
  spec.validate();
  return spec;
}

Potential RunConfig::compare_potential() const {
  Potential pot = builtin_potential(compare_family, compare_params);
  pot.dim_n = dim_n;
  pot.sym_k = sym_k;
  return pot;
}

RunConfig parse_config_text(const std::string& text) {
  const RawConfig raw = tokenize(text);
  static const std::set<std::string> known_sections = {"potential", "nonlinearity", "problem",
                                                       "solver", "experiment"};
  for (const auto& [section, _] : raw)
    if (!known_sections.count(section))
      throw ConfigError("unknown section [" + section + "]");

  RunConfig cfg;
  cfg.source_text = text;

  Section pot(raw, "potential");
  cfg.potential_family = pot.get_string("family", cfg.potential_family);
  cfg.potential_params = pot.get_list("params", cfg.potential_params);
  pot.finish();

  Section nl(raw, "nonlinearity");
  cfg.nonlinearity_family = nl.get_string("family", cfg.nonlinearity_family);
  cfg.nonlinearity_params = nl.get_list("params", cfg.nonlinearity_params);
  nl.finish();

  Section prob(raw, "problem");
  cfg.epsilon = prob.get_double("epsilon", cfg.epsilon);
  cfg.domain.r_max = prob.get_double("r_max", cfg.domain.r_max);
  cfg.domain.s_max = prob.get_double("s_max", cfg.domain.s_max);
  cfg.resolution.n_r = prob.get_int("n_r", cfg.resolution.n_r);
  cfg.resolution.n_s = prob.get_int("n_s", cfg.resolution.n_s);
  cfg.dim_n = prob.get_int("dim_n", cfg.dim_n);
  cfg.sym_k = prob.get_int("sym_k", cfg.sym_k);
  prob.finish();

  Section sol(raw, "solver");
  cfg.solver.grad_tol = sol.get_double("grad_tol", cfg.solver.grad_tol);
  cfg.solver.max_iters = sol.get_int("max_iters", cfg.solver.max_iters);
  cfg.solver.precondition = sol.get_bool("precondition", cfg.solver.precondition);
  cfg.solver.line_search.c1 = sol.get_double("armijo_c1", cfg.solver.line_search.c1);
  cfg.solver.line_search.shrink = sol.get_double("armijo_shrink", cfg.solver.line_search.shrink);
  cfg.solver.line_search.max_backtracks =
      sol.get_int("armijo_max_backtracks", cfg.solver.line_search.max_backtracks);
  cfg.solver.line_search.alpha0 = sol.get_double("armijo_alpha0", cfg.solver.line_search.alpha0);
  cfg.solver.seed = sol.get_u64("seed", cfg.solver.seed);
  cfg.solver.init_center_s = sol.get_double("init_center_s", cfg.solver.init_center_s);
  cfg.solver.init_width = sol.get_double("init_width", cfg.solver.init_width);
  cfg.solver.enforce_nonneg = sol.get_bool("enforce_nonneg", cfg.solver.enforce_nonneg);
  cfg.solver.cg_tol = sol.get_double("cg_tol", cfg.solver.cg_tol);
  cfg.solver.cg_max_iters = sol.get_int("cg_max_iters", cfg.solver.cg_max_iters);
  sol.finish();

  Section exp(raw, "experiment");
  cfg.kind_explicit = exp.has("kind");
  cfg.kind = experiment_from_string(exp.get_string("kind", to_string(cfg.kind)));
  cfg.output_dir = exp.get_string("output_dir", cfg.output_dir);
  cfg.emit_fields = exp.get_bool("emit_fields", cfg.emit_fields);
  cfg.threads = exp.get_int("threads", cfg.threads);
  cfg.warm_start = exp.get_bool("warm_start", cfg.warm_start);
  cfg.eps_list = exp.get_list("eps_list", cfg.eps_list);
  cfg.limit_k = exp.get_double("limit_k", cfg.limit_k);
  cfg.fit_lo = exp.get_double("fit_lo", cfg.fit_lo);
  cfg.fit_hi = exp.get_double("fit_hi", cfg.fit_hi);
  cfg.compare_family = exp.get_string("compare_family", cfg.compare_family);
  cfg.compare_params = exp.get_list("compare_params", cfg.compare_params);
  cfg.shift_list = exp.get_list("shift_list", cfg.shift_list);
  cfg.cutoff_radii = exp.get_list("cutoff_radii", cfg.cutoff_radii);
  cfg.box_n = exp.get_int("box_n", cfg.box_n);
  cfg.box_half = exp.get_double("box_half", cfg.box_half);
  exp.finish();

  return cfg;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

}  // namespace curlcurl
