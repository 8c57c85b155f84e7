#pragma once

#include <cstdint>

#include "curlcurl/grid.hpp"
#include "curlcurl/model.hpp"

namespace testutil {

inline std::uint64_t splitmix(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline double uniform(std::uint64_t& state) {  // [0, 1)
  return (splitmix(state) >> 11) * 0x1.0p-53;
}

inline double uniform_pm(std::uint64_t& state) {  // [-1, 1)
  return 2.0 * uniform(state) - 1.0;
}

inline curlcurl::Field random_field(std::shared_ptr<const curlcurl::CylGrid> grid,
                                    std::uint64_t seed, double amplitude = 1.0) {
  curlcurl::Field u(std::move(grid));
  std::uint64_t state = seed;
  for (double& x : u.v) x = amplitude * uniform_pm(state);
  return u;
}

/// Random smooth-ish bump: a Gaussian envelope with jittered center and a
/// random low-frequency modulation; nonzero by construction.
inline curlcurl::Field random_bump(std::shared_ptr<const curlcurl::CylGrid> grid,
                                   std::uint64_t seed) {
  curlcurl::Field u(std::move(grid));
  const curlcurl::CylGrid& g = *u.grid;
  std::uint64_t state = seed;
  const double c = 0.3 * g.s_max * uniform_pm(state);
  const double w = 0.5 + uniform(state);
  const double a = 0.2 * uniform_pm(state);
  const double b = 0.2 * uniform_pm(state);
  for (int i = 0; i < g.n_r; ++i)
    for (int j = 0; j < g.n_s; ++j) {
      const double r = g.r[i], s = g.s[j];
      const double env = r * std::exp(-(r * r + (s - c) * (s - c)) / (w * w));
      u.at(i, j) = env * (1.0 + a * std::sin(r) + b * std::cos(s));
    }
  return u;
}

inline curlcurl::ProblemSpec make_spec(const curlcurl::Potential& pot,
                                       const curlcurl::Nonlinearity& nl, double epsilon,
                                       double r_max, double s_max, int n_r, int n_s) {
  curlcurl::ProblemSpec spec;
  spec.potential = pot;
  spec.nonlinearity = nl;
  spec.epsilon = epsilon;
  spec.domain = {r_max, s_max};
  spec.resolution = {n_r, n_s};
  return spec;
}

inline curlcurl::ProblemSpec kerr_unit_spec(double r_max = 8.0, double s_max = 8.0,
                                            int n_r = 64, int n_s = 64) {
  return make_spec(curlcurl::builtin_potential("constant", {1.0}),
                   curlcurl::builtin_nonlinearity("kerr", {1.0}), 1.0, r_max, s_max, n_r, n_s);
}

}  // namespace testutil
