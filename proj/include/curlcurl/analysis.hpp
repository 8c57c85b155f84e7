#pragma once

#include <utility>
#include <vector>

#include "curlcurl/model.hpp"
#include "curlcurl/solver.hpp"

namespace curlcurl {

/// Power-law fit of the far-field tail along the axial ray through the peak.
struct DecayFit {
  double nu_est = 0.0;   // minus the log-log slope
  double x_lo = 0.0;
  double x_hi = 0.0;
  double r2 = 0.0;       // goodness of the power-law fit
  double nu_star = 0.0;  // (N - 2 + sqrt((N-2)^2 + 4)) / 2
  int n_samples = 0;
};

/// (N - 2 + sqrt((N-2)^2 + 4)) / 2; the decay-exponent threshold.
double nu_star_for_dimension(int dim_n);

/// Least-squares slope of log u against log |x| along s -> (r_peak, s),
/// restricted to samples with |x| in [x_lo, x_hi] and u above the floor.
/// The ray runs axially, so x_hi is capped at 0.8 s_max.
DecayFit decay_fit(const Solution& sol, double x_lo, double x_hi);

/// Two ground-state solves under pointwise-ordered potentials; returns
/// (c_hi, c_lo). Throws if the ordering fails on the grid.
std::pair<double, double> compare_potentials(const Potential& v_hi, const Potential& v_lo,
                                             const Nonlinearity& nl, double epsilon,
                                             const Domain& domain, const Resolution& res,
                                             const SolverConfig& cfg);

struct ContinuityRow {
  double h = 0.0;
  double c = 0.0;
};

struct ContinuityTable {
  double c_base = 0.0;
  std::vector<ContinuityRow> rows;
  double lipschitz_estimate = 0.0;  // max over the scan of |c(V+h)-c(V)|/|h|
  bool diffs_monotone = true;       // |c(V+h)-c(V)| shrinks with |h|
  bool shifts_ordered = true;       // sign of c(V+h)-c(V) matches sign of h
};

/// Ground-state level under shifted potentials V + h, h in h_list.
ContinuityTable continuity_scan(const Potential& pot, const std::vector<double>& h_list,
                                const Nonlinearity& nl, double epsilon,
                                const Domain& domain, const Resolution& res,
                                const SolverConfig& cfg);

/// gamma_R = Phi_k at the fibering projection of the radially cut-off ground
/// state, psi_R = gamma_R - Phi_k(w). Cutoff is 1 on [0, R], 0 from R + 2,
/// cubic smoothstep in between.
std::pair<double, double> cutoff_gamma(double r_cut, const Solution& limiting_sol, double k);

struct ConcentrationReport {
  double eps = 0.0;
  double peak_s = 0.0;       // argmax of the axial mass marginal
  double mass_center = 0.0;
  double width = 0.0;        // second central moment of the marginal
  double c_eps = 0.0;
  int profile_count_est = 0;
  double ell_bound = 0.0;    // m_{V_inf} / m_{V_0}
  bool bound_violated = false;
};

/// Per-epsilon concentration diagnostics over a sweep. Bumps are counted as
/// marginal maxima above 10% of the global maximum separated by at least
/// three widths.
std::vector<ConcentrationReport> concentration_scan(const std::vector<SweepEntry>& sweep,
                                                    double m_v0, double m_vinf);

}  // namespace curlcurl
