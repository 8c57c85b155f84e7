#pragma once

#include <memory>
#include <string>
#include <vector>

#include "curlcurl/model.hpp"

namespace curlcurl {

/// Cell-centered tensor grid on (0, r_max] x [-s_max, s_max] carrying the
/// reduced measure omega_{K-1} r^{K-1} dr ds. Radial cell weights are exact
/// cell volumes (r_{i+1}^K - r_i^K)/K over the faces, which coincides with
/// r_center^{K-1} h_r for K = 2.
struct CylGrid {
  int n_r = 0;
  int n_s = 0;
  double r_max = 0.0;
  double s_max = 0.0;
  int sym_k = 2;

  double h_r = 0.0;
  double h_s = 0.0;
  std::vector<double> r;         // cell centers, (i + 1/2) h_r
  std::vector<double> s;         // cell centers, -s_max + (j + 1/2) h_s
  std::vector<double> rad_w;     // omega_{K-1} * radial cell volume, per i
  std::vector<double> face_w;    // omega_{K-1} * r_face^{K-1}, per face i = 0..n_r
  double measure_unit = 0.0;     // omega_{K-1}

  static std::shared_ptr<const CylGrid> make(int n_r, int n_s, double r_max,
                                             double s_max, int sym_k = 2);

  double weight(int i, int j) const { return rad_w[static_cast<size_t>(i)] * h_s; (void)j; }
  double total_measure() const;
  bool same_as(const CylGrid& other) const;
  int cells() const { return n_r * n_s; }
};

/// surface measure of the unit (K-1)-sphere in R^K; omega_1 = 2*pi
double sphere_surface_measure(int k);

/// Scalar field on a CylGrid, row-major with the radial index outer.
/// Values outside the rectangle (and on the axis r = 0) are treated as zero.
struct Field {
  std::shared_ptr<const CylGrid> grid;
  std::vector<double> v;

  Field() = default;
  explicit Field(std::shared_ptr<const CylGrid> g)
      : grid(std::move(g)), v(static_cast<size_t>(grid->cells()), 0.0) {}

  double& at(int i, int j) { return v[static_cast<size_t>(i) * grid->n_s + j]; }
  double at(int i, int j) const { return v[static_cast<size_t>(i) * grid->n_s + j]; }
  bool finite() const;
};

/// Quadrature inner product sum_ij w_ij a_ij b_ij. Fixed summation order.
double inner_weighted(const Field& a, const Field& b);
double norm_weighted(const Field& a);

/// The operator A = -Lap_h + 1/r^2 + V(eps r, eps s) with the flux-form
/// cylindrical Laplacian; symmetric positive definite in inner_weighted.
class SchrodingerOp {
 public:
  SchrodingerOp(std::shared_ptr<const CylGrid> grid, const Potential& pot, double epsilon);

  void apply(const Field& u, Field& out) const;
  Field apply(const Field& u) const;
  /// <A u, u> in the weighted inner product.
  double quad_form(const Field& u) const;

  const CylGrid& grid() const { return *grid_; }
  std::shared_ptr<const CylGrid> grid_ptr() const { return grid_; }

  /// Conjugate gradients; stops at |A x - rhs|_w <= tol |rhs|_w.
  /// Throws ConvergenceError after max_iters without convergence.
  Field solve(const Field& rhs, double tol, int max_iters = 0,
              const Field* initial = nullptr) const;

 private:
  std::shared_ptr<const CylGrid> grid_;
  std::vector<double> coef_;  // 1/r^2 + V(eps r, eps s) per cell
};

Field apply_schrodinger_op(const Field& u, const Potential& pot, double epsilon);
Field solve_linear(const Potential& pot, double epsilon, const Field& rhs, double tol);

std::shared_ptr<const CylGrid> make_grid(const ProblemSpec& spec);

/// Plain-text field dump: header "n_r n_s r_max s_max K", then row-major
/// values (radial index outer), 17 significant digits.
void write_field(const std::string& path, const Field& u);
Field read_field(const std::string& path);

}  // namespace curlcurl
