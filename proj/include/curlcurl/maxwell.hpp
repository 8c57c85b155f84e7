#pragma once

#include <functional>
#include <string>
#include <vector>

#include "curlcurl/grid.hpp"
#include "curlcurl/model.hpp"

namespace curlcurl {

/// Node-centered cartesian box: node(i) = origin + (i + 1/2) h per axis.
/// Centered boxes keep every node strictly off the x3-axis.
struct CartGrid3 {
  int nx = 0, ny = 0, nz = 0;
  double h = 0.0;
  double x0 = 0.0, y0 = 0.0, z0 = 0.0;  // corner of the box

  double x(int i) const { return x0 + (i + 0.5) * h; }
  double y(int j) const { return y0 + (j + 0.5) * h; }
  double z(int k) const { return z0 + (k + 0.5) * h; }
  long long nodes() const { return 1LL * nx * ny * nz; }
  long long idx(int i, int j, int k) const { return (1LL * i * ny + j) * nz + k; }
};

/// Cube [-half, half]^3 with n nodes per axis.
CartGrid3 centered_box(int n, double half);

struct VectorField3 {
  CartGrid3 grid;
  std::vector<double> u1, u2, u3;

  explicit VectorField3(const CartGrid3& g)
      : grid(g),
        u1(static_cast<size_t>(g.nodes()), 0.0),
        u2(static_cast<size_t>(g.nodes()), 0.0),
        u3(static_cast<size_t>(g.nodes()), 0.0) {}
};

/// How the scalar profile is sampled off its grid. Bilinear matches the
/// plain reconstruction contract; the C^2 spline is required whenever the
/// result feeds repeated difference quotients (curl of curl), where the
/// derivative kinks of a bilinear interpolant do not average out.
enum class Sampling { bilinear, spline };

/// U(x) = u(r, x3)/r * (-x2, x1, 0); axis cells (r < h/2) are zero.
/// Throws if the box is not contained in the cylindrical domain.
VectorField3 reconstruct(const Field& u, const CartGrid3& box,
                         Sampling sampling = Sampling::bilinear);

/// Same ansatz with an analytic profile; used for manufactured fields and
/// discretization-order studies.
VectorField3 reconstruct_profile(const std::function<double(double, double)>& u,
                                 const CartGrid3& box);

/// Central-difference divergence; boundary entries are zero.
std::vector<double> divergence(const VectorField3& U);
double max_abs_interior(const std::vector<double>& values, const CartGrid3& g, int margin);

/// Relative weighted L2 residual of curl curl U + V_eps U - g(U) over the
/// margin-2 interior, with g(alpha w) = f(alpha) w for unit w.
double curlcurl_residual(const VectorField3& U, const Potential& pot, double epsilon,
                         const Nonlinearity& nl);

/// (1/2) int |curl U|^2 + V_eps |U|^2 - int G(U) over the box interior,
/// G(U) = F(|U|).
double energy_curl(const VectorField3& U, const Potential& pot, double epsilon,
                   const Nonlinearity& nl);

/// J(u) restricted to the solid matching the cartesian box [-half, half]^3:
/// axial cut |s| <= half and angular fraction of each r-ring inside the
/// square cross-section.
double energy_in_box(const Field& u, const ProblemSpec& spec, double half);

/// Legacy structured-points text dump (dimensions, origin, spacing, one
/// VECTORS record); consumable by standard scientific visualizers.
void write_vtk(const VectorField3& U, const std::string& path,
               const std::string& field_name = "U");

}  // namespace curlcurl
