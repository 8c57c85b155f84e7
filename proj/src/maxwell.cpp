#include "curlcurl/maxwell.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <stdexcept>

namespace curlcurl {

CartGrid3 centered_box(int n, double half) {
  if (n < 8) throw std::invalid_argument("cartesian box needs at least 8 nodes per axis");
  if (!(half > 0.0)) throw std::invalid_argument("cartesian box half-width must be positive");
  CartGrid3 g;
  g.nx = g.ny = g.nz = n;
  g.h = 2.0 * half / n;
  g.x0 = g.y0 = g.z0 = -half;
  return g;
}

namespace {

/// Samples a cell-centered (r, s) lattice off its nodes. Bilinear is the
/// plain reconstruction rule; the prefiltered cubic B-spline variant is C^2,
/// which repeated difference quotients need. Queries past the outer cell
/// centers taper linearly to the homogeneous boundary; queries under the
/// first radial node taper linearly to zero on the axis.
class ProfileSampler {
 public:
  ProfileSampler(const Field& u, Sampling mode) : g_(*u.grid), mode_(mode) {
    if (mode_ == Sampling::spline) prefilter(u);
    else values_ = u.v;
  }

  double operator()(double r, double s) const {
    const double r0 = g_.r[0];
    if (r < r0) return r <= 0.0 ? 0.0 : sample(r0, s) * (r / r0);
    return sample(r, s);
  }

 private:
  double sample(double r, double s) const {
    // axial taper to zero at the walls
    const double s_last = g_.s[g_.n_s - 1];
    if (std::abs(s) > g_.s_max) return 0.0;
    double axial_scale = 1.0;
    if (std::abs(s) > std::abs(s_last)) {
      axial_scale = (g_.s_max - std::abs(s)) / (0.5 * g_.h_s);
      s = s < 0.0 ? -std::abs(s_last) : std::abs(s_last);
    }
    const double r_last = g_.r[g_.n_r - 1];
    if (r > g_.r_max) return 0.0;
    double radial_scale = 1.0;
    if (r > r_last) {
      radial_scale = (g_.r_max - r) / (0.5 * g_.h_r);
      r = r_last;
    }
    const double core = mode_ == Sampling::spline ? spline_at(r, s) : bilinear_at(r, s);
    return core * axial_scale * radial_scale;
  }

  double bilinear_at(double r, double s) const {
    const double xi = r / g_.h_r - 0.5;
    const double eta = (s + g_.s_max) / g_.h_s - 0.5;
    int i = static_cast<int>(std::floor(xi));
    int j = static_cast<int>(std::floor(eta));
    i = std::max(0, std::min(i, g_.n_r - 2));
    j = std::max(0, std::min(j, g_.n_s - 2));
    const double t = xi - i, w = eta - j;
    auto val = [&](int a, int b) { return values_[static_cast<size_t>(a) * g_.n_s + b]; };
    return (1 - t) * (1 - w) * val(i, j) + t * (1 - w) * val(i + 1, j) +
           (1 - t) * w * val(i, j + 1) + t * w * val(i + 1, j + 1);
  }

  double spline_at(double r, double s) const {
    const double xi = r / g_.h_r - 0.5;
    const double eta = (s + g_.s_max) / g_.h_s - 0.5;
    int i = static_cast<int>(std::floor(xi));
    int j = static_cast<int>(std::floor(eta));
    i = std::max(0, std::min(i, g_.n_r - 1));
    j = std::max(0, std::min(j, g_.n_s - 1));
    const double t = xi - i, w = eta - j;
    double bt[4], bw[4];
    basis(t, bt);
    basis(w, bw);
    double acc = 0.0;
    for (int a = 0; a < 4; ++a) {
      const size_t row = static_cast<size_t>(i + a) * (g_.n_s + 2);
      double r_acc = 0.0;
      for (int b = 0; b < 4; ++b) r_acc += coef_[row + j + b] * bw[b];
      acc += r_acc * bt[a];
    }
    return acc;
  }

  static void basis(double t, double w[4]) {
    const double t2 = t * t, t3 = t2 * t;
    w[0] = (1.0 - 3.0 * t + 3.0 * t2 - t3) / 6.0;
    w[1] = (4.0 - 6.0 * t2 + 3.0 * t3) / 6.0;
    w[2] = (1.0 + 3.0 * t + 3.0 * t2 - 3.0 * t3) / 6.0;
    w[3] = t3 / 6.0;
  }

  // interpolating cubic B-spline coefficients with natural end conditions;
  // lines are filtered along r, then along s
  void prefilter(const Field& u) {
    const int nr = g_.n_r, ns = g_.n_s;
    coef_.assign(static_cast<size_t>(nr + 2) * (ns + 2), 0.0);
    std::vector<double> line(std::max(nr, ns)), out(std::max(nr, ns) + 2);

    std::vector<double> tmp(static_cast<size_t>(nr + 2) * ns);
    for (int j = 0; j < ns; ++j) {
      for (int i = 0; i < nr; ++i) line[i] = u.v[static_cast<size_t>(i) * ns + j];
      filter_line(line.data(), nr, out.data());
      for (int i = 0; i < nr + 2; ++i) tmp[static_cast<size_t>(i) * ns + j] = out[i];
    }
    for (int i = 0; i < nr + 2; ++i) {
      for (int j = 0; j < ns; ++j) line[j] = tmp[static_cast<size_t>(i) * ns + j];
      filter_line(line.data(), ns, out.data());
      for (int j = 0; j < ns + 2; ++j) coef_[static_cast<size_t>(i) * (ns + 2) + j] = out[j];
    }
  }

  // solves (c_{k-1} + 4 c_k + c_{k+1})/6 = f_k with natural ends; out has a
  // one-coefficient pad on each side
  static void filter_line(const double* f, int n, double* out) {
    std::vector<double> c(static_cast<size_t>(n)), diag(static_cast<size_t>(n)),
        rhs(static_cast<size_t>(n));
    c[0] = f[0];
    c[n - 1] = f[n - 1];
    if (n > 2) {
      // Thomas on the interior block
      for (int k = 1; k + 1 < n; ++k) rhs[k] = 6.0 * f[k];
      rhs[1] -= c[0];
      rhs[n - 2] -= c[n - 1];
      diag[1] = 4.0;
      for (int k = 2; k + 1 < n; ++k) {
        const double m = 1.0 / diag[k - 1];
        diag[k] = 4.0 - m;
        rhs[k] -= m * rhs[k - 1];
      }
      c[n - 2] = rhs[n - 2] / diag[n - 2];
      for (int k = n - 3; k >= 1; --k) c[k] = (rhs[k] - c[k + 1]) / diag[k];
    }
    out[0] = 2.0 * c[0] - c[1];
    for (int k = 0; k < n; ++k) out[k + 1] = c[k];
    out[n + 1] = 2.0 * c[n - 1] - c[n - 2];
  }

  const CylGrid& g_;
  Sampling mode_;
  std::vector<double> values_;
  std::vector<double> coef_;
};

void check_box_inside(const CartGrid3& b, const CylGrid& g) {
  const double mx = std::max(std::abs(b.x(0)), std::abs(b.x(b.nx - 1)));
  const double my = std::max(std::abs(b.y(0)), std::abs(b.y(b.ny - 1)));
  const double mz = std::max(std::abs(b.z(0)), std::abs(b.z(b.nz - 1)));
  if (std::hypot(mx, my) > g.r_max || mz > g.s_max)
    throw std::invalid_argument("cartesian box samples outside the cylindrical grid");
}

template <typename Profile>
VectorField3 build_ansatz(const Profile& profile, const CartGrid3& box) {
  VectorField3 U(box);
  for (int i = 0; i < box.nx; ++i) {
    const double x = box.x(i);
    for (int j = 0; j < box.ny; ++j) {
      const double y = box.y(j);
      const double r = std::hypot(x, y);
      for (int k = 0; k < box.nz; ++k) {
        const long long n = box.idx(i, j, k);
        if (r < 0.5 * box.h) continue;  // axis cells stay zero
        const double q = profile(r, box.z(k)) / r;
        U.u1[n] = -y * q;
        U.u2[n] = x * q;
      }
    }
  }
  return U;
}

/// central-difference curl; entries on the outermost shell stay zero
VectorField3 curl(const VectorField3& U) {
  const CartGrid3& g = U.grid;
  VectorField3 W(g);
  const double inv2h = 0.5 / g.h;
  for (int i = 1; i + 1 < g.nx; ++i)
    for (int j = 1; j + 1 < g.ny; ++j)
      for (int k = 1; k + 1 < g.nz; ++k) {
        const long long n = g.idx(i, j, k);
        const double du3_dy = (U.u3[g.idx(i, j + 1, k)] - U.u3[g.idx(i, j - 1, k)]) * inv2h;
        const double du2_dz = (U.u2[g.idx(i, j, k + 1)] - U.u2[g.idx(i, j, k - 1)]) * inv2h;
        const double du1_dz = (U.u1[g.idx(i, j, k + 1)] - U.u1[g.idx(i, j, k - 1)]) * inv2h;
        const double du3_dx = (U.u3[g.idx(i + 1, j, k)] - U.u3[g.idx(i - 1, j, k)]) * inv2h;
        const double du2_dx = (U.u2[g.idx(i + 1, j, k)] - U.u2[g.idx(i - 1, j, k)]) * inv2h;
        const double du1_dy = (U.u1[g.idx(i, j + 1, k)] - U.u1[g.idx(i, j - 1, k)]) * inv2h;
        W.u1[n] = du3_dy - du2_dz;
        W.u2[n] = du1_dz - du3_dx;
        W.u3[n] = du2_dx - du1_dy;
      }
  return W;
}

}  // namespace

VectorField3 reconstruct(const Field& u, const CartGrid3& box, Sampling sampling) {
  if (u.grid->sym_k != 2)
    throw std::invalid_argument("reconstruct: the ansatz needs a K = 2 profile");
  check_box_inside(box, *u.grid);
  ProfileSampler sampler(u, sampling);
  return build_ansatz(sampler, box);
}

VectorField3 reconstruct_profile(const std::function<double(double, double)>& u,
                                 const CartGrid3& box) {
  return build_ansatz(u, box);
}

std::vector<double> divergence(const VectorField3& U) {
  const CartGrid3& g = U.grid;
  std::vector<double> div(static_cast<size_t>(g.nodes()), 0.0);
  const double inv2h = 0.5 / g.h;
  for (int i = 1; i + 1 < g.nx; ++i)
    for (int j = 1; j + 1 < g.ny; ++j)
      for (int k = 1; k + 1 < g.nz; ++k) {
        div[g.idx(i, j, k)] =
            (U.u1[g.idx(i + 1, j, k)] - U.u1[g.idx(i - 1, j, k)]) * inv2h +
            (U.u2[g.idx(i, j + 1, k)] - U.u2[g.idx(i, j - 1, k)]) * inv2h +
            (U.u3[g.idx(i, j, k + 1)] - U.u3[g.idx(i, j, k - 1)]) * inv2h;
      }
  return div;
}

double max_abs_interior(const std::vector<double>& values, const CartGrid3& g, int margin) {
  double m = 0.0;
  for (int i = margin; i < g.nx - margin; ++i)
    for (int j = margin; j < g.ny - margin; ++j)
      for (int k = margin; k < g.nz - margin; ++k)
        m = std::max(m, std::abs(values[g.idx(i, j, k)]));
  return m;
}

double curlcurl_residual(const VectorField3& U, const Potential& pot, double epsilon,
                         const Nonlinearity& nl) {
  const CartGrid3& g = U.grid;
  const VectorField3 W = curl(U);
  const VectorField3 C = curl(W);
  double num = 0.0, den = 0.0;
  for (int i = 2; i + 2 < g.nx; ++i) {
    const double x = g.x(i);
    for (int j = 2; j + 2 < g.ny; ++j) {
      const double y = g.y(j);
      const double r = std::hypot(x, y);
      for (int k = 2; k + 2 < g.nz; ++k) {
        const long long n = g.idx(i, j, k);
        const double v = pot(epsilon * r, epsilon * g.z(k));
        const double a1 = U.u1[n], a2 = U.u2[n], a3 = U.u3[n];
        const double mag = std::sqrt(a1 * a1 + a2 * a2 + a3 * a3);
        const double scale = mag > 0.0 ? nl.f(mag) / mag : 0.0;
        const double r1 = C.u1[n] + v * a1 - scale * a1;
        const double r2 = C.u2[n] + v * a2 - scale * a2;
        const double r3 = C.u3[n] + v * a3 - scale * a3;
        num += r1 * r1 + r2 * r2 + r3 * r3;
        den += a1 * a1 + a2 * a2 + a3 * a3;
      }
    }
  }
  if (den == 0.0) return 0.0;
  return std::sqrt(num / den);
}

double energy_curl(const VectorField3& U, const Potential& pot, double epsilon,
                   const Nonlinearity& nl) {
  const CartGrid3& g = U.grid;
  const VectorField3 W = curl(U);
  double quad = 0.0, nlsum = 0.0;
  for (int i = 1; i + 1 < g.nx; ++i) {
    const double x = g.x(i);
    for (int j = 1; j + 1 < g.ny; ++j) {
      const double y = g.y(j);
      const double r = std::hypot(x, y);
      for (int k = 1; k + 1 < g.nz; ++k) {
        const long long n = g.idx(i, j, k);
        const double v = pot(epsilon * r, epsilon * g.z(k));
        const double u2 = U.u1[n] * U.u1[n] + U.u2[n] * U.u2[n] + U.u3[n] * U.u3[n];
        const double w2 = W.u1[n] * W.u1[n] + W.u2[n] * W.u2[n] + W.u3[n] * W.u3[n];
        quad += w2 + v * u2;
        nlsum += nl.F(std::sqrt(u2));
      }
    }
  }
  const double cell = g.h * g.h * g.h;
  return 0.5 * quad * cell - nlsum * cell;
}

double energy_in_box(const Field& u, const ProblemSpec& spec, double half) {
  const CylGrid& g = *u.grid;
  if (half * std::numbers::sqrt2 > g.r_max || half > g.s_max)
    throw std::invalid_argument("energy_in_box: box exceeds the cylindrical domain");
  const double eps = spec.epsilon;

  // fraction of the radius-r circle inside the square cross-section
  auto frac = [half](double r) {
    if (r <= half) return 1.0;
    if (r >= half * std::numbers::sqrt2) return 0.0;
    return 1.0 - (4.0 / std::numbers::pi) * std::acos(half / r);
  };

  auto val = [&](int i, int j) {
    if (i < 0 || i >= g.n_r || j < 0 || j >= g.n_s) return 0.0;
    return u.at(i, j);
  };

  double total = 0.0;
  for (int i = 0; i < g.n_r; ++i) {
    const double f_r = frac(g.r[i]);
    if (f_r == 0.0) continue;
    const double wr = g.rad_w[i] * g.h_s;
    for (int j = 0; j < g.n_s; ++j) {
      if (std::abs(g.s[j]) > half) continue;
      const double uc = val(i, j);
      const double drp = (val(i + 1, j) - uc) / g.h_r;
      const double drm = (uc - val(i - 1, j)) / g.h_r;
      const double dsp = (val(i, j + 1) - uc) / g.h_s;
      const double dsm = (uc - val(i, j - 1)) / g.h_s;
      const double grad2 = 0.5 * (drp * drp + drm * drm) + 0.5 * (dsp * dsp + dsm * dsm);
      const double v = spec.potential(eps * g.r[i], eps * g.s[j]);
      const double density =
          0.5 * (grad2 + uc * uc / (g.r[i] * g.r[i]) + v * uc * uc) - spec.nonlinearity.F(uc);
      total += wr * f_r * density;
    }
  }
  return total;
}

void write_vtk(const VectorField3& U, const std::string& path, const std::string& field_name) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open vtk dump for writing: " + path);
  const CartGrid3& g = U.grid;
  char buf[96];
  out << "# vtk DataFile Version 3.0\n";
  out << "ansatz vector field\n";
  out << "ASCII\n";
  out << "DATASET STRUCTURED_POINTS\n";
  out << "DIMENSIONS " << g.nx << ' ' << g.ny << ' ' << g.nz << '\n';
  std::snprintf(buf, sizeof buf, "ORIGIN %.17g %.17g %.17g", g.x(0), g.y(0), g.z(0));
  out << buf << '\n';
  std::snprintf(buf, sizeof buf, "SPACING %.17g %.17g %.17g", g.h, g.h, g.h);
  out << buf << '\n';
  out << "POINT_DATA " << g.nodes() << '\n';
  out << "VECTORS " << field_name << " double\n";
  for (int k = 0; k < g.nz; ++k)
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        const long long n = g.idx(i, j, k);
        std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g", U.u1[n], U.u2[n], U.u3[n]);
        out << buf << '\n';
      }
}

}  // namespace curlcurl
