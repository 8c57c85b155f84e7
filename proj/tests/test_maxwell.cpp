#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "curlcurl/maxwell.hpp"
#include "curlcurl/solver.hpp"
#include "support/common.hpp"

using namespace curlcurl;

namespace {

double gauss_profile(double r, double z) { return r * std::exp(-r * r - z * z); }

Field sampled_profile(double r_max, double s_max, int n_r, int n_s) {
  Field u(CylGrid::make(n_r, n_s, r_max, s_max, 2));
  const CylGrid& g = *u.grid;
  for (int i = 0; i < g.n_r; ++i)
    for (int j = 0; j < g.n_s; ++j) u.at(i, j) = gauss_profile(g.r[i], g.s[j]);
  return u;
}

}  // namespace

TEST_CASE("ansatz direction and magnitude at an exact node") {
  // node grid chosen so (1, 0, 0) is a node: half = 1.875, h = 0.25
  const CartGrid3 box = centered_box(15, 1.875);
  const VectorField3 U = reconstruct_profile(gauss_profile, box);
  const int i = 11, j = 7, k = 7;
  REQUIRE(box.x(i) == doctest::Approx(1.0).epsilon(1e-15));
  REQUIRE(box.y(j) == doctest::Approx(0.0).epsilon(1e-15));
  const long long n = box.idx(i, j, k);
  CHECK(U.u1[n] == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(U.u2[n] == doctest::Approx(gauss_profile(1.0, 0.0)).epsilon(1e-14));
  CHECK(U.u3[n] == 0.0);
}

TEST_CASE("ansatz magnitude equals the profile magnitude off the axis") {
  const CartGrid3 box = centered_box(16, 2.0);
  const VectorField3 U = reconstruct_profile(gauss_profile, box);
  for (int i = 0; i < box.nx; ++i)
    for (int j = 0; j < box.ny; ++j)
      for (int k = 0; k < box.nz; ++k) {
        const double r = std::hypot(box.x(i), box.y(j));
        if (r < 0.5 * box.h) continue;
        const long long n = box.idx(i, j, k);
        const double mag = std::hypot(U.u1[n], U.u2[n]);
        CHECK(mag == doctest::Approx(std::abs(gauss_profile(r, box.z(k)))).epsilon(1e-14));
        CHECK(U.u3[n] == 0.0);
        // tangential: U orthogonal to the cylindrical radius vector
        CHECK(std::abs(U.u1[n] * box.x(i) + U.u2[n] * box.y(j)) <= 1e-14 * (1.0 + mag));
      }
}

TEST_CASE("quarter-turn equivariance on a symmetric box") {
  const CartGrid3 box = centered_box(32, 3.0);
  Field u = sampled_profile(6.0, 6.0, 128, 128);
  const VectorField3 U = reconstruct(u, box, Sampling::bilinear);
  // rotation by pi/2 about x3: U1(R x) = -U2(x), U2(R x) = U1(x)
  for (int i = 0; i < box.nx; ++i)
    for (int j = 0; j < box.ny; ++j) {
      const long long n = box.idx(i, j, 16);
      const long long rn = box.idx(box.ny - 1 - j, i, 16);
      CHECK(U.u1[rn] == doctest::Approx(-U.u2[n]).epsilon(1e-12));
      CHECK(U.u2[rn] == doctest::Approx(U.u1[n]).epsilon(1e-12));
    }
}

TEST_CASE("field-based reconstruction tracks the closed form") {
  Field u = sampled_profile(6.0, 6.0, 192, 192);
  const CartGrid3 box = centered_box(24, 3.0);
  for (Sampling mode : {Sampling::bilinear, Sampling::spline}) {
    const VectorField3 U = reconstruct(u, box, mode);
    double max_err = 0.0;
    for (int i = 0; i < box.nx; ++i)
      for (int j = 0; j < box.ny; ++j)
        for (int k = 0; k < box.nz; ++k) {
          const double x = box.x(i), y = box.y(j), z = box.z(k);
          const double r = std::hypot(x, y);
          if (r < 0.5 * box.h) continue;
          const double q = gauss_profile(r, z) / r;
          const long long n = box.idx(i, j, k);
          max_err = std::max(max_err, std::abs(U.u1[n] + y * q));
          max_err = std::max(max_err, std::abs(U.u2[n] - x * q));
        }
    CHECK(max_err < (mode == Sampling::bilinear ? 5e-4 : 5e-6));
  }
}

TEST_CASE("reconstruction rejects boxes leaving the cylindrical domain") {
  Field u = sampled_profile(4.0, 4.0, 32, 32);
  CHECK_THROWS_AS(reconstruct(u, centered_box(16, 3.5), Sampling::bilinear),
                  std::invalid_argument);  // corner radius 4.95 > 4
  CHECK_NOTHROW(reconstruct(u, centered_box(16, 2.5), Sampling::bilinear));
}

TEST_CASE("divergence of a linear field is its trace") {
  const CartGrid3 box = centered_box(12, 2.0);
  VectorField3 U(box);
  for (int i = 0; i < box.nx; ++i)
    for (int j = 0; j < box.ny; ++j)
      for (int k = 0; k < box.nz; ++k) {
        const long long n = box.idx(i, j, k);
        U.u1[n] = box.x(i);
        U.u2[n] = box.y(j);
        U.u3[n] = box.z(k);
      }
  const auto div = divergence(U);
  for (int i = 1; i + 1 < box.nx; ++i)
    for (int j = 1; j + 1 < box.ny; ++j)
      for (int k = 1; k + 1 < box.nz; ++k)
        CHECK(div[box.idx(i, j, k)] == doctest::Approx(3.0).epsilon(1e-12));

  const VectorField3 zero(box);
  CHECK(max_abs_interior(divergence(zero), box, 1) == 0.0);
}

TEST_CASE("ansatz fields are divergence-free at second order") {
  double errs[3];
  int n = 16;
  for (int lvl = 0; lvl < 3; ++lvl, n *= 2) {
    const CartGrid3 box = centered_box(n, 3.0);
    const VectorField3 U = reconstruct_profile(gauss_profile, box);
    errs[lvl] = max_abs_interior(divergence(U), box, 1);
  }
  CHECK(std::log2(errs[0] / errs[1]) == doctest::Approx(2.0).epsilon(0.15));
  CHECK(std::log2(errs[1] / errs[2]) == doctest::Approx(2.0).epsilon(0.15));
}

TEST_CASE("nested curls match the manufactured curl-curl field") {
  // for U = phi(r,z) (-y, x, 0): curlcurl U = -(phi_rr + 3 phi_r / r + phi_zz)(-y, x, 0)
  auto phi = [](double r, double z) { return std::exp(-r * r - z * z); };
  auto q_factor = [&](double r, double z) {
    return (4.0 * r * r + 4.0 * z * z - 10.0) * phi(r, z);
  };
  double errs[3];
  int n = 16;
  for (int lvl = 0; lvl < 3; ++lvl, n *= 2) {
    const CartGrid3 box = centered_box(n, 3.0);
    // profile u = r phi so the ansatz helper builds phi * (-y, x, 0)
    const VectorField3 U =
        reconstruct_profile([&](double r, double z) { return r * phi(r, z); }, box);
    const Potential pot = builtin_potential("constant", {1.0});
    const Nonlinearity nl = builtin_nonlinearity("kerr", {1.0});

    // direct check against the closed form through the residual evaluated
    // with V = -Q(phi)/1 ... instead compare the nested-difference curlcurl
    // against the analytic field componentwise
    double max_err = 0.0;
    const VectorField3 W = [&] {
      // residual with V = 0-like bookkeeping is not exposed; recompute here
      VectorField3 cc(box);
      const double inv2h = 0.5 / box.h;
      VectorField3 c1(box);
      for (int i = 1; i + 1 < box.nx; ++i)
        for (int j = 1; j + 1 < box.ny; ++j)
          for (int k = 1; k + 1 < box.nz; ++k) {
            const long long m = box.idx(i, j, k);
            c1.u1[m] = (U.u3[box.idx(i, j + 1, k)] - U.u3[box.idx(i, j - 1, k)]) * inv2h -
                       (U.u2[box.idx(i, j, k + 1)] - U.u2[box.idx(i, j, k - 1)]) * inv2h;
            c1.u2[m] = (U.u1[box.idx(i, j, k + 1)] - U.u1[box.idx(i, j, k - 1)]) * inv2h -
                       (U.u3[box.idx(i + 1, j, k)] - U.u3[box.idx(i - 1, j, k)]) * inv2h;
            c1.u3[m] = (U.u2[box.idx(i + 1, j, k)] - U.u2[box.idx(i - 1, j, k)]) * inv2h -
                       (U.u1[box.idx(i, j + 1, k)] - U.u1[box.idx(i, j - 1, k)]) * inv2h;
          }
      for (int i = 2; i + 2 < box.nx; ++i)
        for (int j = 2; j + 2 < box.ny; ++j)
          for (int k = 2; k + 2 < box.nz; ++k) {
            const long long m = box.idx(i, j, k);
            cc.u1[m] = (c1.u3[box.idx(i, j + 1, k)] - c1.u3[box.idx(i, j - 1, k)]) * inv2h -
                       (c1.u2[box.idx(i, j, k + 1)] - c1.u2[box.idx(i, j, k - 1)]) * inv2h;
            cc.u2[m] = (c1.u1[box.idx(i, j, k + 1)] - c1.u1[box.idx(i, j, k - 1)]) * inv2h -
                       (c1.u3[box.idx(i + 1, j, k)] - c1.u3[box.idx(i - 1, j, k)]) * inv2h;
            cc.u3[m] = (c1.u2[box.idx(i + 1, j, k)] - c1.u2[box.idx(i - 1, j, k)]) * inv2h -
                       (c1.u1[box.idx(i, j + 1, k)] - c1.u1[box.idx(i, j - 1, k)]) * inv2h;
          }
      return cc;
    }();
    for (int i = 2; i + 2 < box.nx; ++i)
      for (int j = 2; j + 2 < box.ny; ++j)
        for (int k = 2; k + 2 < box.nz; ++k) {
          const double x = box.x(i), y = box.y(j), z = box.z(k);
          const double r = std::hypot(x, y);
          if (r < 0.5 * box.h) continue;
          const double q = q_factor(r, z);
          const long long m = box.idx(i, j, k);
          max_err = std::max(max_err, std::abs(W.u1[m] - (-q) * (-y)));
          max_err = std::max(max_err, std::abs(W.u2[m] - (-q) * x));
          max_err = std::max(max_err, std::abs(W.u3[m]));
        }
    errs[lvl] = max_err;
    (void)pot;
    (void)nl;
  }
  CHECK(std::log2(errs[0] / errs[1]) == doctest::Approx(2.0).epsilon(0.15));
  CHECK(std::log2(errs[1] / errs[2]) == doctest::Approx(2.0).epsilon(0.15));
}

TEST_CASE("zero fields carry zero residual and zero energy") {
  const CartGrid3 box = centered_box(12, 2.0);
  const VectorField3 zero(box);
  const Potential pot = builtin_potential("constant", {1.0});
  const Nonlinearity nl = builtin_nonlinearity("kerr", {1.0});
  CHECK(curlcurl_residual(zero, pot, 1.0, nl) == 0.0);
  CHECK(energy_curl(zero, pot, 1.0, nl) == 0.0);
}

TEST_CASE("box energy matches the reduced energy for a sampled profile") {
  Field u = sampled_profile(8.0, 8.0, 256, 256);
  ProblemSpec spec = testutil::kerr_unit_spec(8.0, 8.0, 256, 256);
  const CartGrid3 box = centered_box(48, 3.0);
  const VectorField3 U = reconstruct(u, box, Sampling::spline);
  const double e_cart = energy_curl(U, spec.potential, spec.epsilon, spec.nonlinearity);
  const double e_cyl = energy_in_box(u, spec, 3.0);
  CHECK(std::abs(e_cart - e_cyl) / std::abs(e_cyl) < 5e-2);
}

TEST_CASE("energy in box validates the box size") {
  Field u = sampled_profile(4.0, 4.0, 32, 32);
  const ProblemSpec spec = testutil::kerr_unit_spec(4.0, 4.0, 32, 32);
  CHECK_THROWS_AS(energy_in_box(u, spec, 3.5), std::invalid_argument);
}

TEST_CASE("structured-points dump carries the documented header") {
  const CartGrid3 box = centered_box(8, 1.0);
  VectorField3 U(box);
  U.u1[box.idx(3, 3, 3)] = 1.25;
  const auto path = std::filesystem::temp_directory_path() / "curlcurl_vtk_test.vtk";
  write_vtk(U, path.string(), "ansatz");
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  CHECK(line == "# vtk DataFile Version 3.0");
  std::getline(in, line);  // title
  std::getline(in, line);
  CHECK(line == "ASCII");
  std::getline(in, line);
  CHECK(line == "DATASET STRUCTURED_POINTS");
  std::getline(in, line);
  CHECK(line == "DIMENSIONS 8 8 8");
  std::getline(in, line);
  CHECK(line.rfind("ORIGIN ", 0) == 0);
  std::getline(in, line);
  CHECK(line.rfind("SPACING ", 0) == 0);
  std::getline(in, line);
  CHECK(line == "POINT_DATA 512");
  std::getline(in, line);
  CHECK(line == "VECTORS ansatz double");
  int rows = 0;
  while (std::getline(in, line))
    if (!line.empty()) ++rows;
  CHECK(rows == 512);
  std::filesystem::remove(path);
}
