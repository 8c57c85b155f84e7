#include "curlcurl/grid.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "curlcurl/errors.hpp"

namespace curlcurl {

double sphere_surface_measure(int k) {
  // 2 pi^{k/2} / Gamma(k/2)
  return 2.0 * std::pow(std::numbers::pi, 0.5 * k) / std::tgamma(0.5 * k);
}

std::shared_ptr<const CylGrid> CylGrid::make(int n_r, int n_s, double r_max,
                                             double s_max, int sym_k) {
  if (n_r < 2 || n_s < 2) throw std::invalid_argument("grid needs at least 2x2 cells");
  if (!(r_max > 0.0 && s_max > 0.0)) throw std::invalid_argument("grid extents must be positive");
  if (sym_k < 2) throw std::invalid_argument("symmetry rank K must be >= 2");

  auto g = std::make_shared<CylGrid>();
  g->n_r = n_r;
  g->n_s = n_s;
  g->r_max = r_max;
  g->s_max = s_max;
  g->sym_k = sym_k;
  g->h_r = r_max / n_r;
  g->h_s = 2.0 * s_max / n_s;
  g->measure_unit = sphere_surface_measure(sym_k);

  g->r.resize(n_r);
  g->rad_w.resize(n_r);
  g->face_w.resize(n_r + 1);
  for (int i = 0; i <= n_r; ++i) {
    const double rf = i * g->h_r;
    g->face_w[i] = g->measure_unit * std::pow(rf, sym_k - 1);
  }
  for (int i = 0; i < n_r; ++i) {
    g->r[i] = (i + 0.5) * g->h_r;
    const double lo = i * g->h_r, hi = (i + 1) * g->h_r;
    // exact radial cell volume; equals r_i h_r for K = 2
    g->rad_w[i] = g->measure_unit * (std::pow(hi, sym_k) - std::pow(lo, sym_k)) / sym_k;
  }
  g->s.resize(n_s);
  for (int j = 0; j < n_s; ++j) g->s[j] = -s_max + (j + 0.5) * g->h_s;
  return g;
}

double CylGrid::total_measure() const {
  double sum = 0.0;
  for (int i = 0; i < n_r; ++i) sum += rad_w[i];
  return sum * h_s * n_s;
}

bool CylGrid::same_as(const CylGrid& o) const {
  return n_r == o.n_r && n_s == o.n_s && r_max == o.r_max && s_max == o.s_max &&
         sym_k == o.sym_k;
}

bool Field::finite() const {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

static void check_same_grid(const Field& a, const Field& b) {
  if (!a.grid || !b.grid || !a.grid->same_as(*b.grid))
    throw std::invalid_argument("fields live on different grids");
}

double inner_weighted(const Field& a, const Field& b) {
  check_same_grid(a, b);
  const CylGrid& g = *a.grid;
  double sum = 0.0;
  for (int i = 0; i < g.n_r; ++i) {
    const double wr = g.rad_w[i] * g.h_s;
    double row = 0.0;
    const size_t base = static_cast<size_t>(i) * g.n_s;
    for (int j = 0; j < g.n_s; ++j) row += a.v[base + j] * b.v[base + j];
    sum += wr * row;
  }
  return sum;
}

double norm_weighted(const Field& a) { return std::sqrt(inner_weighted(a, a)); }

SchrodingerOp::SchrodingerOp(std::shared_ptr<const CylGrid> grid, const Potential& pot,
                             double epsilon)
    : grid_(std::move(grid)), coef_(static_cast<size_t>(grid_->cells())) {
  const CylGrid& g = *grid_;
  for (int i = 0; i < g.n_r; ++i) {
    const double inv_r2 = 1.0 / (g.r[i] * g.r[i]);
    const double re = epsilon * g.r[i];
    for (int j = 0; j < g.n_s; ++j) {
      coef_[static_cast<size_t>(i) * g.n_s + j] = inv_r2 + pot(re, epsilon * g.s[j]);
    }
  }
}

void SchrodingerOp::apply(const Field& u, Field& out) const {
  if (!u.grid->same_as(*grid_)) throw std::invalid_argument("field grid mismatch");
  const CylGrid& g = *grid_;
  const int nr = g.n_r, ns = g.n_s;
  const double inv_hr = 1.0 / g.h_r;
  const double inv_hs2 = 1.0 / (g.h_s * g.h_s);
  if (!out.grid || !out.grid->same_as(g)) out = Field(grid_);

  for (int i = 0; i < nr; ++i) {
    const size_t c = static_cast<size_t>(i) * ns;
    const double inv_vol = 1.0 / g.rad_w[i];
    const double fw_lo = g.face_w[i], fw_hi = g.face_w[i + 1];
    for (int j = 0; j < ns; ++j) {
      const double uc = u.v[c + j];
      const double u_im = i > 0 ? u.v[c - ns + j] : 0.0;       // ghost 0 (face weight 0 anyway)
      const double u_ip = i + 1 < nr ? u.v[c + ns + j] : 0.0;  // Dirichlet truncation
      const double u_jm = j > 0 ? u.v[c + j - 1] : 0.0;
      const double u_jp = j + 1 < ns ? u.v[c + j + 1] : 0.0;
      const double flux = (fw_hi * (u_ip - uc) - fw_lo * (uc - u_im)) * inv_hr;
      const double lap = flux * inv_vol + (u_jp - 2.0 * uc + u_jm) * inv_hs2;
      out.v[c + j] = -lap + coef_[c + j] * uc;
    }
  }
}

Field SchrodingerOp::apply(const Field& u) const {
  Field out(grid_);
  apply(u, out);
  return out;
}

double SchrodingerOp::quad_form(const Field& u) const {
  Field au = apply(u);
  return inner_weighted(au, u);
}

Field SchrodingerOp::solve(const Field& rhs, double tol, int max_iters,
                           const Field* initial) const {
  if (!(tol > 0.0)) throw std::invalid_argument("solve_linear: tol must be positive");
  const double rhs_norm = norm_weighted(rhs);
  Field x = initial ? *initial : Field(grid_);
  if (rhs_norm == 0.0) {
    return Field(grid_);  // A is SPD, so the zero field is the solution
  }
  if (max_iters <= 0) max_iters = 20000;

  Field r(grid_), p(grid_), ap(grid_);
  apply(x, ap);
  for (size_t n = 0; n < r.v.size(); ++n) r.v[n] = rhs.v[n] - ap.v[n];
  p = r;
  double rr = inner_weighted(r, r);
  const double stop = tol * rhs_norm;

  for (int it = 0; it < max_iters; ++it) {
    if (std::sqrt(rr) <= stop) return x;
    apply(p, ap);
    const double pap = inner_weighted(ap, p);
    const double alpha = rr / pap;
    for (size_t n = 0; n < x.v.size(); ++n) {
      x.v[n] += alpha * p.v[n];
      r.v[n] -= alpha * ap.v[n];
    }
    const double rr_new = inner_weighted(r, r);
    const double beta = rr_new / rr;
    rr = rr_new;
    for (size_t n = 0; n < p.v.size(); ++n) p.v[n] = r.v[n] + beta * p.v[n];
  }
  if (std::sqrt(rr) <= stop) return x;
  throw ConvergenceError("conjugate gradients stalled at relative residual " +
                             std::to_string(std::sqrt(rr) / rhs_norm),
                         std::sqrt(rr) / rhs_norm, max_iters);
}

Field apply_schrodinger_op(const Field& u, const Potential& pot, double epsilon) {
  SchrodingerOp op(u.grid, pot, epsilon);
  return op.apply(u);
}

Field solve_linear(const Potential& pot, double epsilon, const Field& rhs, double tol) {
  SchrodingerOp op(rhs.grid, pot, epsilon);
  return op.solve(rhs, tol);
}

void write_field(const std::string& path, const Field& u) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open field dump for writing: " + path);
  const CylGrid& g = *u.grid;
  char buf[32];
  out << g.n_r << ' ' << g.n_s << ' ';
  std::snprintf(buf, sizeof buf, "%.17g", g.r_max);
  out << buf << ' ';
  std::snprintf(buf, sizeof buf, "%.17g", g.s_max);
  out << buf << ' ' << g.sym_k << '\n';
  for (int i = 0; i < g.n_r; ++i) {
    for (int j = 0; j < g.n_s; ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", u.at(i, j));
      out << buf << (j + 1 < g.n_s ? ' ' : '\n');
    }
  }
}

Field read_field(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open field dump: " + path);
  int n_r = 0, n_s = 0, k = 0;
  double r_max = 0.0, s_max = 0.0;
  if (!(in >> n_r >> n_s >> r_max >> s_max >> k))
    throw std::runtime_error("malformed field dump header: " + path);
  Field u(CylGrid::make(n_r, n_s, r_max, s_max, k));
  for (int i = 0; i < n_r; ++i)
    for (int j = 0; j < n_s; ++j)
      if (!(in >> u.at(i, j))) throw std::runtime_error("truncated field dump: " + path);
  return u;
}

}  // namespace curlcurl
