#include "opeflow/cylinder.hpp"

#include <cmath>
#include <complex>
#include <cstdio>
#include <numeric>
#include <sstream>

namespace opeflow::cyl {

namespace {

constexpr double kPi = 3.14159265358979323846;

using cplx = std::complex<double>;

/// Per-mode tridiagonal solve of the y-transformed 5-point system.
/// Returns uhat[i][m] on interior rows i = 1..nx-1.
std::vector<std::vector<cplx>> solve_modes(const CylinderGrid& g, int si, int sj) {
  const int nx = g.nx, ny = g.ny;
  const double hx = g.hx(), hy = g.hy();
  const double inv_hx2 = 1.0 / (hx * hx);
  const double source = 1.0 / (hx * hy);

  std::vector<std::vector<cplx>> uhat(nx + 1, std::vector<cplx>(ny, cplx(0.0)));
  std::vector<cplx> diag(nx - 1), rhs(nx - 1), cprime(nx - 1);
  for (int m = 0; m < ny; ++m) {
    const double lam = (2.0 - 2.0 * std::cos(2.0 * kPi * m / ny)) / (hy * hy);
    const cplx phase = std::exp(cplx(0.0, -2.0 * kPi * m * sj / ny));
    for (int i = 0; i < nx - 1; ++i) {
      diag[i] = 2.0 * inv_hx2 + lam;
      rhs[i] = (i + 1 == si) ? phase * source : cplx(0.0);
    }
    // Thomas algorithm with constant off-diagonal -1/hx^2.
    const cplx off = -inv_hx2;
    cprime[0] = off / diag[0];
    rhs[0] /= diag[0];
    for (int i = 1; i < nx - 1; ++i) {
      const cplx denom = diag[i] - off * cprime[i - 1];
      cprime[i] = off / denom;
      rhs[i] = (rhs[i] - off * rhs[i - 1]) / denom;
    }
    for (int i = nx - 3; i >= 0; --i) rhs[i] -= cprime[i] * rhs[i + 1];
    for (int i = 1; i < nx; ++i) uhat[i][m] = rhs[i - 1];
  }
  return uhat;
}

double reconstruct(const std::vector<std::vector<cplx>>& uhat, const CylinderGrid& g, int i,
                   int j) {
  const int ny = g.ny;
  cplx sum(0.0);
  for (int m = 0; m < ny; ++m)
    sum += uhat[i][m] * std::exp(cplx(0.0, 2.0 * kPi * m * j / ny));
  return sum.real() / ny;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

/// y-integrated field hy * sum_j u(i, j): only the m = 0 mode survives.
std::vector<double> y_integrated(const std::vector<std::vector<cplx>>& uhat,
                                 const CylinderGrid& g) {
  std::vector<double> p(g.nx + 1, 0.0);
  for (int i = 0; i <= g.nx; ++i) p[i] = uhat[i][0].real() * g.hy();
  return p;
}

}  // namespace

CylinderGrid::CylinderGrid(int nx_, int ny_, double L, double W)
    : nx(nx_), ny(ny_), length(L), width(W) {
  if (nx < 8 || ny < 8) throw std::invalid_argument("grid must be at least 8 x 8");
  if (!(L > 0.0) || !(W > 0.0)) throw std::invalid_argument("cylinder dimensions must be positive");
}

double GreenFunctionSample::at(int i, int j) const {
  const int ny = grid.ny;
  const int jj = ((j % ny) + ny) % ny;
  return values[static_cast<std::size_t>(i) * ny + jj];
}

double green_analytic(double x, double y, double xp, double yp, const CylinderGrid& grid,
                      int kmax) {
  if (!(x >= 0.0) || !(x < xp) || !(xp <= grid.length)) throw OrderViolation();
  if (kmax < 1) throw std::invalid_argument("kmax must be at least 1");
  const double L = grid.length, W = grid.width;
  double sum = x * (L - xp) / (L * W); // k = 0 by l'Hospital
  for (int j = 1; j <= kmax; ++j) {
    const double k = 2.0 * kPi * j / W;
    // sinh(kx) sinh(k(L-xp)) / sinh(kL), written in decaying exponentials
    const double num = std::exp(-k * (xp - x)) * (1.0 - std::exp(-2.0 * k * x)) *
                       (1.0 - std::exp(-2.0 * k * (L - xp)));
    const double den = 2.0 * (1.0 - std::exp(-2.0 * k * L));
    sum += 2.0 * std::cos(k * (y - yp)) * num / (den * k * W);
  }
  return sum;
}

GreenFunctionSample green_numeric(const CylinderGrid& grid, int source_i, int source_j) {
  if (source_i < 1 || source_i > grid.nx - 1)
    throw std::invalid_argument("source must be strictly interior in x");
  const int sj = ((source_j % grid.ny) + grid.ny) % grid.ny;

  const auto uhat = solve_modes(grid, source_i, sj);
  GreenFunctionSample out;
  out.grid = grid;
  out.source_i = source_i;
  out.source_j = sj;
  out.values.assign(static_cast<std::size_t>(grid.nx + 1) * grid.ny, 0.0);
  for (int i = 1; i < grid.nx; ++i)
    for (int j = 0; j < grid.ny; ++j)
      out.values[static_cast<std::size_t>(i) * grid.ny + j] = reconstruct(uhat, grid, i, j);

  // Residual of the 5-point system, relative to the source amplitude.
  const double hx2 = grid.hx() * grid.hx(), hy2 = grid.hy() * grid.hy();
  const double amp = 1.0 / (grid.hx() * grid.hy());
  double worst = 0.0;
  for (int i = 1; i < grid.nx; ++i) {
    for (int j = 0; j < grid.ny; ++j) {
      const double lap = (2.0 * out.at(i, j) - out.at(i + 1, j) - out.at(i - 1, j)) / hx2 +
                         (2.0 * out.at(i, j) - out.at(i, j + 1) - out.at(i, j - 1)) / hy2;
      const double want = (i == source_i && j == sj) ? amp : 0.0;
      worst = std::max(worst, std::fabs(lap - want) / amp);
    }
  }
  out.residual = worst;
  if (worst > 1e-10) throw SolverDivergence("discrete solve residual above 1e-10");
  return out;
}

double tree_conductance_analytic(int n, double L, double W) {
  if (n < 1) throw std::invalid_argument("level must be a positive integer");
  if (!(L > 0.0) || !(W > 0.0)) throw std::invalid_argument("dimensions must be positive");
  return n / (2.0 * kPi) * (W / L);
}

double tree_conductance_numeric(const CylinderGrid& grid, int n) {
  if (n < 1) throw std::invalid_argument("level must be a positive integer");
  if (grid.nx % 4 != 0) throw std::invalid_argument("nx must be divisible by 4");
  const int i_probe = grid.nx / 4;      // cycle x = L/4
  const int i_source = 3 * grid.nx / 4; // cycle x' = 3L/4
  // ∮dy ∮dy' with sources displaced one row either way for d/dx'.
  const auto up = y_integrated(solve_modes(grid, i_source + 1, 0), grid);
  const auto dn = y_integrated(solve_modes(grid, i_source - 1, 0), grid);
  const double hx = grid.hx();
  // F(x, x') = W * hy sum_j u(x, y_j) carries both transverse cycle
  // integrals; the centered stencil is its mixed second derivative.
  const double mixed = grid.width *
                       (up[i_probe + 1] - up[i_probe - 1] - dn[i_probe + 1] + dn[i_probe - 1]) /
                       (4.0 * hx * hx);
  const double pref = 0.5 * (n / (2.0 * kPi)) * (n / (2.0 * kPi)) * (4.0 * kPi / n);
  return pref * (-mixed);
}

double cycle_profile_curvature(const CylinderGrid& grid) {
  const int i_probe = grid.nx / 4;
  const int i_source = 3 * grid.nx / 4;
  const auto p = y_integrated(solve_modes(grid, i_source, 0), grid);
  double worst = 0.0;
  for (int i = i_probe + 1; i < i_source - 1; ++i)
    worst = std::max(worst, std::fabs(p[i + 1] - 2.0 * p[i] + p[i - 1]));
  return worst;
}

ConvergenceReport laplacian_check(const std::vector<int>& sizes, int n, double L, double W) {
  ConvergenceReport rep;
  for (const int size : sizes) {
    const CylinderGrid grid(size, size, L, W);
    const int si = size / 2, sj = 0;
    const GreenFunctionSample u = green_numeric(grid, si, sj);
    double worst = 0.0;
    // Probe points at fixed physical offsets (so refinement sharpens the
    // comparison), all at least 4 spacings from the source.
    for (const int di : {-size / 4, -size / 8, size / 8, size / 4}) {
      for (const int dj : {-size / 4, -size / 8, 0, size / 8, size / 4}) {
        if (di * di + dj * dj < 16) continue;
        const int i = si + di;
        if (i < 1 || i > size - 1) continue;
        const double x = i * grid.hx();
        const double y = ((sj + dj + size) % size) * grid.hy();
        const double xs = si * grid.hx();
        const double ys = sj * grid.hy();
        const double exact = (x < xs) ? green_analytic(x, y, xs, ys, grid, 4 * size)
                                      : green_analytic(xs, ys, x, y, grid, 4 * size);
        const double got = u.at(i, (sj + dj + size) % size);
        if (std::fabs(exact) < 1e-14) continue;
        worst = std::max(worst, std::fabs(got - exact) / std::fabs(exact));
      }
    }
    rep.sizes.push_back(size);
    rep.green_errors.push_back(worst);
    const double g_exact = tree_conductance_analytic(n, L, W);
    const double g_num = tree_conductance_numeric(grid, n);
    rep.conductance_errors.push_back(std::fabs(g_num - g_exact) / g_exact);
  }
  if (rep.green_errors.size() >= 2) {
    const double e0 = rep.green_errors.front(), e1 = rep.green_errors.back();
    const double h0 = 1.0 / rep.sizes.front(), h1 = 1.0 / rep.sizes.back();
    if (e0 > 0.0 && e1 > 0.0) rep.observed_order = std::log(e0 / e1) / std::log(h0 / h1);
  }
  return rep;
}

LogSlopeReport near_diagonal_log_slope(int ngrid) {
  const CylinderGrid grid(ngrid, ngrid, 1.0, 1.0);
  const int si = ngrid / 2, sj = 0;
  const auto uhat = solve_modes(grid, si, sj);

  LogSlopeReport rep;
  rep.grid = ngrid;
  rep.expected_magnitude = 1.0 / (2.0 * kPi);
  const double h = grid.hx();
  const int m_lo = 2;
  const int m_hi = std::min(ngrid / 5, 200);
  rep.r_min = m_lo * h;
  rep.r_max = m_hi * h;

  // Direction-averaged samples (±x, ±y) cancel the odd part of the smooth
  // background; fit u against ln r.
  std::vector<double> lx, ly;
  for (int m = m_lo; m <= m_hi; ++m) {
    const double sample = 0.25 * (reconstruct(uhat, grid, si + m, sj) +
                                  reconstruct(uhat, grid, si - m, sj) +
                                  reconstruct(uhat, grid, si, sj + m) +
                                  reconstruct(uhat, grid, si, (sj - m + ngrid) % ngrid));
    lx.push_back(std::log(m * h));
    ly.push_back(sample);
  }
  const double n = static_cast<double>(lx.size());
  const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / n;
  const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  rep.slope = sxy / sxx;
  rep.sign = (rep.slope > 0) - (rep.slope < 0);
  return rep;
}

std::string field_csv(const GreenFunctionSample& s) {
  std::ostringstream os;
  for (int i = 0; i <= s.grid.nx; ++i) {
    for (int j = 0; j < s.grid.ny; ++j) os << (j ? "," : "") << fmt(s.at(i, j));
    os << "\n";
  }
  return os.str();
}

}  // namespace opeflow::cyl
