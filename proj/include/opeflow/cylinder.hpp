#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace opeflow::cyl {

struct OrderViolation : std::invalid_argument {
  OrderViolation() : std::invalid_argument("cycle positions must satisfy 0 <= x < x' <= L") {}
};
struct SolverDivergence : std::runtime_error {
  explicit SolverDivergence(const std::string& what) : std::runtime_error(what) {}
};

/// Finite-difference cylinder: Dirichlet rows at x = 0 and x = L, periodic
/// identification in y.
struct CylinderGrid {
  int nx = 64;
  int ny = 64;
  double length = 1.0;
  double width = 1.0;

  CylinderGrid() = default;
  CylinderGrid(int nx_, int ny_, double L, double W);

  double hx() const { return length / nx; }
  double hy() const { return width / ny; }
};

/// Discrete (-Laplace)^{-1} applied to a unit point source, cell-area
/// normalized; values stored on the (nx+1) x ny node set.
struct GreenFunctionSample {
  CylinderGrid grid;
  int source_i = 0;
  int source_j = 0;
  std::vector<double> values; // row-major, (nx+1) rows of ny values
  double residual = 0.0;

  double at(int i, int j) const;
};

/// Mode sum for the continuum kernel with Dirichlet ends, truncated at
/// |k| <= 2 pi kmax / W; the k = 0 summand is x (L - x') / (L W).
double green_analytic(double x, double y, double xp, double yp, const CylinderGrid& grid,
                      int kmax);

/// Direct solve (Fourier transform in y, tridiagonal in x) of
/// (-Laplace) u = delta_source / (hx hy); checks the residual.
GreenFunctionSample green_numeric(const CylinderGrid& grid, int source_i, int source_j);

/// Ohm's law value (n / 2 pi) (W / L).
double tree_conductance_analytic(int n, double L, double W);

/// Mixed-derivative cycle integral of the numeric kernel at x = L/4 and
/// x' = 3L/4; converges to the analytic value as the grid refines.
double tree_conductance_numeric(const CylinderGrid& grid, int n);

/// Largest |second difference| of the y-integrated kernel between the two
/// cycles; the transverse cycle integral keeps only the k = 0 mode, so this
/// vanishes to solver accuracy.
double cycle_profile_curvature(const CylinderGrid& grid);

struct ConvergenceReport {
  std::vector<int> sizes;
  std::vector<double> green_errors;       // max relative, >= 4 spacings from source
  std::vector<double> conductance_errors; // relative to Ohm's law
  double observed_order = 0.0;            // from the green errors
};
ConvergenceReport laplacian_check(const std::vector<int>& sizes, int n, double L, double W);

struct LogSlopeReport {
  double slope = 0.0;              // fitted d u / d ln r
  double expected_magnitude = 0.0; // 1 / (2 pi)
  int sign = 0;                    // recorded, not asserted
  int grid = 0;
  double r_min = 0.0, r_max = 0.0;
};
/// Least-squares fit of the near-diagonal kernel against ln r on a square
/// cylinder, direction-averaged to suppress the smooth boundary part.
LogSlopeReport near_diagonal_log_slope(int ngrid);

/// CSV matrix of the sampled field, one row of the grid per line.
std::string field_csv(const GreenFunctionSample& s);

}  // namespace opeflow::cyl
