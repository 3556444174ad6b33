#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace opeflow::obs {

struct NonPositiveTau : std::invalid_argument {
  NonPositiveTau() : std::invalid_argument("tau must be positive") {}
};
struct RatioNotGreaterThanOne : std::invalid_argument {
  RatioNotGreaterThanOne() : std::invalid_argument("cutoff ratio must exceed one") {}
};

/// Cylinder conductance query; tau = 2 pi L / (n W).
struct ConductanceQuery {
  double length = 1.0;
  double circumference = 1.0;
  int level = 4;
  double tol = 1e-15;

  ConductanceQuery() = default;
  ConductanceQuery(double L, double W, int n, double tolerance = 1e-15);
  static ConductanceQuery from_tau(double tau, int n = 4, double tolerance = 1e-15);

  double tau() const;
};

/// Mean critical conductance, half-integer form:
/// (pi tau)^{-1/2} sum_{l in Z+1/2} exp(-l^2 tau).
double g_star_half_integer(const ConductanceQuery& q);

/// Dual form from Poisson summation:
/// tau^{-1} sum_{m in Z} (-1)^m exp(-pi^2 m^2 / tau).
double g_star_dual(const ConductanceQuery& q);

/// Convenience wrapper picking the faster-converging form.
double g_star(double tau, int n = 4, double tol = 1e-15);

/// Fixed-point dissipative conductivity n/(2 pi), in units of e^2/h.
double sigma_xx_star(int n);

struct SquareDeviationReport {
  double g_square = 0.0;           // G* at L = W for n = 4
  double reference = 0.57;         // numerical transfer-matrix value
  double band = 0.02;              // its quoted uncertainty
  double gap = 0.0;                // |g_square - reference|
  double gap_over_band = 0.0;
  bool exceeds_band = false;
  double leading_correction = 0.0; // 1 - 2 e^{-2 pi} + 2 e^{-8 pi}
};
SquareDeviationReport square_deviation_check();

/// Free energy of an isolated vortex, ((n-4)/2) ln(a_ir/a_uv).
double kt_free_energy(int n, double ratio);
/// Its energy-cost companion, (n/2) ln(a_ir/a_uv).
double kt_vortex_energy(int n, double ratio);

struct Vortex {
  double x = 0.0, y = 0.0;
  int charge = +1; // +1 is the correlated (z - z_p)^{-1} singularity
};

struct VortexConfiguration {
  std::vector<Vortex> vortices;
  double cutoff_uv = 1.0;
  double cutoff_ir = 2.0;

  VortexConfiguration() = default;
  VortexConfiguration(std::vector<Vortex> v, double a_uv, double a_ir);
};

/// delta_plus times the algebraic vortex number.
double vortex_count_action(const VortexConfiguration& cfg, double delta_plus);

/// CSV columns: tau,g_half,g_dual,abs_diff over a log-spaced grid.
std::string conductance_curve_csv(double tau_min, double tau_max, int points, int n,
                                  double tol = 1e-15);

}  // namespace opeflow::obs
