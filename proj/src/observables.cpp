#include "opeflow/observables.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace opeflow::obs {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr int kMinTerms = 8;

void validate(const ConductanceQuery& q) {
  if (!(q.length > 0.0) || !(q.circumference > 0.0)) throw NonPositiveTau();
  if (q.level < 1) throw std::invalid_argument("level must be a positive integer");
  if (!(q.tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

}  // namespace

ConductanceQuery::ConductanceQuery(double L, double W, int n, double tolerance)
    : length(L), circumference(W), level(n), tol(tolerance) {
  validate(*this);
}

ConductanceQuery ConductanceQuery::from_tau(double tau, int n, double tolerance) {
  if (!(tau > 0.0)) throw NonPositiveTau();
  // keep W = 1 and solve tau = 2 pi L / (n W) for L
  return ConductanceQuery(tau * n / (2.0 * kPi), 1.0, n, tolerance);
}

double ConductanceQuery::tau() const {
  return 2.0 * kPi * length / (static_cast<double>(level) * circumference);
}

double g_star_half_integer(const ConductanceQuery& q) {
  const double tau = q.tau();
  if (!(tau > 0.0)) throw NonPositiveTau();
  double sum = 0.0;
  for (int k = 0;; ++k) {
    const double l = k + 0.5;
    const double term = 2.0 * std::exp(-l * l * tau); // l and -l paired
    sum += term;
    if (k + 1 >= kMinTerms && term < q.tol * std::max(1.0, std::fabs(sum))) break;
  }
  return sum / std::sqrt(kPi * tau);
}

double g_star_dual(const ConductanceQuery& q) {
  const double tau = q.tau();
  if (!(tau > 0.0)) throw NonPositiveTau();
  double sum = 1.0; // m = 0
  double sign = -1.0;
  for (int m = 1;; ++m) {
    const double term = 2.0 * std::exp(-kPi * kPi * m * m / tau);
    sum += sign * term;
    sign = -sign;
    if (m >= kMinTerms && term < q.tol * std::max(1.0, std::fabs(sum))) break;
  }
  return sum / tau;
}

double g_star(double tau, int n, double tol) {
  const ConductanceQuery q = ConductanceQuery::from_tau(tau, n, tol);
  // The dual series collapses for small tau, the half-integer one for large.
  return tau < kPi ? g_star_dual(q) : g_star_half_integer(q);
}

double sigma_xx_star(int n) {
  if (n < 1) throw std::invalid_argument("level must be a positive integer");
  return n / (2.0 * kPi);
}

SquareDeviationReport square_deviation_check() {
  SquareDeviationReport r;
  const ConductanceQuery q(1.0, 1.0, 4); // tau = pi/2
  r.g_square = g_star_half_integer(q);
  r.gap = std::fabs(r.g_square - r.reference);
  r.gap_over_band = r.gap / r.band;
  r.exceeds_band = r.gap > r.band;
  r.leading_correction =
      1.0 - 2.0 * std::exp(-2.0 * kPi) + 2.0 * std::exp(-8.0 * kPi);
  return r;
}

double kt_free_energy(int n, double ratio) {
  if (n < 1) throw std::invalid_argument("level must be a positive integer");
  if (!(ratio > 1.0)) throw RatioNotGreaterThanOne();
  return 0.5 * (n - 4) * std::log(ratio);
}

double kt_vortex_energy(int n, double ratio) {
  if (n < 1) throw std::invalid_argument("level must be a positive integer");
  if (!(ratio > 1.0)) throw RatioNotGreaterThanOne();
  return 0.5 * n * std::log(ratio);
}

VortexConfiguration::VortexConfiguration(std::vector<Vortex> v, double a_uv, double a_ir)
    : vortices(std::move(v)), cutoff_uv(a_uv), cutoff_ir(a_ir) {
  if (!(a_uv > 0.0) || !(a_ir > a_uv))
    throw std::invalid_argument("cutoffs must satisfy 0 < a_uv < a_ir");
  for (const auto& vx : vortices)
    if (vx.charge == 0) throw std::invalid_argument("vortex charges must be nonzero integers");
}

double vortex_count_action(const VortexConfiguration& cfg, double delta_plus) {
  long total = 0;
  for (const auto& v : cfg.vortices) total += v.charge;
  return delta_plus * static_cast<double>(total);
}

std::string conductance_curve_csv(double tau_min, double tau_max, int points, int n, double tol) {
  if (!(tau_min > 0.0) || !(tau_max > tau_min)) throw NonPositiveTau();
  if (points < 2) throw std::invalid_argument("need at least two points");
  std::ostringstream os;
  os << "tau,g_half,g_dual,abs_diff\n";
  for (int i = 0; i < points; ++i) {
    const double f = static_cast<double>(i) / (points - 1);
    const double tau = tau_min * std::pow(tau_max / tau_min, f);
    const ConductanceQuery q = ConductanceQuery::from_tau(tau, n, tol);
    const double gh = g_star_half_integer(q);
    const double gd = g_star_dual(q);
    os << fmt(tau) << "," << fmt(gh) << "," << fmt(gd) << "," << fmt(std::fabs(gh - gd)) << "\n";
  }
  return os.str();
}

}  // namespace opeflow::obs
