#pragma once

#include <complex>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace opeflow::rg {

struct BlowupReached : std::runtime_error {
  explicit BlowupReached(const std::string& what) : std::runtime_error(what) {}
};
struct StepTooLarge : std::runtime_error {
  explicit StepTooLarge(const std::string& what) : std::runtime_error(what) {}
};

/// The flow state (gamma, delta) at level n.  delta may be complex; the two
/// physically relevant axes (real and purely imaginary) are invariant under
/// the flow and keep gamma real.
struct CouplingState {
  double gamma = 1.0;
  std::complex<double> delta{0.0, 0.0};
  int level = 4;

  CouplingState() = default;
  CouplingState(double g, std::complex<double> d, int n);
};

struct BetaValue {
  double dgamma = 0.0;
  std::complex<double> ddelta{0.0, 0.0};
};

/// dgamma/dt = -(delta^2/n^2)(1 - gamma), ddelta/dt = delta^3/(3 n^2).
BetaValue beta_eval(const CouplingState& s);

/// Finite-t singularity of the real-axis flow, 3n^2/(2 delta0^2); +inf for
/// delta0 zero or off the real axis.
double blowup_time(const CouplingState& s0);

/// delta(t)^-2 = delta0^-2 - 2t/(3n^2),
/// (1-gamma)(t) = (1-gamma0) (1 - 2 delta0^2 t/(3n^2))^{-3/2}.
CouplingState closed_form(const CouplingState& s0, double t);

struct FlowTrajectory {
  std::vector<double> times;
  std::vector<CouplingState> states;
  double dt = 0.0;
  std::string integrator = "rk4";

  const CouplingState& back() const { return states.back(); }
};

struct IntegrateOptions {
  double error_bound = 1e-6;  // per-step Richardson sentinel
  double blowup_guard = 0.95; // refuse to integrate past this fraction of t_blowup
};

/// Fixed-step classical fourth-order integration with a step-doubling error
/// sentinel.  Throws StepTooLarge when the sentinel trips and BlowupReached
/// when t_end runs into the guarded singularity.
FlowTrajectory integrate(const CouplingState& s0, double t_end, double dt,
                         const IntegrateOptions& opts = {});

enum class Stability { Stable, Unstable, Marginal };
const char* stability_name(Stability s);

/// Monotone growth of the distance to the fixed point (1, 0) over the
/// horizon means Unstable, monotone decay Stable, anything else Marginal.
Stability classify_stability(const CouplingState& s0, double horizon);

/// CSV columns: t,gamma,re_delta,im_delta
std::string trajectory_csv(const FlowTrajectory& tr);

/// Phase-portrait sweep over initial conditions, one trajectory per row
/// block, with a leading trajectory id column.
std::string sweep_csv(const std::vector<CouplingState>& seeds, double t_end, double dt);

}  // namespace opeflow::rg
