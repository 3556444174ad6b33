#include "opeflow/rgflow.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace opeflow::rg {

namespace {

bool finite(double v) { return std::isfinite(v); }

double fixed_point_distance(const CouplingState& s) {
  const double dg = s.gamma - 1.0;
  return std::sqrt(dg * dg + std::norm(s.delta));
}

struct Deriv {
  double g;
  std::complex<double> d;
};

Deriv derivative(const CouplingState& s) {
  const double n2 = static_cast<double>(s.level) * s.level;
  const std::complex<double> d2 = s.delta * s.delta;
  // On the real and imaginary axes delta^2 is real and gamma stays real.
  return {(-d2 * (1.0 - s.gamma)).real() / n2, s.delta * d2 / (3.0 * n2)};
}

CouplingState advance(const CouplingState& s, const Deriv& k, double h) {
  CouplingState out = s;
  out.gamma += h * k.g;
  out.delta += h * k.d;
  return out;
}

CouplingState rk4_step(const CouplingState& s, double h) {
  const Deriv k1 = derivative(s);
  const Deriv k2 = derivative(advance(s, k1, h / 2));
  const Deriv k3 = derivative(advance(s, k2, h / 2));
  const Deriv k4 = derivative(advance(s, k3, h));
  CouplingState out = s;
  out.gamma += h / 6.0 * (k1.g + 2 * k2.g + 2 * k3.g + k4.g);
  out.delta += h / 6.0 * (k1.d + 2.0 * k2.d + 2.0 * k3.d + k4.d);
  return out;
}

double state_distance(const CouplingState& a, const CouplingState& b) {
  const double dg = a.gamma - b.gamma;
  return std::sqrt(dg * dg + std::norm(a.delta - b.delta));
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

}  // namespace

CouplingState::CouplingState(double g, std::complex<double> d, int n)
    : gamma(g), delta(d), level(n) {
  if (n < 1) throw std::invalid_argument("level must be a positive integer");
  if (!finite(g) || !finite(d.real()) || !finite(d.imag()))
    throw std::invalid_argument("coupling state must be finite");
}

BetaValue beta_eval(const CouplingState& s) {
  const Deriv k = derivative(s);
  return {k.g, k.d};
}

double blowup_time(const CouplingState& s0) {
  if (s0.delta.imag() != 0.0 || s0.delta.real() == 0.0)
    return std::numeric_limits<double>::infinity();
  const double n2 = static_cast<double>(s0.level) * s0.level;
  return 3.0 * n2 / (2.0 * s0.delta.real() * s0.delta.real());
}

CouplingState closed_form(const CouplingState& s0, double t) {
  const double tb = blowup_time(s0);
  if (t >= tb) throw BlowupReached("closed form evaluated at or past the blow-up time");
  const double n2 = static_cast<double>(s0.level) * s0.level;
  const std::complex<double> shrink = 1.0 - 2.0 * s0.delta * s0.delta * t / (3.0 * n2);
  CouplingState out = s0;
  out.delta = s0.delta / std::sqrt(shrink);
  out.gamma = 1.0 - ((1.0 - s0.gamma) / std::pow(shrink, 1.5)).real();
  return out;
}

FlowTrajectory integrate(const CouplingState& s0, double t_end, double dt,
                         const IntegrateOptions& opts) {
  if (dt <= 0.0) throw std::invalid_argument("step size must be positive");
  if (t_end < 0.0) throw std::invalid_argument("t_end must be nonnegative");
  const double tb = blowup_time(s0);
  if (t_end > opts.blowup_guard * tb)
    throw BlowupReached("t_end exceeds the blow-up guard for a real coupling");

  FlowTrajectory tr;
  tr.dt = dt;
  tr.times.push_back(0.0);
  tr.states.push_back(s0);
  CouplingState y = s0;
  double t = 0.0;
  while (t < t_end - 1e-12 * std::max(1.0, t_end)) {
    const double h = std::min(dt, t_end - t);
    const CouplingState full = rk4_step(y, h);
    const CouplingState halves = rk4_step(rk4_step(y, h / 2), h / 2);
    if (state_distance(full, halves) > opts.error_bound)
      throw StepTooLarge("local error sentinel exceeded; reduce dt");
    y = full;
    t += h;
    tr.times.push_back(t);
    tr.states.push_back(y);
  }
  return tr;
}

const char* stability_name(Stability s) {
  switch (s) {
    case Stability::Stable: return "Stable";
    case Stability::Unstable: return "Unstable";
    case Stability::Marginal: return "Marginal";
  }
  return "?";
}

Stability classify_stability(const CouplingState& s0, double horizon) {
  if (horizon <= 0.0) throw std::invalid_argument("horizon must be positive");
  constexpr int kSamples = 400;
  FlowTrajectory tr;
  try {
    tr = integrate(s0, horizon, horizon / kSamples);
  } catch (const BlowupReached&) {
    return Stability::Unstable; // the real-axis flow runs into its singularity
  } catch (const StepTooLarge&) {
    return Stability::Unstable;
  }
  const double d0 = fixed_point_distance(tr.states.front());
  const double dN = fixed_point_distance(tr.states.back());
  const double eps = 1e-13 * std::max(1.0, d0);
  bool up = true, down = true;
  for (std::size_t i = 1; i < tr.states.size(); ++i) {
    const double a = fixed_point_distance(tr.states[i - 1]);
    const double b = fixed_point_distance(tr.states[i]);
    if (b < a - eps) up = false;
    if (b > a + eps) down = false;
  }
  if (up && dN > d0 + eps) return Stability::Unstable;
  if (down && dN < d0 - eps) return Stability::Stable;
  return Stability::Marginal;
}

std::string trajectory_csv(const FlowTrajectory& tr) {
  std::ostringstream os;
  os << "t,gamma,re_delta,im_delta\n";
  for (std::size_t i = 0; i < tr.times.size(); ++i) {
    const auto& s = tr.states[i];
    os << fmt(tr.times[i]) << "," << fmt(s.gamma) << "," << fmt(s.delta.real()) << ","
       << fmt(s.delta.imag()) << "\n";
  }
  return os.str();
}

std::string sweep_csv(const std::vector<CouplingState>& seeds, double t_end, double dt) {
  std::ostringstream os;
  os << "trajectory,t,gamma,re_delta,im_delta\n";
  for (std::size_t k = 0; k < seeds.size(); ++k) {
    const FlowTrajectory tr = integrate(seeds[k], t_end, dt);
    for (std::size_t i = 0; i < tr.times.size(); ++i) {
      const auto& s = tr.states[i];
      os << k << "," << fmt(tr.times[i]) << "," << fmt(s.gamma) << "," << fmt(s.delta.real())
         << "," << fmt(s.delta.imag()) << "\n";
    }
  }
  return os.str();
}

}  // namespace opeflow::rg
