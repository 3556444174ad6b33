#include "opeflow/beta.hpp"

#include <stdexcept>

namespace opeflow::ope {

namespace {

std::vector<TraceChain> chains_two_trace() {
  return {TraceChain{{current_atom(false, 0)}}, TraceChain{{current_atom(true, 0)}}};
}
std::vector<TraceChain> chains_single_trace() {
  return {TraceChain{{current_atom(false, 0), iso_atom(false), current_atom(true, 0),
                      iso_atom(true)}}};
}
std::vector<TraceChain> chains_fundamental() {
  return {TraceChain{{fundamental_atom(false, 0)}}};
}

/// (2 pi n^2)^{-k}
CoeffPoly inv_norm(int k) {
  Rational r(1);
  for (int i = 0; i < k; ++i) r = r * Rational(1, 2);
  return CoeffPoly::mono(r, Monomial::of(Sym::Pi, -k) * Monomial::of(Sym::Level, -2 * k));
}

bool singular_free(const Expansion& e) {
  for (const auto& t : e.terms())
    if (!t.pole.empty()) return false;
  return true;
}

Rational as_rational(const CoeffPoly& p) {
  if (p.is_zero()) return Rational(0);
  if (p.terms().size() != 1 || !p.terms().begin()->first.factors.empty())
    throw std::logic_error("coefficient did not reduce to a pure rational: " + p.str());
  return p.terms().begin()->second;
}

}  // namespace

BetaSystem beta_system() {
  BetaSystem out;
  const CoeffPoly delta = CoeffPoly::sym(Sym::Delta);
  const CoeffPoly gamma = CoeffPoly::sym(Sym::Gamma);
  const CoeffPoly lambda = CoeffPoly::sym(Sym::Lambda);
  // The cutoff-raising step: d/dln a of int_{|v|>a} d^2v/|v|^2 is -2pi, and
  // matching against S = (1/2pi n^2) int (gamma O_A + delta O_I) multiplies
  // the re-exponentiated coefficient by 2 pi n^2.
  const CoeffPoly raise =
      CoeffPoly::mono(Rational(-4), Monomial::of(Sym::Pi, 2) * Monomial::of(Sym::Level, 2));

  // --- O_I(z) x O_I(0): the delta^2 source feeding O_A.
  {
    Expansion pair = angular_average(connected_part(ope(
        op_single_trace_current(), op_single_trace_current(), RadialOrder::FirstOutermost, "z")));
    const int z = pair.point_index("z");
    out.pair_pole_coeff = pair.coefficient_of({{z, 1, 1}}, chains_two_trace());
  }

  // --- O_I(u) x O_I(v) x O_A(0): the delta^2 gamma counter-flow.
  {
    Expansion inner = ope(op_single_trace_current(), op_two_trace_current(),
                          RadialOrder::FirstOutermost, "v");
    Expansion full = ope(op_single_trace_current(), inner, RadialOrder::FirstOutermost, "u");
    Expansion reduced = angular_average(connected_part(full));
    Expansion target = reduced.filtered_by_chains(chains_two_trace());
    Expansion integrated = radial_integrate(target, RadialRegion::exterior("u", "v"));
    const int v = integrated.point_index("v");
    // With the 1/2! of the Taylor series and the two radial orderings this
    // is exactly the (1/2!)(int O_I)^2 O_A coefficient.
    out.triple_oa_integrated = integrated.coefficient_of({{v, 1, 1}}, chains_two_trace());
  }

  // --- O_I(u) x O_I(v) x O_I(0): the cubic flow of delta itself.
  CoeffPoly delta_route;
  {
    Expansion inner = ope(op_single_trace_current(), op_single_trace_current(),
                          RadialOrder::FirstOutermost, "v");
    Expansion full = ope(op_single_trace_current(), inner, RadialOrder::FirstOutermost, "u");
    Expansion reduced = angular_average(connected_part(full));
    const int u = reduced.point_index("u");
    out.triple_oi_pole_coeff = reduced.coefficient_of({{u, 2, 2}}, chains_single_trace());
    Expansion target = reduced.filtered_by_chains(chains_single_trace());
    Expansion integrated = radial_integrate(target, RadialRegion::exterior("u", "v"));
    const int v = integrated.point_index("v");
    delta_route = integrated.coefficient_of({{v, 1, 1}}, chains_single_trace());

    // Exchange u <-> v: nest the product in the opposite radial order and
    // integrate the then-outer point; the coefficient must agree.
    Expansion inner2 = ope(op_single_trace_current(), op_single_trace_current(),
                           RadialOrder::FirstOutermost, "u");
    Expansion full2 = ope(op_single_trace_current(), inner2, RadialOrder::FirstOutermost, "v");
    Expansion reduced2 = angular_average(connected_part(full2));
    Expansion target2 = reduced2.filtered_by_chains(chains_single_trace());
    Expansion integrated2 = radial_integrate(target2, RadialRegion::exterior("v", "u"));
    const int u2 = integrated2.point_index("u");
    const CoeffPoly other = integrated2.coefficient_of({{u2, 1, 1}}, chains_single_trace());
    out.radial_order_symmetric = (other == delta_route);
  }

  // --- Marginality of the two-trace deformation: no singular terms at all.
  {
    Expansion self = ope(op_two_trace_current(), op_two_trace_current(),
                         RadialOrder::FirstOutermost, "z");
    out.two_trace_self_finite = singular_free(self);
  }

  // --- Ruled-out kinetic perturbation: stress-tensor mixing drives gamma.
  {
    Expansion with_t = ope_with_T(op_dressed_current(), "z");
    const int z = with_t.point_index("z");
    out.stress_mixing_coeff = with_t.coefficient_of({{z, 2, 0}}, chains_two_trace());
    Expansion shell = angular_average(ope(op_two_trace_current(), op_dressed_current(),
                                          RadialOrder::FirstOutermost, "z"));
    out.lambda_flow_gamma_blind = singular_free(shell);
  }

  // --- No O_I is generated by O_I^3 x O_A at the tracked order in 1/n.
  {
    Expansion q1 = ope(op_single_trace_current(), op_two_trace_current(),
                       RadialOrder::FirstOutermost, "w");
    Expansion q2 = ope(op_single_trace_current(), q1, RadialOrder::FirstOutermost, "v");
    Expansion q3 = ope(op_single_trace_current(), q2, RadialOrder::FirstOutermost, "u");
    Expansion reduced = angular_average(connected_part(q3));
    Expansion sel = reduced.filtered_by_chains(chains_single_trace());
    int deg = 0;
    bool any = false;
    for (const auto& t : sel.terms()) {
      any = true;
      deg = std::max(deg, t.coeff.max_exponent(Sym::Level));
    }
    out.quartic_max_level_degree = any ? deg : 0;
    // The quartic prefactor carries (2 pi n^2)^{-4}; an O_I contribution of
    // order 1/n^2 would need a coefficient of level degree six.
    out.quartic_feeds_single_trace = any && deg >= 6;
  }

  // --- Assembly in the S = (1/2pi n^2) int (gamma O_A + delta O_I) convention.
  const CoeffPoly k_gamma =
      CoeffPoly::mono(Rational(1, 2), Monomial()) * delta * delta * inv_norm(2) *
          out.pair_pole_coeff -
      CoeffPoly(1) * delta * delta * gamma * inv_norm(3) * out.triple_oa_integrated;
  out.dgamma = raise * k_gamma;

  const CoeffPoly k_delta = -CoeffPoly::mono(Rational(1, 6), Monomial()) * delta * delta * delta *
                            inv_norm(3) * CoeffPoly(2) * delta_route;
  out.ddelta = raise * k_delta;

  out.dgamma_lambda =
      CoeffPoly(-2) * CoeffPoly::mono(Rational(2), Monomial::of(Sym::Pi, 1) *
                                                       Monomial::of(Sym::Level, 2)) *
      out.stress_mixing_coeff * lambda;

  return out;
}

std::pair<Rational, Rational> scaling_dimension_M(const Rational& gamma, int n) {
  if (n < 1) throw std::invalid_argument("level must be a positive integer");
  CoeffPoly h = scaling_dimension_M_symbolic();
  h = h.substituted(Sym::Level, Rational(n)).substituted(Sym::Gamma, gamma);
  const Rational value = as_rational(h);
  return {value, value};
}

CoeffPoly scaling_dimension_M_symbolic() {
  // Undeformed weight from the stress tensor acting on M.
  Expansion with_t = ope_with_T(op_fundamental(), "z");
  const int z = with_t.point_index("z");
  const CoeffPoly h0 = with_t.coefficient_of({{z, 2, 0}}, chains_fundamental());

  // Anomalous piece: O_A(z) M(0) = c M(0)/|z|^2, and the annulus integral in
  // -S_gamma M(0) turns c into the per-log-scale weight shift gamma c / n^2,
  // split evenly between the two chiralities.
  Expansion oam = ope(op_two_trace_current(), op_fundamental(), RadialOrder::FirstOutermost, "z");
  const int zz = oam.point_index("z");
  const CoeffPoly c = oam.coefficient_of({{zz, 1, 1}}, chains_fundamental());
  Expansion logint = radial_integrate(angular_average(oam).filtered_by_chains(chains_fundamental()),
                                      RadialRegion::annulus("z"));
  const CoeffPoly per_log =
      logint.coefficient_of({}, chains_fundamental()).coefficient_of(Sym::LogScale, 1);
  if (!(per_log == CoeffPoly::mono(Rational(2), Monomial::of(Sym::Pi, 1)) * c))
    throw std::logic_error("annulus integral disagrees with the pole coefficient");
  // Weight shift per chirality: (gamma / 2 pi n^2) * per_log / 2.
  const CoeffPoly shift = CoeffPoly::sym(Sym::Gamma) * inv_norm(1) * per_log *
                          CoeffPoly::mono(Rational(1, 2), Monomial());
  return h0 + shift;
}

double delta_q(double q, int n) {
  if (n < 1) throw std::invalid_argument("level must be a positive integer");
  return q * (1.0 - q) / static_cast<double>(n);
}

}  // namespace opeflow::ope
