#pragma once

#include "opeflow/engine.hpp"

namespace opeflow::ope {

/// The renormalization flow extracted from the operator products of the
/// current-current perturbations, with the level kept symbolic.
struct BetaSystem {
  CoeffPoly dgamma;         // -(delta^2/n^2)(1-gamma)
  CoeffPoly ddelta;         // delta^3/(3n^2)
  CoeffPoly dgamma_lambda;  // 4 pi n lambda, from the ruled-out perturbation

  // Audited intermediates, all exact.
  CoeffPoly pair_pole_coeff;      // O_I x O_I -> this * O_A / |z|^2         (= 2)
  CoeffPoly triple_oa_integrated; // (1/2!)(int O_I)^2 O_A -> this / |v|^2   (= 2 pi n^2)
  CoeffPoly triple_oi_pole_coeff; // O_I x :O_I O_I: -> this * O_I / |u|^4   (= 2 n^2)
  CoeffPoly stress_mixing_coeff;  // T x O -> O/z^2 + this * O_A / z^2       (= -1/n)

  bool two_trace_self_finite = false;      // O_A x O_A has no singular part
  bool lambda_flow_gamma_blind = false;    // e^{-S_gamma} leaves O finite
  bool radial_order_symmetric = false;     // u <-> v exchange invariance
  bool quartic_feeds_single_trace = true;  // O_I from O_I^3 x O_A at order 1/n^2
  int quartic_max_level_degree = 0;
};

/// Runs the whole derivation: pairwise and triple operator products,
/// linked-cluster reduction, angular average, radial integration, and
/// re-exponentiation bookkeeping in the conventions of the perturbation
/// S = (1/2pi n^2) int (gamma O_A + delta O_I).
BetaSystem beta_system();

/// Conformal weight (h, hbar) of the fundamental field at deformation
/// gamma, assembled from the engine-computed stress-tensor weight and the
/// engine-computed O_A x M pole coefficient; nothing is hard-coded.
std::pair<Rational, Rational> scaling_dimension_M(const Rational& gamma, int n);

/// Same, with gamma and the level kept symbolic.
CoeffPoly scaling_dimension_M_symbolic();

/// Multifractal spectrum of wave-function moments, q(1-q)/n.
double delta_q(double q, int n);

}  // namespace opeflow::ope
