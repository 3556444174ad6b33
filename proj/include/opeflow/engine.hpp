#pragma once

#include <stdexcept>
#include <string>

#include "opeflow/expr.hpp"

namespace opeflow::ope {

struct UnknownVocabulary : std::invalid_argument {
  explicit UnknownVocabulary(const std::string& what) : std::invalid_argument(what) {}
};
struct DivergentIntegral : std::runtime_error {
  explicit DivergentIntegral(const std::string& what) : std::runtime_error(what) {}
};

/// Declares which operand of an operator product sits at larger modulus.
enum class RadialOrder { FirstOutermost, FirstInnermost };

enum class Side { Left, Right };

// --- Vocabulary -----------------------------------------------------------
// Single insertions at the base point.  ope() re-homes the first operand to
// a fresh probe point.  Parameter name "1" denotes the unit matrix.

Expansion op_current_trace(const std::string& param, bool antiholo = false); // STr(A J)
Expansion op_two_trace_current();                  // STr J * STr Jbar (Gade-Wegner type)
Expansion op_single_trace_current();               // STr(J I Jbar I^-1)
Expansion op_dressed_current();                    // STr(J M Jbar M^-1)
Expansion op_fundamental();                        // bare M (bookkeeping slot implicit)
Expansion op_fundamental_trace(const std::string& param); // STr(M B)
Expansion op_stress_tensor();                      // T

/// Options for the contraction driver.  `reverse_probe_order` exists to
/// check that the result does not depend on the order in which the probe's
/// constituent currents are expanded.
struct OpeOptions {
  bool reverse_probe_order = false;
};

/// Expands first(point) x second(0) into poles at the new probe point plus
/// normal-ordered finite remainders (leading Taylor term at the base point).
/// All pairwise contraction patterns between the probe's currents and the
/// base-point atoms are enumerated once; linked-cluster bookkeeping is
/// carried in the term partitions.  A lone stress tensor as first operand
/// expands through the current bilinear and is post-processed as in
/// ope_with_T.  Throws UnknownVocabulary for atoms without a rule.
Expansion ope(const Expansion& first, const Expansion& second, RadialOrder order,
              const std::string& point_name = "z", const OpeOptions& opts = {});

/// Singular part of T(z) x target(0): the weight terms at the double pole
/// are computed mechanically from the current bilinear; the simple pole is
/// the translation descendant, returned as a formal derivative of target.
Expansion ope_with_T(const Expansion& target, const std::string& point_name = "z");

/// J^A(z) J^B(w) (or the barred copy): second-order pole -n STr(AB), the
/// commutator current at the simple pole, and the finite remainder.
Expansion contract_current_current(const std::string& a, const std::string& b,
                                   bool antiholo = false);

/// Left: J^A(z) STr(M B) = -STr(A M B)/(z-w) + finite.
/// Right: Jbar^A(zbar) STr(B M) = +STr(B M A)/(zbar-wbar) + finite.
Expansion contract_current_M(const std::string& a, const std::string& b, Side side);

/// Drops terms whose factor partition is disconnected (they cancel against
/// the re-exponentiation of the perturbation series).  Idempotent.
Expansion connected_part(Expansion e);

/// Keeps only rotation-invariant pole monomials (equal holomorphic and
/// antiholomorphic exponents at every point).  Idempotent.
Expansion angular_average(Expansion e);

struct RadialRegion {
  enum class Kind { Exterior, Annulus };
  Kind kind = Kind::Annulus;
  std::string point;          // the point being integrated out
  std::string reference;      // Exterior: the fixed inner point
  bool lower_edge_at_zero = false; // Annulus only

  static RadialRegion exterior(std::string outer, std::string inner) {
    return {Kind::Exterior, std::move(outer), std::move(inner), false};
  }
  static RadialRegion annulus(std::string point, bool from_zero = false) {
    return {Kind::Annulus, std::move(point), {}, from_zero};
  }
};

/// Closed-form radial table: |u|^-4 over |u|>|v| becomes pi |v|^-2, |z|^-2
/// over an annulus becomes 2 pi ln(a'/a), a finite term picks up the region
/// area, higher powers produce explicit cutoff monomials.  Non-invariant
/// poles integrate to zero.  Throws DivergentIntegral where the table says
/// the region integral is infinite.
Expansion radial_integrate(const Expansion& e, const RadialRegion& region);

/// Substitutes a concrete level everywhere in the coefficients.
Expansion substitute_level(const Expansion& e, int n);

}  // namespace opeflow::ope
