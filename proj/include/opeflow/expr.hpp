#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

#include "opeflow/coeff.hpp"

namespace opeflow::ope {

/// Atoms that may appear inside a supertrace word.  Currents carry the
/// chirality in the kind; fields and currents carry a point label.
enum class AtomKind : std::uint8_t {
  Param,           // named constant parameter supermatrix
  Identity,        // unit matrix; STr(1) = 0 in gl(r|r)
  Iso,             // intertwiner between right and left movers
  IsoInv,
  HoloCurrent,     // J, depends on the holomorphic coordinate only
  AntiholoCurrent, // Jbar
  Fundamental,     // M
  FundamentalInv,  // M^{-1}
  Stress,          // T; expands to the current bilinear on demand
};

struct Atom {
  AtomKind kind = AtomKind::Identity;
  int point = 0;    // 0 is the base point of the expansion
  int origin = 0;   // factor index for linked-cluster bookkeeping
  std::string name; // Param only

  bool is_current() const {
    return kind == AtomKind::HoloCurrent || kind == AtomKind::AntiholoCurrent;
  }
  bool is_fundamental() const {
    return kind == AtomKind::Fundamental || kind == AtomKind::FundamentalInv;
  }
  friend auto operator<=>(const Atom&, const Atom&) = default;
};

Atom param_atom(std::string name, int origin = 0);
Atom identity_atom();
Atom iso_atom(bool inverse, int origin = 0);
Atom current_atom(bool antiholo, int point, int origin = 0);
Atom fundamental_atom(bool inverse, int point, int origin = 0);

/// One supertrace of a cyclic word.  Equality is up to cyclic rotation and
/// the unit/inverse cancellations; grading signs are absorbed into the
/// index-free contraction rules, so the word never carries explicit indices.
struct TraceChain {
  std::vector<Atom> word;

  /// Applies the word rewrites (drop units, cancel I*Iinv and same-point
  /// M*Minv cyclically) and rotates to the canonical representative.
  /// Returns false when the chain is identically zero (only units left).
  bool canonicalize();

  friend auto operator<=>(const TraceChain&, const TraceChain&) = default;
};

/// (z_p - w)^-holo (zbar_p - wbar)^-anti attached to probe point `point`.
struct PoleFactor {
  int point = 0;
  int holo = 0;
  int anti = 0;
  friend auto operator<=>(const PoleFactor&, const PoleFactor&) = default;
};

/// One term of an expansion: exact coefficient, pole monomial, a formal
/// derivative prefix, the normal-ordered product of chains, and the
/// partition of original factors induced by the contractions so far.
struct OperatorTerm {
  CoeffPoly coeff;
  std::vector<PoleFactor> pole;
  int d_holo = 0;
  int d_anti = 0;
  std::vector<TraceChain> chains;
  std::vector<int> parts; // canonical partition label per factor id

  bool connected() const;
  bool is_finite() const { return pole.empty(); }
  int pole_holo(int point) const;
  int pole_anti(int point) const;

  /// Identity of everything except the coefficient; terms merge on this key.
  auto key() const { return std::tie(pole, d_holo, d_anti, chains, parts); }
};

/// A formal sum of operator terms, closed under addition and scalar
/// multiplication; equality is decidable after canonicalization.
class Expansion {
 public:
  Expansion() = default;

  const std::vector<OperatorTerm>& terms() const { return terms_; }
  std::vector<OperatorTerm>& mutable_terms() { return terms_; }
  int factors() const { return n_factors_; }
  void set_factors(int n) { n_factors_ = n; }

  /// Points 1..k in insertion order; index 0 is the unnamed base point.
  const std::vector<std::string>& point_names() const { return point_names_; }
  const std::vector<int>& point_depths() const { return point_depths_; }
  int add_point(std::string name, bool outermost);
  int point_index(std::string_view name) const; // 0 when not found
  void copy_point_structure(const Expansion& from) {
    point_names_ = from.point_names_;
    point_depths_ = from.point_depths_;
  }

  void push(OperatorTerm t) { terms_.push_back(std::move(t)); }
  void canonicalize();

  Expansion& operator+=(const Expansion& o);
  Expansion& operator*=(const CoeffPoly& c);

  friend bool operator==(const Expansion& a, const Expansion& b);

  /// Comparison of the physical operator content only: factor origins and
  /// the linked-cluster partition are scrubbed before comparing.
  static bool equal_as_operators(const Expansion& a, const Expansion& b);

  /// Sum of coefficients over terms whose pole and chains match the given
  /// pattern (origins scrubbed on both sides; partitions ignored).
  CoeffPoly coefficient_of(const std::vector<PoleFactor>& pole,
                           const std::vector<TraceChain>& chains,
                           int d_holo = 0, int d_anti = 0) const;

  /// Terms whose normal-ordered chain content matches the pattern, with any
  /// pole (origins scrubbed for the comparison, terms returned intact).
  Expansion filtered_by_chains(const std::vector<TraceChain>& pattern) const;

  std::string str() const;
  std::string to_json() const;
  static Expansion from_text(std::string_view text);
  static Expansion from_json(std::string_view text);

 private:
  std::vector<OperatorTerm> terms_;
  int n_factors_ = 0;
  std::vector<std::string> point_names_;
  std::vector<int> point_depths_; // larger = radially farther out
};

/// The parity map of the theory: swaps chiralities, M with M^{-1}, I with
/// I^{-1}, pole exponents, and the derivative prefix.  An involution.
Expansion parity_transform(const Expansion& e);

std::string atom_token(const Atom& a, const std::vector<std::string>& names);
Atom atom_from_token(std::string_view token, const std::vector<std::string>& names);

}  // namespace opeflow::ope
