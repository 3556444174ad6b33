#pragma once

#include <array>
#include <cctype>
#include <climits>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <vector>

#include "opeflow/rational.hpp"

namespace opeflow::ope {

/// Formal symbols of the coefficient ring.  `Level` is the current-algebra
/// level n; `LogScale` stands for ln(a'/a) produced by annulus integrals;
/// `CutLo`/`CutHi` are the annulus radii themselves, needed only for the
/// power-law entries of the radial table.
enum class Sym : std::uint8_t {
  Level, Gamma, Delta, Lambda, Pi, LogScale, Area, CutLo, CutHi,
};

inline constexpr std::array<const char*, 9> kSymNames = {
    "n", "gamma", "delta", "lambda", "pi", "log_scale", "area", "cut_lo", "cut_hi"};

inline const char* sym_name(Sym s) { return kSymNames[static_cast<std::size_t>(s)]; }

inline std::optional<Sym> sym_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kSymNames.size(); ++i)
    if (name == kSymNames[i]) return static_cast<Sym>(i);
  return std::nullopt;
}

/// Product of symbol powers with integer (possibly negative) exponents,
/// kept sorted by symbol with no zero exponents.
struct Monomial {
  std::vector<std::pair<Sym, int>> factors;

  static Monomial unit() { return {}; }
  static Monomial of(Sym s, int exp = 1) {
    Monomial m;
    if (exp != 0) m.factors.push_back({s, exp});
    return m;
  }

  Monomial operator*(const Monomial& o) const {
    Monomial out;
    auto a = factors.begin(), b = o.factors.begin();
    while (a != factors.end() || b != o.factors.end()) {
      if (b == o.factors.end() || (a != factors.end() && a->first < b->first)) {
        out.factors.push_back(*a++);
      } else if (a == factors.end() || b->first < a->first) {
        out.factors.push_back(*b++);
      } else {
        const int e = a->second + b->second;
        if (e != 0) out.factors.push_back({a->first, e});
        ++a; ++b;
      }
    }
    return out;
  }

  int exponent(Sym s) const {
    for (const auto& [sym, e] : factors)
      if (sym == s) return e;
    return 0;
  }

  auto operator<=>(const Monomial&) const = default;
};

/// Laurent polynomial over Q in the symbols above: the exact coefficient
/// domain of every engine expression.  No floating point anywhere.
class CoeffPoly {
 public:
  CoeffPoly() = default;
  CoeffPoly(Rational r) { if (!r.is_zero()) terms_[Monomial::unit()] = r; }
  CoeffPoly(std::int64_t n) : CoeffPoly(Rational(n)) {}

  static CoeffPoly sym(Sym s, int exp = 1) {
    CoeffPoly p;
    p.terms_[Monomial::of(s, exp)] = Rational(1);
    return p;
  }
  static CoeffPoly mono(Rational r, Monomial m) {
    CoeffPoly p;
    if (!r.is_zero()) p.terms_[std::move(m)] = r;
    return p;
  }

  bool is_zero() const { return terms_.empty(); }
  const std::map<Monomial, Rational>& terms() const { return terms_; }

  friend CoeffPoly operator+(const CoeffPoly& a, const CoeffPoly& b) {
    CoeffPoly out = a;
    for (const auto& [m, r] : b.terms_) out.add(m, r);
    return out;
  }
  friend CoeffPoly operator-(const CoeffPoly& a, const CoeffPoly& b) {
    CoeffPoly out = a;
    for (const auto& [m, r] : b.terms_) out.add(m, -r);
    return out;
  }
  friend CoeffPoly operator-(const CoeffPoly& a) { return CoeffPoly() - a; }
  friend CoeffPoly operator*(const CoeffPoly& a, const CoeffPoly& b) {
    CoeffPoly out;
    for (const auto& [ma, ra] : a.terms_)
      for (const auto& [mb, rb] : b.terms_) out.add(ma * mb, ra * rb);
    return out;
  }
  CoeffPoly& operator+=(const CoeffPoly& o) { return *this = *this + o; }
  CoeffPoly& operator-=(const CoeffPoly& o) { return *this = *this - o; }
  CoeffPoly& operator*=(const CoeffPoly& o) { return *this = *this * o; }

  friend bool operator==(const CoeffPoly& a, const CoeffPoly& b) { return a.terms_ == b.terms_; }

  /// Substitutes an exact rational for one symbol.
  CoeffPoly substituted(Sym s, Rational v) const {
    CoeffPoly out;
    for (const auto& [m, r] : terms_) {
      Monomial rest;
      Rational scale = r;
      for (const auto& [sym, e] : m.factors) {
        if (sym == s) scale *= v.pow(e);
        else rest.factors.push_back({sym, e});
      }
      out.add(rest, scale);
    }
    return out;
  }

  /// Extracts the sub-polynomial multiplying sym^exp (the symbol removed).
  CoeffPoly coefficient_of(Sym s, int exp) const {
    CoeffPoly out;
    for (const auto& [m, r] : terms_) {
      if (m.exponent(s) != exp) continue;
      Monomial rest;
      for (const auto& [sym, e] : m.factors)
        if (sym != s) rest.factors.push_back({sym, e});
      out.add(rest, r);
    }
    return out;
  }

  int max_exponent(Sym s) const {
    int best = INT_MIN;
    for (const auto& [m, r] : terms_) best = std::max(best, m.exponent(s));
    return terms_.empty() ? 0 : best;
  }

  /// Numeric evaluation with pi bound to its double value and every other
  /// symbol supplied by the caller; throws if a symbol is left unbound.
  double value(const std::map<Sym, double>& binding) const {
    double total = 0.0;
    for (const auto& [m, r] : terms_) {
      double term = r.value();
      for (const auto& [sym, e] : m.factors) {
        double v;
        if (auto it = binding.find(sym); it != binding.end()) v = it->second;
        else if (sym == Sym::Pi) v = 3.14159265358979323846;
        else throw std::invalid_argument(std::string("unbound symbol ") + sym_name(sym));
        term *= std::pow(v, e);
      }
      total += term;
    }
    return total;
  }

  /// Canonical text form, e.g. "-1/16*delta^2 + 1/16*gamma*delta^2".
  std::string str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, r] : terms_) {
      const bool neg = r < Rational(0);
      if (first) os << r.str();
      else os << (neg ? " - " : " + ") << (neg ? (-r).str() : r.str());
      first = false;
      for (const auto& [sym, e] : m.factors) {
        os << "*" << sym_name(sym);
        if (e != 1) os << "^" << e;
      }
    }
    return os.str();
  }

  /// Inverse of str(); whitespace-tolerant, strict about everything else.
  static CoeffPoly parse(std::string_view text);

 private:
  std::map<Monomial, Rational> terms_;

  void add(const Monomial& m, const Rational& r) {
    if (r.is_zero()) return;
    auto [it, fresh] = terms_.try_emplace(m, r);
    if (!fresh) {
      it->second += r;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }
};

inline CoeffPoly CoeffPoly::parse(std::string_view text) {
  CoeffPoly out;
  std::size_t i = 0;
  const auto skip = [&] { while (i < text.size() && text[i] == ' ') ++i; };
  skip();
  if (text.substr(i) == "0") return out;
  bool negate = false;
  while (i < text.size()) {
    skip();
    // term := rational ("*" sym ("^" int)?)*
    std::size_t j = i;
    while (j < text.size() && (std::isdigit(static_cast<unsigned char>(text[j])) ||
                               text[j] == '-' || text[j] == '/'))
      ++j;
    Rational r = Rational::parse(text.substr(i, j - i));
    if (negate) r = -r;
    i = j;
    Monomial m;
    while (i < text.size() && text[i] == '*') {
      ++i;
      std::size_t k = i;
      while (k < text.size() && (std::isalpha(static_cast<unsigned char>(text[k])) || text[k] == '_'))
        ++k;
      const auto sym = sym_from_name(text.substr(i, k - i));
      if (!sym) throw std::invalid_argument("unknown symbol in coefficient");
      i = k;
      int e = 1;
      if (i < text.size() && text[i] == '^') {
        ++i;
        std::size_t p = i;
        while (p < text.size() && (std::isdigit(static_cast<unsigned char>(text[p])) || text[p] == '-'))
          ++p;
        e = std::stoi(std::string(text.substr(i, p - i)));
        i = p;
      }
      m = m * Monomial::of(*sym, e);
    }
    out.add(m, r);
    skip();
    if (i == text.size()) break;
    if (text[i] == '+') { negate = false; ++i; }
    else if (text[i] == '-') { negate = true; ++i; }
    else throw std::invalid_argument("bad coefficient syntax");
  }
  return out;
}

}  // namespace opeflow::ope
