#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <string_view>

namespace opeflow::ope {

struct RationalOverflow : std::overflow_error {
  RationalOverflow() : std::overflow_error("rational arithmetic overflow") {}
};

/// Exact rational number over int64, always stored normalized (gcd 1,
/// positive denominator).  Intermediate products go through __int128 and
/// throw RationalOverflow instead of wrapping; the engine's coefficients
/// stay tiny, so hitting the guard means a logic error upstream.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(std::int64_t n) : num_(n), den_(1) {}
  Rational(std::int64_t n, std::int64_t d) {
    if (d == 0) throw std::domain_error("rational with zero denominator");
    __int128 nn = n, dd = d;
    if (dd < 0) { nn = -nn; dd = -dd; }
    const __int128 g = gcd128(nn < 0 ? -nn : nn, dd);
    num_ = narrow(nn / (g ? g : 1));
    den_ = narrow(dd / (g ? g : 1));
    if (num_ == 0) den_ = 1;
  }

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  bool is_zero() const { return num_ == 0; }
  bool is_one() const { return num_ == 1 && den_ == 1; }
  double value() const { return static_cast<double>(num_) / static_cast<double>(den_); }

  friend Rational operator-(const Rational& x) { return make(-static_cast<__int128>(x.num_), x.den_); }
  friend Rational operator+(const Rational& a, const Rational& b) {
    return make(static_cast<__int128>(a.num_) * b.den_ + static_cast<__int128>(b.num_) * a.den_,
                static_cast<__int128>(a.den_) * b.den_);
  }
  friend Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return make(static_cast<__int128>(a.num_) * b.num_, static_cast<__int128>(a.den_) * b.den_);
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.is_zero()) throw std::domain_error("rational division by zero");
    return make(static_cast<__int128>(a.num_) * b.den_, static_cast<__int128>(a.den_) * b.num_);
  }
  Rational& operator+=(const Rational& x) { return *this = *this + x; }
  Rational& operator-=(const Rational& x) { return *this = *this - x; }
  Rational& operator*=(const Rational& x) { return *this = *this * x; }
  Rational& operator/=(const Rational& x) { return *this = *this / x; }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
  friend bool operator<(const Rational& a, const Rational& b) {
    return static_cast<__int128>(a.num_) * b.den_ < static_cast<__int128>(b.num_) * a.den_;
  }

  Rational pow(int e) const {
    Rational base = *this, out = 1;
    if (e < 0) { base = Rational(1) / base; e = -e; }
    while (e > 0) {
      if (e & 1) out *= base;
      base = (e > 1) ? base * base : base;
      e >>= 1;
    }
    return out;
  }

  std::string str() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
  }

  /// Parses "p" or "p/q"; throws std::invalid_argument on junk.
  static Rational parse(std::string_view s) {
    const auto slash = s.find('/');
    if (slash == std::string_view::npos) return Rational(to_i64(s));
    return Rational(to_i64(s.substr(0, slash)), to_i64(s.substr(slash + 1)));
  }

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;

  static __int128 gcd128(__int128 a, __int128 b) {
    while (b != 0) { const __int128 t = a % b; a = b; b = t; }
    return a;
  }
  static std::int64_t narrow(__int128 v) {
    if (v > INT64_MAX || v < INT64_MIN) throw RationalOverflow();
    return static_cast<std::int64_t>(v);
  }
  static Rational make(__int128 n, __int128 d) {
    if (d < 0) { n = -n; d = -d; }
    const __int128 g = gcd128(n < 0 ? -n : n, d);
    Rational r;
    r.num_ = narrow(g ? n / g : n);
    r.den_ = narrow(g ? d / g : d);
    if (r.num_ == 0) r.den_ = 1;
    return r;
  }
  static std::int64_t to_i64(std::string_view s) {
    if (s.empty()) throw std::invalid_argument("empty rational literal");
    std::size_t pos = 0;
    const long long v = std::stoll(std::string(s), &pos);
    if (pos != s.size()) throw std::invalid_argument("bad rational literal");
    return v;
  }
};

}  // namespace opeflow::ope
