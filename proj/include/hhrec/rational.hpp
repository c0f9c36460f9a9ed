#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>

#include "hhrec/error.hpp"

namespace hhrec {

using BigInt = mpz_class;

/// Exact rational number in lowest terms with a positive denominator.
///
/// Backed by GMP's mpq; every public constructor and operation leaves the
/// value canonical, so equality is plain component equality.
class Rational {
 public:
  Rational() = default;
  Rational(long value) : q_(value) {}  // NOLINT(google-explicit-constructor)
  Rational(int value) : q_(value) {}   // NOLINT(google-explicit-constructor)
  explicit Rational(const BigInt& value) : q_(value) {}

  Rational(const BigInt& num, const BigInt& den) {
    if (den == 0) throw Error(ErrorKind::DivisionByZero, "rational with zero denominator");
    q_.get_num() = num;
    q_.get_den() = den;
    q_.canonicalize();
  }

  /// Parses `p/q` or `p` with an optional leading sign and no whitespace.
  static Rational parse(std::string_view text) {
    auto valid_int = [](std::string_view s, bool allow_sign) {
      if (!s.empty() && allow_sign && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
      if (s.empty()) return false;
      for (char c : s)
        if (c < '0' || c > '9') return false;
      return true;
    };
    auto to_big = [](std::string_view s) {
      if (!s.empty() && s.front() == '+') s.remove_prefix(1);
      return BigInt(std::string(s), 10);
    };
    const auto slash = text.find('/');
    if (slash == std::string_view::npos) {
      if (!valid_int(text, true)) throw Error(ErrorKind::Parse, "malformed rational '" + std::string(text) + "'");
      return Rational(to_big(text));
    }
    const auto num = text.substr(0, slash);
    const auto den = text.substr(slash + 1);
    if (!valid_int(num, true) || !valid_int(den, false))
      throw Error(ErrorKind::Parse, "malformed rational '" + std::string(text) + "'");
    return Rational(to_big(num), to_big(den));
  }

  const BigInt& num() const { return q_.get_num(); }
  const BigInt& den() const { return q_.get_den(); }

  bool is_zero() const { return sgn(q_) == 0; }
  bool is_integer() const { return q_.get_den() == 1; }
  int sign() const { return sgn(q_); }

  Rational inverse() const {
    if (is_zero()) throw Error(ErrorKind::DivisionByZero, "inverse of zero");
    Rational r;
    mpq_inv(r.q_.get_mpq_t(), q_.get_mpq_t());
    return r;
  }

  std::string to_string() const {
    if (is_integer()) return q_.get_num().get_str();
    return q_.get_num().get_str() + "/" + q_.get_den().get_str();
  }

  Rational operator-() const {
    Rational r;
    r.q_ = -q_;
    return r;
  }

  Rational& operator+=(const Rational& o) {
    q_ += o.q_;
    return *this;
  }
  Rational& operator-=(const Rational& o) {
    q_ -= o.q_;
    return *this;
  }
  Rational& operator*=(const Rational& o) {
    q_ *= o.q_;
    return *this;
  }
  Rational& operator/=(const Rational& o) {
    if (o.is_zero()) throw Error(ErrorKind::DivisionByZero, "rational division by zero");
    q_ /= o.q_;
    return *this;
  }

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational& a, const Rational& b) { return a.q_ == b.q_; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    const int c = cmp(a.q_, b.q_);
    return c < 0 ? std::strong_ordering::less : c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.to_string(); }

 private:
  mpq_class q_;
};

/// Floor division and the matching non-negative remainder, n = d*q + r with 0 <= r < |d|.
constexpr std::int64_t floor_div(std::int64_t n, std::int64_t d) {
  std::int64_t q = n / d;
  if ((n % d != 0) && ((n < 0) != (d < 0))) --q;
  return q;
}
constexpr std::int64_t floor_mod(std::int64_t n, std::int64_t d) { return n - d * floor_div(n, d); }

}  // namespace hhrec
