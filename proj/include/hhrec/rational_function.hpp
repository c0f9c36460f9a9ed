#pragma once

#include <ostream>
#include <string>
#include <utility>

#include "hhrec/error.hpp"
#include "hhrec/laurent.hpp"

namespace hhrec {

/// Quotient of two Laurent polynomials.
///
/// No gcd is available, so the representation is not unique: unit
/// denominators are absorbed into the numerator, and sums reuse a common
/// denominator whenever one divides the other exactly. Equality is decided by
/// cross-multiplication.
class RationalFunction {
 public:
  RationalFunction() = default;
  explicit RationalFunction(LaurentPolynomial num)
      : num_(std::move(num)), den_(LaurentPolynomial::constant(num_.nvars(), 1)) {}
  RationalFunction(LaurentPolynomial num, LaurentPolynomial den) : num_(std::move(num)), den_(std::move(den)) {
    normalize();
  }

  const LaurentPolynomial& num() const { return num_; }
  const LaurentPolynomial& den() const { return den_; }
  std::size_t nvars() const { return num_.nvars(); }
  bool is_zero() const { return num_.is_zero(); }

  /// The Laurent polynomial this equals, or Error(NotExact).
  LaurentPolynomial to_laurent() const { return exact_div(num_, den_); }

  RationalFunction operator-() const { return {-num_, den_, Normalized{}}; }

  friend RationalFunction operator+(const RationalFunction& x, const RationalFunction& y) {
    return combine(x, y, false);
  }
  friend RationalFunction operator-(const RationalFunction& x, const RationalFunction& y) {
    return combine(x, y, true);
  }
  friend RationalFunction operator*(const RationalFunction& x, const RationalFunction& y) {
    if (x.den_ == y.num_) return {x.num_, y.den_};
    if (y.den_ == x.num_) return {y.num_, x.den_};
    return {x.num_ * y.num_, x.den_ * y.den_};
  }
  friend RationalFunction operator/(const RationalFunction& x, const RationalFunction& y) {
    if (y.is_zero()) throw Error(ErrorKind::DivisionByZero, "rational function division by zero");
    return x * RationalFunction(y.den_, y.num_);
  }
  RationalFunction& operator+=(const RationalFunction& o) { return *this = *this + o; }
  RationalFunction& operator-=(const RationalFunction& o) { return *this = *this - o; }
  RationalFunction& operator*=(const RationalFunction& o) { return *this = *this * o; }

  friend bool operator==(const RationalFunction& x, const RationalFunction& y) {
    if (x.den_ == y.den_) return x.num_ == y.num_;
    return x.num_ * y.den_ == y.num_ * x.den_;
  }

  std::string to_string() const {
    if (den_.is_constant() && den_ == LaurentPolynomial::constant(nvars(), 1)) return num_.to_string();
    return "(" + num_.to_string() + ")/(" + den_.to_string() + ")";
  }
  friend std::ostream& operator<<(std::ostream& os, const RationalFunction& r) { return os << r.to_string(); }

 private:
  struct Normalized {};
  RationalFunction(LaurentPolynomial num, LaurentPolynomial den, Normalized)
      : num_(std::move(num)), den_(std::move(den)) {}

  void normalize() {
    if (den_.is_zero()) throw Error(ErrorKind::DivisionByZero, "rational function with zero denominator");
    if (den_.is_unit()) {
      num_ = exact_div(num_, den_);
      den_ = LaurentPolynomial::constant(num_.nvars(), 1);
    }
  }

  static RationalFunction combine(const RationalFunction& x, const RationalFunction& y, bool subtract) {
    auto op = [subtract](const LaurentPolynomial& p, const LaurentPolynomial& q) { return subtract ? p - q : p + q; };
    if (x.den_ == y.den_) return {op(x.num_, y.num_), x.den_};
    if (x.den_.size() >= y.den_.size()) {
      try {
        const auto m = exact_div(x.den_, y.den_);
        return {op(x.num_, y.num_ * m), x.den_};
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::NotExact) throw;
      }
    } else {
      try {
        const auto m = exact_div(y.den_, x.den_);
        return {op(x.num_ * m, y.num_), y.den_};
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::NotExact) throw;
      }
    }
    return {op(x.num_ * y.den_, y.num_ * x.den_), x.den_ * y.den_};
  }

  LaurentPolynomial num_;
  LaurentPolynomial den_;
};

}  // namespace hhrec
