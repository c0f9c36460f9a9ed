#pragma once

#include <concepts>
#include <string>

#include "hhrec/laurent.hpp"
#include "hhrec/rational.hpp"
#include "hhrec/rational_function.hpp"

namespace hhrec {

// Uniform scalar vocabulary so the engine, invariants and determinant kernels
// are written once for Rational (numeric mode), LaurentPolynomial (symbolic
// mode) and RationalFunction (symbolic quantities that are not Laurent).

inline bool is_zero(const Rational& x) { return x.is_zero(); }
inline bool is_zero(const LaurentPolynomial& x) { return x.is_zero(); }
inline bool is_zero(const RationalFunction& x) { return x.is_zero(); }

/// n/d; exact in the Laurent ring (Error(NotExact) otherwise), field division elsewhere.
inline Rational quotient(const Rational& n, const Rational& d) { return n / d; }
inline LaurentPolynomial quotient(const LaurentPolynomial& n, const LaurentPolynomial& d) { return exact_div(n, d); }
inline RationalFunction quotient(const RationalFunction& n, const RationalFunction& d) { return n / d; }

/// Integer constant of the same kind (and variable set) as `like`.
inline Rational constant_like(const Rational&, long v) { return Rational(v); }
inline LaurentPolynomial constant_like(const LaurentPolynomial& like, long v) {
  return LaurentPolynomial::constant(like.nvars(), v);
}
inline RationalFunction constant_like(const RationalFunction& like, long v) {
  return RationalFunction(LaurentPolynomial::constant(like.nvars(), v));
}

inline std::string to_text(const Rational& x) { return x.to_string(); }
inline std::string to_text(const LaurentPolynomial& x) { return x.to_string(); }
inline std::string to_text(const RationalFunction& x) { return x.to_string(); }

template <class S>
concept Scalar = std::equality_comparable<S> && requires(const S& x, const S& y) {
  { x + y } -> std::convertible_to<S>;
  { x - y } -> std::convertible_to<S>;
  { x * y } -> std::convertible_to<S>;
  { -x } -> std::convertible_to<S>;
  { is_zero(x) } -> std::convertible_to<bool>;
  { quotient(x, y) } -> std::convertible_to<S>;
  { constant_like(x, 1L) } -> std::convertible_to<S>;
  { to_text(x) } -> std::convertible_to<std::string>;
};

template <class S>
inline constexpr bool is_symbolic_v = !std::same_as<S, Rational>;

}  // namespace hhrec
