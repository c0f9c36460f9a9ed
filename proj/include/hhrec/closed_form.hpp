#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "hhrec/error.hpp"
#include "hhrec/rational.hpp"
#include "hhrec/recurrence.hpp"

namespace hhrec {

/// (T_m(t), U_m(t)) for any integer m.
///
/// Non-negative m use the three-term recurrence from T_0 = U_0 = 1, T_1 = t,
/// U_1 = 2t; negative m use T_{-m} = T_m and U_{-m} = -U_{m-2} (U_{-1} = 0).
inline std::pair<Rational, Rational> chebyshev_tu(const Rational& t, std::int64_t m) {
  auto forward = [&t](std::int64_t upto) {
    Rational T0 = 1, T1 = t, U0 = 1, U1 = t * 2;
    if (upto == 0) return std::pair{T0, U0};
    const Rational two_t = t * 2;
    for (std::int64_t j = 1; j < upto; ++j) {
      Rational T2 = two_t * T1 - T0;
      Rational U2 = two_t * U1 - U0;
      T0 = std::move(T1);
      T1 = std::move(T2);
      U0 = std::move(U1);
      U1 = std::move(U2);
    }
    return std::pair{T1, U1};
  };
  if (m >= 0) return forward(m);
  Rational T = forward(-m).first;
  if (m == -1) return {T, Rational(0)};
  return {T, -forward(-m - 2).second};
}

struct ChebyshevPoint {
  Rational K;
  Rational t;  // (K - 1) / 2

  static ChebyshevPoint from_k(const Rational& K) { return {K, (K - 1) / 2}; }
};

struct ClosedFormTriple {
  Rational q, r, s;
  friend bool operator==(const ClosedFormTriple&, const ClosedFormTriple&) = default;
};

/// x_n = q_j + r_j T_m(t) + s_j U_m(t) with n = 2k m + j, 0 <= j < 2k.
struct ClosedFormCoeffs {
  int k = 1;
  ChebyshevPoint point;
  std::vector<ClosedFormTriple> triples;  // indexed by j
};

/// Coefficients from (x_{2k+j}, x_j, x_{-2k+j}); needs [-2k, 4k-1] and t not in {0, 1}.
inline ClosedFormCoeffs extract_coeffs(const SequenceWindow<Rational>& w, const Rational& K) {
  const int k = w.k();
  if (!w.contains(-2 * k, 4 * k - 1))
    throw Error(ErrorKind::IndexOutOfWindow, "closed form extraction needs [-2k, 4k-1]", -2 * k);
  ClosedFormCoeffs c;
  c.k = k;
  c.point = ChebyshevPoint::from_k(K);
  const Rational& t = c.point.t;
  if (t.is_zero() || t == Rational(1))
    throw Error(ErrorKind::DegenerateT, "t = " + t.to_string() + " (K = " + K.to_string() + ")");
  const Rational scale = (t * 2 * (Rational(1) - t)).inverse();
  for (int j = 0; j < 2 * k; ++j) {
    const Rational& up = w[2 * k + j];
    const Rational& mid = w[j];
    const Rational& down = w[-2 * k + j];
    c.triples.push_back({scale * (t * up - t * t * 2 * mid + t * down),
                         scale * (-up + t * 2 * mid + (Rational(1) - t * 2) * down),
                         scale * ((Rational(1) - t) * up + (t - 1) * down)});
  }
  return c;
}

inline Rational eval_closed_form(const ClosedFormCoeffs& c, std::int64_t n) {
  const std::int64_t period = 2 * static_cast<std::int64_t>(c.k);
  const std::int64_t m = floor_div(n, period);
  const std::int64_t j = floor_mod(n, period);
  const auto& tr = c.triples[static_cast<std::size_t>(j)];
  const auto [T, U] = chebyshev_tu(c.point.t, m);
  return tr.q + tr.r * T + tr.s * U;
}

}  // namespace hhrec
