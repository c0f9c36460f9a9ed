#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hhrec/error.hpp"
#include "hhrec/rational.hpp"

namespace hhrec {

/// Dense univariate polynomial, coefficients from the highest degree down.
using UPoly = std::vector<Rational>;

inline UPoly upoly_trim(UPoly p) {
  std::size_t lead = 0;
  while (lead + 1 < p.size() && p[lead].is_zero()) ++lead;
  p.erase(p.begin(), p.begin() + static_cast<std::ptrdiff_t>(lead));
  return p;
}

/// Quotient and remainder of p / d over Q.
inline std::pair<UPoly, UPoly> upoly_divmod(const UPoly& p, const UPoly& d) {
  UPoly den = upoly_trim(d);
  if (den.empty() || (den.size() == 1 && den[0].is_zero()))
    throw Error(ErrorKind::DivisionByZero, "polynomial division by zero");
  UPoly rem = upoly_trim(p);
  if (rem.size() < den.size()) return {UPoly{Rational(0)}, rem};
  UPoly q(rem.size() - den.size() + 1, Rational(0));
  for (std::size_t i = 0; i < q.size(); ++i) {
    q[i] = rem[i] / den[0];
    if (q[i].is_zero()) continue;
    for (std::size_t j = 0; j < den.size(); ++j) rem[i + j] -= q[i] * den[j];
  }
  UPoly r(rem.end() - static_cast<std::ptrdiff_t>(den.size() - 1), rem.end());
  if (r.empty()) r.push_back(Rational(0));
  return {q, upoly_trim(r)};
}

inline bool upoly_divides(const UPoly& d, const UPoly& p) {
  const auto r = upoly_divmod(p, d).second;
  return r.size() == 1 && r[0].is_zero();
}

/// S^{6k} - K S^{4k} + K S^{2k} - 1 = (S^{2k} - 1)(S^{4k} - (K-1) S^{2k} + 1).
inline UPoly linearization_charpoly(int k, const Rational& K) {
  UPoly p(static_cast<std::size_t>(6 * k + 1), Rational(0));
  p[0] = 1;
  p[static_cast<std::size_t>(2 * k)] = -K;
  p[static_cast<std::size_t>(4 * k)] = K;
  p[static_cast<std::size_t>(6 * k)] = -1;
  return p;
}

namespace detail {
/// Solves sum_i c_i v_{n+i} = -v_{n+d} for all valid n by exact elimination.
/// Returns (c_0..c_{d-1}) when the system is consistent.
inline std::optional<std::vector<Rational>> solve_recurrence_system(std::span<const Rational> v, std::size_t d) {
  const std::size_t rows = v.size() - d;
  std::vector<std::vector<Rational>> m(rows, std::vector<Rational>(d + 1));
  for (std::size_t n = 0; n < rows; ++n) {
    for (std::size_t i = 0; i < d; ++i) m[n][i] = v[n + i];
    m[n][d] = -v[n + d];
  }
  std::vector<std::size_t> pivot_col;
  std::size_t r = 0;
  for (std::size_t c = 0; c < d && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && m[p][c].is_zero()) ++p;
    if (p == rows) continue;
    std::swap(m[p], m[r]);
    const Rational inv = m[r][c].inverse();
    for (std::size_t j = c; j <= d; ++j) m[r][j] *= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || m[i][c].is_zero()) continue;
      const Rational f = m[i][c];
      for (std::size_t j = c; j <= d; ++j) m[i][j] -= f * m[r][j];
    }
    pivot_col.push_back(c);
    ++r;
  }
  for (std::size_t i = r; i < rows; ++i)
    if (!m[i][d].is_zero()) return std::nullopt;
  std::vector<Rational> c(d, Rational(0));  // free variables set to zero
  for (std::size_t i = 0; i < r; ++i) c[pivot_col[i]] = m[i][d];
  return c;
}
}  // namespace detail

/// Minimal-order monic constant-coefficient recurrence satisfied by every
/// supplied term, as a characteristic polynomial [1, c_{d-1}, ..., c_0]
/// (highest degree first). Needs at least 2*max_order + 2 terms; returns
/// nullopt when no recurrence of order <= max_order fits.
inline std::optional<UPoly> detect_linear_recurrence(std::span<const Rational> values, std::size_t max_order) {
  if (max_order == 0 || values.size() < 2 * max_order + 2)
    throw Error(ErrorKind::InsufficientData, "need at least " + std::to_string(2 * max_order + 2) + " terms, got " +
                                                 std::to_string(values.size()));
  bool all_zero = true;
  for (const auto& v : values) all_zero = all_zero && v.is_zero();
  if (all_zero) return UPoly{Rational(1)};
  for (std::size_t d = 1; d <= max_order; ++d) {
    if (auto c = detail::solve_recurrence_system(values, d)) {
      UPoly poly{Rational(1)};
      for (std::size_t i = d; i-- > 0;) poly.push_back((*c)[i]);
      return poly;
    }
  }
  return std::nullopt;
}

}  // namespace hhrec
