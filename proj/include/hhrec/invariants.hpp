#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hhrec/error.hpp"
#include "hhrec/matrix.hpp"
#include "hhrec/recurrence.hpp"
#include "hhrec/scalar.hpp"

namespace hhrec {

// ---------------------------------------------------------------------------
// The conserved quantity K = P0 + a P1 + a^2 P2

template <Scalar S>
struct KBreakdown {
  S P0, P1, P2, K;
  friend bool operator==(const KBreakdown&, const KBreakdown&) = default;
};

namespace detail {
template <Scalar S>
void require_nonzero_init(std::span<const S> x) {
  for (std::size_t i = 0; i < x.size(); ++i)
    if (is_zero(x[i]))
      throw Error(ErrorKind::ZeroInitialValue, "x_" + std::to_string(i) + " is zero", static_cast<std::int64_t>(i));
}
}  // namespace detail

/// K from the initial point x_0..x_2k in closed form. Valid for any a,
/// including a = 0 where K reduces to P0.
template <Scalar S>
KBreakdown<S> k_formula(int k, const S& a, std::span<const S> x) {
  if (k < 1 || x.size() != static_cast<std::size_t>(2 * k + 1))
    throw Error(ErrorKind::InvalidSpec, "k_formula needs 2k+1 values");
  detail::require_nonzero_init(x);
  const S one = constant_like(a, 1);
  auto inv = [&](const S& v) { return quotient(one, v); };
  const S& x0 = x[0];
  const S& x2k = x[2 * k];
  const S r0 = quotient(x0, x2k);   // x0 / x2k
  const S r1 = quotient(x2k, x0);   // x2k / x0

  S P0 = one + r0 + r1;

  S left = constant_like(a, 0);
  S right = constant_like(a, 0);
  for (int j = 1; j <= k; ++j) {
    left = left + quotient(x[j - 1] + x[j], x[j + k - 1] * x[j + k]);
    right = right + quotient(x[j + k - 1] + x[j + k], x[j - 1] * x[j]);
  }
  S P1 = (one + r1) * left + (one + r0) * right;

  S P2 = inv(x[k] * x2k);
  for (int j = 0; j < k; ++j) P2 = P2 + inv(x[j]) * (inv(x[j + k]) + inv(x[j + k + 1]));
  for (int l = 1; l < k; ++l)
    for (int m = 1; m <= l; ++m)
      P2 = P2 + quotient((x[l] + x[l + 1]) * (x[k + m - 1] + x[k + m]),
                         x[k + l] * x[k + l + 1] * x[m - 1] * x[m]);

  S K = P0 + a * P1 + a * a * P2;
  return {std::move(P0), std::move(P1), std::move(P2), std::move(K)};
}

template <Scalar S>
KBreakdown<S> k_formula(const RecurrenceSpec<S>& spec) {
  return k_formula<S>(spec.k, spec.a, std::span<const S>(spec.init));
}

/// K = (x_{4k} - x_{-2k}) / (x_{2k} - x_0).
template <Scalar S>
S k_ratio(const SequenceWindow<S>& w) {
  const int k = w.k();
  const S den = w[2 * k] - w[0];
  if (is_zero(den)) throw Error(ErrorKind::DegenerateDenominator, "x_2k = x_0 in (x_4k - x_-2k)/(x_2k - x_0)");
  return quotient(w[4 * k] - w[-2 * k], den);
}

/// Shifted form K = (x_{6k} - x_0) / (x_{4k} - x_{2k}).
template <Scalar S>
S k_ratio_shifted(const SequenceWindow<S>& w) {
  const int k = w.k();
  const S den = w[4 * k] - w[2 * k];
  if (is_zero(den)) throw Error(ErrorKind::DegenerateDenominator, "x_4k = x_2k in (x_6k - x_0)/(x_4k - x_2k)");
  return quotient(w[6 * k] - w[0], den);
}

template <Scalar S>
struct KRatioResult {
  S value;
  bool shifted;  // true when the (x_6k - x_0)/(x_4k - x_2k) form was needed
};

/// k_ratio, falling back to the shifted form when x_2k = x_0.
template <Scalar S>
KRatioResult<S> k_ratio_with_fallback(const SequenceWindow<S>& w) {
  try {
    return {k_ratio(w), false};
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::DegenerateDenominator) throw;
  }
  return {k_ratio_shifted(w), true};
}

// ---------------------------------------------------------------------------
// Discrete Wronskians

/// Matrix with entry (i, c) = x_{n + i + offsets[c]}, i < rows.
template <Scalar S>
Matrix<S> wronskian(const SequenceWindow<S>& w, std::int64_t n, std::size_t rows,
                    std::span<const std::int64_t> offsets) {
  std::vector<S> e;
  e.reserve(rows * offsets.size());
  for (std::size_t i = 0; i < rows; ++i)
    for (auto off : offsets) e.push_back(w.at(n + static_cast<std::int64_t>(i) + off));
  return Matrix<S>(rows, offsets.size(), std::move(e));
}

/// Same with entry (r, c) = x_{n + row_offsets[r] + col_offsets[c]}.
template <Scalar S>
Matrix<S> shift_matrix(const SequenceWindow<S>& w, std::int64_t n, std::span<const std::int64_t> row_offsets,
                       std::span<const std::int64_t> col_offsets) {
  std::vector<S> e;
  e.reserve(row_offsets.size() * col_offsets.size());
  for (auto r : row_offsets)
    for (auto c : col_offsets) e.push_back(w.at(n + r + c));
  return Matrix<S>(row_offsets.size(), col_offsets.size(), std::move(e));
}

namespace detail {
template <Scalar S>
void require_range(const SequenceWindow<S>& w, std::int64_t from, std::int64_t to, const char* what) {
  if (!w.contains(from, to))
    throw Error(ErrorKind::IndexOutOfWindow,
                std::string(what) + " needs [" + std::to_string(from) + ", " + std::to_string(to) + "]", from);
}
}  // namespace detail

/// delta_n = det Psi_n, Psi_n = (x_{n+i+2kc}) for i, c in {0,1,2}.
template <Scalar S>
S delta(const SequenceWindow<S>& w, std::int64_t n) {
  const std::int64_t k = w.k();
  detail::require_range(w, n, n + 4 * k + 2, "delta");
  const std::array<std::int64_t, 3> cols{0, 2 * k, 4 * k};
  return matrix_det(wronskian(w, n, 3, cols));
}

/// det of the 4x4 Wronskian (x_{n+i+2kc}), i, c in {0..3}; zero on solutions.
template <Scalar S>
S wronskian4_det(const SequenceWindow<S>& w, std::int64_t n) {
  const std::int64_t k = w.k();
  detail::require_range(w, n, n + 6 * k + 3, "wronskian4_det");
  const std::array<std::int64_t, 4> cols{0, 2 * k, 4 * k, 6 * k};
  return matrix_det(wronskian(w, n, 4, cols));
}

/// K^(1), K^(2) from Cramer's rule on the kernel of the 4x4 Wronskian.
template <Scalar S>
std::pair<S, S> k12_cramer(const SequenceWindow<S>& w, std::int64_t n) {
  const std::int64_t k = w.k();
  detail::require_range(w, n, n + 6 * k + 2, "k12_cramer");
  const S d = delta(w, n);
  if (is_zero(d)) throw Error(ErrorKind::SingularDelta, "delta_" + std::to_string(n) + " = 0", n);
  const std::array<std::int64_t, 3> c1{0, 2 * k, 6 * k};
  const std::array<std::int64_t, 3> c2{0, 4 * k, 6 * k};
  return {quotient(matrix_det(wronskian(w, n, 3, c1)), d), quotient(matrix_det(wronskian(w, n, 3, c2)), d)};
}

// ---------------------------------------------------------------------------
// x_{n+3} - gamma_n x_{n+2} + beta_n x_{n+1} - alpha_n x_n = 0

template <Scalar S>
struct Abg {
  S alpha, beta, gamma;
};

template <Scalar S>
Abg<S> abg_coeffs(const SequenceWindow<S>& w, std::int64_t n) {
  const std::int64_t k = w.k();
  detail::require_range(w, n, n + 4 * k + 3, "abg_coeffs");
  const S d = delta(w, n);
  if (is_zero(d)) throw Error(ErrorKind::SingularDelta, "delta_" + std::to_string(n) + " = 0", n);
  const std::array<std::int64_t, 3> rows{0, 2 * k, 4 * k};
  const std::array<std::int64_t, 3> beta_cols{0, 2, 3};
  const std::array<std::int64_t, 3> gamma_cols{0, 1, 3};
  return {quotient(delta(w, n + 1), d), quotient(matrix_det(shift_matrix(w, n, rows, beta_cols)), d),
          quotient(matrix_det(shift_matrix(w, n, rows, gamma_cols)), d)};
}

/// alpha (period k), beta and gamma (period 2k), stored by index n mod period.
template <Scalar S>
struct PeriodicCoeffs {
  int k = 1;
  std::vector<S> alpha, beta, gamma;

  const S& alpha_at(std::int64_t n) const { return alpha[static_cast<std::size_t>(floor_mod(n, k))]; }
  const S& beta_at(std::int64_t n) const { return beta[static_cast<std::size_t>(floor_mod(n, 2 * k))]; }
  const S& gamma_at(std::int64_t n) const { return gamma[static_cast<std::size_t>(floor_mod(n, 2 * k))]; }
};

/// Coefficients computed at n0..n0+2k-1 (alpha from the first k of those).
template <Scalar S>
PeriodicCoeffs<S> periodic_coeffs(const SequenceWindow<S>& w, std::int64_t n0) {
  const int k = w.k();
  PeriodicCoeffs<S> pc;
  pc.k = k;
  std::vector<std::optional<S>> alpha(static_cast<std::size_t>(k)), beta(2 * k), gamma(2 * k);
  for (std::int64_t n = n0; n < n0 + 2 * k; ++n) {
    auto c = abg_coeffs(w, n);
    auto& al = alpha[static_cast<std::size_t>(floor_mod(n, k))];
    if (!al) al = std::move(c.alpha);
    beta[static_cast<std::size_t>(floor_mod(n, 2 * k))] = std::move(c.beta);
    gamma[static_cast<std::size_t>(floor_mod(n, 2 * k))] = std::move(c.gamma);
  }
  for (auto& v : alpha) pc.alpha.push_back(std::move(*v));
  for (auto& v : beta) pc.beta.push_back(std::move(*v));
  for (auto& v : gamma) pc.gamma.push_back(std::move(*v));
  return pc;
}

/// Companion matrix L_n with Psi_{n+1} = L_n Psi_n.
template <Scalar S>
Matrix<S> companion(const PeriodicCoeffs<S>& c, std::int64_t n) {
  const S& al = c.alpha_at(n);
  const S zero = constant_like(al, 0);
  const S one = constant_like(al, 1);
  return Matrix<S>(3, 3, {zero, one, zero, zero, zero, one, al, -c.beta_at(n), c.gamma_at(n)});
}

/// L_n^{-1} = (1/alpha_n) [[beta, -gamma, 1], [alpha, 0, 0], [0, alpha, 0]].
template <Scalar S>
Matrix<S> companion_inverse(const PeriodicCoeffs<S>& c, std::int64_t n) {
  const S& al = c.alpha_at(n);
  if (is_zero(al)) throw Error(ErrorKind::ZeroAlpha, "alpha_" + std::to_string(n) + " = 0", n);
  const S zero = constant_like(al, 0);
  const S one = constant_like(al, 1);
  auto s = [&](const S& v) { return quotient(v, al); };
  return Matrix<S>(3, 3, {s(c.beta_at(n)), s(-c.gamma_at(n)), s(one), one, zero, zero, zero, one, zero});
}

/// (tr L_{n+2k-1}...L_n, tr L_n^{-1}...L_{n+2k-1}^{-1}).
template <Scalar S>
std::pair<S, S> monodromy_k(const PeriodicCoeffs<S>& c, std::int64_t n = 0) {
  const std::int64_t k = c.k;
  for (std::int64_t j = 0; j < k; ++j)
    if (is_zero(c.alpha_at(j))) throw Error(ErrorKind::ZeroAlpha, "alpha_" + std::to_string(j) + " = 0", j);
  Matrix<S> forward = companion(c, n);
  for (std::int64_t m = n + 1; m < n + 2 * k; ++m) forward = companion(c, m) * forward;
  Matrix<S> backward = companion_inverse(c, n);
  for (std::int64_t m = n + 1; m < n + 2 * k; ++m) backward = backward * companion_inverse(c, m);
  return {trace(forward), trace(backward)};
}

// ---------------------------------------------------------------------------
// Explicit iterates x_{2k+1..4k} and x_{-1..-2k}

template <Scalar S>
struct ExplicitIterates {
  int k = 1;
  std::vector<S> forward;   // x_{2k+1} .. x_{4k}
  std::vector<S> backward;  // x_{-1} .. x_{-2k}
  // Coefficients of a and a^2, keyed by the sequence index they belong to.
  std::map<std::int64_t, S> F1_forward, F2_forward, F1_backward, F2_backward;

  const S& x(std::int64_t n) const {
    if (n > 2 * k && n <= 4 * k) return forward[static_cast<std::size_t>(n - 2 * k - 1)];
    if (n < 0 && n >= -2 * k) return backward[static_cast<std::size_t>(-n - 1)];
    throw Error(ErrorKind::IndexOutOfWindow, "explicit iterate index " + std::to_string(n), n);
  }
  /// F^(1)_m; zero for indices without a linear coefficient.
  S F1(std::int64_t m, const S& zero) const { return lookup(m > 0 ? F1_forward : F1_backward, m, zero); }
  /// F^(2)_m; zero for indices that are only linear in a.
  S F2(std::int64_t m, const S& zero) const { return lookup(m > 0 ? F2_forward : F2_backward, m, zero); }

 private:
  static S lookup(const std::map<std::int64_t, S>& f, std::int64_t m, const S& zero) {
    auto it = f.find(m);
    return it == f.end() ? zero : it->second;
  }
};

namespace detail {
/// F^(1)_{2k..4k} and F^(2)_{3k+1..4k} from the telescoped sums.
template <Scalar S>
std::pair<std::map<std::int64_t, S>, std::map<std::int64_t, S>> forward_coefficients(int k,
                                                                                   std::span<const S> x) {
  const S zero = constant_like(x[0], 0);
  std::map<std::int64_t, S> F1, F2;
  F1.emplace(2 * k, zero);
  S sum = zero;
  for (int j = 1; j <= k; ++j) {
    sum = sum + quotient(x[k + j - 1] + x[k + j], x[j - 1] * x[j]);
    F1.emplace(2 * k + j, x[j] * sum);
  }
  const S lead = quotient(x[2 * k], x[0]);
  const S tail = quotient(F1.at(3 * k), x[k]);
  S sum1 = zero;
  S sum2 = zero;
  for (int j = 1; j <= k; ++j) {
    const S pair = x[k + j - 1] * x[k + j];
    sum1 = sum1 + quotient(x[j - 1] + x[j], pair);
    sum2 = sum2 + quotient(F1.at(2 * k + j - 1) + F1.at(2 * k + j), pair);
    F1.emplace(3 * k + j, lead * x[k + j] * sum1 + x[k + j] * tail);
    F2.emplace(3 * k + j, x[k + j] * sum2);
  }
  return {std::move(F1), std::move(F2)};
}
}  // namespace detail

/// The 4k iterates adjacent to the initial data, assembled from the closed
/// coefficient formulas (no recurrence steps). Backward coefficients are the
/// forward formulas evaluated at the reversed initial point.
template <Scalar S>
ExplicitIterates<S> explicit_iterates(const RecurrenceSpec<S>& spec) {
  spec.validate();
  const int k = spec.k;
  std::span<const S> x(spec.init);
  detail::require_nonzero_init(x);
  const std::vector<S> rev(spec.init.rbegin(), spec.init.rend());
  const S& a = spec.a;
  const S a2 = a * a;

  ExplicitIterates<S> out;
  out.k = k;
  auto [F1f, F2f] = detail::forward_coefficients<S>(k, x);
  auto [F1r, F2r] = detail::forward_coefficients<S>(k, std::span<const S>(rev));
  out.F1_forward = std::move(F1f);
  out.F2_forward = std::move(F2f);
  for (int j = 1; j <= k; ++j) {
    out.F1_backward.emplace(-j, F1r.at(2 * k + j));
    out.F1_backward.emplace(-k - j, F1r.at(3 * k + j));
    out.F2_backward.emplace(-k - j, F2r.at(3 * k + j));
  }

  const S fwd_lead = quotient(x[2 * k], x[0]);  // x_0^{-1} x_2k
  const S bwd_lead = quotient(x[0], x[2 * k]);  // x_2k^{-1} x_0
  for (int j = 1; j <= k; ++j) out.forward.push_back(fwd_lead * x[j] + a * out.F1_forward.at(2 * k + j));
  for (int j = 1; j <= k; ++j)
    out.forward.push_back(fwd_lead * x[k + j] + a * out.F1_forward.at(3 * k + j) + a2 * out.F2_forward.at(3 * k + j));
  for (int j = 1; j <= k; ++j) out.backward.push_back(bwd_lead * x[2 * k - j] + a * out.F1_backward.at(-j));
  for (int j = 1; j <= k; ++j)
    out.backward.push_back(bwd_lead * x[k - j] + a * out.F1_backward.at(-k - j) + a2 * out.F2_backward.at(-k - j));
  return out;
}

/// Residuals of the order a, a^2, a^3 identities behind the first-integral
/// property; all three vanish identically.
template <Scalar S>
std::array<S, 3> first_integral_identities(const RecurrenceSpec<S>& spec) {
  const int k = spec.k;
  const auto& x = spec.init;
  const auto e = explicit_iterates(spec);
  const auto kb = k_formula(spec);
  const S zero = constant_like(spec.a, 0);
  const S one = constant_like(spec.a, 1);
  const S s = x[k] + x[k + 1];
  const S x0inv = quotient(one, x[0]);
  const S lead = x0inv * x[1] * x[2 * k];  // x_0^{-1} x_1 x_2k
  const std::int64_t m2k = -2 * k;
  const std::int64_t m2k1 = -2 * k + 1;

  S order1 = s * (x0inv * x[2 * k] - kb.P0) + lead * e.F1(m2k, zero) +
             quotient(x[0] * x[0], x[2 * k]) * e.F1(2 * k + 1, zero) - x[2 * k] * e.F1(m2k1, zero);
  S order2 = e.F1(3 * k, zero) + e.F1(3 * k + 1, zero) + lead * e.F2(m2k, zero) +
             e.F1(2 * k + 1, zero) * e.F1(m2k, zero) - x[2 * k] * e.F2(m2k1, zero) - s * kb.P1;
  S order3 = e.F2(3 * k + 1, zero) + s * (x0inv * e.F2(m2k, zero) - kb.P2);
  return {std::move(order1), std::move(order2), std::move(order3)};
}

/// (x_2k - x_0) P^(j) - (F^(j)_{4k} - F^(j)_{-2k}) for j = 1, 2; both vanish.
template <Scalar S>
std::array<S, 2> k_expression_identities(const RecurrenceSpec<S>& spec) {
  const int k = spec.k;
  const auto e = explicit_iterates(spec);
  const auto kb = k_formula(spec);
  const S zero = constant_like(spec.a, 0);
  const S diff = spec.init[2 * k] - spec.init[0];
  return {diff * kb.P1 - (e.F1(4 * k, zero) - e.F1(-2 * k, zero)),
          diff * kb.P2 - (e.F2(4 * k, zero) - e.F2(-2 * k, zero))};
}

// ---------------------------------------------------------------------------
// Linear relations

/// x_{n+6k} - K (x_{n+4k} - x_{n+2k}) - x_n.
template <Scalar S>
S linear_relation_residual(const SequenceWindow<S>& w, std::int64_t n, const S& K) {
  const std::int64_t k = w.k();
  detail::require_range(w, n, n + 6 * k, "linear relation");
  return w[n + 6 * k] - K * (w[n + 4 * k] - w[n + 2 * k]) - w[n];
}

/// Both sides of L xi_n = M_n L x_n for an arbitrary (raw) window and constant K.
template <Scalar S>
std::pair<S, S> operator_identity_sides(const SequenceWindow<S>& w, std::int64_t n, const S& K) {
  const std::int64_t k = w.k();
  detail::require_range(w, n, n + 8 * k + 1, "operator identity");
  const S& a = w.spec().a;
  auto xi = [&](std::int64_t m) { return xi_residual(w, m); };
  auto Lxi = [&](std::int64_t m) { return xi(m + 6 * k) - K * (xi(m + 4 * k) - xi(m + 2 * k)) - xi(m); };
  auto z = [&](std::int64_t m) { return w[m + 6 * k] - K * (w[m + 4 * k] - w[m + 2 * k]) - w[m]; };
  S lhs = Lxi(n);
  S rhs = w[n + 6 * k] * z(n + 2 * k + 1) - w[n + 6 * k + 1] * z(n + 2 * k) - w[n + 2 * k] * z(n + 1) +
          w[n + 2 * k + 1] * z(n) - a * (z(n + k + 1) + z(n + k));
  return {std::move(lhs), std::move(rhs)};
}

template <Scalar S>
struct InhomCoeffs {
  S nu, epsilon, zeta, eta;
};

/// nu_n = x_{n+4k} - (K-1) x_{n+2k} + x_n.
template <Scalar S>
S nu(const SequenceWindow<S>& w, std::int64_t n, const S& K) {
  const std::int64_t k = w.k();
  detail::require_range(w, n, n + 4 * k, "nu");
  return w[n + 4 * k] - (K - constant_like(K, 1)) * w[n + 2 * k] + w[n];
}

/// K' = nu_n + ... + nu_{n+2k-1}.
template <Scalar S>
S k_prime(const SequenceWindow<S>& w, std::int64_t n, const S& K) {
  S total = nu(w, n, K);
  for (std::int64_t j = 1; j < 2 * w.k(); ++j) total = total + nu(w, n + j, K);
  return total;
}

/// nu_n together with (epsilon_n, zeta_n, eta_n) solving
/// x_{m+2} + eta x_{m+1} + zeta x_m = epsilon for m = n, n+2k, n+4k.
template <Scalar S>
InhomCoeffs<S> inhom_coeffs(const SequenceWindow<S>& w, std::int64_t n, const S& K) {
  const std::int64_t k = w.k();
  detail::require_range(w, n, n + 4 * k + 2, "inhom_coeffs");
  const S minus_one = constant_like(K, -1);
  std::vector<S> A;
  std::vector<S> b;
  for (std::int64_t c = 0; c < 3; ++c) {
    const std::int64_t m = n + 2 * k * c;
    A.insert(A.end(), {minus_one, w[m], w[m + 1]});
    b.push_back(-w[m + 2]);
  }
  const S det = matrix_det(Matrix<S>(3, 3, A));
  if (is_zero(det)) throw Error(ErrorKind::SingularSystem, "(epsilon, zeta, eta) system singular at n=" + std::to_string(n), n);
  std::array<S, 3> sol{det, det, det};
  for (std::size_t col = 0; col < 3; ++col) {
    std::vector<S> Ac = A;
    for (std::size_t r = 0; r < 3; ++r) Ac[r * 3 + col] = b[r];
    sol[col] = quotient(matrix_det(Matrix<S>(3, 3, std::move(Ac))), det);
  }
  return {nu(w, n, K), std::move(sol[0]), std::move(sol[1]), std::move(sol[2])};
}

template <Scalar S>
InhomCoeffs<S> inhom_coeffs(const SequenceWindow<S>& w, std::int64_t n) {
  return inhom_coeffs(w, n, k_formula(w.spec()).K);
}

}  // namespace hhrec
