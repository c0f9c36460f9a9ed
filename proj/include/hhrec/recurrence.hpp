#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hhrec/error.hpp"
#include "hhrec/scalar.hpp"

namespace hhrec {

/// One instance of the order-(2k+1) recurrence
///   x_{n+2k+1} x_n = x_{n+2k} x_{n+1} + a (x_{n+k} + x_{n+k+1}).
template <Scalar S>
struct RecurrenceSpec {
  int k = 1;
  S a;
  std::vector<S> init;  // x_0 .. x_{2k}

  int order() const { return 2 * k + 1; }

  void validate() const {
    if (k < 1) throw Error(ErrorKind::InvalidSpec, "k must be >= 1, got " + std::to_string(k));
    if (init.size() != static_cast<std::size_t>(order()))
      throw Error(ErrorKind::InvalidSpec, "expected " + std::to_string(order()) + " initial values, got " +
                                              std::to_string(init.size()));
    if (is_zero(a)) throw Error(ErrorKind::InvalidSpec, "parameter a must be non-zero");
  }

  /// Same recurrence with reversed initial data, i.e. the image under x_i -> x_{2k-i}.
  RecurrenceSpec reversed() const {
    RecurrenceSpec r = *this;
    std::reverse(r.init.begin(), r.init.end());
    return r;
  }

  friend bool operator==(const RecurrenceSpec&, const RecurrenceSpec&) = default;
};

/// Generic initial data: init = (x0, ..., x2k) and a = a in Z[x^{±1}, a].
inline RecurrenceSpec<LaurentPolynomial> symbolic_spec(int k) {
  if (k < 1) throw Error(ErrorKind::InvalidSpec, "k must be >= 1");
  const std::size_t nvars = static_cast<std::size_t>(2 * k + 2);
  RecurrenceSpec<LaurentPolynomial> spec;
  spec.k = k;
  spec.a = LaurentPolynomial::variable(nvars, nvars - 1);
  for (std::size_t i = 0; i + 1 < nvars; ++i) spec.init.push_back(LaurentPolynomial::variable(nvars, i));
  return spec;
}

/// Immutable table of x_n for n in [lo, hi], always covering [0, 2k].
///
/// Windows built by extend() solve the recurrence at every covered index;
/// raw windows hold arbitrary values and are used to probe identities that
/// must hold for any sequence, or to inject faults.
template <Scalar S>
class SequenceWindow {
 public:
  explicit SequenceWindow(RecurrenceSpec<S> spec) : spec_(std::move(spec)), lo_(0) {
    spec_.validate();
    values_ = spec_.init;
  }

  /// Arbitrary values starting at index `lo`; no solution invariant is implied.
  static SequenceWindow raw(RecurrenceSpec<S> spec, std::int64_t lo, std::vector<S> values) {
    if (values.empty()) throw Error(ErrorKind::InvalidSpec, "raw window needs at least one value");
    SequenceWindow w;
    w.spec_ = std::move(spec);
    w.lo_ = lo;
    w.values_ = std::move(values);
    w.raw_ = true;
    return w;
  }

  const RecurrenceSpec<S>& spec() const { return spec_; }
  int k() const { return spec_.k; }
  std::int64_t lo() const { return lo_; }
  std::int64_t hi() const { return lo_ + static_cast<std::int64_t>(values_.size()) - 1; }
  bool is_raw() const { return raw_; }
  const std::vector<S>& values() const { return values_; }

  bool contains(std::int64_t n) const { return n >= lo() && n <= hi(); }
  bool contains(std::int64_t from, std::int64_t to) const { return from >= lo() && to <= hi(); }

  const S& at(std::int64_t n) const {
    if (!contains(n))
      throw Error(ErrorKind::IndexOutOfWindow,
                  "index " + std::to_string(n) + " outside [" + std::to_string(lo()) + ", " + std::to_string(hi()) + "]",
                  n);
    return values_[static_cast<std::size_t>(n - lo_)];
  }
  const S& operator[](std::int64_t n) const { return at(n); }

  /// Copy with x_n replaced; the result is a raw window.
  SequenceWindow with_value(std::int64_t n, S value) const {
    SequenceWindow w = *this;
    at(n);
    w.values_[static_cast<std::size_t>(n - lo_)] = std::move(value);
    w.raw_ = true;
    return w;
  }

  /// Restriction to [from, to] (must lie inside the window).
  SequenceWindow slice(std::int64_t from, std::int64_t to) const {
    if (!contains(from, to) || from > to) throw Error(ErrorKind::IndexOutOfWindow, "slice outside window", from);
    SequenceWindow w = *this;
    w.values_.assign(values_.begin() + (from - lo_), values_.begin() + (to - lo_ + 1));
    w.lo_ = from;
    return w;
  }

  friend bool operator==(const SequenceWindow& x, const SequenceWindow& y) {
    return x.spec_ == y.spec_ && x.lo_ == y.lo_ && x.values_ == y.values_;
  }

 private:
  SequenceWindow() = default;

  template <Scalar T>
  friend SequenceWindow<T> apply_sigma(const SequenceWindow<T>&);
  template <Scalar T>
  friend SequenceWindow<T> extend(const SequenceWindow<T>&, std::int64_t, std::int64_t, std::optional<std::int64_t>);

  RecurrenceSpec<S> spec_;
  std::int64_t lo_ = 0;
  std::vector<S> values_;
  bool raw_ = false;
};

/// Default symbolic range |n| <= 6k+6.
inline std::int64_t default_symbolic_cap(int k) { return 6 * static_cast<std::int64_t>(k) + 6; }

/// Enlarges a window to [new_lo, new_hi] by forward and backward steps.
///
/// Numeric zero pivots raise DivisionByZero and symbolic non-exact quotients
/// raise LaurentViolation; both carry the index being computed. Symbolic
/// windows are limited to |n| <= symbolic_cap (default 6k+6).
template <Scalar S>
SequenceWindow<S> extend(const SequenceWindow<S>& w, std::int64_t new_lo, std::int64_t new_hi,
                         std::optional<std::int64_t> symbolic_cap = std::nullopt) {
  const int k = w.k();
  new_lo = std::min(new_lo, w.lo());
  new_hi = std::max(new_hi, w.hi());
  if constexpr (is_symbolic_v<S>) {
    const std::int64_t cap = symbolic_cap.value_or(default_symbolic_cap(k));
    if (-new_lo > cap || new_hi > cap)
      throw Error(ErrorKind::SymbolicRangeExceeded,
                  "symbolic window [" + std::to_string(new_lo) + ", " + std::to_string(new_hi) + "] exceeds |n| <= " +
                      std::to_string(cap));
  }
  const S& a = w.spec().a;
  const std::int64_t order = 2 * k + 1;

  SequenceWindow<S> out = w;
  std::vector<S>& vals = out.values_;
  auto x = [&](std::int64_t n) -> const S& { return vals[static_cast<std::size_t>(n - out.lo_)]; };
  auto divide = [](const S& num, const S& den, std::int64_t index) {
    try {
      return quotient(num, den);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::NotExact)
        throw Error(ErrorKind::LaurentViolation, "x_" + std::to_string(index) + " is not a Laurent polynomial", index);
      if (e.kind() == ErrorKind::DivisionByZero)
        throw Error(ErrorKind::DivisionByZero, "zero pivot while computing x_" + std::to_string(index), index);
      throw;
    }
  };

  vals.reserve(static_cast<std::size_t>(new_hi - new_lo + 1));
  while (out.hi() < new_hi) {
    const std::int64_t n = out.hi() - 2 * k;  // computing x_{n+2k+1}
    if (n < out.lo_) throw Error(ErrorKind::IndexOutOfWindow, "window too short to step forward", n);
    S num = x(n + 2 * k) * x(n + 1) + a * (x(n + k) + x(n + k + 1));
    vals.push_back(divide(num, x(n), n + order));
  }
  if (out.lo_ > new_lo) {
    std::vector<S> front;
    front.reserve(static_cast<std::size_t>(out.lo_ - new_lo));
    // Steps backwards; `front` holds x_{lo-1}, x_{lo-2}, ... in that order.
    auto get = [&](std::int64_t m) -> const S& {
      if (m >= out.lo_) return x(m);
      return front[static_cast<std::size_t>(out.lo_ - 1 - m)];
    };
    for (std::int64_t n = out.lo_ - 1; n >= new_lo; --n) {
      if (n + order > out.hi()) throw Error(ErrorKind::IndexOutOfWindow, "window too short to step backward", n);
      S num = get(n + 2 * k) * get(n + 1) + a * (get(n + k) + get(n + k + 1));
      front.push_back(divide(num, get(n + order), n));
    }
    std::reverse(front.begin(), front.end());
    front.insert(front.end(), std::make_move_iterator(vals.begin()), std::make_move_iterator(vals.end()));
    vals = std::move(front);
    out.lo_ = new_lo;
  }
  return out;
}

/// Window of the solution over [lo, hi] generated from `spec`.
template <Scalar S>
SequenceWindow<S> generate(const RecurrenceSpec<S>& spec, std::int64_t lo, std::int64_t hi,
                           std::optional<std::int64_t> symbolic_cap = std::nullopt) {
  return extend(SequenceWindow<S>(spec), lo, hi, symbolic_cap);
}

/// xi_n = x_n x_{n+2k+1} - x_{n+2k} x_{n+1} - a (x_{n+k} + x_{n+k+1}).
template <Scalar S>
S xi_residual(const SequenceWindow<S>& w, std::int64_t n) {
  const int k = w.k();
  if (!w.contains(n, n + 2 * k + 1))
    throw Error(ErrorKind::IndexOutOfWindow, "xi_" + std::to_string(n) + " needs x_n..x_{n+2k+1}", n);
  return w[n] * w[n + 2 * k + 1] - w[n + 2 * k] * w[n + 1] - w.spec().a * (w[n + k] + w[n + k + 1]);
}

/// The reflected sequence y_n = x_{2k-n}, a solution for the reversed initial data.
template <Scalar S>
SequenceWindow<S> apply_sigma(const SequenceWindow<S>& w) {
  const int k = w.k();
  std::vector<S> vals(w.values().rbegin(), w.values().rend());
  const std::int64_t lo = 2 * k - w.hi();
  SequenceWindow<S> out;
  out.spec_ = w.spec().reversed();
  out.lo_ = lo;
  out.values_ = std::move(vals);
  out.raw_ = w.is_raw();
  return out;
}

/// phi: (x_0..x_2k) -> (x_1..x_2k, (x_1 x_2k + a(x_{k+1} + x_k)) / x_0).
template <Scalar S>
std::vector<S> phi(int k, const S& a, const std::vector<S>& p) {
  std::vector<S> out(p.begin() + 1, p.end());
  out.push_back(quotient(p[1] * p[2 * k] + a * (p[k + 1] + p[k]), p[0]));
  return out;
}

/// phi^{-1}: (y_0..y_2k) -> ((y_0 y_{2k-1} + a(y_{k-1} + y_k)) / y_2k, y_0..y_{2k-1}).
template <Scalar S>
std::vector<S> phi_inverse(int k, const S& a, const std::vector<S>& p) {
  std::vector<S> out;
  out.reserve(p.size());
  out.push_back(quotient(p[0] * p[2 * k - 1] + a * (p[k - 1] + p[k]), p[2 * k]));
  out.insert(out.end(), p.begin(), p.end() - 1);
  return out;
}

template <Scalar S>
std::vector<S> sigma(std::vector<S> p) {
  std::reverse(p.begin(), p.end());
  return p;
}

/// Evaluates phi and sigma . phi^{-1} . sigma at the initial point and compares.
template <Scalar S>
bool check_reversibility(const RecurrenceSpec<S>& spec) {
  spec.validate();
  const auto lhs = phi(spec.k, spec.a, spec.init);
  const auto rhs = sigma(phi_inverse(spec.k, spec.a, sigma(spec.init)));
  return lhs == rhs;
}

}  // namespace hhrec
