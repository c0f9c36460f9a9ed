#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "hhrec/error.hpp"
#include "hhrec/rational.hpp"

namespace hhrec {

inline constexpr std::size_t kMaxVars = 16;

/// Dense exponent tuple for a monomial in x0..x{n-2} (any sign) and a (last
/// position, non-negative).
///
/// Ordered by total degree, ties broken lexicographically from position 0.
class ExponentVector {
 public:
  ExponentVector() = default;
  explicit ExponentVector(std::size_t nvars) : n_(static_cast<std::uint8_t>(nvars)) {
    if (nvars == 0 || nvars > kMaxVars)
      throw Error(ErrorKind::VariableMismatch, "unsupported variable count " + std::to_string(nvars));
  }
  ExponentVector(std::initializer_list<std::int32_t> exps) : ExponentVector(exps.size()) {
    std::size_t i = 0;
    for (auto e : exps) set(i++, e);
  }

  std::size_t size() const { return n_; }
  std::int32_t operator[](std::size_t i) const { return e_[i]; }
  std::int64_t degree() const { return degree_; }

  void set(std::size_t i, std::int32_t value) {
    degree_ += static_cast<std::int64_t>(value) - e_[i];
    e_[i] = value;
  }

  bool is_zero() const {
    return std::all_of(e_.begin(), e_.begin() + n_, [](auto e) { return e == 0; });
  }

  /// Componentwise <=, i.e. this monomial divides `other` in the polynomial ring.
  bool divides(const ExponentVector& other) const {
    for (std::size_t i = 0; i < n_; ++i)
      if (e_[i] > other.e_[i]) return false;
    return true;
  }

  ExponentVector& operator+=(const ExponentVector& o) {
    for (std::size_t i = 0; i < n_; ++i) e_[i] += o.e_[i];
    degree_ += o.degree_;
    return *this;
  }
  ExponentVector& operator-=(const ExponentVector& o) {
    for (std::size_t i = 0; i < n_; ++i) e_[i] -= o.e_[i];
    degree_ -= o.degree_;
    return *this;
  }
  friend ExponentVector operator+(ExponentVector a, const ExponentVector& b) { return a += b; }
  friend ExponentVector operator-(ExponentVector a, const ExponentVector& b) { return a -= b; }

  friend bool operator==(const ExponentVector& a, const ExponentVector& b) {
    return a.n_ == b.n_ && std::equal(a.e_.begin(), a.e_.begin() + a.n_, b.e_.begin());
  }
  friend std::strong_ordering operator<=>(const ExponentVector& a, const ExponentVector& b) {
    if (auto c = a.degree_ <=> b.degree_; c != 0) return c;
    for (std::size_t i = 0; i < a.n_; ++i)
      if (auto c = a.e_[i] <=> b.e_[i]; c != 0) return c;
    return std::strong_ordering::equal;
  }

  std::size_t hash() const {
    std::size_t h = 1469598103934665603ull;
    for (std::size_t i = 0; i < n_; ++i) {
      h ^= static_cast<std::uint32_t>(e_[i]);
      h *= 1099511628211ull;
    }
    return h;
  }

 private:
  std::array<std::int32_t, kMaxVars> e_{};
  std::int64_t degree_ = 0;
  std::uint8_t n_ = 0;
};

struct ExponentHash {
  std::size_t operator()(const ExponentVector& e) const { return e.hash(); }
};

struct Term {
  ExponentVector exp;
  BigInt coeff;
  friend bool operator==(const Term&, const Term&) = default;
};

/// Sparse Laurent polynomial with integer coefficients in x0^{±1}..x{n-2}^{±1}
/// and a polynomial variable a in the last position.
///
/// Terms are kept sorted by decreasing ExponentVector order with no zero
/// coefficients, so structural equality is mathematical equality.
class LaurentPolynomial {
 public:
  LaurentPolynomial() = default;
  explicit LaurentPolynomial(std::size_t nvars) : nvars_(nvars) { ExponentVector check(nvars); }

  static LaurentPolynomial constant(std::size_t nvars, const BigInt& c) {
    return monomial(ExponentVector(nvars), c);
  }
  static LaurentPolynomial monomial(const ExponentVector& exp, const BigInt& c = 1) {
    LaurentPolynomial p(exp.size());
    if (exp[exp.size() - 1] < 0) throw Error(ErrorKind::NotExact, "negative exponent of a");
    if (c != 0) p.terms_.push_back({exp, c});
    return p;
  }
  /// x_i for i < nvars-1; the last index is a.
  static LaurentPolynomial variable(std::size_t nvars, std::size_t i, std::int32_t power = 1) {
    ExponentVector e(nvars);
    e.set(i, power);
    return monomial(e);
  }

  std::size_t nvars() const { return nvars_; }
  std::size_t size() const { return terms_.size(); }
  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  /// A single term with coefficient ±1; these are the units of the ring.
  bool is_unit() const {
    return terms_.size() == 1 && abs(terms_.front().coeff) == 1 && terms_.front().exp[nvars_ - 1] == 0;
  }
  bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_.front().exp.is_zero()); }

  /// Highest power of a appearing.
  std::int32_t degree_in_a() const {
    std::int32_t d = 0;
    for (const auto& t : terms_) d = std::max(d, t.exp[nvars_ - 1]);
    return d;
  }

  /// Coefficient of a^power, still expressed over the full variable set with a-exponent 0.
  LaurentPolynomial coefficient_of_a(std::int32_t power) const {
    LaurentPolynomial r(nvars_);
    for (const auto& t : terms_) {
      if (t.exp[nvars_ - 1] != power) continue;
      Term u = t;
      u.exp.set(nvars_ - 1, 0);
      r.terms_.push_back(std::move(u));
    }
    r.sort_terms();
    return r;
  }

  LaurentPolynomial operator-() const {
    LaurentPolynomial r = *this;
    for (auto& t : r.terms_) t.coeff = -t.coeff;
    return r;
  }

  LaurentPolynomial& operator+=(const LaurentPolynomial& o) { return *this = merge(*this, o, false); }
  LaurentPolynomial& operator-=(const LaurentPolynomial& o) { return *this = merge(*this, o, true); }
  LaurentPolynomial& operator*=(const LaurentPolynomial& o) { return *this = multiply(*this, o); }

  friend LaurentPolynomial operator+(const LaurentPolynomial& p, const LaurentPolynomial& q) {
    return merge(p, q, false);
  }
  friend LaurentPolynomial operator-(const LaurentPolynomial& p, const LaurentPolynomial& q) {
    return merge(p, q, true);
  }
  friend LaurentPolynomial operator*(const LaurentPolynomial& p, const LaurentPolynomial& q) {
    return multiply(p, q);
  }

  friend bool operator==(const LaurentPolynomial& p, const LaurentPolynomial& q) {
    return p.nvars_ == q.nvars_ && p.terms_ == q.terms_;
  }

  /// Multiplies every term by the monomial `shift` (exponents added).
  LaurentPolynomial shifted(const ExponentVector& shift) const {
    LaurentPolynomial r = *this;
    for (auto& t : r.terms_) t.exp += shift;
    return r;
  }

  LaurentPolynomial scaled(const BigInt& c) const {
    if (c == 0) return LaurentPolynomial(nvars_);
    LaurentPolynomial r = *this;
    for (auto& t : r.terms_) t.coeff *= c;
    return r;
  }

  /// Renames variables: x_i becomes x_{perm[i]}. `perm` must fix the last (a) position.
  LaurentPolynomial permuted(std::span<const std::size_t> perm) const {
    if (perm.size() != nvars_ || perm[nvars_ - 1] != nvars_ - 1)
      throw Error(ErrorKind::VariableMismatch, "permutation must cover all variables and fix a");
    LaurentPolynomial r(nvars_);
    r.terms_.reserve(terms_.size());
    for (const auto& t : terms_) {
      ExponentVector e(nvars_);
      for (std::size_t i = 0; i < nvars_; ++i) e.set(perm[i], t.exp[i]);
      r.terms_.push_back({e, t.coeff});
    }
    r.sort_terms();
    return r;
  }

  /// Coordinate reversal x_i -> x_{n-2-i}; a is fixed.
  LaurentPolynomial reversed_x() const {
    std::vector<std::size_t> perm(nvars_);
    for (std::size_t i = 0; i + 1 < nvars_; ++i) perm[i] = nvars_ - 2 - i;
    perm[nvars_ - 1] = nvars_ - 1;
    return permuted(perm);
  }

  /// Exact evaluation at rational values for x0..x{n-2}, a.
  Rational substitute(std::span<const Rational> values) const {
    if (values.size() != nvars_)
      throw Error(ErrorKind::VariableMismatch, "substitute expects " + std::to_string(nvars_) + " values");
    for (std::size_t i = 0; i < nvars_; ++i) {
      if (!values[i].is_zero()) continue;
      for (const auto& t : terms_)
        if (t.exp[i] < 0)
          throw Error(ErrorKind::ZeroAtNegativeExponent, "variable " + variable_name(i) + " is zero",
                      static_cast<std::int64_t>(i));
    }
    // Common denominator per variable: sum c * prod num_i^{e_i} den_i^{m_i - e_i}, then divide once.
    std::vector<std::int32_t> lo(nvars_, 0), hi(nvars_, 0);
    for (const auto& t : terms_)
      for (std::size_t i = 0; i < nvars_; ++i) {
        lo[i] = std::min(lo[i], t.exp[i]);
        hi[i] = std::max(hi[i], t.exp[i]);
      }
    BigInt total = 0;
    BigInt tmp, factor;
    for (const auto& t : terms_) {
      BigInt prod = t.coeff;
      for (std::size_t i = 0; i < nvars_; ++i) {
        // value^e = num^e / den^e; scaled by num^{-lo} den^{hi} to stay integral.
        const std::int32_t e = t.exp[i];
        const auto& num = values[i].num();
        const auto& den = values[i].den();
        mpz_pow_ui(factor.get_mpz_t(), num.get_mpz_t(), static_cast<unsigned long>(e - lo[i]));
        prod *= factor;
        mpz_pow_ui(factor.get_mpz_t(), den.get_mpz_t(), static_cast<unsigned long>(hi[i] - e));
        prod *= factor;
      }
      total += prod;
    }
    BigInt denom = 1;
    for (std::size_t i = 0; i < nvars_; ++i) {
      mpz_pow_ui(tmp.get_mpz_t(), values[i].num().get_mpz_t(), static_cast<unsigned long>(-lo[i]));
      denom *= tmp;
      mpz_pow_ui(tmp.get_mpz_t(), values[i].den().get_mpz_t(), static_cast<unsigned long>(hi[i]));
      denom *= tmp;
    }
    return Rational(total, denom);
  }

  std::string variable_name(std::size_t i) const {
    return i + 1 == nvars_ ? std::string("a") : "x" + std::to_string(i);
  }

  /// Canonical text: terms in decreasing order joined by " + " / " - ".
  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& t : terms_) {
      const bool negative = sgn(t.coeff) < 0;
      if (first) {
        if (negative) out += "-";
      } else {
        out += negative ? " - " : " + ";
      }
      first = false;
      const BigInt mag = abs(t.coeff);
      std::string factors;
      for (std::size_t i = 0; i < nvars_; ++i) {
        if (t.exp[i] == 0) continue;
        if (!factors.empty()) factors += "*";
        factors += variable_name(i);
        if (t.exp[i] != 1) factors += "^" + std::to_string(t.exp[i]);
      }
      if (factors.empty()) {
        out += mag.get_str();
      } else {
        if (mag != 1) out += mag.get_str() + "*";
        out += factors;
      }
    }
    return out;
  }

  /// Parses the canonical text grammar (whitespace-tolerant, like terms combined).
  static LaurentPolynomial parse(std::string_view text, std::size_t nvars);

  friend std::ostream& operator<<(std::ostream& os, const LaurentPolynomial& p) { return os << p.to_string(); }

  friend LaurentPolynomial exact_div(const LaurentPolynomial& n, const LaurentPolynomial& d);

 private:
  static void check_vars(const LaurentPolynomial& p, const LaurentPolynomial& q) {
    if (p.nvars_ != q.nvars_)
      throw Error(ErrorKind::VariableMismatch,
                  "variable count " + std::to_string(p.nvars_) + " vs " + std::to_string(q.nvars_));
  }

  void sort_terms() {
    std::sort(terms_.begin(), terms_.end(), [](const Term& x, const Term& y) { return x.exp > y.exp; });
  }

  static LaurentPolynomial merge(const LaurentPolynomial& p, const LaurentPolynomial& q, bool subtract) {
    check_vars(p, q);
    LaurentPolynomial r(p.nvars_);
    r.terms_.reserve(p.terms_.size() + q.terms_.size());
    auto i = p.terms_.begin();
    auto j = q.terms_.begin();
    while (i != p.terms_.end() || j != q.terms_.end()) {
      if (j == q.terms_.end() || (i != p.terms_.end() && i->exp > j->exp)) {
        r.terms_.push_back(*i++);
      } else if (i == p.terms_.end() || j->exp > i->exp) {
        r.terms_.push_back({j->exp, subtract ? BigInt(-j->coeff) : j->coeff});
        ++j;
      } else {
        BigInt c = subtract ? BigInt(i->coeff - j->coeff) : BigInt(i->coeff + j->coeff);
        if (c != 0) r.terms_.push_back({i->exp, std::move(c)});
        ++i;
        ++j;
      }
    }
    return r;
  }

  static LaurentPolynomial multiply(const LaurentPolynomial& p, const LaurentPolynomial& q) {
    check_vars(p, q);
    LaurentPolynomial r(p.nvars_);
    if (p.terms_.empty() || q.terms_.empty()) return r;
    const LaurentPolynomial& big = p.terms_.size() >= q.terms_.size() ? p : q;
    const LaurentPolynomial& small = p.terms_.size() >= q.terms_.size() ? q : p;
    if (small.terms_.size() == 1) {
      // Monomial multiplication preserves the term order.
      const auto& m = small.terms_.front();
      r.terms_.reserve(big.terms_.size());
      for (const auto& t : big.terms_) r.terms_.push_back({t.exp + m.exp, t.coeff * m.coeff});
      return r;
    }
    std::unordered_map<ExponentVector, BigInt, ExponentHash> acc;
    acc.reserve(big.terms_.size() * small.terms_.size());
    for (const auto& s : small.terms_)
      for (const auto& b : big.terms_) {
        auto& slot = acc[s.exp + b.exp];
        mpz_addmul(slot.get_mpz_t(), s.coeff.get_mpz_t(), b.coeff.get_mpz_t());
      }
    r.terms_.reserve(acc.size());
    for (auto& [e, c] : acc)
      if (c != 0) r.terms_.push_back({e, std::move(c)});
    r.sort_terms();
    return r;
  }

  std::size_t nvars_ = 0;
  std::vector<Term> terms_;
};

/// Exact quotient in the Laurent ring, or Error(NotExact).
///
/// Both operands are first shifted by monomials so the x-exponents are
/// non-negative; the quotient is then found by ordinary multivariate division
/// (leading term by leading term) and shifted back. A monomial factor cannot
/// survive the shift, so a Laurent quotient exists iff the ordinary one does.
inline LaurentPolynomial exact_div(const LaurentPolynomial& n, const LaurentPolynomial& d) {
  LaurentPolynomial::check_vars(n, d);
  if (d.is_zero()) throw Error(ErrorKind::DivisionByZero, "Laurent division by zero");
  const std::size_t nv = n.nvars();
  if (n.is_zero()) return LaurentPolynomial(nv);

  if (d.size() == 1) {
    const auto& m = d.terms_.front();
    LaurentPolynomial q(nv);
    q.terms_.reserve(n.size());
    for (const auto& t : n.terms_) {
      if (!mpz_divisible_p(t.coeff.get_mpz_t(), m.coeff.get_mpz_t()) || t.exp[nv - 1] < m.exp[nv - 1])
        throw Error(ErrorKind::NotExact, "monomial does not divide");
      BigInt c;
      mpz_divexact(c.get_mpz_t(), t.coeff.get_mpz_t(), m.coeff.get_mpz_t());
      q.terms_.push_back({t.exp - m.exp, std::move(c)});
    }
    return q;
  }

  auto min_shift = [nv](const LaurentPolynomial& p) {
    ExponentVector lo(nv);
    for (std::size_t i = 0; i + 1 < nv; ++i) {
      std::int32_t m = p.terms_.front().exp[i];
      for (const auto& t : p.terms_) m = std::min(m, t.exp[i]);
      lo.set(i, m);
    }
    return lo;
  };
  const ExponentVector n_lo = min_shift(n);
  const ExponentVector d_lo = min_shift(d);
  const LaurentPolynomial dn = d.shifted(ExponentVector(nv) - d_lo);

  const Term& lead = dn.terms_.front();
  const Term& tail = dn.terms_.back();
  // Trailing terms multiply too; cheap rejection before the full division.
  {
    ExponentVector nt = n.terms_.back().exp - n_lo;
    if (!tail.exp.divides(nt) || !mpz_divisible_p(n.terms_.back().coeff.get_mpz_t(), tail.coeff.get_mpz_t()))
      throw Error(ErrorKind::NotExact, "trailing term does not divide");
  }

  std::map<ExponentVector, BigInt, std::greater<>> rem;
  for (const auto& t : n.terms_) rem.emplace_hint(rem.end(), t.exp - n_lo, t.coeff);

  LaurentPolynomial q(nv);
  BigInt qc;
  while (!rem.empty()) {
    auto it = rem.begin();
    if (!lead.exp.divides(it->first) || !mpz_divisible_p(it->second.get_mpz_t(), lead.coeff.get_mpz_t()))
      throw Error(ErrorKind::NotExact, "leading term does not divide");
    const ExponentVector qe = it->first - lead.exp;
    mpz_divexact(qc.get_mpz_t(), it->second.get_mpz_t(), lead.coeff.get_mpz_t());
    rem.erase(it);
    for (std::size_t i = 1; i < dn.terms_.size(); ++i) {
      const auto& t = dn.terms_[i];
      auto [slot, inserted] = rem.try_emplace(qe + t.exp);
      mpz_submul(slot->second.get_mpz_t(), qc.get_mpz_t(), t.coeff.get_mpz_t());
      if (sgn(slot->second) == 0) rem.erase(slot);
    }
    q.terms_.push_back({qe, qc});
  }
  // Quotient terms come out in decreasing order already.
  return q.shifted(n_lo - d_lo);
}

inline LaurentPolynomial LaurentPolynomial::parse(std::string_view text, std::size_t nvars) {
  LaurentPolynomial result(nvars);
  std::size_t pos = 0;
  auto fail = [&](const std::string& why) -> Error {
    return Error(ErrorKind::Parse, why + " at offset " + std::to_string(pos) + " in '" + std::string(text) + "'");
  };
  auto skip_ws = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  auto read_digits = [&]() -> std::string {
    const std::size_t start = pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
    return std::string(text.substr(start, pos - start));
  };
  auto read_int = [&]() -> std::int32_t {
    bool neg = false;
    if (pos < text.size() && (text[pos] == '-' || text[pos] == '+')) neg = text[pos++] == '-';
    const std::string digits = read_digits();
    if (digits.empty() || digits.size() > 9) throw fail("expected exponent");
    const auto v = static_cast<std::int32_t>(std::stol(digits));
    return neg ? -v : v;
  };

  skip_ws();
  if (pos == text.size()) throw fail("empty polynomial");
  bool first = true;
  std::vector<Term> terms;
  while (true) {
    skip_ws();
    int sign = 1;
    if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
      sign = text[pos] == '-' ? -1 : 1;
      ++pos;
      skip_ws();
    } else if (!first) {
      throw fail("expected '+' or '-'");
    }
    first = false;
    BigInt coeff = sign;
    ExponentVector exp(nvars);
    bool any_factor = false;
    while (true) {
      skip_ws();
      if (pos >= text.size()) throw fail("expected factor");
      const char c = text[pos];
      if (std::isdigit(static_cast<unsigned char>(c))) {
        coeff *= BigInt(read_digits(), 10);
      } else if (c == 'x' || c == 'a') {
        std::size_t var = nvars - 1;
        ++pos;
        if (c == 'x') {
          const std::string digits = read_digits();
          if (digits.empty() || digits.size() > 3) throw fail("expected variable index");
          var = std::stoul(digits);
          if (var + 1 >= nvars) throw fail("variable index out of range");
        }
        std::int32_t power = 1;
        skip_ws();
        if (pos < text.size() && text[pos] == '^') {
          ++pos;
          skip_ws();
          power = read_int();
        }
        exp.set(var, exp[var] + power);
      } else {
        throw fail("unexpected character");
      }
      any_factor = true;
      skip_ws();
      if (pos < text.size() && text[pos] == '*') {
        ++pos;
        continue;
      }
      break;
    }
    if (!any_factor) throw fail("empty term");
    if (exp[nvars - 1] < 0) throw fail("negative exponent of a");
    terms.push_back({exp, coeff});
    skip_ws();
    if (pos == text.size()) break;
  }
  for (auto& t : terms) result += monomial(t.exp, t.coeff);
  return result;
}

}  // namespace hhrec
