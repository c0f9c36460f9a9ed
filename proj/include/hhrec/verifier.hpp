#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <iomanip>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

#include "hhrec/closed_form.hpp"
#include "hhrec/detect.hpp"
#include "hhrec/error.hpp"
#include "hhrec/invariants.hpp"
#include "hhrec/io.hpp"
#include "hhrec/matrix.hpp"
#include "hhrec/rational_function.hpp"
#include "hhrec/recurrence.hpp"

namespace hhrec {

enum class Check {
  Residual,
  Reversibility,
  Sigma,
  LinearRelation,
  KRoutes,
  FirstIntegral,
  DeltaInvariance,
  Wronskian4,
  Abg,
  Inhomogeneous,
  ClosedForm,
  Explicit,
  Detect,
  OperatorIdentity,
  ProofIdentities,
  ReversalCovariance,
  Dodgson,
  Laurent,
};

struct CheckInfo {
  Check id;
  std::string_view name;
  bool numeric;
  bool symbolic;
};

inline constexpr std::array<CheckInfo, 18> kCheckTable{{
    {Check::Residual, "residual", true, true},
    {Check::Reversibility, "reversibility", true, true},
    {Check::Sigma, "sigma", true, true},
    {Check::LinearRelation, "linear_relation", true, true},
    {Check::KRoutes, "k_routes", true, true},
    {Check::FirstIntegral, "first_integral", true, true},
    {Check::DeltaInvariance, "delta_invariance", true, false},
    {Check::Wronskian4, "wronskian4", true, false},
    {Check::Abg, "abg", true, false},
    {Check::Inhomogeneous, "inhomogeneous", true, false},
    {Check::ClosedForm, "closed_form", true, false},
    {Check::Explicit, "explicit", true, true},
    {Check::Detect, "detect", true, false},
    {Check::OperatorIdentity, "operator_identity", true, false},
    {Check::ProofIdentities, "proof_identities", true, true},
    {Check::ReversalCovariance, "reversal_covariance", true, true},
    {Check::Dodgson, "dodgson", true, false},
    {Check::Laurent, "laurent", false, true},
}};

inline const CheckInfo& check_info(Check c) { return kCheckTable[static_cast<std::size_t>(c)]; }
inline std::string_view check_name(Check c) { return check_info(c).name; }

/// Accepts the canonical name or the same with '-' in place of '_'.
inline Check parse_check(std::string_view name) {
  std::string norm(name);
  std::replace(norm.begin(), norm.end(), '-', '_');
  for (const auto& info : kCheckTable)
    if (info.name == norm) return info.id;
  throw Error(ErrorKind::Parse, "unknown check '" + std::string(name) + "'");
}

inline std::vector<Check> all_checks(bool symbolic) {
  std::vector<Check> out;
  for (const auto& info : kCheckTable)
    if (symbolic ? info.symbolic : info.numeric) out.push_back(info.id);
  return out;
}

enum class Status { Pass, Fail, SkippedDegenerate };

inline std::string_view status_name(Status s) {
  switch (s) {
    case Status::Pass: return "pass";
    case Status::Fail: return "fail";
    case Status::SkippedDegenerate: return "skipped-degenerate";
  }
  return "?";
}

struct TrialConfig {
  int k = 1;
  std::size_t trials = 1;
  std::uint64_t seed = 0;
  std::uint64_t numerator_bound = 9;
  std::uint64_t denominator_bound = 5;
  std::vector<Check> checks = all_checks(false);
  bool symbolic = false;
  std::size_t max_resamples = 16;
  /// Corrupt one value of every trial window; the named check is always run.
  std::optional<Check> inject_fault;
  int symbolic_k_cap = 2;
  std::size_t threads = 1;

  void validate() const {
    auto bad = [](const std::string& why) { return Error(ErrorKind::InvalidSpec, why); };
    if (k < 1) throw bad("k must be >= 1");
    if (trials < 1) throw bad("trials must be >= 1");
    if (numerator_bound < 1 || denominator_bound < 1) throw bad("bounds must be >= 1");
    if (checks.empty()) throw bad("no checks requested");
    if (max_resamples < 1) throw bad("max_resamples must be >= 1");
    if (threads < 1) throw bad("threads must be >= 1");
    for (auto c : checks) {
      const auto& info = check_info(c);
      if (symbolic && !info.symbolic) throw bad("check '" + std::string(info.name) + "' has no symbolic mode");
      if (!symbolic && !info.numeric) throw bad("check '" + std::string(info.name) + "' is symbolic only");
    }
    if (symbolic && k > symbolic_k_cap)
      throw bad("symbolic campaigns are limited to k <= " + std::to_string(symbolic_k_cap));
    if (symbolic && inject_fault) throw bad("fault injection applies to numeric campaigns only");
  }
};

/// Seeded stream: std::mt19937_64 keyed through std::seed_seq on
/// (seed, trial, attempt, stream). Both are fully specified by the standard,
/// and bounded draws use plain rejection, so sequences are portable.
class TrialRng {
 public:
  TrialRng(std::uint64_t seed, std::uint64_t trial, std::uint64_t attempt, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32),
                      static_cast<std::uint32_t>(attempt), static_cast<std::uint32_t>(stream)};
    engine_.seed(seq);
  }

  /// Uniform in [0, bound).
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
    const std::uint64_t limit = max - max % bound;
    std::uint64_t v;
    do {
      v = engine_();
    } while (v >= limit);
    return v % bound;
  }

  /// p/q with 1 <= |p| <= num_bound (or 0 <= |p| when allow_zero), 1 <= q <= den_bound.
  Rational rational(std::uint64_t num_bound, std::uint64_t den_bound, bool allow_zero = false) {
    const bool negative = below(2) == 1;
    const std::uint64_t mag = allow_zero ? below(num_bound + 1) : 1 + below(num_bound);
    const std::uint64_t den = 1 + below(den_bound);
    BigInt p(static_cast<unsigned long>(mag));
    if (negative) p = -p;
    return Rational(p, BigInt(static_cast<unsigned long>(den)));
  }

 private:
  std::mt19937_64 engine_;
};

namespace detail {
enum Stream : std::uint64_t { SpecStream = 0, FaultStream = 1, RawStream = 2, MatrixStream = 3, PointStream = 4 };
}

/// Deterministic function of (cfg.seed, trial, attempt): 2k+1 non-zero initial
/// values and a non-zero a, all within the configured bounds.
inline RecurrenceSpec<Rational> random_spec(const TrialConfig& cfg, std::size_t trial, std::size_t attempt = 0) {
  TrialRng rng(cfg.seed, trial, attempt, detail::SpecStream);
  RecurrenceSpec<Rational> spec;
  spec.k = cfg.k;
  for (int i = 0; i < 2 * cfg.k + 1; ++i) spec.init.push_back(rng.rational(cfg.numerator_bound, cfg.denominator_bound));
  spec.a = rng.rational(cfg.numerator_bound, cfg.denominator_bound);
  return spec;
}

struct Witness {
  std::int64_t index = 0;
  std::string detail;
};

struct CheckRecord {
  Check check;
  int k = 1;
  std::uint64_t seed = 0;
  std::size_t trial = 0;
  Status status = Status::Pass;
  std::optional<Witness> witness;
  double elapsed_ms = 0;
  std::size_t resamples = 0;
  std::vector<std::string> degenerate_reasons;
  json spec;  // the instance the check ran on
  std::optional<std::int64_t> fault_index;
};

struct Summary {
  std::size_t pass = 0, fail = 0, skipped = 0;
};

struct VerificationReport {
  TrialConfig config;
  std::vector<CheckRecord> results;

  Summary summary() const {
    Summary s;
    for (const auto& r : results) {
      if (r.status == Status::Pass) ++s.pass;
      else if (r.status == Status::Fail) ++s.fail;
      else ++s.skipped;
    }
    return s;
  }
  bool ok() const { return summary().fail == 0; }
};

/// Numeric trial window [-6k, 12k+3]: covers every identity plus the closed-form range [-6k, 12k].
inline std::pair<std::int64_t, std::int64_t> numeric_trial_range(int k) { return {-6 * k, 12 * k + 3}; }
/// Symbolic trial window [-2k-2, 6k+4].
inline std::pair<std::int64_t, std::int64_t> symbolic_trial_range(int k) { return {-2 * k - 2, 6 * k + 4}; }

namespace detail {

/// Thrown out of a check when the trial instance is degenerate; the trial is resampled.
struct Degenerate {
  std::string reason;
};

inline json spec_json(const RecurrenceSpec<Rational>& spec) {
  json init = json::array();
  for (const auto& v : spec.init) init.push_back(v.to_string());
  return {{"k", spec.k}, {"a", spec.a.to_string()}, {"init", init}};
}

using CheckResult = std::optional<Witness>;

inline Witness witness(std::int64_t index, std::string detail) { return {index, std::move(detail)}; }

struct NumericTrial {
  const TrialConfig& cfg;
  std::size_t trial;
  std::size_t attempt;
  RecurrenceSpec<Rational> spec;
  SequenceWindow<Rational> window;  // possibly corrupted
  Rational K;
  std::optional<std::int64_t> fault_index;
};

inline CheckResult numeric_check(Check check, const NumericTrial& t) {
  const auto& w = t.window;
  const std::int64_t k = t.spec.k;
  const Rational& K = t.K;
  switch (check) {
    case Check::Residual:
      for (auto n = w.lo(); n + 2 * k + 1 <= w.hi(); ++n)
        if (auto xi = xi_residual(w, n); !xi.is_zero()) return witness(n, "xi = " + xi.to_string());
      return {};

    case Check::Reversibility:
      if (!check_reversibility(t.spec)) return witness(0, "phi != sigma . phi^-1 . sigma");
      return {};

    case Check::Sigma: {
      const auto image = apply_sigma(w);
      if (!(apply_sigma(image) == w)) return witness(w.lo(), "sigma is not an involution");
      const auto direct = generate(t.spec.reversed(), image.lo(), image.hi());
      for (auto n = image.lo(); n <= image.hi(); ++n)
        if (!(image[n] == direct[n]))
          return witness(2 * k - n, "sigma image y_" + std::to_string(n) + " = " + image[n].to_string() +
                                        " but reversed iteration gives " + direct[n].to_string());
      return {};
    }

    case Check::LinearRelation:
      for (auto n = w.lo(); n + 6 * k <= w.hi(); ++n)
        if (auto r = linear_relation_residual(w, n, K); !r.is_zero())
          return witness(n, "x_{n+6k} - K(x_{n+4k} - x_{n+2k}) - x_n = " + r.to_string());
      return {};

    case Check::KRoutes: {
      std::vector<std::pair<std::string, Rational>> routes;
      routes.emplace_back("formula", K);
      const auto ratio = k_ratio_with_fallback(w);
      routes.emplace_back(ratio.shifted ? "ratio_shifted" : "ratio", ratio.value);
      for (std::int64_t n : {0, 1}) {
        const auto [k1, k2] = k12_cramer(w, n);
        routes.emplace_back("cramer_K1@" + std::to_string(n), k1);
        routes.emplace_back("cramer_K2@" + std::to_string(n), k2);
        const auto pc = periodic_coeffs(w, n);
        const auto [m1, m2] = monodromy_k(pc, n);
        routes.emplace_back("monodromy_K1@" + std::to_string(n), m1);
        routes.emplace_back("monodromy_K2@" + std::to_string(n), m2);
      }
      for (const auto& [name, value] : routes)
        if (!(value == K)) {
          std::string detail;
          for (const auto& [n2, v2] : routes) detail += n2 + "=" + v2.to_string() + " ";
          return witness(0, "route " + name + " disagrees: " + detail);
        }
      return {};
    }

    case Check::FirstIntegral:
      for (auto n = w.lo(); n + 2 * k <= w.hi(); ++n) {
        std::vector<Rational> point(w.values().begin() + (n - w.lo()), w.values().begin() + (n - w.lo() + 2 * k + 1));
        const auto Kn = k_formula<Rational>(t.spec.k, t.spec.a, point).K;
        if (!(Kn == K)) return witness(n, "K at shift " + std::to_string(n) + " = " + Kn.to_string());
      }
      return {};

    case Check::DeltaInvariance:
      for (auto n = w.lo(); n + 5 * k + 2 <= w.hi(); ++n) {
        const auto d0 = delta(w, n);
        const auto d1 = delta(w, n + k);
        if (!(d0 == d1)) return witness(n, "delta_n = " + d0.to_string() + ", delta_{n+k} = " + d1.to_string());
      }
      return {};

    case Check::Wronskian4:
      for (auto n = w.lo(); n + 6 * k + 3 <= w.hi(); ++n)
        if (auto d = wronskian4_det(w, n); !d.is_zero()) return witness(n, "det 4x4 Wronskian = " + d.to_string());
      return {};

    case Check::Abg: {
      std::map<std::int64_t, Abg<Rational>> coeffs;
      for (auto n = w.lo(); n + 4 * k + 3 <= w.hi(); ++n) coeffs.emplace(n, abg_coeffs(w, n));
      for (const auto& [n, c] : coeffs) {
        for (std::int64_t s = 0; n + s + 3 <= w.hi(); s += 2 * k) {
          const auto r = w[n + s + 3] - c.gamma * w[n + s + 2] + c.beta * w[n + s + 1] - c.alpha * w[n + s];
          if (!r.is_zero()) return witness(n, "three-term relation residual " + r.to_string() + " at shift " + std::to_string(s));
        }
        if (auto it = coeffs.find(n + k); it != coeffs.end() && !(it->second.alpha == c.alpha))
          return witness(n, "alpha not k-periodic");
        if (auto it = coeffs.find(n + 2 * k); it != coeffs.end() && (!(it->second.beta == c.beta) || !(it->second.gamma == c.gamma)))
          return witness(n, "beta/gamma not 2k-periodic");
        if (coeffs.count(n + k - 1)) {
          Rational prod = 1;
          for (std::int64_t j = 0; j < k; ++j) prod *= coeffs.at(n + j).alpha;
          if (!(prod == Rational(1))) return witness(n, "product of alpha over a period = " + prod.to_string());
        }
      }
      return {};
    }

    case Check::Inhomogeneous: {
      std::map<std::int64_t, InhomCoeffs<Rational>> coeffs;
      for (auto n = w.lo(); n + 4 * k + 2 <= w.hi(); ++n) coeffs.emplace(n, inhom_coeffs(w, n, K));
      for (const auto& [n, c] : coeffs) {
        for (std::int64_t s = 0; n + s + 2 <= w.hi(); s += 2 * k) {
          const auto r = w[n + s + 2] + c.eta * w[n + s + 1] + c.zeta * w[n + s] - c.epsilon;
          if (!r.is_zero()) return witness(n, "epsilon/zeta/eta relation residual " + r.to_string());
        }
        if (auto it = coeffs.find(n + 2 * k); it != coeffs.end()) {
          const auto& d = it->second;
          if (!(d.nu == c.nu)) return witness(n, "nu not 2k-periodic: " + c.nu.to_string() + " vs " + d.nu.to_string());
          if (!(d.epsilon == c.epsilon) || !(d.zeta == c.zeta) || !(d.eta == c.eta))
            return witness(n, "epsilon/zeta/eta not 2k-periodic");
        }
      }
      const Rational kp = k_prime(w, w.lo(), K);
      for (auto n = w.lo() + 1; n + 6 * k - 1 <= w.hi(); ++n)
        if (auto v = k_prime(w, n, K); !(v == kp)) return witness(n, "K' = " + v.to_string() + " vs " + kp.to_string());
      return {};
    }

    case Check::ClosedForm: {
      const auto c = extract_coeffs(w, K);
      for (auto n = w.lo(); n <= w.hi(); ++n)
        if (auto v = eval_closed_form(c, n); !(v == w[n]))
          return witness(n, "closed form gives " + v.to_string() + ", window has " + w[n].to_string());
      return {};
    }

    case Check::Explicit: {
      const auto e = explicit_iterates(t.spec);
      for (std::int64_t n = 2 * k + 1; n <= 4 * k; ++n)
        if (!(e.x(n) == w[n])) return witness(n, "explicit " + e.x(n).to_string() + " vs " + w[n].to_string());
      for (std::int64_t n = -1; n >= -2 * k; --n)
        if (!(e.x(n) == w[n])) return witness(n, "explicit " + e.x(n).to_string() + " vs " + w[n].to_string());
      const auto mirrored = explicit_iterates(t.spec.reversed());
      for (std::int64_t j = 1; j <= 2 * k; ++j)
        if (!(mirrored.x(2 * k + j) == e.x(-j))) return witness(-j, "backward iterate is not the sigma image");
      return {};
    }

    case Check::Detect: {
      const auto found = detect_linear_recurrence(w.values(), static_cast<std::size_t>(6 * k));
      if (!found) return witness(w.lo(), "no recurrence of order <= 6k");
      const std::int64_t order = static_cast<std::int64_t>(found->size()) - 1;
      if (!upoly_divides(*found, linearization_charpoly(t.spec.k, K)))
        return witness(order, "detected order-" + std::to_string(order) + " recurrence does not divide the linearization");
      return {};
    }

    case Check::OperatorIdentity: {
      TrialRng rng(t.cfg.seed, t.trial, t.attempt, RawStream);
      const std::int64_t len = 8 * k + 6;
      std::vector<Rational> vals;
      for (std::int64_t i = 0; i < len; ++i) vals.push_back(rng.rational(t.cfg.numerator_bound, t.cfg.denominator_bound));
      const Rational Kr = rng.rational(t.cfg.numerator_bound, t.cfg.denominator_bound, true);
      const auto raw = SequenceWindow<Rational>::raw(t.spec, 0, std::move(vals));
      for (std::int64_t n = 0; n + 8 * k + 1 <= raw.hi(); ++n) {
        const auto [lhs, rhs] = operator_identity_sides(raw, n, Kr);
        if (!(lhs == rhs)) return witness(n, "L xi = " + lhs.to_string() + ", M L x = " + rhs.to_string());
      }
      return {};
    }

    case Check::ProofIdentities: {
      const auto ids = first_integral_identities(t.spec);
      for (std::size_t i = 0; i < ids.size(); ++i)
        if (!ids[i].is_zero()) return witness(static_cast<std::int64_t>(i + 1), "order-a^" + std::to_string(i + 1) + " identity = " + ids[i].to_string());
      const auto kx = k_expression_identities(t.spec);
      for (std::size_t i = 0; i < kx.size(); ++i)
        if (!kx[i].is_zero()) return witness(static_cast<std::int64_t>(i + 1), "(x_2k - x_0) P^(j) identity, j=" + std::to_string(i + 1));
      return {};
    }

    case Check::ReversalCovariance: {
      const auto Kr = k_formula(t.spec.reversed()).K;
      if (!(Kr == K)) return witness(0, "K(sigma x) = " + Kr.to_string() + " vs K(x) = " + K.to_string());
      return {};
    }

    case Check::Dodgson: {
      TrialRng rng(t.cfg.seed, t.trial, t.attempt, MatrixStream);
      for (std::size_t size : {3u, 4u})
        for (int rep = 0; rep < 5; ++rep) {
          std::vector<Rational> e;
          for (std::size_t i = 0; i < size * size; ++i)
            e.push_back(rng.rational(t.cfg.numerator_bound, t.cfg.denominator_bound, true));
          const Matrix<Rational> m(size, size, std::move(e));
          const auto d1 = det_dodgson(m);
          const auto d2 = det_bareiss(m);
          const auto d3 = det_cofactor(m);
          if (!(d1 == d2) || !(d2 == d3))
            return witness(static_cast<std::int64_t>(size), "dodgson " + d1.to_string() + ", bareiss " + d2.to_string() +
                                                                ", cofactor " + d3.to_string());
        }
      return {};
    }

    case Check::Laurent:
      break;
  }
  throw Error(ErrorKind::InvalidSpec, "check '" + std::string(check_name(check)) + "' is not numeric");
}

struct SymbolicTrial {
  const TrialConfig& cfg;
  std::size_t trial;
  RecurrenceSpec<LaurentPolynomial> spec;
  std::optional<SequenceWindow<LaurentPolynomial>> window;
  std::optional<Error> window_error;
  LaurentPolynomial K;
};

inline const SequenceWindow<LaurentPolynomial>& need_window(const SymbolicTrial& t) {
  if (!t.window) throw *t.window_error;
  return *t.window;
}

inline CheckResult symbolic_check(Check check, const SymbolicTrial& t) {
  const std::int64_t k = t.spec.k;
  const auto& K = t.K;
  switch (check) {
    case Check::Laurent: {
      if (!t.window) return witness(t.window_error->index().value_or(0), t.window_error->what());
      const auto& w = *t.window;
      // Evaluating the Laurent iterates at a rational point must reproduce numeric iteration there.
      for (std::size_t attempt = 0; attempt < 8; ++attempt) {
        TrialRng rng(t.cfg.seed, t.trial, attempt, PointStream);
        std::vector<Rational> point;
        for (std::int64_t i = 0; i < 2 * k + 2; ++i) point.push_back(rng.rational(t.cfg.numerator_bound, t.cfg.denominator_bound));
        RecurrenceSpec<Rational> ns{static_cast<int>(k), point.back(), {point.begin(), point.end() - 1}};
        std::optional<SequenceWindow<Rational>> nw;
        try {
          nw = generate(ns, w.lo(), w.hi());
        } catch (const Error& e) {
          if (e.kind() == ErrorKind::DivisionByZero) continue;
          throw;
        }
        for (auto n = w.lo(); n <= w.hi(); ++n)
          if (auto v = w[n].substitute(point); !(v == (*nw)[n]))
            return witness(n, "Laurent iterate evaluates to " + v.to_string() + ", numeric iteration gives " + (*nw)[n].to_string());
        return {};
      }
      return {};
    }

    case Check::Residual: {
      const auto& w = need_window(t);
      for (auto n = w.lo(); n + 2 * k + 1 <= w.hi(); ++n)
        if (!xi_residual(w, n).is_zero()) return witness(n, "xi_n is not identically zero");
      return {};
    }

    case Check::Reversibility:
      if (!check_reversibility(t.spec)) return witness(0, "phi != sigma . phi^-1 . sigma");
      return {};

    case Check::Sigma: {
      const auto& w = need_window(t);
      const auto image = apply_sigma(w);
      if (!(apply_sigma(image) == w)) return witness(w.lo(), "sigma is not an involution");
      const auto direct = generate(t.spec.reversed(), image.lo(), image.hi());
      for (auto n = image.lo(); n <= image.hi(); ++n)
        if (!(image[n] == direct[n])) return witness(2 * k - n, "sigma image differs from reversed iteration");
      return {};
    }

    case Check::LinearRelation: {
      const auto& w = need_window(t);
      for (auto n = w.lo(); n + 6 * k <= w.hi(); ++n)
        if (!linear_relation_residual(w, n, K).is_zero()) return witness(n, "linear relation fails identically");
      return {};
    }

    case Check::KRoutes: {
      const auto& w = need_window(t);
      const auto r = k_ratio(w);
      if (!(r == K)) return witness(0, "(x_4k - x_-2k)/(x_2k - x_0) = " + r.to_string());
      return {};
    }

    case Check::FirstIntegral: {
      const auto& w = need_window(t);
      std::vector<RationalFunction> shifted;
      for (std::int64_t i = 1; i <= 2 * k + 1; ++i) shifted.emplace_back(w[i]);
      const auto Kphi = k_formula<RationalFunction>(t.spec.k, RationalFunction(t.spec.a), shifted).K;
      if (!(Kphi == RationalFunction(K))) return witness(1, "K(phi(x)) differs from K(x)");
      return {};
    }

    case Check::Explicit: {
      const auto& w = need_window(t);
      const auto e = explicit_iterates(t.spec);
      for (std::int64_t n = 2 * k + 1; n <= 4 * k; ++n)
        if (!(e.x(n) == w[n])) return witness(n, "explicit formula differs from iteration");
      for (std::int64_t n = -1; n >= -2 * k; --n)
        if (!(e.x(n) == w[n])) return witness(n, "explicit formula differs from iteration");
      // F_{-j} = sigma* F_{2k+j}
      for (const auto& [m, f] : e.F1_backward)
        if (!(f == e.F1_forward.at(2 * k - m).reversed_x())) return witness(m, "F1 backward is not the sigma image");
      for (const auto& [m, f] : e.F2_backward)
        if (!(f == e.F2_forward.at(2 * k - m).reversed_x())) return witness(m, "F2 backward is not the sigma image");
      return {};
    }

    case Check::ProofIdentities: {
      const auto ids = first_integral_identities(t.spec);
      for (std::size_t i = 0; i < ids.size(); ++i)
        if (!ids[i].is_zero()) return witness(static_cast<std::int64_t>(i + 1), "order-a^" + std::to_string(i + 1) + " identity = " + ids[i].to_string());
      const auto kx = k_expression_identities(t.spec);
      for (std::size_t i = 0; i < kx.size(); ++i)
        if (!kx[i].is_zero()) return witness(static_cast<std::int64_t>(i + 1), "(x_2k - x_0) P^(j) identity, j=" + std::to_string(i + 1));
      return {};
    }

    case Check::ReversalCovariance: {
      if (!(K.reversed_x() == K)) return witness(0, "sigma* K != K");
      if (!(k_formula(t.spec.reversed()).K == K)) return witness(0, "K evaluated on reversed data differs");
      return {};
    }

    default:
      break;
  }
  throw Error(ErrorKind::InvalidSpec, "check '" + std::string(check_name(check)) + "' is not symbolic");
}

template <class Fn>
std::pair<CheckResult, double> timed(Fn&& fn) {
  const auto start = std::chrono::steady_clock::now();
  CheckResult r = fn();
  const auto stop = std::chrono::steady_clock::now();
  return {std::move(r), std::chrono::duration<double, std::milli>(stop - start).count()};
}

/// Runs one check; degeneracy escapes as Degenerate, any other error is a failure with witness.
template <class Fn>
CheckRecord run_one(Check check, const TrialConfig& cfg, std::size_t trial, Fn&& fn) {
  CheckRecord rec;
  rec.check = check;
  rec.k = cfg.k;
  rec.seed = cfg.seed;
  rec.trial = trial;
  const auto start = std::chrono::steady_clock::now();
  try {
    auto [res, ms] = timed(fn);
    rec.witness = std::move(res);
    rec.elapsed_ms = ms;
  } catch (const Error& e) {
    if (is_degeneracy(e.kind())) throw Degenerate{std::string(check_name(check)) + ": " + e.what()};
    rec.witness = Witness{e.index().value_or(0), e.what()};
    rec.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  }
  rec.status = rec.witness ? Status::Fail : Status::Pass;
  return rec;
}

inline std::vector<CheckRecord> run_numeric_trial(const TrialConfig& cfg, std::size_t trial) {
  std::vector<std::string> reasons;
  const auto [lo, hi] = numeric_trial_range(cfg.k);
  std::vector<Check> checks = cfg.checks;
  if (cfg.inject_fault && std::find(checks.begin(), checks.end(), *cfg.inject_fault) == checks.end())
    checks.push_back(*cfg.inject_fault);

  for (std::size_t attempt = 0; attempt < cfg.max_resamples; ++attempt) {
    auto spec = random_spec(cfg, trial, attempt);
    try {
      std::optional<SequenceWindow<Rational>> window;
      std::optional<Rational> K;
      try {
        window = generate(spec, lo, hi);
        K = k_formula(spec).K;
      } catch (const Error& e) {
        if (is_degeneracy(e.kind())) throw Degenerate{std::string("window: ") + e.what()};
        throw;
      }
      std::optional<std::int64_t> fault;
      if (cfg.inject_fault) {
        TrialRng rng(cfg.seed, trial, attempt, FaultStream);
        const std::int64_t from = std::max<std::int64_t>(2 * cfg.k + 1, lo + 6 * cfg.k + 3);
        fault = from + static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(hi - from + 1)));
        window = window->with_value(*fault, (*window)[*fault] + Rational(1));
      }
      NumericTrial t{cfg, trial, attempt, spec, *window, *K, fault};
      std::vector<CheckRecord> out;
      for (auto c : checks) {
        auto rec = run_one(c, cfg, trial, [&] { return numeric_check(c, t); });
        rec.fault_index = fault;
        out.push_back(std::move(rec));
      }
      for (auto& r : out) {
        r.resamples = attempt;
        r.degenerate_reasons = reasons;
        r.spec = spec_json(spec);
      }
      return out;
    } catch (const Degenerate& d) {
      reasons.push_back("attempt " + std::to_string(attempt) + ": " + d.reason);
    }
  }
  std::vector<CheckRecord> out;
  for (auto c : checks) {
    CheckRecord rec;
    rec.check = c;
    rec.k = cfg.k;
    rec.seed = cfg.seed;
    rec.trial = trial;
    rec.status = Status::SkippedDegenerate;
    rec.resamples = cfg.max_resamples;
    rec.degenerate_reasons = reasons;
    out.push_back(std::move(rec));
  }
  return out;
}

inline std::vector<CheckRecord> run_symbolic_trial(const TrialConfig& cfg, std::size_t trial) {
  const auto [lo, hi] = symbolic_trial_range(cfg.k);
  auto spec = symbolic_spec(cfg.k);
  SymbolicTrial t{cfg, trial, spec, std::nullopt, std::nullopt, k_formula(spec).K};
  try {
    t.window = generate(spec, lo, hi);
  } catch (const Error& e) {
    t.window_error = e;
  }
  std::vector<CheckRecord> out;
  for (auto c : cfg.checks) {
    CheckRecord rec;
    try {
      rec = run_one(c, cfg, trial, [&] { return symbolic_check(c, t); });
    } catch (const Degenerate& d) {
      // Generic data has no degenerate locus; report rather than resample.
      rec.check = c;
      rec.k = cfg.k;
      rec.seed = cfg.seed;
      rec.trial = trial;
      rec.status = Status::Fail;
      rec.witness = Witness{0, d.reason};
    }
    rec.spec = {{"k", cfg.k}, {"symbolic", true}};
    out.push_back(std::move(rec));
  }
  return out;
}

}  // namespace detail

/// Runs every requested check on every trial. Failures are recorded, not thrown.
inline VerificationReport run_campaign(const TrialConfig& cfg) {
  cfg.validate();
  std::vector<std::vector<CheckRecord>> per_trial(cfg.trials);
  auto run = [&](std::size_t trial) {
    per_trial[trial] = cfg.symbolic ? detail::run_symbolic_trial(cfg, trial) : detail::run_numeric_trial(cfg, trial);
  };
  const std::size_t workers = std::min(cfg.threads, cfg.trials);
  if (workers <= 1) {
    for (std::size_t i = 0; i < cfg.trials; ++i) run(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < cfg.trials; i = next++) run(i);
      });
    for (auto& th : pool) th.join();
  }
  VerificationReport report{cfg, {}};
  for (auto& recs : per_trial)
    for (auto& r : recs) report.results.push_back(std::move(r));
  return report;
}

inline json to_json(const TrialConfig& cfg) {
  json checks = json::array();
  for (auto c : cfg.checks) checks.push_back(std::string(check_name(c)));
  return {{"k", cfg.k},
          {"trials", cfg.trials},
          {"seed", cfg.seed},
          {"numerator_bound", cfg.numerator_bound},
          {"denominator_bound", cfg.denominator_bound},
          {"checks", checks},
          {"symbolic", cfg.symbolic},
          {"max_resamples", cfg.max_resamples},
          {"inject_fault", cfg.inject_fault ? json(std::string(check_name(*cfg.inject_fault))) : json(nullptr)}};
}

/// {config, results, summary}; timing fields are omitted when include_timing is false.
inline json to_json(const VerificationReport& report, bool include_timing = true) {
  json results = json::array();
  for (const auto& r : report.results) {
    json rec = {{"check", std::string(check_name(r.check))},
                {"k", r.k},
                {"seed", r.seed},
                {"trial", r.trial},
                {"status", std::string(status_name(r.status))},
                {"witness", r.witness ? json{{"index", r.witness->index}, {"detail", r.witness->detail}} : json(nullptr)},
                {"resamples", r.resamples},
                {"degenerate_reasons", r.degenerate_reasons},
                {"spec", r.spec},
                {"fault_index", r.fault_index ? json(*r.fault_index) : json(nullptr)}};
    if (include_timing) rec["elapsed_ms"] = r.elapsed_ms;
    results.push_back(std::move(rec));
  }
  const auto s = report.summary();
  return {{"config", to_json(report.config)},
          {"results", results},
          {"summary", {{"total", report.results.size()}, {"pass", s.pass}, {"fail", s.fail}, {"skipped_degenerate", s.skipped}}}};
}

/// One row per check: counts and the first failing witness.
inline std::string format_table(const VerificationReport& report) {
  struct Row {
    std::size_t pass = 0, fail = 0, skipped = 0;
    double ms = 0;
    std::string first_witness;
  };
  std::vector<std::pair<Check, Row>> rows;
  for (const auto& r : report.results) {
    auto it = std::find_if(rows.begin(), rows.end(), [&](const auto& p) { return p.first == r.check; });
    if (it == rows.end()) it = rows.insert(rows.end(), {r.check, Row{}});
    auto& row = it->second;
    row.ms += r.elapsed_ms;
    if (r.status == Status::Pass) ++row.pass;
    else if (r.status == Status::Fail) {
      ++row.fail;
      if (row.first_witness.empty() && r.witness)
        row.first_witness = "trial " + std::to_string(r.trial) + " n=" + std::to_string(r.witness->index) + ": " + r.witness->detail;
    } else ++row.skipped;
  }
  std::ostringstream out;
  out << std::left << std::setw(22) << "check" << std::right << std::setw(7) << "pass" << std::setw(7) << "fail"
      << std::setw(9) << "skipped" << std::setw(12) << "time(ms)" << "  witness\n";
  for (const auto& [c, row] : rows) {
    std::string w = row.first_witness;
    if (w.size() > 100) w = w.substr(0, 97) + "...";
    out << std::left << std::setw(22) << check_name(c) << std::right << std::setw(7) << row.pass << std::setw(7)
        << row.fail << std::setw(9) << row.skipped << std::setw(12) << std::fixed << std::setprecision(1) << row.ms
        << "  " << w << "\n";
  }
  const auto s = report.summary();
  out << "total " << report.results.size() << ": " << s.pass << " pass, " << s.fail << " fail, " << s.skipped
      << " skipped-degenerate\n";
  return out.str();
}

}  // namespace hhrec
