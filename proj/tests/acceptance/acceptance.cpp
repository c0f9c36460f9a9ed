// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "hhrec/closed_form.hpp"
#include "hhrec/detect.hpp"
#include "hhrec/invariants.hpp"
#include "hhrec/matrix.hpp"
#include "hhrec/recurrence.hpp"
#include "hhrec/verifier.hpp"

using namespace hhrec;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& why) {
    if (!ok && pass) {
      pass = false;
      detail = why;
    }
  }
};

RecurrenceSpec<Rational> ones(int k) {
  return {k, Rational(1), std::vector<Rational>(static_cast<std::size_t>(2 * k + 1), Rational(1))};
}

struct CheckTally {
  std::size_t pass = 0, fail = 0, skipped = 0;
  std::string first_failure;
};

/// Shared numeric campaign per k (criteria 2, 3, 7, 9, 10).
struct NumericCampaign {
  int k;
  double seconds;
  std::size_t resampled_trials = 0;
  std::size_t total_resamples = 0;
  std::map<Check, CheckTally> tally;
};

NumericCampaign run_numeric(int k) {
  TrialConfig cfg;
  cfg.k = k;
  cfg.trials = 100;
  cfg.seed = 20240601 + static_cast<std::uint64_t>(k);
  cfg.checks = {Check::LinearRelation, Check::KRoutes,       Check::DeltaInvariance,
                Check::Wronskian4,     Check::Inhomogeneous, Check::ClosedForm};
  const auto start = Clock::now();
  const auto report = run_campaign(cfg);
  NumericCampaign out{k, seconds_since(start), 0, 0, {}};
  std::vector<std::size_t> per_trial(cfg.trials, 0);
  for (const auto& r : report.results) {
    auto& t = out.tally[r.check];
    if (r.status == Status::Pass) ++t.pass;
    else if (r.status == Status::Fail) {
      ++t.fail;
      if (t.first_failure.empty())
        t.first_failure = "k=" + std::to_string(k) + " trial " + std::to_string(r.trial) + ": " + r.witness->detail;
    } else ++t.skipped;
    per_trial[r.trial] = r.resamples;
  }
  for (auto n : per_trial) {
    out.total_resamples += n;
    if (n > 0) ++out.resampled_trials;
  }
  return out;
}

void require_all_pass(Outcome& o, const std::vector<NumericCampaign>& runs, Check c) {
  for (const auto& run : runs) {
    const auto it = run.tally.find(c);
    if (it == run.tally.end()) {
      o.require(false, std::string(check_name(c)) + " missing");
      continue;
    }
    const auto& t = it->second;
    o.require(t.fail == 0, std::string(check_name(c)) + " failed: " + t.first_failure);
    o.require(t.pass == 100, std::string(check_name(c)) + ": only " + std::to_string(t.pass) + "/100 trials completed for k=" +
                                 std::to_string(run.k));
  }
}

Outcome symbolic_checks(std::vector<Check> checks, const std::vector<int>& ks, double limit_seconds, std::string& timing) {
  Outcome o;
  for (int k : ks) {
    TrialConfig cfg;
    cfg.k = k;
    cfg.symbolic = true;
    cfg.checks = checks;
    const auto start = Clock::now();
    const auto report = run_campaign(cfg);
    const double secs = seconds_since(start);
    timing += " k=" + std::to_string(k) + ":" + std::to_string(secs).substr(0, 5) + "s";
    for (const auto& r : report.results)
      o.require(r.status == Status::Pass, "k=" + std::to_string(k) + " " + std::string(check_name(r.check)) + ": " +
                                              (r.witness ? r.witness->detail : "not run"));
    o.require(secs < limit_seconds, "k=" + std::to_string(k) + " took " + std::to_string(secs) + "s");
  }
  return o;
}

}  // namespace

int main() {
  std::vector<std::pair<std::string, Outcome>> results;
  auto record = [&](const std::string& name, Outcome o) {
    std::cout << (o.pass ? "PASS" : "FAIL") << "  " << name;
    if (!o.detail.empty()) std::cout << "  -- " << o.detail;
    std::cout << std::endl;
    results.emplace_back(name, std::move(o));
  };

  // 1. Special sequences.
  {
    Outcome o;
    const auto start = Clock::now();
    for (int k = 1; k <= 4; ++k) {
      const auto w = generate(ones(k), -50, 150);
      const Rational K(2 * k * k + 8 * k + 4);
      o.require(k_formula(ones(k)).K == K, "K_formula != 2k^2+8k+4 at k=" + std::to_string(k));
      for (auto n = w.lo(); n <= w.hi(); ++n)
        o.require(w[n].is_integer() && w[n].sign() > 0, "x_" + std::to_string(n) + " not a positive integer, k=" + std::to_string(k));
      for (auto n = w.lo(); n + 6 * k <= w.hi(); ++n)
        o.require(linear_relation_residual(w, n, K).is_zero(), "linear relation fails at n=" + std::to_string(n));
    }
    const double secs = seconds_since(start);
    o.require(secs < 10.0, "took " + std::to_string(secs) + "s");
    o.detail = o.pass ? "k=1..4, n in [-50,150], K in {14,28,46,68}, " + std::to_string(secs).substr(0, 5) + "s" : o.detail;
    record("C1 special-sequence reproduction", o);
  }

  // Shared numeric campaigns.
  std::vector<NumericCampaign> runs;
  double campaign_seconds = 0;
  for (int k = 1; k <= 3; ++k) {
    runs.push_back(run_numeric(k));
    campaign_seconds += runs.back().seconds;
  }

  // 2. General linearization.
  {
    Outcome o;
    require_all_pass(o, runs, Check::LinearRelation);
    o.require(campaign_seconds < 60.0, "campaigns took " + std::to_string(campaign_seconds) + "s");
    if (o.pass) {
      std::ostringstream d;
      d << "3x100 trials, window [-6k,12k+3], " << std::to_string(campaign_seconds).substr(0, 5) << "s; resampled trials:";
      for (const auto& r : runs) d << " k=" << r.k << ":" << r.resampled_trials << " (" << r.total_resamples << " draws)";
      o.detail = d.str();
    }
    record("C2 general linearization", o);
  }

  // 3. Four-route K agreement.
  {
    Outcome o;
    require_all_pass(o, runs, Check::KRoutes);
    if (o.pass) o.detail = "formula = ratio|shifted = Cramer K1,K2 = monodromy K1,K2 at n=0,1 on 300 trials";
    record("C3 four-route K agreement", o);
  }

  // 4. First integral, symbolic.
  {
    std::string timing;
    auto o = symbolic_checks({Check::FirstIntegral, Check::ReversalCovariance}, {1, 2}, 120.0, timing);
    if (o.pass) o.detail = "K(phi(x)) == K(x) as Laurent polynomials;" + timing;
    record("C4 first integral (symbolic)", o);
  }

  // 5. Laurent property.
  {
    Outcome o;
    for (int k = 1; k <= 2; ++k) {
      try {
        const auto w = generate(symbolic_spec(k), -2 * k - 2, 6 * k + 4);
        for (const auto& v : w.values()) {
          o.require(!v.is_zero(), "zero iterate");
          for (const auto& t : v.terms()) o.require(t.exp[t.exp.size() - 1] >= 0 && t.coeff != 0, "bad term");
        }
      } catch (const Error& e) {
        o.require(false, std::string("k=") + std::to_string(k) + ": " + e.what());
      }
    }
    std::string timing;
    const auto c = symbolic_checks({Check::Laurent, Check::Residual}, {1, 2}, 120.0, timing);
    o.require(c.pass, c.detail);
    if (o.pass) o.detail = "n in [-2k-2, 6k+4], k=1,2: exact divisions, integer coefficients, evaluation matches numeric iteration";
    record("C5 Laurent property", o);
  }

  // 6. Explicit iterates.
  {
    std::string timing;
    auto o = symbolic_checks({Check::Explicit, Check::ProofIdentities}, {1, 2}, 120.0, timing);
    if (o.pass) o.detail = "4k positions plus F backward = sigma* F forward, k=1,2;" + timing;
    record("C6 explicit iterates (symbolic)", o);
  }

  // 7. Determinant suite.
  {
    Outcome o;
    require_all_pass(o, runs, Check::DeltaInvariance);
    require_all_pass(o, runs, Check::Wronskian4);
    std::mt19937_64 rng(7007);
    std::uniform_int_distribution<long> num(-9, 9), den(1, 6);
    std::size_t fallbacks = 0;
    for (std::size_t n : {3u, 4u})
      for (int i = 0; i < 1000; ++i) {
        std::vector<Rational> e;
        for (std::size_t j = 0; j < n * n; ++j) e.emplace_back(BigInt(num(rng)), BigInt(den(rng)));
        const Matrix<Rational> m(n, n, std::move(e));
        if (!dodgson_condense(m)) ++fallbacks;
        o.require(det_dodgson(m) == det_bareiss(m), "Dodgson != Bareiss");
        o.require(det_bareiss(m) == det_cofactor(m), "Bareiss != cofactor");
      }
    if (o.pass)
      o.detail = "delta_{n+k}=delta_n and det 4x4 = 0 on 300 trials; 2000 matrices agree (" + std::to_string(fallbacks) +
                 " condensation fallbacks)";
    record("C7 determinant suite", o);
  }

  // 8. Operator identity on raw windows.
  {
    Outcome o;
    for (int k = 1; k <= 2; ++k) {
      TrialConfig cfg;
      cfg.k = k;
      cfg.trials = 100;
      cfg.seed = 808 + static_cast<std::uint64_t>(k);
      cfg.checks = {Check::OperatorIdentity};
      const auto s = run_campaign(cfg).summary();
      o.require(s.pass == 100, "k=" + std::to_string(k) + ": " + std::to_string(s.pass) + "/100 raw windows");
    }
    if (o.pass) o.detail = "100 random raw windows with random K, k=1,2";
    record("C8 operator identity", o);
  }

  // 9. Inhomogeneous relations.
  {
    Outcome o;
    require_all_pass(o, runs, Check::Inhomogeneous);
    const auto w = generate(ones(1), -4, 12);
    const Rational K(14);
    o.require(nu(w, 0, K) == Rational(-5), "nu_0 = " + nu(w, 0, K).to_string());
    o.require(nu(w, 1, K) == Rational(-7), "nu_1 = " + nu(w, 1, K).to_string());
    o.require(k_prime(w, 0, K) == Rational(-12), "K' = " + k_prime(w, 0, K).to_string());
    o.require(k_prime(w, 1, K) == Rational(-12), "shifted K' = " + k_prime(w, 1, K).to_string());
    if (o.pass) o.detail = "2k-periodic on 300 trials; nu_0=-5, nu_1=-7, K'=-12";
    record("C9 inhomogeneous relations", o);
  }

  // 10. Closed form.
  {
    Outcome o;
    require_all_pass(o, runs, Check::ClosedForm);
    const auto c = extract_coeffs(generate(ones(1), -2, 4), Rational(14));
    o.require(c.triples[0].q == Rational::parse("5/11") && c.triples[0].r == Rational::parse("144/143") &&
                  c.triples[0].s == Rational::parse("-66/143"),
              "golden triple mismatch");
    if (o.pass) o.detail = "n in [-6k,12k] on 300 trials; (q0,r0,s0) = (5/11, 144/143, -66/143)";
    record("C10 closed form", o);
  }

  // 11. Detection oracle.
  {
    Outcome o;
    const auto w = generate(ones(1), 0, 19);
    const auto found = detect_linear_recurrence(w.values(), 6);
    UPoly expected;
    for (long v : {1, 0, -14, 0, 14, 0, -1}) expected.emplace_back(v);
    o.require(found.has_value() && *found == expected, "all-ones k=1 charpoly mismatch");
    for (int k = 1; k <= 2; ++k) {
      TrialConfig cfg;
      cfg.k = k;
      cfg.trials = 20;
      cfg.seed = 1111 + static_cast<std::uint64_t>(k);
      cfg.checks = {Check::Detect};
      const auto s = run_campaign(cfg).summary();
      o.require(s.pass == 20, "k=" + std::to_string(k) + ": " + std::to_string(s.pass) + "/20");
    }
    if (o.pass) o.detail = "S^6 - 14S^4 + 14S^2 - 1; divides the linearization on 2x20 trials";
    record("C11 detection oracle", o);
  }

  // 12. Negative controls.
  {
    Outcome o;
    std::size_t failures = 0;
    for (int k = 1; k <= 3; ++k) {
      TrialConfig cfg;
      cfg.k = k;
      cfg.trials = 20;
      cfg.seed = 1212 + static_cast<std::uint64_t>(k);
      cfg.checks = {Check::LinearRelation, Check::Wronskian4};
      cfg.inject_fault = Check::LinearRelation;
      const auto [lo, hi] = numeric_trial_range(k);
      for (const auto& r : run_campaign(cfg).results) {
        if (r.status != Status::Fail || !r.witness || !r.fault_index) {
          o.require(false, "corrupted window passed " + std::string(check_name(r.check)));
          continue;
        }
        const std::int64_t reach = r.check == Check::LinearRelation ? 6 * k : 6 * k + 3;
        const std::int64_t expected = std::max(lo, *r.fault_index - reach);
        o.require(r.witness->index == expected, std::string(check_name(r.check)) + " witness " +
                                                    std::to_string(r.witness->index) + ", expected " + std::to_string(expected));
        ++failures;
      }
    }
    if (o.pass) o.detail = std::to_string(failures) + " injected faults detected at the first affected index";
    record("C12 negative controls", o);
  }

  std::size_t passed = 0;
  for (const auto& [name, o] : results) passed += o.pass ? 1 : 0;
  std::cout << passed << "/" << results.size() << " criteria pass" << std::endl;
  return passed == results.size() ? 0 : 1;
}
