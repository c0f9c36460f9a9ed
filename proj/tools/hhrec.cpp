#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hhrec/closed_form.hpp"
#include "hhrec/detect.hpp"
#include "hhrec/error.hpp"
#include "hhrec/invariants.hpp"
#include "hhrec/io.hpp"
#include "hhrec/recurrence.hpp"
#include "hhrec/verifier.hpp"

namespace {

using namespace hhrec;

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitDegenerate = 3;

struct SpecArgs {
  int k = 1;
  std::string a = "1";
  std::string init;

  void add_to(CLI::App* cmd, bool init_required) {
    cmd->add_option("--k", k, "Half-order parameter k >= 1")->required();
    cmd->add_option("--a", a, "Parameter a as p/q");
    auto* opt = cmd->add_option("--init", init, "Comma-separated x_0..x_2k as p/q");
    if (init_required) opt->required();
  }

  RecurrenceSpec<Rational> spec() const {
    RecurrenceSpec<Rational> s;
    s.k = k;
    s.a = Rational::parse(a);
    std::stringstream in(init);
    std::string item;
    while (std::getline(in, item, ',')) s.init.push_back(Rational::parse(item));
    if (!init.empty() && init.back() == ',') throw Error(ErrorKind::Parse, "trailing comma in --init");
    s.validate();
    return s;
  }
};

void emit(const std::string& text, const std::string& output) {
  if (output.empty() || output == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(output);
  if (!out) throw Error(ErrorKind::Parse, "cannot write '" + output + "'");
  out << text;
}

std::string read_input(const std::string& path) {
  if (path == "-") return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Parse, "cannot read '" + path + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::vector<std::string> split_commas(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

// gen ------------------------------------------------------------------------

struct GenArgs {
  SpecArgs spec;
  std::optional<std::int64_t> from, to;
  std::string format = "csv";
  std::string output;
};

int cmd_gen(const GenArgs& args) {
  const auto spec = args.spec.spec();
  const auto fmt = parse_sequence_format(args.format);
  std::int64_t from = args.from.value_or(0);
  std::int64_t to = args.to.value_or(2 * spec.k);
  if (from > to) std::swap(from, to);
  const auto w = generate(spec, std::min<std::int64_t>(from, 0), std::max<std::int64_t>(to, 2 * spec.k));
  emit(export_sequence(w, from, to, fmt), args.output);
  return kExitOk;
}

// invariant ------------------------------------------------------------------

struct InvariantArgs {
  SpecArgs spec;
  bool symbolic = false;
  bool all_routes = false;
};

template <class Fn>
auto on_route(const std::string& route, Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    throw Error(e.kind(), "route " + route + ": " + e.what(), e.index());
  }
}

int cmd_invariant(const InvariantArgs& args) {
  json out;
  bool agree = true;
  if (args.symbolic) {
    const auto spec = symbolic_spec(args.spec.k);
    const auto kb = k_formula(spec);
    out = to_json(kb);
    out["k"] = spec.k;
    out["symbolic"] = true;
    if (args.all_routes) {
      const auto w = generate(spec, -2 * spec.k, 4 * spec.k);
      const auto ratio = on_route("ratio", [&] { return k_ratio(w); });
      agree = ratio == kb.K;
      out["routes"] = json::array({{{"route", "formula"}, {"value", kb.K.to_string()}},
                                   {{"route", "ratio"}, {"value", ratio.to_string()}}});
      out["agreement"] = agree;
    }
  } else {
    const auto spec = args.spec.spec();
    const auto kb = on_route("formula", [&] { return k_formula(spec); });
    out = to_json(kb);
    out["k"] = spec.k;
    out["a"] = spec.a.to_string();
    if (args.all_routes) {
      const std::int64_t k = spec.k;
      const auto w = on_route("window", [&] { return generate(spec, -2 * k, 6 * k + 3); });
      std::vector<std::pair<std::string, Rational>> routes{{"formula", kb.K}};
      const auto ratio = on_route("ratio", [&] { return k_ratio_with_fallback(w); });
      routes.emplace_back(ratio.shifted ? "ratio_shifted" : "ratio", ratio.value);
      const auto [c1, c2] = on_route("cramer", [&] { return k12_cramer(w, 0); });
      routes.emplace_back("cramer_K1", c1);
      routes.emplace_back("cramer_K2", c2);
      const auto [m1, m2] = on_route("monodromy", [&] { return monodromy_k(periodic_coeffs(w, 0), 0); });
      routes.emplace_back("monodromy_K1", m1);
      routes.emplace_back("monodromy_K2", m2);
      json table = json::array();
      for (const auto& [name, value] : routes) {
        table.push_back({{"route", name}, {"value", value.to_string()}});
        agree = agree && value == kb.K;
      }
      out["routes"] = table;
      out["agreement"] = agree;
    }
  }
  std::cout << out.dump(2) << "\n";
  return agree ? kExitOk : kExitCheckFailed;
}

// verify ---------------------------------------------------------------------

struct VerifyArgs {
  int k = 1;
  std::size_t trials = 1;
  std::uint64_t seed = 0;
  std::uint64_t numerator_bound = 9;
  std::uint64_t denominator_bound = 5;
  std::string checks = "all";
  bool symbolic = false;
  bool allow_k3 = false;
  std::size_t max_resamples = 16;
  std::string inject_fault;
  std::size_t threads = 1;
  bool json_out = false;
  bool no_timing = false;
  std::string output;
};

int symbolic_k_cap(bool allow_k3) {
  if (const char* env = std::getenv("HH_MAX_SYMBOLIC_K"); env && *env) {
    try {
      std::size_t used = 0;
      const int v = std::stoi(env, &used);
      if (used == std::string(env).size() && v >= 1) return v;
    } catch (const std::exception&) {
    }
    throw Error(ErrorKind::Parse, std::string("HH_MAX_SYMBOLIC_K must be a positive integer, got '") + env + "'");
  }
  return allow_k3 ? 3 : 2;
}

int cmd_verify(const VerifyArgs& args) {
  TrialConfig cfg;
  cfg.k = args.k;
  cfg.trials = args.trials;
  cfg.seed = args.seed;
  cfg.numerator_bound = args.numerator_bound;
  cfg.denominator_bound = args.denominator_bound;
  cfg.symbolic = args.symbolic;
  cfg.max_resamples = args.max_resamples;
  cfg.threads = args.threads;
  cfg.symbolic_k_cap = symbolic_k_cap(args.allow_k3);
  if (args.checks == "all") {
    cfg.checks = all_checks(args.symbolic);
  } else {
    cfg.checks.clear();
    for (const auto& name : split_commas(args.checks)) cfg.checks.push_back(parse_check(name));
  }
  if (!args.inject_fault.empty()) cfg.inject_fault = parse_check(args.inject_fault);

  const auto report = run_campaign(cfg);
  const auto doc = to_json(report, !args.no_timing);
  if (args.json_out) std::cout << doc.dump(2) << "\n";
  else std::cout << format_table(report);
  if (!args.output.empty()) emit(doc.dump(2) + "\n", args.output);
  return report.ok() ? kExitOk : kExitCheckFailed;
}

// closed-form ----------------------------------------------------------------

struct ClosedFormArgs {
  SpecArgs spec;
  std::optional<std::int64_t> eval;
  bool coeffs = false;
};

int cmd_closed_form(const ClosedFormArgs& args) {
  const auto spec = args.spec.spec();
  const std::int64_t k = spec.k;
  const auto K = k_formula(spec).K;
  const auto w = generate(spec, -2 * k, 4 * k);
  const auto c = extract_coeffs(w, K);
  json out;
  if (args.eval) {
    out = {{"n", *args.eval}, {"value", eval_closed_form(c, *args.eval).to_string()}};
  } else {
    out = to_json(c);
  }
  std::cout << out.dump(2) << "\n";
  return kExitOk;
}

// detect ---------------------------------------------------------------------

struct DetectArgs {
  std::string input;
  bool gen = false;
  SpecArgs spec;
  std::optional<std::int64_t> from, to;
  std::optional<std::size_t> max_order;
  bool echo_values = false;
};

int cmd_detect(const DetectArgs& args) {
  std::vector<std::pair<std::int64_t, Rational>> seq;
  std::size_t max_order = args.max_order.value_or(6);
  if (args.gen) {
    const auto spec = args.spec.spec();
    max_order = args.max_order.value_or(static_cast<std::size_t>(6 * spec.k));
    const std::int64_t from = args.from.value_or(0);
    const std::int64_t to =
        args.to.value_or(from + static_cast<std::int64_t>(std::max<std::size_t>(2 * max_order + 2, 20)) - 1);
    const auto w = generate(spec, std::min<std::int64_t>(from, 0), std::max<std::int64_t>(to, 2 * spec.k));
    for (auto n = from; n <= to; ++n) seq.emplace_back(n, w[n]);
  } else {
    seq = parse_sequence(read_input(args.input));
  }
  std::vector<Rational> values;
  for (const auto& [n, v] : seq) values.push_back(v);
  const auto found = detect_linear_recurrence(values, max_order);
  json out;
  if (found) {
    json poly = json::array();
    for (const auto& c : *found) poly.push_back(c.to_string());
    out = {{"order", found->size() - 1}, {"charpoly", poly}};
  } else {
    out = {{"order", nullptr}, {"charpoly", nullptr}};
  }
  out["max_order"] = max_order;
  if (args.echo_values) {
    json vals = json::array();
    for (const auto& [n, v] : seq) vals.push_back({{"n", n}, {"value", v.to_string()}});
    out["values"] = vals;
  }
  std::cout << out.dump(2) << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact tools for the order-(2k+1) recurrence x_{n+2k+1} x_n = x_{n+2k} x_{n+1} + a (x_{n+k} + x_{n+k+1})"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a window of the sequence");
  gen.spec.add_to(gen_cmd, true);
  gen_cmd->add_option("--from", gen.from, "First index (default 0)");
  gen_cmd->add_option("--to", gen.to, "Last index (default 2k)");
  gen_cmd->add_option("--format", gen.format, "csv | json | bfile")->check(CLI::IsMember({"csv", "json", "bfile"}));
  gen_cmd->add_option("--output,-o", gen.output, "Write to a file instead of stdout");

  InvariantArgs inv;
  auto* inv_cmd = app.add_subcommand("invariant", "Compute the conserved quantity K");
  inv.spec.add_to(inv_cmd, false);
  inv_cmd->add_flag("--symbolic", inv.symbolic, "Use generic initial data x0..x2k and symbolic a");
  inv_cmd->add_flag("--all-routes", inv.all_routes, "Compute K by every available route and compare");

  VerifyArgs ver;
  auto* ver_cmd = app.add_subcommand("verify", "Run a randomized exact verification campaign");
  ver_cmd->add_option("--k", ver.k, "Half-order parameter k >= 1")->required();
  ver_cmd->add_option("--trials", ver.trials, "Number of trials");
  ver_cmd->add_option("--seed", ver.seed, "64-bit campaign seed");
  ver_cmd->add_option("--numerator-bound", ver.numerator_bound, "Bound on |numerator| of random rationals");
  ver_cmd->add_option("--denominator-bound", ver.denominator_bound, "Bound on denominators of random rationals");
  ver_cmd->add_option("--checks", ver.checks, "Comma-separated check names, or 'all'");
  ver_cmd->add_flag("--symbolic", ver.symbolic, "Run checks on generic (Laurent polynomial) data");
  ver_cmd->add_flag("--allow-symbolic-k3", ver.allow_k3, "Raise the symbolic k cap from 2 to 3");
  ver_cmd->add_option("--max-resamples", ver.max_resamples, "Resample budget per trial");
  ver_cmd->add_option("--inject-fault", ver.inject_fault, "Corrupt one value per trial window and run the named check");
  ver_cmd->add_option("--threads", ver.threads, "Worker threads");
  ver_cmd->add_flag("--json", ver.json_out, "Print the JSON report instead of the table");
  ver_cmd->add_flag("--no-timing", ver.no_timing, "Omit timing fields from the JSON report");
  ver_cmd->add_option("--output,-o", ver.output, "Also write the JSON report to a file");

  ClosedFormArgs cf;
  auto* cf_cmd = app.add_subcommand("closed-form", "Chebyshev closed form of the solution");
  cf.spec.add_to(cf_cmd, true);
  auto* eval_opt = cf_cmd->add_option("--eval", cf.eval, "Evaluate x_n");
  auto* coeffs_opt = cf_cmd->add_flag("--coeffs", cf.coeffs, "Print the coefficient triples");
  eval_opt->excludes(coeffs_opt);

  DetectArgs det;
  auto* det_cmd = app.add_subcommand("detect", "Find the minimal linear recurrence of a sequence");
  auto* input_opt = det_cmd->add_option("--input", det.input, "Sequence file (csv, json or b-file); '-' for stdin");
  auto* gen_flag = det_cmd->add_flag("--gen", det.gen, "Generate the sequence from --k/--a/--init");
  input_opt->excludes(gen_flag);
  det_cmd->add_option("--k", det.spec.k, "Half-order parameter k >= 1");
  det_cmd->add_option("--a", det.spec.a, "Parameter a as p/q");
  det_cmd->add_option("--init", det.spec.init, "Comma-separated x_0..x_2k as p/q");
  det_cmd->add_option("--from", det.from, "First generated index (default 0)");
  det_cmd->add_option("--to", det.to, "Last generated index");
  det_cmd->add_option("--max-order", det.max_order, "Largest order tried (default 6, or 6k with --gen)");
  det_cmd->add_flag("--echo-values", det.echo_values, "Include the input values in the output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*gen_cmd) return cmd_gen(gen);
    if (*inv_cmd) {
      if (!inv.symbolic && inv.spec.init.empty()) throw Error(ErrorKind::InvalidSpec, "--init is required without --symbolic");
      return cmd_invariant(inv);
    }
    if (*ver_cmd) return cmd_verify(ver);
    if (*cf_cmd) {
      if (!cf.eval && !cf.coeffs) throw Error(ErrorKind::InvalidSpec, "closed-form needs --eval N or --coeffs");
      return cmd_closed_form(cf);
    }
    if (*det_cmd) {
      if (!det.gen && det.input.empty()) throw Error(ErrorKind::InvalidSpec, "detect needs --input or --gen");
      return cmd_detect(det);
    }
  } catch (const Error& e) {
    std::cerr << "error [" << to_string(e.kind()) << "]: " << e.what() << "\n";
    return is_degeneracy(e.kind()) ? kExitDegenerate : kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
