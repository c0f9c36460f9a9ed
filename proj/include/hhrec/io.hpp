#pragma once

#include <cstdint>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "hhrec/closed_form.hpp"
#include "hhrec/error.hpp"
#include "hhrec/invariants.hpp"
#include "hhrec/recurrence.hpp"

namespace hhrec {

using json = nlohmann::json;

enum class SequenceFormat { Csv, Json, BFile };

inline SequenceFormat parse_sequence_format(std::string_view name) {
  if (name == "csv") return SequenceFormat::Csv;
  if (name == "json") return SequenceFormat::Json;
  if (name == "bfile") return SequenceFormat::BFile;
  throw Error(ErrorKind::Parse, "unknown sequence format '" + std::string(name) + "'");
}

/// Writes x_n for n in [from, to]. Values use canonical text; bfile rejects non-integers.
template <Scalar S>
std::string export_sequence(const SequenceWindow<S>& w, std::int64_t from, std::int64_t to, SequenceFormat format) {
  std::ostringstream out;
  switch (format) {
    case SequenceFormat::Csv:
      out << "n,value\n";
      for (auto n = from; n <= to; ++n) out << n << "," << to_text(w[n]) << "\n";
      break;
    case SequenceFormat::Json: {
      json arr = json::array();
      for (auto n = from; n <= to; ++n) arr.push_back({{"n", n}, {"value", to_text(w[n])}});
      out << arr.dump(2) << "\n";
      break;
    }
    case SequenceFormat::BFile:
      if constexpr (std::same_as<S, Rational>) {
        for (auto n = from; n <= to; ++n)
          if (!w[n].is_integer())
            throw Error(ErrorKind::NonInteger, "x_" + std::to_string(n) + " = " + w[n].to_string() + " is not an integer",
                        n);
        for (auto n = from; n <= to; ++n) out << n << " " << w[n] << "\n";
      } else {
        throw Error(ErrorKind::NonInteger, "b-files hold integer sequences only");
      }
      break;
  }
  return out.str();
}

/// Reads a numeric sequence in any of the export formats (detected from the
/// content) and returns (n, value) pairs in file order. Indices must be consecutive.
inline std::vector<std::pair<std::int64_t, Rational>> parse_sequence(std::string_view text) {
  std::vector<std::pair<std::int64_t, Rational>> out;
  std::size_t first = text.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return out;
  auto to_index = [](const std::string& s) -> std::int64_t {
    std::size_t used = 0;
    std::int64_t v = 0;
    try {
      v = std::stoll(s, &used);
    } catch (const std::exception&) {
      throw Error(ErrorKind::Parse, "bad index '" + s + "'");
    }
    if (used != s.size()) throw Error(ErrorKind::Parse, "bad index '" + s + "'");
    return v;
  };
  if (text[first] == '[') {
    json arr;
    try {
      arr = json::parse(text);
    } catch (const json::exception& e) {
      throw Error(ErrorKind::Parse, std::string("invalid JSON: ") + e.what());
    }
    if (!arr.is_array()) throw Error(ErrorKind::Parse, "expected a JSON array of {n, value}");
    for (const auto& item : arr) {
      if (!item.is_object() || !item.contains("n") || !item.contains("value"))
        throw Error(ErrorKind::Parse, "expected objects with 'n' and 'value'");
      const auto& n = item["n"];
      const auto& v = item["value"];
      const std::int64_t idx = n.is_number_integer() ? n.get<std::int64_t>() : to_index(n.get<std::string>());
      out.emplace_back(idx, Rational::parse(v.is_string() ? v.get<std::string>() : v.dump()));
    }
  } else {
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      const auto start = line.find_first_not_of(" \t");
      if (start == std::string::npos || line[start] == '#') continue;
      line = line.substr(start);
      if (line.rfind("n,", 0) == 0) continue;  // CSV header
      const auto sep = line.find_first_of(", \t");
      if (sep == std::string::npos) throw Error(ErrorKind::Parse, "expected 'n,value' or 'n value': '" + line + "'");
      std::string value = line.substr(sep + 1);
      const auto vstart = value.find_first_not_of(" \t");
      const auto vend = value.find_last_not_of(" \t");
      if (vstart == std::string::npos) throw Error(ErrorKind::Parse, "missing value: '" + line + "'");
      out.emplace_back(to_index(line.substr(0, sep)), Rational::parse(value.substr(vstart, vend - vstart + 1)));
    }
  }
  for (std::size_t i = 1; i < out.size(); ++i)
    if (out[i].first != out[i - 1].first + 1) throw Error(ErrorKind::Parse, "sequence indices must be consecutive");
  return out;
}

template <Scalar S>
json to_json(const KBreakdown<S>& kb) {
  return {{"P0", to_text(kb.P0)}, {"P1", to_text(kb.P1)}, {"P2", to_text(kb.P2)}, {"K", to_text(kb.K)}};
}

template <Scalar S>
json to_json(const PeriodicCoeffs<S>& pc) {
  auto arr = [](const std::vector<S>& v) {
    json a = json::array();
    for (const auto& x : v) a.push_back(to_text(x));
    return a;
  };
  return {{"alpha", {{"period", pc.k}, {"values", arr(pc.alpha)}}},
          {"beta", {{"period", 2 * pc.k}, {"values", arr(pc.beta)}}},
          {"gamma", {{"period", 2 * pc.k}, {"values", arr(pc.gamma)}}}};
}

inline json to_json(const ClosedFormCoeffs& c) {
  json triples = json::array();
  for (std::size_t j = 0; j < c.triples.size(); ++j)
    triples.push_back({{"j", j},
                       {"q", c.triples[j].q.to_string()},
                       {"r", c.triples[j].r.to_string()},
                       {"s", c.triples[j].s.to_string()}});
  return {{"k", c.k}, {"K", c.point.K.to_string()}, {"t", c.point.t.to_string()}, {"triples", triples}};
}

}  // namespace hhrec
