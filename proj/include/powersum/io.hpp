#pragma once

// JSON and CSV encodings shared by the CLI and golden-file tests.
// Floats are rounded to 12 significant digits so that output is
// byte-stable across platforms; object keys keep insertion order.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "powersum/error.hpp"
#include "powersum/minimax.hpp"
#include "powersum/pds.hpp"
#include "powersum/power_sums.hpp"

namespace powersum::io {

using Json = nlohmann::ordered_json;

inline std::string format12(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

inline double round12(double x) { return std::strtod(format12(x).c_str(), nullptr); }

inline Json rounded(const std::vector<double>& xs) {
  Json out = Json::array();
  for (double x : xs) out.push_back(round12(x));
  return out;
}

inline Json to_json(const pds::PerfectDifferenceSet& d) {
  return Json{{"q", d.q}, {"m", d.m}, {"residues", d.residues}};
}

inline pds::PerfectDifferenceSet pds_from_json(const Json& j) {
  try {
    const auto q = j.at("q").get<std::int64_t>();
    auto d = pds::make_pds(q, j.at("residues").get<std::vector<std::int64_t>>());
    if (j.contains("m") && j.at("m").get<std::int64_t>() != d.m) {
      throw Error(ErrorCode::InvalidPds, "field m does not equal q^2+q+1");
    }
    return d;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("malformed difference set JSON: ") + e.what());
  }
}

inline Json to_json(const UnimodularTuple& t) {
  return Json{{"n", t.n()}, {"alpha_turns", round12(t.alpha_turns())}, {"thetas", rounded(t.thetas())}};
}

inline UnimodularTuple tuple_from_json(const Json& j) {
  try {
    auto thetas = j.at("thetas").get<std::vector<double>>();
    const double alpha = j.contains("alpha_turns") ? j.at("alpha_turns").get<double>() : 0.0;
    if (j.contains("n") && j.at("n").get<std::size_t>() != thetas.size()) {
      throw Error(ErrorCode::InvalidArgument, "field n does not match the number of thetas");
    }
    return UnimodularTuple(std::move(thetas), alpha);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("malformed tuple JSON: ") + e.what());
  }
}

/// One angle per line under the header `theta_turns`.
inline UnimodularTuple tuple_from_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::InvalidArgument, "empty tuple CSV");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "theta_turns") throw Error(ErrorCode::InvalidArgument, "tuple CSV must start with header theta_turns");
  std::vector<double> thetas;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    char* end = nullptr;
    const double v = std::strtod(line.c_str(), &end);
    if (end == line.c_str() || *end != '\0') throw Error(ErrorCode::InvalidArgument, "bad angle: " + line);
    thetas.push_back(v);
  }
  return UnimodularTuple(std::move(thetas));
}

/// JSON object or `theta_turns` CSV, detected by the first character.
inline UnimodularTuple read_tuple_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidArgument, "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  const auto pos = text.find_first_not_of(" \t\r\n");
  if (pos != std::string::npos && text[pos] == '{') {
    Json j;
    try {
      j = Json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::InvalidArgument, std::string("cannot parse tuple JSON: ") + e.what());
    }
    return tuple_from_json(j);
  }
  std::istringstream csv(text);
  return tuple_from_csv(csv);
}

inline std::string profile_csv(const PowerSumProfile& p) {
  std::string out = "nu,abs,epsilon\n";
  for (std::size_t i = 0; i < p.abs_values.size(); ++i) {
    out += std::to_string(i + 1) + "," + format12(p.abs_values[i]) + "," + format12(p.epsilons[i]) + "\n";
  }
  return out;
}

inline Json to_json(const PowerSumProfile& p) {
  return Json{{"n", p.n},
              {"m", p.m},
              {"max_abs", round12(p.max_abs)},
              {"abs_values", rounded(p.abs_values)},
              {"epsilons", rounded(p.epsilons)}};
}

inline Json to_json(const pds::VerifyResult& v) {
  Json j{{"valid", v.valid}};
  if (v.witness) j["witness"] = Json{{"kind", pds::to_string(v.witness->kind)}, {"value", v.witness->value}};
  return j;
}

inline Json to_json(const pds::SearchResult& s, std::int64_t order) {
  Json j{{"order", order}, {"m", pds::modulus_for_order(order)}, {"status", pds::to_string(s.status)},
         {"nodes", s.nodes}};
  if (s.set) j["set"] = to_json(*s.set);
  return j;
}

inline Json to_json(const pds::FeasibilityReport& r) {
  Json j{{"order", r.order},
         {"is_prime_power", r.is_prime_power},
         {"bruck_ryser_excludes", r.bruck_ryser_excludes},
         {"wilbrink_excludes", r.wilbrink_excludes},
         {"exhaustive_result", pds::to_string(r.exhaustive_result)},
         {"search_nodes", r.search_nodes},
         {"verdict", pds::to_string(r.verdict)},
         {"reasons", r.reasons}};
  if (r.example) j["example"] = to_json(*r.example);
  return j;
}

inline Json to_json(const RecoveryResult& r) {
  Json j{{"status", to_string(r.status)},
         {"alpha_turns", round12(r.alpha_turns)},
         {"residual", round12(r.residual)},
         {"profile_deviation", round12(r.profile_deviation)}};
  if (r.pds) {
    j["pds"] = to_json(*r.pds);
    j["canonical"] = pds::canonical_form(*r.pds).residues;
  }
  if (!r.reason.empty()) j["reason"] = r.reason;
  return j;
}

inline Json to_json(const minimax::OptimizerReport& r, const minimax::OptimizerConfig& cfg) {
  return Json{{"n", cfg.n},
              {"restarts", cfg.restarts},
              {"seed", cfg.seed},
              {"best_value", round12(r.best_value)},
              {"bound", round12(std::sqrt(static_cast<double>(cfg.n) - 1.0))},
              {"gap_to_bound", round12(r.gap_to_bound)},
              {"best_restart", r.best_restart},
              {"best_tuple", to_json(r.best_tuple)},
              {"per_restart_values", rounded(r.per_restart_values)},
              {"recovered", to_json(r.recovered)},
              {"evaluations", r.evaluations},
              {"bound_violations", r.bound_violations}};
}

inline std::string trace_csv(const std::vector<minimax::TraceRow>& rows) {
  std::string out = "restart,iter,beta,value\n";
  for (const auto& row : rows) {
    out += std::to_string(row.restart) + "," + std::to_string(row.iter) + "," + format12(row.beta) + "," +
           format12(row.value) + "\n";
  }
  return out;
}

}  // namespace powersum::io
