#pragma once

// JSON encoding of every artifact the CLI reads or writes.
//
// Rationals travel as strings ("3/4", "2", "0.25" on input) so nothing is
// lost; object keys come out sorted, which makes output byte-stable. Input
// errors carry the JSON path of the offending field.

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cake/allocation.hpp"
#include "cake/properties.hpp"
#include "cake/rw.hpp"
#include "cake/scenarios.hpp"

namespace cake::io {

using json = nlohmann::json;

class input_error : public std::runtime_error {
 public:
  input_error(const std::string& field, const std::string& what)
      : std::runtime_error(field + ": " + what), field_(field) {}
  [[nodiscard]] const std::string& field() const { return field_; }

 private:
  std::string field_;
};

inline json to_json(const Rational& r) { return r.str(); }

inline Rational rational_from(const json& j, const std::string& field) {
  if (j.is_string()) {
    try {
      return Rational::parse(j.get<std::string>());
    } catch (const parse_error& e) {
      throw input_error(field, e.what());
    }
  }
  if (j.is_number_integer()) return Rational(j.get<long>());
  throw input_error(field, "expected a rational string such as \"3/4\"");
}

inline std::vector<Rational> rationals_from(const json& j, const std::string& field) {
  if (!j.is_array()) throw input_error(field, "expected an array");
  std::vector<Rational> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(rational_from(j[i], field + "[" + std::to_string(i) + "]"));
  return out;
}

inline json to_json(const std::vector<Rational>& rs) {
  json out = json::array();
  for (const auto& r : rs) out.push_back(to_json(r));
  return out;
}

/// Rejects keys outside `allowed`.
inline void only_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& field) {
  if (!j.is_object()) throw input_error(field, "expected an object");
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw input_error(field + "." + key, "unknown field");
  }
}

inline const json& need(const json& j, const char* key, const std::string& field) {
  if (!j.contains(key)) throw input_error(field + "." + key, "missing field");
  return j.at(key);
}

inline json to_json(const Valuation& v) {
  return {{"breakpoints", to_json(v.breakpoints())}, {"densities", to_json(v.densities())}};
}

inline Valuation valuation_from(const json& j, const std::string& field) {
  only_keys(j, {"breakpoints", "densities"}, field);
  auto bps = rationals_from(need(j, "breakpoints", field), field + ".breakpoints");
  auto dens = rationals_from(need(j, "densities", field), field + ".densities");
  try {
    return {std::move(bps), std::move(dens)};
  } catch (const std::invalid_argument& e) {
    throw input_error(field, e.what());
  }
}

inline json to_json(const Profile& p) {
  json agents = json::array();
  for (const auto& v : p.agents()) agents.push_back(to_json(v));
  return {{"agents", agents}};
}

inline Profile profile_from(const json& j, const std::string& field = "profile") {
  only_keys(j, {"agents"}, field);
  const json& agents = need(j, "agents", field);
  if (!agents.is_array()) throw input_error(field + ".agents", "expected an array");
  std::vector<Valuation> vs;
  for (std::size_t i = 0; i < agents.size(); ++i)
    vs.push_back(valuation_from(agents[i], field + ".agents[" + std::to_string(i) + "]"));
  try {
    return Profile(std::move(vs));
  } catch (const std::invalid_argument& e) {
    throw input_error(field + ".agents", e.what());
  }
}

inline json to_json(const Piece& piece) {
  json out = json::array();
  for (const auto& iv : piece.intervals()) out.push_back({to_json(iv.lo), to_json(iv.hi)});
  return out;
}

inline Piece piece_from(const json& j, const std::string& field) {
  if (!j.is_array()) throw input_error(field, "expected an array of [lo, hi] pairs");
  std::vector<Interval> ivs;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string f = field + "[" + std::to_string(i) + "]";
    if (!j[i].is_array() || j[i].size() != 2) throw input_error(f, "expected [lo, hi]");
    try {
      ivs.emplace_back(rational_from(j[i][0], f), rational_from(j[i][1], f));
    } catch (const std::invalid_argument& e) {
      throw input_error(f, e.what());
    }
  }
  return Piece(std::move(ivs));
}

/// Pieces, discarded cake and (when a profile is given) exact agent values.
inline json to_json(const Allocation& a, const Profile* p = nullptr) {
  json pieces = json::array();
  for (const auto& piece : a.pieces) pieces.push_back(to_json(piece));
  json out{{"pieces", pieces}, {"discarded", to_json(a.discarded)}};
  if (p != nullptr) out["values"] = to_json(agent_values(a, *p));
  return out;
}

inline json to_json(const PropertyReport& r) {
  return {{"proportionality_deficit", to_json(r.proportionality_deficit)},
          {"envy", to_json(r.envy)},
          {"wasted_measure", to_json(r.wasted_measure)},
          {"contiguous", r.contiguous},
          {"values", to_json(r.values)}};
}

inline PropertyReport report_from(const json& j, const std::string& field) {
  only_keys(j, {"proportionality_deficit", "envy", "wasted_measure", "contiguous", "values"}, field);
  PropertyReport r;
  r.proportionality_deficit = rational_from(need(j, "proportionality_deficit", field), field + ".proportionality_deficit");
  r.envy = rational_from(need(j, "envy", field), field + ".envy");
  r.wasted_measure = rational_from(need(j, "wasted_measure", field), field + ".wasted_measure");
  const json& c = need(j, "contiguous", field);
  if (!c.is_boolean()) throw input_error(field + ".contiguous", "expected a boolean");
  r.contiguous = c.get<bool>();
  r.values = rationals_from(need(j, "values", field), field + ".values");
  return r;
}

inline json to_json(const GainCertificate& c) {
  return {{"agent", c.agent},
          {"truthful_value", to_json(c.truthful_value)},
          {"misreport", to_json(c.misreport)},
          {"deviated_value", to_json(c.deviated_value)},
          {"gain", to_json(c.gain)}};
}

inline std::size_t index_from(const json& j, const std::string& field) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long>() >= 0))
    throw input_error(field, "expected a non-negative integer");
  return j.get<std::size_t>();
}

inline GainCertificate certificate_from(const json& j, const std::string& field) {
  only_keys(j, {"agent", "truthful_value", "misreport", "deviated_value", "gain"}, field);
  return {index_from(need(j, "agent", field), field + ".agent"),
          rational_from(need(j, "truthful_value", field), field + ".truthful_value"),
          valuation_from(need(j, "misreport", field), field + ".misreport"),
          rational_from(need(j, "deviated_value", field), field + ".deviated_value"),
          rational_from(need(j, "gain", field), field + ".gain")};
}

inline json to_json(const ViolationWitness& w) {
  json profiles = json::array();
  for (const auto& p : w.profiles) profiles.push_back(to_json(p));
  json params = json::object();
  for (const auto& [k, v] : w.parameters) params[k] = to_json(v);
  json out{{"chain", w.chain},
           {"mechanism", w.mechanism},
           {"profiles", profiles},
           {"violated", to_string(w.violated)},
           {"threshold", to_json(w.threshold)},
           {"profile_index", w.profile_index},
           {"parameters", params},
           {"summary", w.summary}};
  if (w.certificate) out["certificate"] = to_json(*w.certificate);
  if (w.report) out["report"] = to_json(*w.report);
  return out;
}

inline ViolationWitness witness_from(const json& j, const std::string& field = "witness") {
  only_keys(j,
            {"chain", "mechanism", "profiles", "violated", "threshold", "profile_index", "parameters", "summary",
             "certificate", "report"},
            field);
  ViolationWitness w;
  auto text = [&](const char* key) {
    const json& s = need(j, key, field);
    if (!s.is_string()) throw input_error(field + "." + key, "expected a string");
    return s.get<std::string>();
  };
  w.chain = text("chain");
  w.mechanism = text("mechanism");
  w.summary = text("summary");
  try {
    w.violated = violation_kind_from_string(text("violated"));
  } catch (const std::invalid_argument& e) {
    throw input_error(field + ".violated", e.what());
  }
  const json& profiles = need(j, "profiles", field);
  if (!profiles.is_array()) throw input_error(field + ".profiles", "expected an array");
  for (std::size_t i = 0; i < profiles.size(); ++i)
    w.profiles.push_back(profile_from(profiles[i], field + ".profiles[" + std::to_string(i) + "]"));
  w.threshold = rational_from(need(j, "threshold", field), field + ".threshold");
  w.profile_index = index_from(need(j, "profile_index", field), field + ".profile_index");
  const json& params = need(j, "parameters", field);
  if (!params.is_object()) throw input_error(field + ".parameters", "expected an object");
  for (const auto& [k, v] : params.items()) w.parameters[k] = rational_from(v, field + ".parameters." + k);
  if (j.contains("certificate")) w.certificate = certificate_from(j.at("certificate"), field + ".certificate");
  if (j.contains("report")) w.report = report_from(j.at("report"), field + ".report");
  return w;
}

inline json to_json(const LearnedValuation& l) {
  return {{"w", to_json(l.w)},
          {"queries_used", l.queries_used},
          {"epsilon", to_json(l.epsilon)},
          {"k", l.k},
          {"cut_points", to_json(l.cut_points)}};
}

}  // namespace cake::io
