#pragma once

// Command dispatch shared by the `cake` tool and its tests.
//
// Every invocation, from flags or from a scenario file, becomes a Request;
// execute() turns it into a RunReport JSON plus an exit code:
//   0 success, 1 input error, 2 a chain found a violation, 3 verification failed.

#include <chrono>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include "cake/ep_best_response.hpp"
#include "cake/io.hpp"
#include "cake/mechanisms.hpp"
#include "cake/properties.hpp"
#include "cake/rw.hpp"
#include "cake/scenarios.hpp"

namespace cake::cli {

using io::input_error;
using io::json;

enum Exit : int { ok = 0, input = 1, violation = 2, unverified = 3 };

struct Request {
  std::string command;
  json arguments = json::object();
  std::optional<Profile> profile;
  std::optional<std::uint64_t> seed;
};

struct Outcome {
  json report;
  int exit_code = Exit::ok;
};

inline const std::vector<std::string>& commands() {
  static const std::vector<std::string> names{"allocate", "check", "gain", "learn", "chain", "verify"};
  return names;
}

inline std::string read_file(const std::string& path, const std::string& field) {
  std::ifstream in(path);
  if (!in) throw input_error(field, "cannot read file \"" + path + "\"");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline json parse_json(const std::string& text, const std::string& field) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw input_error(field, std::string("malformed JSON: ") + e.what());
  }
}

inline Profile load_profile(const std::string& path) {
  return io::profile_from(parse_json(read_file(path, "profile"), "profile"), "profile");
}

// ---- scenario files ------------------------------------------------------

inline Request scenario_from(const json& j, const std::string& base_dir = ".") {
  io::only_keys(j, {"version", "command", "arguments", "profile", "profile_file", "seed"}, "scenario");
  const json& version = io::need(j, "version", "scenario");
  if (!version.is_number_integer() || version.get<long>() != 1)
    throw input_error("scenario.version", "only version 1 is supported");
  Request r;
  const json& cmd = io::need(j, "command", "scenario");
  if (!cmd.is_string()) throw input_error("scenario.command", "expected a string");
  r.command = cmd.get<std::string>();
  if (std::find(commands().begin(), commands().end(), r.command) == commands().end())
    throw input_error("scenario.command", "unknown command \"" + r.command + "\"");
  if (j.contains("arguments")) {
    if (!j.at("arguments").is_object()) throw input_error("scenario.arguments", "expected an object");
    r.arguments = j.at("arguments");
  }
  if (j.contains("profile") && j.contains("profile_file"))
    throw input_error("scenario.profile", "give either profile or profile_file, not both");
  if (j.contains("profile")) r.profile = io::profile_from(j.at("profile"), "scenario.profile");
  if (j.contains("profile_file")) {
    const json& f = j.at("profile_file");
    if (!f.is_string()) throw input_error("scenario.profile_file", "expected a string");
    std::string path = f.get<std::string>();
    if (!path.empty() && path.front() != '/') path = base_dir + "/" + path;
    r.profile = load_profile(path);
  }
  if (j.contains("seed")) r.seed = io::index_from(j.at("seed"), "scenario.seed");
  return r;
}

/// Serializes a request as a version-1 scenario with an inline profile.
inline json to_json(const Request& r) {
  json out{{"version", 1}, {"command", r.command}, {"arguments", r.arguments}};
  if (r.profile) out["profile"] = io::to_json(*r.profile);
  if (r.seed) out["seed"] = *r.seed;
  return out;
}

// ---- argument access -----------------------------------------------------

class Args {
 public:
  Args(const json& j, std::string command) : j_(j), command_(std::move(command)) {
    if (!j_.is_object()) throw input_error("arguments", "expected an object");
  }

  void allow(std::initializer_list<const char*> keys) const { io::only_keys(j_, keys, "arguments"); }

  [[nodiscard]] bool has(const char* key) const { return j_.contains(key) && !j_.at(key).is_null(); }

  [[nodiscard]] std::string text(const char* key, std::optional<std::string> fallback = {}) const {
    if (!has(key)) {
      if (fallback) return *fallback;
      throw input_error(field(key), "missing argument for " + command_);
    }
    if (!j_.at(key).is_string()) throw input_error(field(key), "expected a string");
    return j_.at(key).get<std::string>();
  }

  [[nodiscard]] Rational rational(const char* key, std::optional<Rational> fallback = {}) const {
    if (!has(key)) {
      if (fallback) return *fallback;
      throw input_error(field(key), "missing argument for " + command_);
    }
    return io::rational_from(j_.at(key), field(key));
  }

  [[nodiscard]] std::size_t index(const char* key, std::optional<std::size_t> fallback = {}) const {
    if (!has(key)) {
      if (fallback) return *fallback;
      throw input_error(field(key), "missing argument for " + command_);
    }
    return io::index_from(j_.at(key), field(key));
  }

  [[nodiscard]] const json& raw(const char* key) const { return j_.at(key); }
  [[nodiscard]] std::string field(const char* key) const { return std::string("arguments.") + key; }

 private:
  const json& j_;
  std::string command_;
};

inline Mechanism mechanism_arg(const Args& args, std::optional<std::string> fallback = {}) {
  const std::string name = args.text("mechanism", std::move(fallback));
  try {
    return make_mechanism(name);
  } catch (const unknown_mechanism& e) {
    std::string known;
    for (const auto& n : mechanism_names()) known += (known.empty() ? "" : ", ") + n;
    throw input_error(args.field("mechanism"), std::string(e.what()) + " (known: " + known + ")");
  }
}

inline const Profile& profile_arg(const Request& r) {
  if (!r.profile) throw input_error("profile", "this command needs a profile (--profile <file>)");
  return *r.profile;
}

inline std::size_t agent_arg(const Args& args, const Profile& p) {
  std::size_t i = args.index("agent");
  if (i >= p.size())
    throw input_error(args.field("agent"), "agent " + std::to_string(i) + " out of range for " +
                                                   std::to_string(p.size()) + " agents");
  return i;
}

// ---- commands ------------------------------------------------------------

inline json run_allocate(const Request& r, const Args& args) {
  args.allow({"mechanism"});
  const Mechanism m = mechanism_arg(args);
  const Profile& p = profile_arg(r);
  return {{"allocation", io::to_json(m(p), &p)}};
}

inline json run_check(const Request& r, const Args& args) {
  args.allow({"mechanism"});
  const Mechanism m = mechanism_arg(args);
  const Profile& p = profile_arg(r);
  return {{"report", io::to_json(check_properties(m, p))}};
}

inline json run_gain(const Request& r, const Args& args) {
  args.allow({"mechanism", "agent", "engine", "rounds", "resolution", "budget"});
  const Mechanism m = mechanism_arg(args);
  const Profile& p = profile_arg(r);
  const std::size_t agent = agent_arg(args, p);
  SearchConfig cfg;
  cfg.rounds = static_cast<int>(args.index("rounds", static_cast<std::size_t>(cfg.rounds)));
  cfg.resolution = static_cast<int>(args.index("resolution", static_cast<std::size_t>(cfg.resolution)));
  cfg.max_evaluations = args.index("budget", cfg.max_evaluations);
  if (cfg.resolution < 1) throw input_error(args.field("resolution"), "must be at least 1");
  cfg.seed = r.seed.value_or(0);
  const std::string engine = args.text("engine", std::string("grid"));
  if (engine == "grid") return {{"certificate", io::to_json(best_response_gain(m, p, agent, cfg))}};
  if (engine == "ep-exact") {
    try {
      EpBestResponse br = ep_cutpoint_best_response(m, p, agent, cfg);
      return {{"certificate", io::to_json(br.certificate)}, {"planned_value", io::to_json(br.planned_value)}};
    } catch (const not_ep_family& e) {
      throw input_error(args.field("engine"), e.what());
    }
  }
  throw input_error(args.field("engine"), "expected grid or ep-exact");
}

inline json run_learn(const Request& r, const Args& args) {
  args.allow({"agent", "k", "eps"});
  const Profile& p = profile_arg(r);
  const std::size_t agent = agent_arg(args, p);
  const auto k = static_cast<std::int64_t>(args.index("k"));
  const Rational eps = args.rational("eps");
  if (k < 1) throw input_error(args.field("k"), "must be at least 1");
  if (eps.sign() <= 0) throw input_error(args.field("eps"), "must be positive");
  RWOracle oracle(p[agent]);
  LearnedValuation l = approximate_valuation(oracle, k, eps);
  return {{"learned", io::to_json(l)}, {"query_count", oracle.query_count()}};
}

inline std::optional<std::string> default_chain_mechanism(const std::string& chain) {
  if (chain == "thm1") return "equal-split";
  if (chain == "prop1" || chain == "thm2") return "even-paz";
  if (chain == "discussion") return "modified-ep-exchange";
  return std::nullopt;
}

inline Outcome run_chain(const Request&, const Args& args) {
  args.allow({"name", "mechanism", "n", "eps1", "eps2", "delta"});
  const std::string name = args.text("name");
  auto fallback = default_chain_mechanism(name);
  if (!fallback) throw input_error(args.field("name"), "expected thm1, prop1, thm2 or discussion");
  const Mechanism m = mechanism_arg(args, fallback);
  ChainParameters params;
  params.n = args.index("n", name == "thm2" ? 3 : 2);
  params.eps1 = args.rational("eps1", Rational(0));
  params.eps2 = args.rational("eps2", Rational(0));
  if (args.has("delta")) {
    const json& d = args.raw("delta");
    if (!d.is_object()) throw input_error(args.field("delta"), "expected an object of delta overrides");
    for (const auto& [k, v] : d.items()) params.delta_overrides[k] = io::rational_from(v, args.field("delta") + "." + k);
  }
  std::optional<ViolationWitness> w;
  try {
    if (name == "thm1") w = thm1_chain(m, params);
    if (name == "prop1") w = prop1_chain(m, params);
    if (name == "thm2") w = thm2_chain(m, params);
    if (name == "discussion") w = discussion_chain(m);
  } catch (const infeasible_parameters& e) {
    throw input_error("arguments", std::string("infeasible parameters: ") + e.what());
  }
  json out{{"witness", w ? io::to_json(*w) : json(nullptr)}};
  if (w) out["verified"] = verify_witness(m, *w);
  return {out, w ? Exit::violation : Exit::ok};
}

/// Accepts a bare witness, or the report of a `chain` or `gain` run.
inline Outcome verify_document(const json& doc) {
  if (doc.is_object() && doc.contains("outputs") && doc.contains("inputs")) {
    const json& out = doc.at("outputs");
    const json& in = doc.at("inputs");
    if (out.contains("witness") && !out.at("witness").is_null()) return verify_document(out.at("witness"));
    if (out.contains("certificate")) {
      if (!in.contains("profile")) throw input_error("inputs.profile", "gain report without a profile");
      const Profile p = io::profile_from(in.at("profile"), "inputs.profile");
      const GainCertificate cert = io::certificate_from(out.at("certificate"), "outputs.certificate");
      if (!in.contains("arguments")) throw input_error("inputs.arguments", "missing field");
      const Mechanism m = mechanism_arg(Args(in.at("arguments"), "verify"));
      bool good = verify_certificate(m, p, cert);
      return {{{"verified", good}, {"kind", "certificate"}, {"mechanism", m.name}}, good ? Exit::ok : Exit::unverified};
    }
    throw input_error("outputs", "nothing to verify in this report");
  }
  const ViolationWitness w = io::witness_from(doc);
  Mechanism m;
  try {
    m = make_mechanism(w.mechanism);
  } catch (const unknown_mechanism& e) {
    throw input_error("witness.mechanism", e.what());
  }
  bool good = verify_witness(m, w);
  return {{{"verified", good}, {"kind", "witness"}, {"chain", w.chain}, {"mechanism", w.mechanism}},
          good ? Exit::ok : Exit::unverified};
}

inline Outcome run_verify(const Request&, const Args& args) {
  args.allow({"witness", "document"});
  if (args.has("document")) return verify_document(args.raw("document"));
  const std::string path = args.text("witness");
  return verify_document(parse_json(read_file(path, args.field("witness")), args.field("witness")));
}

/// Runs one request; input problems become exit code 1 with a diagnostic.
inline Outcome execute(const Request& r, bool timing = false) {
  const auto start = std::chrono::steady_clock::now();
  json inputs{{"command", r.command}, {"arguments", r.arguments}};
  if (r.profile) inputs["profile"] = io::to_json(*r.profile);
  if (r.seed) inputs["seed"] = *r.seed;
  Outcome o;
  try {
    Args args(r.arguments, r.command);
    if (r.command == "allocate") o.report = run_allocate(r, args);
    else if (r.command == "check") o.report = run_check(r, args);
    else if (r.command == "gain") o.report = run_gain(r, args);
    else if (r.command == "learn") o.report = run_learn(r, args);
    else if (r.command == "chain") o = run_chain(r, args);
    else if (r.command == "verify") o = run_verify(r, args);
    else throw input_error("command", "unknown command \"" + r.command + "\"");
  } catch (const input_error& e) {
    return {{{"error", e.what()}, {"field", e.field()}, {"inputs", inputs}}, Exit::input};
  } catch (const std::invalid_argument& e) {
    return {{{"error", e.what()}, {"inputs", inputs}}, Exit::input};
  }
  json report{{"command", r.command}, {"inputs", inputs}, {"outputs", o.report}, {"exact", true}};
  if (timing) {
    const auto us =
        std::chrono::duration_cast<std::chrono::microseconds>(std::chrono::steady_clock::now() - start).count();
    report["timing_us"] = us;
  }
  o.report = std::move(report);
  return o;
}

// ---- rendering -----------------------------------------------------------

namespace detail {

inline bool scalar_array(const json& j) {
  if (!j.is_array()) return false;
  for (const auto& e : j)
    if (e.is_structured() && !(e.is_array() && e.size() == 2 && e[0].is_string())) return false;
  return true;
}

inline std::string inline_value(const json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_array()) {
    std::string s = "[";
    for (std::size_t i = 0; i < j.size(); ++i) s += (i ? ", " : "") + inline_value(j[i]);
    return s + "]";
  }
  return j.dump();
}

inline void render(std::ostream& os, const json& j, int depth) {
  const std::string pad(static_cast<std::size_t>(depth) * 2, ' ');
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) {
      if (v.is_object() || (v.is_array() && !scalar_array(v))) {
        os << pad << k << ":\n";
        render(os, v, depth + 1);
      } else {
        os << pad << k << ": " << inline_value(v) << "\n";
      }
    }
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) {
      if (!j[i].is_structured() || scalar_array(j[i])) {
        os << pad << "[" << i << "] " << inline_value(j[i]) << "\n";
        continue;
      }
      os << pad << "[" << i << "]\n";
      render(os, j[i], depth + 1);
    }
  } else {
    os << pad << inline_value(j) << "\n";
  }
}

}  // namespace detail

inline std::string emit(const json& report, const std::string& format) {
  if (format == "json") return report.dump(2) + "\n";
  std::ostringstream os;
  const json& out = report.contains("outputs") ? report.at("outputs") : report;
  if (out.contains("witness") && out.at("witness").is_object())
    os << "violation (" << out["witness"]["violated"].get<std::string>() << "): "
       << out["witness"]["summary"].get<std::string>() << "\n";
  detail::render(os, out, 0);
  if (report.contains("error")) os << "error: " << report["error"].get<std::string>() << "\n";
  return os.str();
}

}  // namespace cake::cli
