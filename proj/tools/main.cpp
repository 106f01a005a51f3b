// cake: command-line front end. See README.md for the subcommands.

#include <filesystem>
#include <iostream>

#include <CLI11.hpp>

#include "cake/cli.hpp"

using cake::cli::json;

int main(int argc, char** argv) {
  CLI::App app{"exact cake-cutting mechanisms, property checks and manipulation search"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string format = "json";
  std::string profile_path;
  std::uint64_t seed = 0;
  bool timing = false;
  app.add_option("--format", format, "json or text")->check(CLI::IsMember({"json", "text"}));
  auto* seed_opt = app.add_option("--seed", seed, "seed for sampled searches");
  app.add_option("--profile", profile_path, "profile JSON file");
  app.add_flag("--timing", timing, "add wall-clock time to the report (breaks byte-stability)");

  json args = json::object();
  auto text = [&args](CLI::App* sub, const char* name, const std::string& help) {
    sub->add_option_function<std::string>(std::string("--") + name, [&args, name](const std::string& v) { args[name] = v; },
                                          help);
  };
  auto number = [&args](CLI::App* sub, const char* name, const std::string& help) {
    sub->add_option_function<std::size_t>(std::string("--") + name, [&args, name](std::size_t v) { args[name] = v; },
                                          help);
  };

  auto* allocate = app.add_subcommand("allocate", "run a mechanism on a profile");
  text(allocate, "mechanism", "mechanism name");

  auto* check = app.add_subcommand("check", "property report of a mechanism's outcome");
  text(check, "mechanism", "mechanism name");

  auto* gain = app.add_subcommand("gain", "search for a profitable misreport");
  text(gain, "mechanism", "mechanism name");
  number(gain, "agent", "manipulating agent (0-based)");
  text(gain, "engine", "grid or ep-exact");
  number(gain, "rounds", "offset refinement rounds");
  number(gain, "resolution", "mass grid resolution");
  number(gain, "budget", "maximum misreports evaluated by the grid engine");

  auto* learn = app.add_subcommand("learn", "learn a valuation through cut queries");
  number(learn, "agent", "agent whose valuation is hidden behind the oracle");
  number(learn, "k", "breakpoint bound");
  text(learn, "eps", "accuracy, e.g. 1/5");

  auto* chain = app.add_subcommand("chain", "run an impossibility-proof chain");
  text(chain, "name", "thm1, prop1, thm2 or discussion");
  text(chain, "mechanism", "mechanism name");
  number(chain, "n", "number of agents");
  text(chain, "eps1", "strategyproofness slack");
  text(chain, "eps2", "proportionality slack");
  std::vector<std::string> deltas;
  chain->add_option("--delta", deltas, "override, e.g. delta=1/4 or delta3=1/40");

  auto* verify = app.add_subcommand("verify", "re-run the mechanism behind a witness or gain report");
  text(verify, "witness", "witness or report JSON file");

  std::string scenario_path;
  auto* scenario = app.add_subcommand("run-scenario", "execute a scenario file");
  scenario->add_option("scenario", scenario_path, "scenario JSON file")->required();

  CLI11_PARSE(app, argc, argv);

  cake::cli::Request request;
  try {
    if (scenario->parsed()) {
      const json doc = cake::cli::parse_json(cake::cli::read_file(scenario_path, "scenario"), "scenario");
      request = cake::cli::scenario_from(doc, std::filesystem::path(scenario_path).parent_path().string());
    } else {
      request.command = app.get_subcommands().front()->get_name();
      for (const auto& d : deltas) {
        auto eq = d.find('=');
        if (eq == std::string::npos) {
          args["delta"]["delta"] = d;
        } else {
          args["delta"][d.substr(0, eq)] = d.substr(eq + 1);
        }
      }
      request.arguments = args;
    }
    if (!profile_path.empty()) request.profile = cake::cli::load_profile(profile_path);
    if (*seed_opt) request.seed = seed;
  } catch (const cake::cli::input_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cake::cli::Exit::input;
  }

  cake::cli::Outcome outcome = cake::cli::execute(request, timing);
  if (outcome.exit_code == cake::cli::Exit::input) {
    std::cerr << "error: " << outcome.report.value("error", std::string("input error")) << "\n";
    return outcome.exit_code;
  }
  std::cout << cake::cli::emit(outcome.report, format);
  return outcome.exit_code;
}
