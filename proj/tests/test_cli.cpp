#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sys/wait.h>

#include "cake/cli.hpp"

using namespace cake;
using cli::json;

namespace {

json uniform_pair() {
  return json::parse(R"({"agents":[{"breakpoints":[],"densities":["1"]},{"breakpoints":[],"densities":["1"]}]})");
}

cli::Request request(const std::string& command, json args, std::optional<json> profile = uniform_pair()) {
  cli::Request r;
  r.command = command;
  r.arguments = std::move(args);
  if (profile) r.profile = io::profile_from(*profile);
  return r;
}

std::filesystem::path scratch(const std::string& name, const std::string& content) {
  auto dir = std::filesystem::temp_directory_path() / "cake_cli_tests";
  std::filesystem::create_directories(dir);
  auto path = dir / name;
  std::ofstream(path) << content;
  return path;
}

int tool(const std::string& args) {
  std::string cmd = std::string(CAKE_TOOL_PATH) + " " + args + " > /dev/null 2>&1";
  int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST(Cli, AllocateEvenPazOnUniformPair) {
  auto o = cli::execute(request("allocate", {{"mechanism", "even-paz"}}));
  ASSERT_EQ(o.exit_code, 0);
  const json& a = o.report["outputs"]["allocation"];
  EXPECT_EQ(a["pieces"][0], json::parse(R"([["0","1/2"]])"));
  EXPECT_EQ(a["pieces"][1], json::parse(R"([["1/2","1"]])"));
  EXPECT_EQ(a["values"], json::parse(R"(["1/2","1/2"])"));
  EXPECT_TRUE(o.report["exact"].get<bool>());
}

TEST(Cli, CheckTextListsReportFields) {
  auto o = cli::execute(request("check", {{"mechanism", "modified-ep"}}));
  ASSERT_EQ(o.exit_code, 0);
  std::string text = cli::emit(o.report, "text");
  for (const char* key : {"proportionality_deficit", "envy", "wasted_measure"})
    EXPECT_NE(text.find(key), std::string::npos) << key;
}

TEST(Cli, ChainDiscussionReportsHalfGain) {
  auto o = cli::execute(request("chain", {{"name", "discussion"}}, std::nullopt));
  EXPECT_EQ(o.exit_code, cli::Exit::violation);
  const json& w = o.report["outputs"]["witness"];
  EXPECT_EQ(w["certificate"]["gain"], "1/2");
  EXPECT_TRUE(o.report["outputs"]["verified"].get<bool>());
}

TEST(Cli, MalformedRationalNamesTheField) {
  json bad = json::parse(R"({"agents":[{"breakpoints":["1/2"],"densities":["1","1/0"]},{"breakpoints":[],"densities":["1"]}]})");
  try {
    io::profile_from(bad);
    FAIL() << "expected an input error";
  } catch (const io::input_error& e) {
    EXPECT_EQ(e.field(), "profile.agents[0].densities[1]");
  }
  auto path = scratch("bad_profile.json", bad.dump());
  EXPECT_EQ(tool("allocate --mechanism even-paz --profile " + path.string()), 1);
}

TEST(Cli, UnknownMechanismAndInfeasibleChainAreInputErrors) {
  auto o = cli::execute(request("allocate", {{"mechanism", "dictator"}}));
  EXPECT_EQ(o.exit_code, cli::Exit::input);
  EXPECT_EQ(o.report["field"], "arguments.mechanism");
  auto c = cli::execute(request("chain", {{"name", "thm1"}, {"eps1", "1/5"}}, std::nullopt));
  EXPECT_EQ(c.exit_code, cli::Exit::input);
}

TEST(Cli, OutputIsByteIdentical) {
  auto r = request("gain", {{"mechanism", "even-paz"}, {"agent", 0}, {"budget", 200}});
  r.seed = 17;
  EXPECT_EQ(cli::emit(cli::execute(r).report, "json"), cli::emit(cli::execute(r).report, "json"));
}

TEST(Cli, ScenarioRoundTrip) {
  json doc = json::parse(R"({"version":1,"command":"gain","arguments":{"mechanism":"even-paz","agent":1,"engine":"ep-exact"},
                            "profile":{"agents":[{"breakpoints":["0.25"],"densities":["2","2/3"]},{"breakpoints":[],"densities":["1"]}]},
                            "seed":3})");
  cli::Request r = cli::scenario_from(doc);
  json once = cli::to_json(r);
  EXPECT_EQ(cli::to_json(cli::scenario_from(once)), once);
  EXPECT_EQ(once["profile"]["agents"][0]["breakpoints"][0], "1/4");
}

TEST(Cli, ScenarioRejectsUnknownFields) {
  json doc = json::parse(R"({"version":1,"command":"allocate","arguments":{},"colour":"red"})");
  EXPECT_THROW(cli::scenario_from(doc), io::input_error);
  json v2 = json::parse(R"({"version":2,"command":"allocate"})");
  EXPECT_THROW(cli::scenario_from(v2), io::input_error);
}

TEST(Cli, VerifyAcceptsChainAndGainReports) {
  auto chain = cli::execute(request("chain", {{"name", "thm1"}, {"n", 3}}, std::nullopt));
  ASSERT_EQ(chain.exit_code, cli::Exit::violation);
  auto v = cli::verify_document(chain.report);
  EXPECT_EQ(v.exit_code, 0);
  EXPECT_TRUE(v.report["verified"].get<bool>());

  auto gain = cli::execute(request("gain", {{"mechanism", "modified-ep"}, {"agent", 1}, {"budget", 100}}));
  ASSERT_EQ(gain.exit_code, 0);
  EXPECT_EQ(cli::verify_document(gain.report).exit_code, 0);

  json tampered = chain.report;
  tampered["outputs"]["witness"]["certificate"]["gain"] = "9/10";
  EXPECT_EQ(cli::verify_document(tampered).exit_code, cli::Exit::unverified);
}

TEST(Cli, LearnReportsQueryCount) {
  auto o = cli::execute(request("learn", {{"agent", 0}, {"k", 2}, {"eps", "1/2"}}));
  ASSERT_EQ(o.exit_code, 0);
  EXPECT_EQ(o.report["outputs"]["query_count"], 8);
  EXPECT_EQ(o.report["outputs"]["learned"]["queries_used"], 8);
}

TEST(Cli, ToolExitCodes) {
  auto profile = scratch("uniform.json", uniform_pair().dump());
  EXPECT_EQ(tool("allocate --mechanism even-paz --profile " + profile.string()), 0);
  EXPECT_EQ(tool("chain --name discussion"), 2);
  EXPECT_EQ(tool("chain --name prop1 --eps1 1/5 --format text"), 2);
  EXPECT_EQ(tool("allocate --mechanism even-paz"), 1);
  auto scenario = scratch("scenario.json", R"({"version":1,"command":"allocate","arguments":{"mechanism":"equal-split"},"profile_file":"uniform.json"})");
  EXPECT_EQ(tool("run-scenario " + scenario.string()), 0);
}

TEST(Cli, ToolVerifiesItsOwnWitness) {
  auto dir = std::filesystem::temp_directory_path() / "cake_cli_tests";
  std::filesystem::create_directories(dir);
  auto out = dir / "witness.json";
  std::string cmd = std::string(CAKE_TOOL_PATH) + " chain --name thm2 --n 4 > " + out.string();
  int status = std::system(cmd.c_str());
  ASSERT_TRUE(WIFEXITED(status));
  EXPECT_EQ(WEXITSTATUS(status), 2);  // a chain that finds something exits 2
  EXPECT_EQ(tool("verify --witness " + out.string()), 0);
}
