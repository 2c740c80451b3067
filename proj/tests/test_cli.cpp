#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <sstream>
#include <string>
#include <vector>

#include "resavoid/cli.hpp"

using namespace resavoid;

namespace {

struct CliResult {
  int code = 0;
  std::string out;
  std::string err;
};

CliResult run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  CliResult r;
  r.code = run_cli(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

}  // namespace

TEST_CASE("bound prints the plain rational") {
  const CliResult r = run({"bound", "-a", "3,4"});
  CHECK(r.code == 0);
  CHECK(r.out == "1/4\n");
  CHECK(run({"bound", "-a", "2"}).out == "0\n");
}

TEST_CASE("verify emits the report and exits clean") {
  const CliResult r = run({"verify", "-a", "4,8", "--format", "json"});
  REQUIRE(r.code == 0);
  const nlohmann::json j = nlohmann::json::parse(r.out);
  CHECK(j["exact"]["num"] == "1");
  CHECK(j["exact"]["den"] == "2");
  CHECK(j["bound"]["num"] == "3");
  CHECK(j["bound"]["den"] == "8");
  CHECK(j["methods_agree"] == true);
}

TEST_CASE("json output round-trips byte-identically") {
  for (const std::vector<std::string>& args :
       {std::vector<std::string>{"verify", "-a", "4,8", "--format", "json"},
        {"exact", "-a", "3,4", "--format", "json"},
        {"bound", "-a", "5,8", "--format", "json"},
        {"basis", "--modulus", "40"},
        {"natural", "-a", "4,6", "--format", "json"},
        {"empirical", "-a", "3", "--limit", "1e4", "--format", "json"},
        {"lemma", "--box", "6", "--avoiders", "2;3", "--format", "json"}}) {
    const CliResult r = run(args);
    REQUIRE(r.code == 0);
    const nlohmann::json parsed = nlohmann::json::parse(r.out);
    CHECK(parsed.dump(2) + "\n" == r.out);
  }
}

TEST_CASE("identical flags give identical output") {
  const std::vector<std::string> args = {"verify", "-a", "3,4", "--limit", "1e5"};
  const CliResult a = run(args);
  const CliResult b = run(args);
  CHECK(a.code == b.code);
  CHECK(a.out == b.out);

  const std::vector<std::string> trials = {"lemma", "--trials", "25", "--seed", "7"};
  CHECK(run(trials).out == run(trials).out);
  CHECK(run(trials).code == 0);
}

TEST_CASE("basis dump carries the documented fields") {
  const CliResult r = run({"basis", "--modulus", "16"});
  REQUIRE(r.code == 0);
  const nlohmann::json j = nlohmann::json::parse(r.out);
  CHECK(j["modulus"] == 16);
  CHECK(j["two_adic"] == true);
  REQUIRE(j["components"].size() == 2);
  CHECK(j["components"][0]["generator"] == 15);
  CHECK(j["components"][0]["order"] == 2);
  CHECK(j["components"][0]["prime_power"] == 16);
  CHECK(j["components"][1]["generator"] == 5);
  CHECK(j["components"][1]["order"] == 4);
}

TEST_CASE("empirical csv goes to stdout with the summary on stderr") {
  const CliResult r = run({"empirical", "-a", "3", "--limit", "1e4"});
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind("x,pi_x,match_count,ratio_pi,ratio_xlogx,exact_target\n", 0) == 0);
  CHECK(r.err.find("PASS") != std::string::npos);

  // an absurdly tight tolerance must flip the exit code to 1
  const CliResult tight =
      run({"empirical", "-a", "3", "--limit", "1e4", "--tolerance", "1e-12"});
  CHECK(tight.code == 1);
  CHECK(tight.err.find("FAIL") != std::string::npos);
}

TEST_CASE("invalid input exits with code 2") {
  CHECK(run({"bound"}).code == 2);                                // missing -a
  CHECK(run({"bound", "-a", "3,x"}).code == 2);                   // not a number
  CHECK(run({"bound", "-a", "3,0"}).code == 2);                   // zero modulus
  CHECK(run({"bound", "-a", "3,-5"}).code == 2);                  // negative modulus
  CHECK(run({"bound", "-a", "3", "--format", "yaml"}).code == 2); // unknown format
  CHECK(run({"nonsense"}).code == 2);
  CHECK(run({}).code == 2);
  CHECK(run({"empirical", "-a", "3", "--limit", "1e11"}).code == 2);  // beyond cap
  CHECK(run({"empirical", "-a", "3", "--limit", "2.5"}).code == 2);
  CHECK(run({"lemma"}).code == 2);                                // no box, no trials
  CHECK(run({"lemma", "--box", "6", "--avoiders", "4"}).code == 2);
  CHECK(run({"lemma", "--box", "6,6", "--avoiders", "2,2", "--dims", "3"}).code == 2);
  CHECK(run({"basis", "--modulus", "1"}).code == 2);
  // 25 pairwise coprime moduli: the lcm leaves 64 bits and no path is left
  CHECK(run({"exact", "-a",
             "2,3,5,7,11,13,17,19,23,29,31,37,41,43,47,53,59,61,67,71,73,79,83,89,97"})
            .code == 2);
}

TEST_CASE("help is a success") {
  CHECK(run({"--help"}).code == 0);
  CHECK(run({"--help"}).out.find("bound") != std::string::npos);
}

TEST_CASE("environment variable sets only the default format") {
  setenv("RESAVOID_FORMAT", "json", 1);
  const CliResult as_json = run({"bound", "-a", "3,4"});
  CHECK(nlohmann::json::parse(as_json.out)["bound"]["num"] == "1");
  const CliResult flag_wins = run({"bound", "-a", "3,4", "--format", "table"});
  CHECK(flag_wins.out == "1/4\n");
  unsetenv("RESAVOID_FORMAT");
}

TEST_CASE("checkpoints flag controls the rows") {
  const CliResult r = run({"empirical", "-a", "3", "--limit", "1000",
                           "--checkpoints", "100,500,1000", "--tolerance", "0.05"});
  REQUIRE(r.code == 0);
  std::size_t lines = 0;
  for (char c : r.out)
    if (c == '\n') ++lines;
  CHECK(lines == 4);  // header + one row per checkpoint
}
