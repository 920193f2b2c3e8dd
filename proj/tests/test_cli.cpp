// alwb — algorithmic-logic workbench
// SPDX-License-Identifier: MIT
//
// End-to-end tests of the command-line front end. The binary under test is
// named by the ALWB_CLI_PATH environment variable; every case spawns it as a
// real subprocess and checks bytes and exit codes.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

using json = nlohmann::json;

namespace {

// The binary under test: the ALWB_CLI_PATH environment variable wins, then
// the path compiled in by the build.
const char* cli_path() {
  if (const char* p = std::getenv("ALWB_CLI_PATH")) return p;
#ifdef ALWB_CLI_PATH
  return ALWB_CLI_PATH;
#else
  REQUIRE_MESSAGE(false, "set ALWB_CLI_PATH to the workbench binary");
  return nullptr;
#endif
}

struct CmdResult {
  int code = -1;
  std::string out;
};

CmdResult run_cli(const std::string& args) {
  std::string cmd = std::string(cli_path()) + " " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::string out;
  char buf[4096];
  size_t k;
  while ((k = fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, k);
  int status = pclose(p);
  REQUIRE(WIFEXITED(status));
  return {WEXITSTATUS(status), out};
}

std::string proofs_path(const std::string& name) {
  return std::string(ALWB_PROOFS_DIR) + "/" + name;
}

const char* kUnionMatrix =
    "'((!(n = 0) & !(m = 0)) -> U[if (m < n) then n := (n -. m) else m := (m -. n) fi] (n = m))'";
const char* kSuccessorSearch = "'[{ y := 0 ; while !(y = x) do y := s(y) od }] (x = y)'";

}  // namespace

TEST_CASE("parse command") {
  CmdResult r = run_cli("parse program skip");
  CHECK(r.code == 0);
  CHECK(r.out == "skip\n");

  r = run_cli("parse term 's( s( 0 ) )'");
  CHECK(r.code == 0);
  CHECK(r.out == "s(s(0))\n");

  r = run_cli("parse open '((x = 0) & ?p)'");
  CHECK(r.code == 0);
  CHECK(r.out == "((x = 0) & ?p)\n");

  // Artifacts by strict @-reference and by bare-name fallback.
  const std::string gcd_loop =
      "while !(n = m) do if (m < n) then n := (n -. m) else m := (m -. n) fi od";
  r = run_cli("parse program @E");
  CHECK(r.code == 0);
  CHECK(r.out == gcd_loop + "\n");
  r = run_cli("parse program E");
  CHECK(r.out == gcd_loop + "\n");
  r = run_cli("parse formula @H");
  CHECK(r.code == 0);
  CHECK(r.out == "forall n . forall m . ((!(n = 0) & !(m = 0)) -> [" + gcd_loop + "] (n = m))\n");

  // Parsing is whitespace-insensitive; printing restores canonical spacing.
  r = run_cli("parse program 'while!(n=m)do if(m<n)then n:=(n-.m)else m:=(m-.n)fi od'");
  CHECK(r.code == 0);
  CHECK(r.out == gcd_loop + "\n");

  CHECK(run_cli("parse term '3'").code == 2);
  CHECK(run_cli("parse formula '(x = 0) & (y = 0)'").code == 2);
  CHECK(run_cli("parse blah 'x'").code == 2);
  CHECK(run_cli("parse program '@H'").code == 2);      // H is a formula
  CHECK(run_cli("parse program '@nothing'").code == 2);
}

TEST_CASE("run command") {
  CmdResult r = run_cli("run @E --set n=12 --set m=18");
  CHECK(r.code == 0);
  CHECK(r.out ==
        "outcome: Halted\n"
        "steps: 7\n"
        "final: m = 6, n = 6\n");

  r = run_cli("run @E --set n=12 --set m=18 --trace");
  CHECK(r.code == 0);
  CHECK(r.out ==
        "step | m | n\n"
        "0 | 18 | 12\n"
        "3 | 6 | 12\n"
        "6 | 6 | 6\n"
        "outcome: Halted\n"
        "steps: 7\n"
        "final: m = 6, n = 6\n");

  r = run_cli("run @E-division --set n=17 --set m=5");
  CHECK(r.code == 0);
  CHECK(r.out ==
        "outcome: Halted\n"
        "steps: 12\n"
        "final: m = 5, n = 17, q = 3, r = 2\n");

  // Divergence on the non-standard model: budget runs out, exit code 1.
  r = run_cli("run @E --model nsn --set 'n=NSN(12,0,1)' --set 'm=NSN(15,1,2)' "
              "--budget 7 --trace");
  CHECK(r.code == 1);
  CHECK(r.out ==
        "step | m | n\n"
        "0 | NSN(15,1,2) | NSN(12,0,1)\n"
        "3 | NSN(3,1,2) | NSN(12,0,1)\n"
        "6 | NSN(-9,1,2) | NSN(12,0,1)\n"
        "outcome: BudgetExhausted\n"
        "steps: 7\n"
        "last: m = NSN(-9,1,2), n = NSN(12,0,1)\n");

  r = run_cli("run 'x := y'");
  CHECK(r.code == 1);
  CHECK(r.out.find("outcome: RuntimeError\n") != std::string::npos);
}

TEST_CASE("eval command: point mode") {
  CmdResult r = run_cli("eval --set x=3 '(x < s(x))'");
  CHECK(r.code == 0);
  CHECK(r.out == "value: True\n");

  r = run_cli("eval --set x=0 '(s(x) < x)'");
  CHECK(r.code == 1);
  CHECK(r.out == "value: False\n");

  // A true iteration-union reports the 1-based ordinal of its witness.
  r = run_cli(std::string("eval --model standard --set n=4 --set m=6 ") + kUnionMatrix);
  CHECK(r.code == 0);
  CHECK(r.out == "value: True\nwitness i = 3\n");

  // Unknown is not success: an uncertified non-halting box exits 1.
  r = run_cli("eval --set x=0 '[while true do skip od] (x = 0)' --budget 50");
  CHECK(r.code == 1);
  CHECK(r.out == "value: Unknown\n");

  // The successor-search equivalence is refuted pointwise on the
  // non-standard model through the divergence certificate.
  r = run_cli(std::string("eval --model nsn --set 'x=NSN(0,1,2)' --set y=0 ") +
              kSuccessorSearch);
  CHECK(r.code == 1);
  CHECK(r.out == "value: False\n");

  // Partially-set free variables are a usage error.
  CHECK(run_cli(std::string("eval --set n=4 ") + kUnionMatrix).code == 2);
}

TEST_CASE("eval command: validation mode") {
  CmdResult r = run_cli("eval '(x < s(x))'");
  CHECK(r.code == 0);
  CHECK(r.out == "validation: ValidUpToBound\nvaluations checked: 5\n");

  r = run_cli(std::string("eval --model standard --var-bound 6 ") + kSuccessorSearch);
  CHECK(r.code == 0);
  CHECK(r.out == "validation: ValidUpToBound\nvaluations checked: 49\n");

  r = run_cli("eval '(s(x) < x)'");
  CHECK(r.code == 1);
  CHECK(r.out ==
        "validation: Refuted\n"
        "valuations checked: 1\n"
        "counterexample: x = 0\n");

  r = run_cli("eval '[while true do skip od] (x = 0)' --budget 50");
  CHECK(r.code == 1);
  CHECK(r.out == "validation: Inconclusive\nvaluations checked: 5\n");
}

TEST_CASE("check command") {
  CmdResult r = run_cli("check '" + proofs_path("lemma1.alproof") + "'");
  CHECK(r.code == 0);
  CHECK(r.out ==
        "s1 OK\n"
        "s2 OK\n"
        "s3 OK\n"
        "s4 OK\n"
        "s5 OK\n"
        "ACCEPTED trusting [while-union-if, union-step-simplify]\n");

  r = run_cli("check '" + proofs_path("lemma1_mut_swapped_premises.alproof") + "'");
  CHECK(r.code == 1);
  CHECK(r.out.find("s3 SchemaMismatch\n") != std::string::npos);
  CHECK(r.out.find("REJECTED at s3\n") != std::string::npos);

  r = run_cli("check '" + proofs_path("omega_union_bound.alproof") + "'");
  CHECK(r.code == 0);
  CHECK(r.out ==
        "s1 OK schema-checked (omega, 5 samples)\n"
        "ACCEPTED trusting [union-premise]\n");

  r = run_cli("check '" + proofs_path("axiom_catalog.alproof") + "'");
  CHECK(r.code == 0);
  CHECK(r.out.find("ACCEPTED trusting []\n") != std::string::npos);

  CHECK(run_cli("check /nonexistent.alproof").code == 2);
}

TEST_CASE("demo command") {
  CmdResult r = run_cli("demo standard");
  CHECK(r.code == 0);
  CHECK(r.out ==
        "demo: standard\n"
        "step | m | n\n"
        "0 | 18 | 12\n"
        "3 | 6 | 12\n"
        "6 | 6 | 6\n"
        "verdict: PASS final n = 6, 3 loop iterations\n");

  r = run_cli("demo standard --set n=4 --set m=6");
  CHECK(r.code == 0);
  CHECK(r.out ==
        "demo: standard\n"
        "step | m | n\n"
        "0 | 6 | 4\n"
        "3 | 2 | 4\n"
        "6 | 2 | 2\n"
        "verdict: PASS final n = 2, 3 loop iterations\n");

  r = run_cli("demo nsn-halt");
  CHECK(r.code == 0);
  CHECK(r.out.find("verdict: PASS final n = NSN(3,0,8), equal to NSN(3,0,1)\n") !=
        std::string::npos);

  r = run_cli("demo nsn-diverge --budget 300");
  CHECK(r.code == 0);
  CHECK(r.out.find("verdict: PASS budget exhausted after 300 steps, 101 trace rows, "
                   "certified nsn-frac-mismatch\n") != std::string::npos);

  // Bytes are reproducible run-to-run.
  CmdResult again = run_cli("demo nsn-diverge --budget 300");
  CHECK(again.out == r.out);

  CHECK(run_cli("demo standard --set n=0").code == 2);
  CHECK(run_cli("demo standard --set k=3").code == 2);
  CHECK(run_cli("demo nsn-halt --set n=1").code == 2);
  CHECK(run_cli("demo bogus").code == 2);
}

TEST_CASE("json output mirrors the text reports") {
  CmdResult r = run_cli("parse program skip --output json");
  CHECK(r.code == 0);
  CHECK(json::parse(r.out) ==
        json({{"command", "parse"}, {"sort", "program"}, {"printed", "skip"}}));

  r = run_cli(std::string("eval --set n=4 --set m=6 --output json ") + kUnionMatrix);
  CHECK(r.code == 0);
  CHECK(json::parse(r.out) == json({{"command", "eval"},
                                    {"model", "standard"},
                                    {"mode", "point"},
                                    {"value", "True"},
                                    {"witness", 3}}));

  r = run_cli("eval '(s(x) < x)' --output json");
  CHECK(r.code == 1);
  CHECK(json::parse(r.out) == json({{"command", "eval"},
                                    {"model", "standard"},
                                    {"mode", "validate"},
                                    {"verdict", "Refuted"},
                                    {"valuations_checked", 1},
                                    {"counterexample", {{"x", "0"}}}}));

  r = run_cli("run @E --set n=12 --set m=18 --output json");
  CHECK(r.code == 0);
  CHECK(json::parse(r.out) == json({{"command", "run"},
                                    {"model", "standard"},
                                    {"outcome", "Halted"},
                                    {"steps", 7},
                                    {"final", {{"m", "6"}, {"n", "6"}}}}));

  r = run_cli("check '" + proofs_path("lemma1.alproof") + "' --output json");
  CHECK(r.code == 0);
  json rep = json::parse(r.out);
  CHECK(rep["command"] == "check");
  CHECK(rep["accepted"] == true);
  CHECK(rep["trusted"] == json::array({"while-union-if", "union-step-simplify"}));
  REQUIRE(rep["steps"].size() == 5);
  for (const auto& step : rep["steps"]) CHECK(step["verdict"] == "OK");

  r = run_cli("demo standard --output json");
  CHECK(r.code == 0);
  json demo = json::parse(r.out);
  CHECK(demo["name"] == "standard");
  CHECK(demo["pass"] == true);
  CHECK(demo["detail"] == "final n = 6, 3 loop iterations");
  CHECK(demo["trace"]["vars"] == json::array({"m", "n"}));
  CHECK(demo["trace"]["rows"].size() == 3);
}

TEST_CASE("usage and exit codes") {
  CHECK(run_cli("").code == 2);
  CHECK(run_cli("conjure").code == 2);
  CHECK(run_cli("--help").code == 0);
  CHECK(run_cli("parse --help").code == 0);
  CHECK(run_cli("run @E --set n=12 --set m=18 --output yaml").code == 2);
  CHECK(run_cli("run @E --budget 0 --set n=1 --set m=1").code == 2);
  CHECK(run_cli("eval '(x < s(x))' --model klein").code == 2);
  CHECK(run_cli("eval '(x < s(x))' --set 'x=banana'").code == 2);
  CHECK(run_cli("eval '(x < s(x))' --set '=3'").code == 2);
}
