#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "testutil.hpp"
#include "vmc/cli.hpp"
#include "vmc/dsl.hpp"

using namespace vmc;

namespace {

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = run_cli(args, out, err);
  return CliResult{code, out.str(), err.str()};
}

std::string vending_path() { return vmctest::models_dir() + "/vending.fts"; }

}  // namespace

TEST_CASE("cli: validate") {
  CliResult r = cli({"validate", vending_path()});
  CHECK(r.code == 0);
  CHECK(r.out.find("8 states") != std::string::npos);
  CHECK(r.out.find("13 transitions") != std::string::npos);
  CliResult missing = cli({"validate", "/nonexistent.fts"});
  CHECK(missing.code == 3);
}

TEST_CASE("cli: check with the partitioned join strategy") {
  CliResult r = cli({"check", vending_path(), "P1", "--strategy", "partition", "c;!c",
                     "--abstract", "join", "--format", "json", "--no-timings"});
  CHECK(r.code == 1);  // some variants fail
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["schema"] == "vmc-report/1");
  CHECK(j["summary"]["fails"] == 4);
  CHECK(j["summary"]["holds"] == 4);
  CHECK(j["summary"]["inconclusive"] == 0);
  for (const auto& v : j["variants"]) {
    bool has_c = false;
    for (const auto& f : v["config"]) has_c = has_c || f == "c";
    CHECK((v["verdict"] == (has_c ? "fails" : "holds")));
  }
}

TEST_CASE("cli: check join strategy on the mixed and existential properties") {
  CliResult r2 = cli({"check", vending_path(), "P2", "--strategy", "join"});
  CHECK(r2.code == 0);
  CliResult r3 = cli({"check", vending_path(), "P3", "--strategy", "join",
                      "--format", "json", "--no-timings"});
  CHECK(r3.code == 0);
  auto j = nlohmann::json::parse(r3.out);
  CHECK(j["summary"]["holds"] == 8);
  // The existential witness is reported.
  CHECK(j["evidence"].size() >= 1);
}

TEST_CASE("cli: brute strategy and inline formulas") {
  CliResult r = cli({"check", vending_path(), "--formula", "AG (AF start)",
                     "--strategy", "brute", "--format", "json", "--no-timings"});
  CHECK(r.code == 1);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["summary"]["fails"] == 4);
  CliResult usage = cli({"check", vending_path(), "NOPE"});
  CHECK(usage.code == 3);
}

TEST_CASE("cli: constraint restriction") {
  CliResult r = cli({"check", vending_path(), "P1", "--constraint", "!c",
                     "--strategy", "brute", "--format", "json", "--no-timings"});
  CHECK(r.code == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["summary"]["variants"] == 4);
}

TEST_CASE("cli: project and abstract emit parseable models") {
  CliResult r = cli({"project", vending_path(), "--constraint", "!c"});
  CHECK(r.code == 0);
  Fts sub = build_fts(parse_model(r.out));
  CHECK(sub.space.valid_configs().size() == 4);
  CHECK(sub.trans.size() == 10);

  CliResult a = cli({"abstract", vending_path(), "--op", "join", "--mode", "must"});
  CHECK(a.code == 0);
  Fts must = build_fts(parse_model(a.out));
  CHECK(must.trans.size() == 6);
  CHECK(must.space.feature_count() == 0);

  CliResult bad = cli({"project", vending_path(), "--constraint", "c & !c"});
  CHECK(bad.code == 3);
}

TEST_CASE("cli: explain attributes paths") {
  CliResult r = cli({"explain", vending_path(), "--path", "1,3,5,7", "--loop", "1"});
  CHECK(r.code == 0);
  CHECK(r.out.find("variants (2):") != std::string::npos);
  // Single edge: pay is entailed by every variant.
  CliResult pay = cli({"explain", vending_path(), "--path", "1,2"});
  CHECK(pay.code == 0);
  CHECK(pay.out.find("variants (8):") != std::string::npos);
  // 7 -> 1 is ambiguous between take/f and nothing else? take only; but
  // 7 -> 3 vs 7 -> 8 would need --via when several actions share endpoints.
  CliResult bad = cli({"explain", vending_path(), "--path", "1,8"});
  CHECK(bad.code == 3);
}

TEST_CASE("cli: bench small instances") {
  CliResult brute = cli({"bench", "-n", "2", "--strategy", "brute", "--formula",
                         "AF xgt0", "--format", "json", "--no-timings"});
  CHECK(brute.code == 1);
  auto j = nlohmann::json::parse(brute.out);
  CHECK(j["summary"]["variants"] == 4);
  CHECK(j["summary"]["fails"] == 1);  // only the empty configuration stalls at 0
  for (const auto& v : j["variants"])
    if (v["verdict"] == "fails") CHECK(v["config"].empty());

  CliResult join = cli({"bench", "-n", "3", "--strategy", "join"});
  CHECK(join.code == 0);  // AF xge0 holds everywhere

  CliResult refused = cli({"bench", "-n", "18", "--strategy", "brute"});
  CHECK(refused.code == 3);
  CHECK(refused.err.find("262144") != std::string::npos);
}

TEST_CASE("cli: selftest smoke run") {
  CliResult r = cli({"selftest", "--suite", "galois", "--seed", "3", "--cases", "50"});
  CHECK(r.code == 0);
  CHECK(r.out.find("galois: pass") != std::string::npos);
}

TEST_CASE("cli: deterministic reports across worker counts") {
  auto run = [&](const std::string& jobs) {
    return cli({"check", vending_path(), "P1", "--strategy", "brute", "--jobs", jobs,
                "--format", "json", "--no-timings"});
  };
  CliResult one = run("1");
  CliResult four = run("4");
  CHECK(one.code == four.code);
  CHECK(one.out == four.out);
}

TEST_CASE("cli: refine flag resolves inconclusive variants") {
  // EF start is existential; under join the must component keeps it, so no
  // refinement is needed for vending. Use a formula the abstraction cannot
  // decide: EF of a feature-guarded region.
  CliResult coarse = cli({"check", vending_path(), "--formula", "EX (EX start)",
                          "--strategy", "join", "--format", "json", "--no-timings"});
  CliResult fine = cli({"check", vending_path(), "--formula", "EX (EX start)",
                        "--strategy", "join", "--refine", "brute", "--format", "json",
                        "--no-timings"});
  auto jc = nlohmann::json::parse(coarse.out);
  auto jf = nlohmann::json::parse(fine.out);
  CHECK(jf["summary"]["inconclusive"] == 0);
  size_t coarse_inc = jc["summary"]["inconclusive"];
  size_t fine_decided = static_cast<size_t>(jf["summary"]["holds"]) +
                        static_cast<size_t>(jf["summary"]["fails"]);
  CHECK(fine_decided == 8);
  CHECK(coarse_inc <= 8);
}
