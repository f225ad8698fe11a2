#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "stabfin/error.hpp"
#include "stabfin/scenario.hpp"
#include "stabfin/wreath.hpp"

using namespace stabfin;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) {
    path = fs::temp_directory_path() / ("stabfin_" + tag + "_" + std::to_string(::getpid()));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  void write(const std::string& name, const std::string& text) const { std::ofstream(path / name) << text; }
};

Report run(const std::string& text) { return run_scenario(parse_scenario(text)); }

}  // namespace

TEST_CASE("parsing key=value scenarios") {
  const auto s = parse_scenario(
      "# comment\n"
      "name = demo\n"
      "command = df-check   # trailing comment\n"
      "ring = F2\n"
      "dim=2\n"
      "seed = 9\n"
      "budget = 300\n"
      "expect = fail\n");
  CHECK(s.name == "demo");
  CHECK(s.command == "df-check");
  CHECK(s.params.at("ring") == "F2");
  CHECK(s.params.at("dim") == "2");
  CHECK(s.seed == 9);
  CHECK(s.budget == 300);
  CHECK(s.window == 1);
  CHECK(s.expect == Status::fail);
  CHECK(s.expect_given);
  CHECK(parse_scenario("command = ca-report\n", "fallback").name == "fallback");
  CHECK_THROWS_AS(parse_scenario("no equals sign here\n"), Error);
  CHECK_THROWS_AS(parse_scenario("command = x\nexpect = maybe\n"), Error);
}

TEST_CASE("status names and exit codes") {
  CHECK(status_name(Status::inconclusive) == "bounded-inconclusive");
  CHECK(parse_status("usage-error") == Status::usage_error);
  CHECK(exit_code(Status::pass) == 0);
  CHECK(exit_code(Status::fail) == 1);
  CHECK(exit_code(Status::inconclusive) == 2);
  CHECK(exit_code(Status::usage_error) == 3);
}

TEST_CASE("unknown keys and commands are usage errors") {
  auto r = run("command = df-check\nring = F2\ndim = 2\ncolour = blue\n");
  CHECK(r.status == Status::usage_error);
  CHECK(r.error.find("colour") != std::string::npos);
  CHECK_THROWS_AS(parse_scenario("command = frobnicate\n"), Error);
  r = run("command = df-check\nring = F6\ndim = 1\n");
  CHECK(r.status == Status::usage_error);
}

TEST_CASE("reports are deterministic") {
  const std::string text = "command = hopf-pipeline\np = 2\nparts = (1,1)\ni = 1\ntop = C2\nsamples = 3\nseed = 11\n";
  const auto a = run(text).to_json(false);
  const auto b = run(text).to_json(false);
  CHECK(a.dump() == b.dump());
  CHECK(a.at("schema") == 1);
  CHECK_FALSE(a.contains("millis"));
}

TEST_CASE("exhaustive unit search passes, windowed search is inconclusive") {
  auto r = run("command = unit-search\nring = F2\ndim = 2\n");
  CHECK(r.status == Status::pass);
  CHECK(r.records.at(0).at("one_sided") == 6);
  r = run("command = unit-search\nring = F2[Z]\nwindow = 0\n");
  CHECK(r.status == Status::inconclusive);
  CHECK(r.records.at(0).at("scanned") == 4);
}

TEST_CASE("the literal D8 formula fails with a re-checkable witness") {
  const auto r = run("command = wreath-verify\nmap = d8-literal\n");
  CHECK(r.status == Status::fail);
  REQUIRE(r.witnesses.size() >= 1);
  const auto& w = r.witnesses.at(0);
  const Wreath c = c2_wr_c2();
  const auto lit = d8_literal_formula_map();
  const auto a = c.parse(w.at("a").get<std::string>());
  const auto b = c.parse(w.at("b").get<std::string>());
  CHECK_FALSE(lit(c.mul(a, b)) == c.mul(lit(a), lit(b)));
  CHECK(w.at("f(ab)") != w.at("f(a)f(b)"));

  const auto good = run("command = wreath-verify\nmap = d8\n");
  CHECK(good.status == Status::pass);
  CHECK(good.records.at(0).at("non_basic") == true);
  CHECK(good.records.at(0).at("hom_law") == true);
}

TEST_CASE("suites") {
  TempDir empty("empty");
  auto s = run_suite(empty.path);
  CHECK(s.status == Status::pass);
  CHECK(s.reports.empty());

  TempDir dir("mixed");
  dir.write("b.scn", "name = b_ok\ncommand = df-check\nring = F2\ndim = 1\n");
  dir.write("a.scn", "name = z_expected_fail\ncommand = wreath-verify\nmap = d8-literal\nexpect = fail\n");
  dir.write("ignored.txt", "command = nonsense\n");
  s = run_suite(dir.path);
  CHECK(s.status == Status::pass);
  REQUIRE(s.reports.size() == 2);
  CHECK(s.reports[0].scenario.name == "b_ok");
  CHECK(s.reports[1].scenario.name == "z_expected_fail");

  dir.write("c.scn", "command = df-check\nring = F2\ndim = 1\nbogus = 1\n");
  s = run_suite(dir.path);
  CHECK(s.status == Status::fail);
  bool saw_usage = false;
  for (const auto& r : s.reports) saw_usage = saw_usage || r.status == Status::usage_error;
  CHECK(saw_usage);
  CHECK(s.to_json(false).at("reports").size() == 3);
}

TEST_CASE("every command is reachable") {
  const auto cmds = known_commands();
  for (const char* c : {"df-check", "unit-search", "wreath-verify", "hopf-pipeline", "ca-report", "localembed",
                        "abelian-normal-scan"}) {
    CHECK(std::find(cmds.begin(), cmds.end(), c) != cmds.end());
  }
  CHECK(run("command = localembed\nmode = gf-matrices\nfield = F4\n").status == Status::pass);
  CHECK(run("command = ca-report\ngroup = C2\nalphabet = F2\n").status == Status::pass);
  CHECK(run("command = abelian-normal-scan\nbase = C3\ntop = C2\n").status == Status::pass);
}
