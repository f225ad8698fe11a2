#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace stabfin {

enum class Status { pass, fail, inconclusive, usage_error };

std::string_view status_name(Status s);  // "pass", "fail", "bounded-inconclusive", "usage-error"
Status parse_status(std::string_view text);
// 0 pass, 1 fail, 2 bounded-inconclusive, 3 usage error.
int exit_code(Status s);

struct Scenario {
  std::string name;
  std::string command;
  std::map<std::string, std::string> params;
  std::uint64_t seed = 1;
  std::uint64_t budget = 1u << 16;
  std::int64_t window = 1;
  Status expect = Status::pass;
  bool expect_given = false;
};

// Flat key=value lines; '#' starts a comment. Reserved keys: name, command, seed, budget,
// window, expect. Everything else is a command parameter.
Scenario parse_scenario(std::string_view text, const std::string& fallback_name = "scenario");
Scenario load_scenario(const std::filesystem::path& file);

struct Report {
  Scenario scenario;
  Status status = Status::pass;
  nlohmann::json records = nlohmann::json::array();
  nlohmann::json witnesses = nlohmann::json::array();
  std::string error;  // usage errors and module failures
  double millis = 0;

  bool as_expected() const { return status == scenario.expect; }
  nlohmann::json to_json(bool with_timing = true) const;
  std::string summary(bool show_expectation = false) const;
};

// Validates the parameters against the command's schema, then dispatches.
Report run_scenario(const Scenario& s);

struct SuiteReport {
  std::string path;
  std::vector<Report> reports;  // ordered by scenario name
  Status status = Status::pass;
  nlohmann::json to_json(bool with_timing = true) const;
};

// Runs every *.scn file in the directory. Passes when every scenario ends with its expected status.
SuiteReport run_suite(const std::filesystem::path& dir);

std::vector<std::string> known_commands();

}  // namespace stabfin
