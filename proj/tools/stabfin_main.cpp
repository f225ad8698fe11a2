#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "stabfin/error.hpp"
#include "stabfin/scenario.hpp"

namespace {

struct Common {
  std::uint64_t seed = 1;
  std::uint64_t budget = 1u << 16;
  std::int64_t window = 1;
  std::string json_out;
  bool no_timing = false;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--seed", c.seed, "seed for sampled modes");
  sub->add_option("--budget", c.budget, "element / pair cap");
  sub->add_option("--window", c.window, "support radius for infinite groups");
  sub->add_option("--json", c.json_out, "write the JSON report here ('-' for stdout)");
  sub->add_flag("--no-timing", c.no_timing, "leave timing out of the JSON report");
}

void emit(const nlohmann::json& j, const std::string& where) {
  if (where.empty()) return;
  if (where == "-") {
    std::cout << j.dump(2) << "\n";
    return;
  }
  std::ofstream out(where);
  if (!out) throw stabfin::Error(stabfin::ErrorCode::IOError, "cannot write " + where);
  out << j.dump(2) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite-scale verification of stable-finiteness constructions"};
  app.require_subcommand(1);

  Common common;
  std::vector<std::string> kv;
  std::string file;
  std::string dir;

  for (const auto& cmd : stabfin::known_commands()) {
    auto* sub = app.add_subcommand(cmd, cmd + " with key=value parameters");
    sub->add_option("params", kv, "key=value parameters");
    add_common(sub, common);
  }
  auto* run = app.add_subcommand("run", "run one scenario file");
  run->add_option("file", file)->required();
  add_common(run, common);
  auto* suite = app.add_subcommand("suite", "run every *.scn file in a directory");
  suite->add_option("dir", dir)->required();
  add_common(suite, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 3;
  }

  try {
    if (suite->parsed()) {
      const auto rep = stabfin::run_suite(dir);
      for (const auto& r : rep.reports) std::cout << r.summary(true) << "\n";
      std::cout << "suite " << rep.path << ": " << stabfin::status_name(rep.status) << " (" << rep.reports.size()
                << " scenarios)\n";
      emit(rep.to_json(!common.no_timing), common.json_out);
      return rep.status == stabfin::Status::pass ? 0 : 1;
    }

    stabfin::Scenario s;
    if (run->parsed()) {
      s = stabfin::load_scenario(file);
    } else {
      std::string text;
      for (auto* sub : app.get_subcommands()) text = "command=" + sub->get_name() + "\nname=" + sub->get_name() + "\n";
      for (const auto& p : kv) {
        if (p.find('=') == std::string::npos) {
          std::cerr << "usage error: expected key=value, got '" << p << "'\n";
          return 3;
        }
        text += p + "\n";
      }
      s = stabfin::parse_scenario(text);
      s.seed = common.seed;
      s.budget = common.budget;
      s.window = common.window;
    }
    const auto r = stabfin::run_scenario(s);
    std::cout << r.summary(s.expect_given) << "\n";
    emit(r.to_json(!common.no_timing), common.json_out);
    return stabfin::exit_code(r.status);
  } catch (const stabfin::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == stabfin::ErrorCode::IOError ? 1 : 3;
  }
}
