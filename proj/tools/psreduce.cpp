#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "purespin/scenario.hpp"
#include "purespin/serialize.hpp"

int main(int argc, char** argv) {
  CLI::App app{"exact fiberwise reduction of Dirac structures and pure spinors"};

  std::vector<std::string> scenarios;
  bool selftest = false;
  bool list = false;
  std::string format = "json";
  purespin::RunOptions opt;

  app.add_option("-s,--scenario", scenarios,
                 "scenario file (JSON) or built-in scenario name; repeatable");
  app.add_flag("--selftest", selftest, "run the randomized property suites");
  app.add_flag("--list", list, "list built-in scenario names");
  app.add_option("--seed", opt.seed, "selftest seed")->capture_default_str();
  app.add_option("--max-dim", opt.max_dim, "largest selftest fiber dimension")
      ->check(CLI::Range(2, 8))
      ->capture_default_str();
  app.add_option("--format", format, "output format")
      ->check(CLI::IsMember({"json", "text"}))
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;  // --help exits cleanly
  }

  try {
    if (list) {
      for (auto& name : purespin::builtin_names()) std::cout << name << "\n";
      return 0;
    }
    if (scenarios.empty() && !selftest) {
      std::cerr << "error: nothing to do (use --scenario, --selftest, or --list)\n";
      return 2;
    }

    opt.json_mode = format == "json";
    std::vector<purespin::Report> reports;
    for (auto& spec : scenarios) {
      nlohmann::json scenario;
      if (std::filesystem::exists(spec)) {
        std::ifstream in(spec);
        if (!in) throw purespin::ParseError("cannot open '" + spec + "'");
        try {
          in >> scenario;
        } catch (const nlohmann::json::exception& e) {
          throw purespin::ParseError("'" + spec + "': " + e.what());
        }
      } else {
        scenario = purespin::builtin_scenario(spec);
      }
      reports.push_back(purespin::run_scenario(scenario, opt));
    }
    if (selftest) reports.push_back(purespin::run_selftest(opt));

    purespin::print_reports(std::cout, reports, opt.json_mode);
    return purespin::exit_code(reports);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
