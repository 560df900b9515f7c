#ifndef PURESPIN_SCENARIO_HPP
#define PURESPIN_SCENARIO_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

namespace purespin {

struct RunOptions {
  std::uint64_t seed = 1;
  int max_dim = 5;  // largest fiber dimension exercised by the selftest
  bool json_mode = true;
};

// Outcome of one scenario.  `flagged` means every check passed but the run
// took an advisory path (e.g. a perturbation was needed); it counts as
// success for the exit code.  Timing is reported in text mode only so that
// JSON reports are byte-identical for a fixed input and seed.
struct Report {
  std::string id;
  std::string status;     // "pass" | "flagged" | "fail"
  nlohmann::json checks;  // check name -> bool
  nlohmann::json values;  // computed values, exact serialization
  long long micros = 0;
  bool ok() const { return status != "fail"; }
};

// Executes one parsed scenario object.  Malformed input throws ParseError (or
// std::invalid_argument from the core library); expectation mismatches yield
// status "fail" instead of throwing.
Report run_scenario(const nlohmann::json& scenario, const RunOptions& opt);

std::vector<std::string> builtin_names();
nlohmann::json builtin_scenario(const std::string& name);  // ParseError if unknown

// Randomized property suites (dictionary round-trip, transversality
// biconditional, perturbation invariance, B-covariance, Fourier-side
// intertwining) with the seed echoed for reproducibility.
Report run_selftest(const RunOptions& opt);

void print_reports(std::ostream& os, const std::vector<Report>& reports, bool json_mode);
int exit_code(const std::vector<Report>& reports);  // 0 all ok, 1 any fail

}  // namespace purespin

#endif  // PURESPIN_SCENARIO_HPP
