#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "stlta/dynamics.hpp"
#include "stlta/planner.hpp"

namespace stlta {

/// Run configuration: a flat `key = value` file with [sections]; `#` starts
/// a comment.  See docs/config.md for the keys.
struct RunConfig {
  std::string spec_path;
  StlSpec spec;
  DynamicsModel model;
  std::vector<double> x0;
  PlannerOptions planner;
  std::size_t trials = 1;
  std::string output_dir = ".";
};

class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::size_t line, const std::string& msg);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Relative spec paths resolve against base_dir.
RunConfig parse_config(std::string_view text, const std::string& base_dir = ".");
RunConfig load_config(const std::string& path);

/// Minimal partition points of f plus k uniform pieces of [a, b).
std::vector<double> uniform_partition(const Stl& f, double a, double b, std::size_t k);

/// Controller and timed word as written by `stlta synth`.
struct SolutionFile {
  std::string dynamics;
  std::vector<double> x0;
  std::vector<std::pair<std::vector<double>, double>> controls;
  TimedWord word;
};

void write_solution(std::ostream& out, const RunConfig& cfg, const SynthesisResult& r);
SolutionFile read_solution(std::istream& in);

struct CheckResult {
  bool monitor = false;    // the re-simulated trajectory satisfies the formula
  bool automaton = false;  // its timed word is accepted
  std::optional<double> violation_time;
  std::string message;

  bool ok() const { return monitor && automaton; }
};

/// Re-simulates the controller under cfg's dynamics and checks it against
/// cfg's formula.  Throws std::invalid_argument on dimension mismatches.
CheckResult check_solution(const RunConfig& cfg, const SolutionFile& s);

}  // namespace stlta
