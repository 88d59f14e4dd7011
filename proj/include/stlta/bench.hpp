#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "stlta/config.hpp"

namespace stlta {

struct BenchRow {
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  SynthesisStatus status = SynthesisStatus::Timeout;
  double seconds = 0.0;        // as counted against t_max
  double setup_seconds = 0.0;
  std::size_t vertices = 0;
  std::size_t extensions = 0;
  bool checked = false;        // the solution passed check_solution
  std::uint64_t digest = 0;    // hash of the controller, 0 without a solution
};

struct BenchReport {
  std::vector<BenchRow> rows;

  std::size_t successes() const;
  double success_rate() const;  // percent
  /// Mean and sample standard deviation of the time to solution.
  double mean_time() const;
  double stddev_time() const;
  double median_time() const;
};

/// FNV-1a over the bytes of every (u, dt).
std::uint64_t controller_digest(const std::vector<std::pair<std::vector<double>, double>>& controls);

/// Runs trials with seeds base_seed, base_seed + 1, ...; `progress` (may be
/// null) receives one line per trial.
BenchReport run_bench(const RunConfig& cfg, std::size_t trials, std::uint64_t base_seed,
                      std::ostream* progress = nullptr);

/// Tab-separated rows followed by `#`-prefixed aggregate lines.
void write_report(std::ostream& out, const BenchReport& r);

}  // namespace stlta
