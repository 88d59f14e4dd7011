#include "stlta/bench.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <iomanip>
#include <ostream>

namespace stlta {

namespace {

std::vector<double> solved_times(const BenchReport& r) {
  std::vector<double> t;
  for (const auto& row : r.rows) {
    if (row.status == SynthesisStatus::Solved) t.push_back(row.seconds);
  }
  return t;
}

}  // namespace

std::size_t BenchReport::successes() const {
  return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(),
                                                [](const BenchRow& r) { return r.status == SynthesisStatus::Solved; }));
}

double BenchReport::success_rate() const {
  return rows.empty() ? 0.0 : 100.0 * static_cast<double>(successes()) / static_cast<double>(rows.size());
}

double BenchReport::mean_time() const {
  const auto t = solved_times(*this);
  if (t.empty()) return 0.0;
  double s = 0.0;
  for (double x : t) s += x;
  return s / static_cast<double>(t.size());
}

double BenchReport::stddev_time() const {
  const auto t = solved_times(*this);
  if (t.size() < 2) return 0.0;
  const double m = mean_time();
  double s = 0.0;
  for (double x : t) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(t.size() - 1));
}

double BenchReport::median_time() const {
  // Unsolved trials count as infinitely slow.
  std::vector<double> t;
  for (const auto& row : rows) {
    t.push_back(row.status == SynthesisStatus::Solved ? row.seconds : std::numeric_limits<double>::infinity());
  }
  if (t.empty()) return 0.0;
  std::sort(t.begin(), t.end());
  const std::size_t n = t.size();
  return n % 2 ? t[n / 2] : 0.5 * (t[n / 2 - 1] + t[n / 2]);
}

std::uint64_t controller_digest(const std::vector<std::pair<std::vector<double>, double>>& controls) {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&](double v) {
    unsigned char b[sizeof(double)];
    std::memcpy(b, &v, sizeof v);
    for (unsigned char c : b) {
      h ^= c;
      h *= 1099511628211ull;
    }
  };
  for (const auto& [u, dt] : controls) {
    for (double v : u) mix(v);
    mix(dt);
  }
  return h;
}

BenchReport run_bench(const RunConfig& cfg, std::size_t trials, std::uint64_t base_seed, std::ostream* progress) {
  BenchReport rep;
  for (std::size_t i = 0; i < trials; ++i) {
    PlannerOptions o = cfg.planner;
    o.seed = base_seed + i;
    Planner p(cfg.spec, cfg.model, cfg.x0, o);
    const SynthesisResult r = p.run();
    BenchRow row;
    row.trial = i;
    row.seed = o.seed;
    row.status = r.status;
    row.seconds = r.stats.total_seconds;
    row.setup_seconds = r.stats.setup_seconds;
    row.vertices = r.stats.vertices;
    row.extensions = r.stats.extensions;
    if (r.solution) {
      SolutionFile s{cfg.model.name, cfg.x0, r.solution->controls, r.solution->word};
      row.checked = check_solution(cfg, s).ok();
      row.digest = controller_digest(r.solution->controls);
    }
    if (progress) {
      *progress << "trial " << i << " seed " << row.seed << ' ' << to_string(row.status) << ' ' << std::fixed
                << std::setprecision(3) << row.seconds << " s" << std::defaultfloat << std::endl;
    }
    rep.rows.push_back(row);
  }
  return rep;
}

void write_report(std::ostream& out, const BenchReport& r) {
  out << "trial\tseed\tstatus\ttime_s\tsetup_s\tvertices\textensions\tchecked\tdigest\n";
  for (const auto& row : r.rows) {
    out << row.trial << '\t' << row.seed << '\t' << to_string(row.status) << '\t' << std::fixed
        << std::setprecision(4) << row.seconds << '\t' << row.setup_seconds << std::defaultfloat << '\t'
        << row.vertices << '\t' << row.extensions << '\t' << (row.checked ? 1 : 0) << '\t' << std::hex
        << row.digest << std::dec << '\n';
  }
  out << std::fixed << std::setprecision(3);
  out << "# trials " << r.rows.size() << "\n";
  out << "# success_pct " << r.success_rate() << "\n";
  out << "# mean_time_s " << r.mean_time() << "\n";
  out << "# stddev_time_s " << r.stddev_time() << "\n";
  out << std::defaultfloat;
}

}  // namespace stlta
