// Command-line front end: synthesis, benchmarks, checks and dumps.
#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "stlta/bench.hpp"
#include "stlta/config.hpp"
#include "stlta/separation.hpp"

using namespace stlta;

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 2;
constexpr int kFailed = 3;

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<double> t_max;
  std::string partitions;  // comma list of k for bench, single k otherwise
  bool include_setup = false;
};

RunConfig load(const Common& c) {
  RunConfig cfg = load_config(c.config);
  if (c.seed) cfg.planner.seed = *c.seed;
  if (c.t_max) cfg.planner.t_max = *c.t_max;
  if (c.include_setup) cfg.planner.include_setup = true;
  return cfg;
}

std::vector<std::size_t> parse_counts(const std::string& s) {
  std::vector<std::size_t> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    std::size_t pos = 0;
    const unsigned long v = std::stoul(tok, &pos);
    if (pos != tok.size() || v == 0) throw CLI::ValidationError("--partitions", "expected positive integers");
    out.push_back(v);
  }
  return out;
}

void set_partitions(RunConfig& cfg, std::size_t k) {
  const auto minimal = minimal_partition_points(cfg.spec.formula).points;
  const double b = minimal.size() > 1 ? minimal[1] : formula_horizon(cfg.spec.formula);
  cfg.planner.partition = uniform_partition(cfg.spec.formula, 0.0, b, k);
}

std::string time_str(double t) {
  std::ostringstream s;
  s << t;
  return s.str();
}

int cmd_synth(const Common& c, const std::string& out_path) {
  RunConfig cfg = load(c);
  if (!c.partitions.empty()) set_partitions(cfg, parse_counts(c.partitions).front());
  Planner p(cfg.spec, cfg.model, cfg.x0, cfg.planner);
  const SynthesisResult r = p.run();
  std::cerr << "status " << to_string(r.status) << "  seed " << r.seed << "  time " << std::fixed
            << std::setprecision(3) << r.stats.total_seconds << " s  setup " << r.stats.setup_seconds
            << " s  vertices " << r.stats.vertices << "  regions " << r.stats.regions << "  automaton states "
            << r.stats.automaton_states << std::defaultfloat << "\n";
  if (!r.message.empty()) std::cerr << r.message << "\n";
  if (out_path == "-") {
    write_solution(std::cout, cfg, r);
  } else {
    std::ofstream f(out_path);
    if (!f) throw std::runtime_error("cannot write " + out_path);
    write_solution(f, cfg, r);
    std::cerr << "wrote " << out_path << "\n";
  }
  return r.status == SynthesisStatus::Solved ? kOk : kFailed;
}

int cmd_bench(const Common& c, std::optional<std::size_t> trials, const std::string& out_path, bool quiet) {
  RunConfig cfg = load(c);
  const std::size_t n = trials.value_or(cfg.trials);
  std::vector<std::size_t> ks;
  if (!c.partitions.empty()) ks = parse_counts(c.partitions);
  std::ostream* progress = quiet ? nullptr : &std::cerr;

  std::filesystem::path dir = out_path.empty() ? std::filesystem::path(cfg.output_dir) : std::filesystem::path(out_path);
  std::filesystem::create_directories(dir);
  auto run = [&](const std::string& name) {
    const BenchReport rep = run_bench(cfg, n, cfg.planner.seed, progress);
    std::ofstream f(dir / (name + ".tsv"));
    write_report(f, rep);
    return rep;
  };
  if (ks.empty()) {
    const BenchReport rep = run("report");
    write_report(std::cout, rep);
    return kOk;
  }
  std::ofstream table(dir / "partitions.tsv");
  table << "k\tsuccess_pct\tmean_time_s\tstddev_time_s\n";
  std::cout << "k\tsuccess_pct\tmean_time_s\tstddev_time_s\n";
  for (std::size_t k : ks) {
    set_partitions(cfg, k);
    if (progress) *progress << "k = " << k << "\n";
    const BenchReport rep = run("k" + std::to_string(k));
    std::ostringstream line;
    line << k << '\t' << std::fixed << std::setprecision(3) << rep.success_rate() << '\t' << rep.mean_time() << '\t'
         << rep.stddev_time() << '\n';
    table << line.str();
    std::cout << line.str() << std::flush;
  }
  return kOk;
}

int cmd_check(const std::string& solution, const Common& c) {
  const RunConfig cfg = load(c);
  std::ifstream f(solution);
  if (!f) throw std::runtime_error("cannot open " + solution);
  const SolutionFile s = read_solution(f);
  const CheckResult r = check_solution(cfg, s);
  std::cout << (r.ok() ? "ok" : "fail") << ": " << r.message;
  if (r.violation_time) std::cout << " (violated by t = " << time_str(*r.violation_time) << ")";
  std::cout << "\n";
  return r.ok() ? kOk : kFailed;
}

int cmd_dump_clauses(const Common& c) {
  const RunConfig cfg = load(c);
  const auto names = cfg.spec.predicate_names();
  const TimePartitionSet t = cfg.planner.partition.empty() ? minimal_partition_points(cfg.spec.formula)
                                                           : TimePartitionSet{cfg.planner.partition};
  for (const auto& clause : time_partition(cfg.spec.formula, t)) std::cout << clause.to_string(names) << "\n";
  return kOk;
}

int cmd_dump_automaton(const Common& c) {
  RunConfig cfg = load(c);
  cfg.planner.t_max = 1e9;
  const Planner p(cfg.spec, cfg.model, cfg.x0, cfg.planner);
  std::cout << to_dot(p.automaton(), cfg.spec.predicate_names());
  return kOk;
}

int cmd_dump_abstraction(const Common& c) {
  const RunConfig cfg = load(c);
  const Planner p(cfg.spec, cfg.model, cfg.x0, cfg.planner);
  std::cout << dump_abstraction(p.abstraction(), cfg.model.state_names);
  return kOk;
}

int cmd_dump_lead(const Common& c) {
  const RunConfig cfg = load(c);
  const Planner p(cfg.spec, cfg.model, cfg.x0, cfg.planner);
  const auto z0 = p.product().initial(cfg.x0);
  const auto lead = p.product().compute_lead(z0);
  if (!lead) {
    std::cout << "no lead: acceptance is unreachable from the initial state\n";
    return kFailed;
  }
  std::cout << "step\tq\td\tinv\tweight\n";
  for (std::size_t i = 0; i < lead->states.size(); ++i) {
    const auto& z = lead->states[i];
    const TimedState& s = p.automaton().states[z.q];
    std::cout << i << '\t' << s.name << '\t' << z.d << '\t' << s.inv.to_string() << '\t' << p.product().weight(z)
              << '\n';
  }
  std::cout << "# cost " << lead->cost << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Automaton-guided control synthesis for non-nested STL"};
  app.require_subcommand(1);
  Common c;
  std::string out = "solution.txt", solution, bench_out;
  std::optional<std::size_t> trials;
  bool quiet = false;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("config", c.config, "Run configuration file")->required()->check(CLI::ExistingFile);
    sub->add_option("--seed", c.seed, "Override the random seed");
    sub->add_option("--t-max", c.t_max, "Override the wall-clock budget (s)");
    sub->add_option("--partitions", c.partitions, "Uniform time partitions before the first cut (bench: list)");
    sub->add_flag("--include-setup", c.include_setup, "Count abstraction and automaton time");
  };
  auto* synth = app.add_subcommand("synth", "Synthesize a controller");
  add_common(synth);
  synth->add_option("-o,--out", out, "Solution file, '-' for stdout");
  auto* bench = app.add_subcommand("bench", "Run seeded trials and write a report");
  add_common(bench);
  bench->add_option("--trials", trials, "Number of trials");
  bench->add_option("-o,--out", bench_out, "Report directory (default: [bench] output)");
  bench->add_flag("-q,--quiet", quiet, "No per-trial progress");
  auto* check = app.add_subcommand("check", "Re-simulate a solution and check it");
  check->add_option("solution", solution, "Solution file")->required()->check(CLI::ExistingFile);
  add_common(check);
  auto* dump_automaton = app.add_subcommand("dump-automaton", "Timed automaton as graphviz text");
  add_common(dump_automaton);
  auto* dump_abstraction = app.add_subcommand("dump-abstraction", "Regions and adjacency");
  add_common(dump_abstraction);
  auto* dump_clauses = app.add_subcommand("dump-clauses", "Time-partitioned DNF clauses");
  add_common(dump_clauses);
  auto* dump_lead = app.add_subcommand("dump-lead", "First lead from the initial state");
  add_common(dump_lead);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*synth) return cmd_synth(c, out);
    if (*bench) return cmd_bench(c, trials, bench_out, quiet);
    if (*check) return cmd_check(solution, c);
    if (*dump_automaton) return cmd_dump_automaton(c);
    if (*dump_abstraction) return cmd_dump_abstraction(c);
    if (*dump_clauses) return cmd_dump_clauses(c);
    if (*dump_lead) return cmd_dump_lead(c);
  } catch (const ConfigError& e) {
    std::cerr << c.config << ":" << e.what() << "\n";
    return kUsage;
  } catch (const SpecFileError& e) {
    std::cerr << "specification: " << e.what() << "\n";
    return kUsage;
  } catch (const StlParseError& e) {
    std::cerr << "formula: " << e.what() << "\n";
    return kUsage;
  } catch (const CLI::ValidationError& e) {
    std::cerr << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailed;
  }
  return kUsage;
}
