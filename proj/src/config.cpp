#include "stlta/config.hpp"

#include <boost/algorithm/string.hpp>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>

#include "stlta/separation.hpp"

namespace stlta {

namespace {

struct Entry {
  std::string value;
  std::size_t line;
};

double to_double(const Entry& e, std::string_view text) {
  std::string s = boost::algorithm::trim_copy(std::string(text));
  double v = 0.0;
  const char* first = s.data();
  if (!s.empty() && s[0] == '+') ++first;
  const auto [end, ec] = std::from_chars(first, s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || end != s.data() + s.size()) {
    throw ConfigError(e.line, "expected a number, got '" + s + "'");
  }
  return v;
}

std::vector<double> to_list(const Entry& e) {
  std::vector<std::string> parts;
  boost::split(parts, e.value, boost::is_any_of(", \t"), boost::token_compress_on);
  std::vector<double> out;
  for (const auto& p : parts) {
    if (!p.empty()) out.push_back(to_double(e, p));
  }
  return out;
}

std::size_t to_count(const Entry& e) {
  const double v = to_double(e, e.value);
  if (v < 0 || v != static_cast<double>(static_cast<std::size_t>(v))) {
    throw ConfigError(e.line, "expected a nonnegative integer, got '" + e.value + "'");
  }
  return static_cast<std::size_t>(v);
}

bool to_bool(const Entry& e) {
  const std::string v = boost::algorithm::to_lower_copy(e.value);
  if (v == "true" || v == "yes" || v == "1") return true;
  if (v == "false" || v == "no" || v == "0") return false;
  throw ConfigError(e.line, "expected true or false, got '" + e.value + "'");
}

std::pair<double, double> to_range(const Entry& e) {
  const auto v = to_list(e);
  if (v.size() != 2 || !(v[0] <= v[1])) throw ConfigError(e.line, "expected 'lo, hi' with lo <= hi");
  return {v[0], v[1]};
}

const std::set<std::string> kKnown{
    "problem.spec", "problem.dynamics", "problem.x0",
    "planner.t_max", "planner.t_e_iterations", "planner.max_extensions", "planner.dt_min", "planner.dt_max",
    "planner.step", "planner.seed", "planner.include_setup", "planner.partition", "planner.partitions",
    "planner.partition_span", "planner.max_depth", "planner.max_impure_fraction",
    "bench.trials", "bench.output"};

}  // namespace

ConfigError::ConfigError(std::size_t line, const std::string& msg)
    : std::runtime_error("line " + std::to_string(line) + ": " + msg), line_(line) {}

std::vector<double> uniform_partition(const Stl& f, double a, double b, std::size_t k) {
  std::vector<double> pts = minimal_partition_points(f).points;
  for (std::size_t i = 0; i < k; ++i) pts.push_back(a + (b - a) * static_cast<double>(i) / static_cast<double>(k));
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end(), [](double x, double y) { return std::abs(x - y) < 1e-12; }),
            pts.end());
  return pts;
}

RunConfig parse_config(std::string_view text, const std::string& base_dir) {
  std::map<std::string, Entry> kv;
  std::istringstream in{std::string(text)};
  std::string raw, section;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = boost::algorithm::trim_copy(raw.substr(0, raw.find('#')));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(lineno, "unterminated section header");
      section = boost::algorithm::trim_copy(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(lineno, "expected 'key = value'");
    const std::string key = boost::algorithm::trim_copy(line.substr(0, eq));
    if (section.empty()) throw ConfigError(lineno, "key '" + key + "' outside any section");
    const std::string full = section + "." + key;
    if (kv.count(full)) throw ConfigError(lineno, "duplicate key '" + key + "'");
    kv[full] = {boost::algorithm::trim_copy(line.substr(eq + 1)), lineno};
  }
  const std::size_t last = lineno;
  auto get = [&](const std::string& k) -> const Entry* {
    const auto it = kv.find(k);
    return it == kv.end() ? nullptr : &it->second;
  };
  auto need = [&](const std::string& k) -> const Entry& {
    if (const Entry* e = get(k)) return *e;
    throw ConfigError(last, "missing key '" + k + "'");
  };

  RunConfig cfg;
  const Entry& dyn = need("problem.dynamics");
  try {
    cfg.model = builtin_dynamics(dyn.value);
  } catch (const std::invalid_argument& ex) {
    throw ConfigError(dyn.line, ex.what());
  }
  for (const auto& [k, e] : kv) {
    const auto dot = k.find('.');
    const std::string sec = k.substr(0, dot), name = k.substr(dot + 1);
    if (sec == "bounds" || sec == "controls") {
      const auto& names = sec == "bounds" ? cfg.model.state_names : cfg.model.control_names;
      const auto it = std::find(names.begin(), names.end(), name);
      if (it == names.end()) throw ConfigError(e.line, "unknown " + sec.substr(0, sec.size() - 1) + " '" + name + "'");
      const auto i = static_cast<std::size_t>(it - names.begin());
      const auto [lo, hi] = to_range(e);
      (sec == "bounds" ? cfg.model.state_lo : cfg.model.control_lo)[i] = lo;
      (sec == "bounds" ? cfg.model.state_hi : cfg.model.control_hi)[i] = hi;
    } else if (!kKnown.count(k)) {
      throw ConfigError(e.line, "unknown key '" + name + "' in [" + sec + "]");
    }
  }

  const Entry& spec = need("problem.spec");
  namespace fs = std::filesystem;
  fs::path sp(spec.value);
  if (sp.is_relative()) sp = fs::path(base_dir) / sp;
  cfg.spec_path = sp.string();
  try {
    cfg.spec = load_spec(cfg.spec_path, cfg.model.state_names);
  } catch (const SpecFileError&) {
    throw;
  } catch (const std::exception& ex) {
    throw ConfigError(spec.line, ex.what());
  }
  if (cfg.spec.variables.size() > cfg.model.n()) {
    throw ConfigError(spec.line, "the specification has more variables than '" + cfg.model.name + "' has states");
  }
  if (!std::isfinite(formula_horizon(cfg.spec.formula))) throw ConfigError(spec.line, "unbounded horizon");

  const Entry& x0 = need("problem.x0");
  cfg.x0 = to_list(x0);
  if (cfg.x0.size() != cfg.model.n()) {
    throw ConfigError(x0.line, "x0 needs " + std::to_string(cfg.model.n()) + " components");
  }
  if (!cfg.model.in_bounds(cfg.x0)) throw ConfigError(x0.line, "x0 lies outside the state bounds");

  PlannerOptions& p = cfg.planner;
  if (const Entry* e = get("planner.t_max")) p.t_max = to_double(*e, e->value);
  if (const Entry* e = get("planner.t_e_iterations")) p.explore_iterations = std::max<std::size_t>(1, to_count(*e));
  if (const Entry* e = get("planner.max_extensions")) p.max_extensions = to_count(*e);
  if (const Entry* e = get("planner.dt_min")) p.dt_min = to_double(*e, e->value);
  if (const Entry* e = get("planner.dt_max")) p.dt_max = to_double(*e, e->value);
  if (const Entry* e = get("planner.step")) p.h = to_double(*e, e->value);
  if (const Entry* e = get("planner.seed")) p.seed = to_count(*e);
  if (const Entry* e = get("planner.include_setup")) p.include_setup = to_bool(*e);
  if (const Entry* e = get("planner.max_depth")) p.abstraction.max_depth = static_cast<int>(to_count(*e));
  if (const Entry* e = get("planner.max_impure_fraction")) p.abstraction.max_impure_fraction = to_double(*e, e->value);
  if (!(p.t_max > 0)) throw ConfigError(need("planner.t_max").line, "t_max must be positive");
  if (!(p.dt_min > 0 && p.dt_min <= p.dt_max)) throw ConfigError(last, "need 0 < dt_min <= dt_max");
  if (!(p.h > 0 && p.h <= kRk4Step)) throw ConfigError(need("planner.step").line, "step must lie in (0, 0.01]");

  const Entry* part = get("planner.partition");
  const Entry* k = get("planner.partitions");
  if (part && k) throw ConfigError(k->line, "use either 'partition' or 'partitions', not both");
  if (part) {
    p.partition = to_list(*part);
    try {
      validate_partition({p.partition});
    } catch (const SeparationError& ex) {
      throw ConfigError(part->line, ex.what());
    }
  } else if (k) {
    const std::size_t n = to_count(*k);
    if (n == 0) throw ConfigError(k->line, "partitions must be at least 1");
    double a = 0.0, b = 0.0;
    if (const Entry* span = get("planner.partition_span")) {
      std::tie(a, b) = to_range(*span);
    } else {
      const auto minimal = minimal_partition_points(cfg.spec.formula).points;
      b = minimal.size() > 1 ? minimal[1] : formula_horizon(cfg.spec.formula);
    }
    p.partition = uniform_partition(cfg.spec.formula, a, b, n);
  }

  if (const Entry* e = get("bench.trials")) {
    cfg.trials = to_count(*e);
    if (cfg.trials == 0) throw ConfigError(e->line, "trials must be at least 1");
  }
  if (const Entry* e = get("bench.output")) cfg.output_dir = e->value;
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(0, "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), std::filesystem::path(path).parent_path().string());
}

void write_solution(std::ostream& out, const RunConfig& cfg, const SynthesisResult& r) {
  out << std::setprecision(17);
  out << "# stlta solution\n";
  out << "status " << to_string(r.status) << "\n";
  out << "seed " << r.seed << "\n";
  out << "dynamics " << cfg.model.name << "\n";
  out << "states";
  for (const auto& n : cfg.model.state_names) out << ' ' << n;
  out << "\ncontrols";
  for (const auto& n : cfg.model.control_names) out << ' ' << n;
  out << "\nx0";
  for (double v : cfg.x0) out << ' ' << v;
  out << "\n";
  if (!r.solution) return;
  for (const auto& [u, dt] : r.solution->controls) {
    out << "u";
    for (double v : u) out << ' ' << v;
    out << " dt " << dt << "\n";
  }
  for (const TreeVertex& v : r.solution->chain) {
    out << "vertex t " << v.t << " q " << v.q << " d " << v.d << " x";
    for (double c : v.x) out << ' ' << c;
    out << "\n";
  }
  for (const TimedLetter& l : r.solution->word) out << "letter " << l.t << ' ' << l.sigma << "\n";
}

SolutionFile read_solution(std::istream& in) {
  SolutionFile s;
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = boost::algorithm::trim_copy(raw.substr(0, raw.find('#')));
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string tag;
    ls >> tag;
    auto numbers = [&](std::istringstream& is) {
      std::vector<double> v;
      std::string tok;
      while (is >> tok) {
        if (tok == "dt") break;
        v.push_back(to_double({tok, lineno}, tok));
      }
      return v;
    };
    if (tag == "dynamics") {
      ls >> s.dynamics;
    } else if (tag == "x0") {
      s.x0 = numbers(ls);
    } else if (tag == "u") {
      auto u = numbers(ls);
      double dt = 0.0;
      if (!(ls >> dt) || !(dt > 0)) throw ConfigError(lineno, "control line needs 'dt <positive duration>'");
      s.controls.emplace_back(std::move(u), dt);
    } else if (tag == "letter") {
      double t = 0.0;
      Label sigma = 0;
      if (!(ls >> t >> sigma)) throw ConfigError(lineno, "letter line needs 'time label'");
      s.word.push_back({sigma, t});
    } else if (tag != "status" && tag != "seed" && tag != "states" && tag != "controls" && tag != "vertex") {
      throw ConfigError(lineno, "unknown line '" + tag + "'");
    }
  }
  return s;
}

CheckResult check_solution(const RunConfig& cfg, const SolutionFile& s) {
  if (!s.dynamics.empty() && s.dynamics != cfg.model.name) {
    throw std::invalid_argument("solution is for '" + s.dynamics + "' but the config uses '" + cfg.model.name + "'");
  }
  const std::vector<double>& x0 = s.x0.empty() ? cfg.x0 : s.x0;
  if (x0.size() != cfg.model.n()) throw std::invalid_argument("x0 dimension does not match the dynamics");
  for (const auto& [u, dt] : s.controls) {
    if (u.size() != cfg.model.c()) throw std::invalid_argument("control dimension does not match the dynamics");
  }
  CheckResult res;
  const Trajectory traj = simulate(cfg.model, x0, s.controls, cfg.planner.h);
  const LabelSignal sig = signal_of(traj, cfg.spec.predicates);
  const Verdict v = evaluate(sig, cfg.spec.formula, 0.0);
  res.monitor = v == Verdict::True;
  if (v == Verdict::False) {
    // First breakpoint by which the violation is already settled.
    LabelSignal prefix;
    const auto& bp = sig.breakpoints();
    for (std::size_t i = 0; i < bp.size(); ++i) {
      prefix.add_breakpoint(bp[i], sig.point_labels()[i], i ? sig.open_labels()[i - 1] : 0);
      if (evaluate(prefix, cfg.spec.formula, 0.0) == Verdict::False) {
        res.violation_time = bp[i];
        break;
      }
    }
  }
  const TimedNfa ta = assemble(build_parse_tree(time_partition(
      cfg.spec.formula, cfg.planner.partition.empty() ? minimal_partition_points(cfg.spec.formula)
                                                      : TimePartitionSet{cfg.planner.partition})));
  res.automaton = accepts_signal(ta, sig);
  if (!s.word.empty() && !accepts_timed_word(ta, s.word)) res.automaton = false;
  if (res.ok()) {
    res.message = "satisfied";
  } else if (v == Verdict::Unknown) {
    res.message = "trajectory too short to decide";
  } else if (v == Verdict::False) {
    res.message = "violated";
  } else {
    res.message = "timed word rejected by the automaton";
  }
  return res;
}

}  // namespace stlta
