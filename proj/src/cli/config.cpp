#include <CLI11.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include "lorentz/cli.hpp"
#include "lorentz/error.hpp"
#include "lorentz/parallel.hpp"

namespace lorentz::cli {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

ParamSpec real(std::string name, std::string fallback, std::string help, double lo = -kInf, double hi = kInf,
               bool lo_open = false, bool hi_open = false) {
  return {std::move(name), std::move(fallback), std::move(help), ParamKind::Real, lo, hi, lo_open, hi_open};
}

ParamSpec integer(std::string name, std::string fallback, std::string help, double lo, double hi = 1e15) {
  return {std::move(name), std::move(fallback), std::move(help), ParamKind::Integer, lo, hi, false, false};
}

ParamSpec slope(std::string fallback) {
  return {"alpha", std::move(fallback), "slope in (0, 1); also sqrt2m1, golden, pi-3, e-2", ParamKind::Slope,
          0.0, 1.0, true, true};
}

ParamSpec list(std::string name, std::string fallback, std::string help, double lo, double hi) {
  return {std::move(name), std::move(fallback), std::move(help), ParamKind::RealList, lo, hi, false, false};
}

ParamSpec radius(std::string fallback) {
  return real("r", std::move(fallback), "obstacle radius in (0, 1/2)", 0.0, 0.5, true, true);
}

std::vector<ExperimentSpec> build_specs() {
  return {
      {"freepath", "survival function of r*tau under the uniform measure, with the limit law", "csv",
       {radius("0.01"), integer("samples", "100000", "Monte Carlo samples", 1),
        real("t_max", "20", "last grid point (scaled time)", 0.0, kInf, true),
        real("t_step", "0.1", "grid spacing", 0.0, kInf, true),
        real("t_cap", "", "flight cap in scaled time (default 100 t_max)", 0.0, kInf, true)}},
      {"pattern", "collision pattern (A, B, Q, Sigma) of a slope", "json",
       {slope("sqrt2m1"), real("eps", "0.1", "pattern width 2r sqrt(1+alpha^2)", 0.0, 1.0, true, true),
        real("r", "", "obstacle radius; overrides eps when given", 0.0, 0.5, true, true)}},
      {"transfer", "ray-traced transfer map against the explicit three-branch map", "json",
       {slope("sqrt2m1"), real("r", "1e-4", "obstacle radius", 0.0, 0.1, true, false),
        list("hprime", "-0.7,0,0.3,0.9", "departure impact parameters", -1.0, 1.0)}},
      {"transition", "histogram of the transition kernel sampled through m", "csv",
       {real("hprime", "0.5", "conditioning impact parameter", -1.0, 1.0),
        integer("samples", "1000000", "Monte Carlo samples", 1), integer("s_bins", "200", "bins in s", 1, 1e5),
        integer("h_bins", "100", "bins in h", 1, 1e5),
        real("s_max", "4", "upper s edge (pattern units)", 0.0, kInf, true)}},
      {"evolve", "homogeneous limit equation, deterministic solver with Monte Carlo cross-check", "csv",
       {real("t_end", "2", "final time", 0.0, kInf), real("dt", "0.01", "time step, at most ds", 0.0, kInf, true),
        real("ds", "0.01", "s cell width", 0.0, 1.0, true), real("s_max", "20", "s truncation", 0.0, kInf, true),
        integer("nh", "41", "h nodes", 3, 10001), integer("mc_paths", "100000", "jump-process paths (0 skips)", 0)}},
      {"ergodic", "logarithmic radius averages of pattern observables against the measure m", "json",
       {slope("pi-3"), real("eta", "1e-6", "smallest radius", 1e-8, 1e-2, true, true),
        real("tol", "0.05", "allowed distance to the m-expectation", 0.0, kInf, true)}},
      {"poisson", "free path and moments in a Poisson configuration of disks", "csv",
       {real("n", "50", "obstacles per unit area", 0.0, kInf, true),
        real("r", "0.01", "obstacle radius", 0.0, kInf, true), integer("samples", "100000", "free-path samples", 1),
        real("t_max", "5", "last grid point", 0.0, kInf, true), real("t_step", "0.1", "grid spacing", 0.0, kInf, true),
        integer("gallavotti_paths", "0", "paths per radius for the Gallavotti comparison (0 skips)", 0),
        real("t", "1", "comparison time", 0.0, kInf),
        list("radii", "0.02,0.01,0.005", "radii at fixed sigma = 2nr", 0.0, 0.5)}},
      {"channels", "obstacle-free channels and the resulting lower bound on the survival function", "csv",
       {radius("0.05"), list("t", "2,5,10", "scaled times (> 1)", 1.0, kInf),
        integer("samples", "20000", "Monte Carlo samples for the comparison (0 skips)", 0),
        real("t_cap", "1000", "flight cap in scaled time", 0.0, kInf, true)}},
      {"santalo", "mean free path under the billiard-map measure and the Dumas identity", "json",
       {radius("0.1"), integer("samples", "100000", "Monte Carlo samples", 2)}},
  };
}

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void usage(const std::string& msg) { throw Error(ErrorCode::UsageError, msg); }

double to_double(const std::string& key, const std::string& text) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  const auto [p, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || p != end) usage(key + ": '" + text + "' is not a number");
  return v;
}

std::string range_text(const ParamSpec& p) {
  std::ostringstream os;
  os << (p.lo_open ? "(" : "[") << p.lo << ", " << p.hi << (p.hi_open ? ")" : "]");
  return os.str();
}

void check_range(const ParamSpec& p, double v) {
  const bool ok = std::isfinite(v) && (p.lo_open ? v > p.lo : v >= p.lo) && (p.hi_open ? v < p.hi : v <= p.hi);
  if (!ok) {
    std::ostringstream os;
    os << p.name << " = " << v << " is outside " << range_text(p);
    usage(os.str());
  }
}

std::vector<double> split_list(const std::string& key, const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(to_double(key, trim(item)));
  if (out.empty()) usage(key + " needs at least one value");
  return out;
}

struct HelpShown {};

}  // namespace

const ParamSpec* ExperimentSpec::find(const std::string& key) const {
  for (const ParamSpec& p : params)
    if (p.name == key) return &p;
  return nullptr;
}

const std::vector<ExperimentSpec>& experiment_specs() {
  static const std::vector<ExperimentSpec> specs = build_specs();
  return specs;
}

const ExperimentSpec& experiment_spec(const std::string& name) {
  for (const ExperimentSpec& e : experiment_specs())
    if (e.name == name) return e;
  usage("unknown experiment '" + name + "'");
}

double parse_slope(const std::string& text) {
  if (text == "sqrt2m1") return std::numbers::sqrt2 - 1.0;
  if (text == "golden") return (std::sqrt(5.0) - 1.0) / 2.0;
  if (text == "pi-3") return std::numbers::pi - 3.0;
  if (text == "e-2") return std::numbers::e - 2.0;
  return to_double("alpha", text);
}

double ExperimentConfig::real(const std::string& key) const {
  const auto it = params.find(key);
  if (it == params.end()) usage("parameter " + key + " is not set");
  const ParamSpec* p = experiment_spec(experiment).find(key);
  return p && p->kind == ParamKind::Slope ? parse_slope(it->second) : to_double(key, it->second);
}

std::int64_t ExperimentConfig::integer(const std::string& key) const {
  const double v = real(key);
  if (v != std::floor(v)) usage(key + " must be an integer");
  return std::int64_t(v);
}

std::vector<double> ExperimentConfig::reals(const std::string& key) const {
  const auto it = params.find(key);
  if (it == params.end()) usage("parameter " + key + " is not set");
  return split_list(key, it->second);
}

std::map<std::string, std::string> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) usage("cannot read config file " + path);
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) usage(path + ":" + std::to_string(lineno) + ": expected key = value");
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return kv;
}

void validate(const ExperimentConfig& cfg) {
  const ExperimentSpec& spec = experiment_spec(cfg.experiment);
  for (const auto& [key, text] : cfg.params) {
    const ParamSpec* p = spec.find(key);
    if (!p) usage("unknown parameter '" + key + "' for " + cfg.experiment);
    switch (p->kind) {
      case ParamKind::RealList:
        for (double v : split_list(key, text)) check_range(*p, v);
        break;
      case ParamKind::Integer:
        check_range(*p, double(cfg.integer(key)));
        break;
      default:
        check_range(*p, cfg.real(key));
    }
  }
  const std::string& e = cfg.experiment;
  if (e == "freepath" && cfg.has("t_cap") && cfg.real("t_cap") < cfg.real("t_max"))
    usage("t_cap must be at least t_max");
  if (e == "evolve" && cfg.real("dt") > cfg.real("ds")) usage("dt must not exceed ds (CFL)");
  if (e == "channels")
    for (double t : cfg.reals("t"))
      if (!(t > 1.0) || t > cfg.real("t_cap")) usage("channel times must lie in (1, t_cap]");
}

ExperimentConfig parse_config(int argc, const char* const* argv) {
  CLI::App app{"Periodic and random Lorentz gas experiments", "lorentz"};
  app.require_subcommand(1);

  struct Bound {
    std::string seed, threads, out, config;
    bool timing = false;
    std::map<std::string, std::string> values;
    std::map<std::string, CLI::Option*> opts;
    CLI::Option *seed_opt, *threads_opt, *out_opt;
  };
  std::map<std::string, Bound> bound;
  for (const ExperimentSpec& spec : experiment_specs()) {
    CLI::App* sub = app.add_subcommand(spec.name, spec.help);
    Bound& b = bound[spec.name];
    b.seed_opt = sub->add_option("--seed", b.seed, "64-bit seed (default 1)")->type_name("UINT");
    b.threads_opt = sub->add_option("--threads", b.threads, "worker threads (default LORENTZ_THREADS or all cores)")
                        ->type_name("INT");
    b.out_opt = sub->add_option("--out", b.out, "main output file (default " + spec.name + "." + spec.out_ext + ")")
                    ->type_name("PATH");
    sub->add_option("--config", b.config, "flat key = value file; flags override it")->type_name("PATH");
    sub->add_flag("--timing", b.timing, "record wall time in the report");
    for (const ParamSpec& p : spec.params) {
      std::string help = p.help;
      if (!p.fallback.empty()) help += " (default " + p.fallback + ")";
      const char* type = p.kind == ParamKind::Slope      ? "SLOPE"
                         : p.kind == ParamKind::RealList ? "LIST"
                         : p.kind == ParamKind::Integer  ? "INT"
                                                         : "NUM";
      b.opts[p.name] = sub->add_option("--" + p.name, b.values[p.name], help)->type_name(type);
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e);
    throw HelpShown{};
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e);
    throw HelpShown{};
  } catch (const CLI::ParseError& e) {
    usage(e.what());
  }

  const CLI::App* sub = app.get_subcommands().front();
  const ExperimentSpec& spec = experiment_spec(sub->get_name());
  Bound& b = bound[spec.name];

  std::map<std::string, std::string> file;
  if (!b.config.empty()) file = read_config_file(b.config);

  ExperimentConfig cfg;
  cfg.experiment = spec.name;
  cfg.timing = b.timing;
  std::string seed_text = "1", threads_text = "0";
  cfg.out_path = spec.name + "." + spec.out_ext;
  for (const auto& [key, value] : file) {
    if (key == "seed")
      seed_text = value;
    else if (key == "threads")
      threads_text = value;
    else if (key == "out")
      cfg.out_path = value;
    else if (spec.find(key))
      cfg.params[key] = value;
    else
      usage("unknown key '" + key + "' in " + b.config);
  }
  if (b.seed_opt->count()) seed_text = b.seed;
  if (b.threads_opt->count()) threads_text = b.threads;
  if (b.out_opt->count()) cfg.out_path = b.out;
  for (const auto& [key, opt] : b.opts)
    if (opt->count()) cfg.params[key] = b.values[key];
  for (const ParamSpec& p : spec.params)
    if (!cfg.params.count(p.name) && !p.fallback.empty()) cfg.params[p.name] = p.fallback;

  {
    std::uint64_t seed = 0;
    const auto* end = seed_text.data() + seed_text.size();
    const auto [ptr, ec] = std::from_chars(seed_text.data(), end, seed);
    if (ec != std::errc() || ptr != end) usage("seed must be an unsigned 64-bit integer");
    cfg.seed = seed;
  }
  const double threads = to_double("threads", threads_text);
  if (threads < 0 || threads != std::floor(threads) || threads > 4096) usage("threads must be an integer in [0, 4096]");
  cfg.threads = resolve_threads(unsigned(threads));
  validate(cfg);
  return cfg;
}

bool RunReport::passed() const {
  for (const Check& c : checks)
    if (!c.passed) return false;
  return true;
}

int run_main(int argc, const char* const* argv) {
  ExperimentConfig cfg;
  try {
    cfg = parse_config(argc, argv);
  } catch (const HelpShown&) {
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "lorentz: " << e.what() << "\n";
    return 1;
  }
  try {
    const RunReport rep = run_experiment(cfg);
    for (const Check& c : rep.checks)
      std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.value << " (threshold " << c.threshold
                << ")\n";
    for (const std::string& f : rep.outputs) std::cout << "wrote " << f << "\n";
    return rep.passed() ? 0 : 2;
  } catch (const std::exception& e) {
    std::cerr << "lorentz " << cfg.experiment << ": " << e.what() << "\n";
    return 1;
  }
}

}  // namespace lorentz::cli
